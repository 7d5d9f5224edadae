"""Shared fixtures: the loaded corpus and application state."""

import os

import pytest

from classweave.config import AppState, load_config

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")
CONFIG_PATH = os.path.abspath(os.path.join(FIXTURE_DIR, "config.json"))


@pytest.fixture(scope="session")
def state() -> AppState:
    return AppState(load_config(CONFIG_PATH))


@pytest.fixture(scope="session")
def udc(state):
    return state.scheme("udc")


@pytest.fixture(scope="session")
def ddc(state):
    return state.scheme("ddc")


@pytest.fixture(scope="session")
def nebis(state):
    return state.scheme("nebis")


@pytest.fixture(scope="session")
def bc2(state):
    return state.scheme("bc2")


@pytest.fixture(scope="session")
def store(state):
    return state.store
