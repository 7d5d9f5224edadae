"""Service configuration and application state assembly."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional

from .errors import ClassweaveError, NotFoundError
from .interchange import Corpus, load_corpus
from .kos import Scheme
from .retrieval import DocumentStore, ingest

CONFIG_ENV_VAR = "CLASSWEAVE_CONFIG"


@dataclass
class ServiceConfig:
    scheme_paths: List[str] = dc_field(default_factory=list)
    docs_paths: List[str] = dc_field(default_factory=list)
    port: int = 8300
    default_lang: str = "en"
    min_hits_default: int = 5
    default_scheme: Optional[str] = None   # scheme id used for retrieval

    def validate(self) -> None:
        if not 1 <= self.port <= 65535:
            raise ClassweaveError(f"port {self.port} outside [1, 65535]")
        if not self.scheme_paths:
            raise ClassweaveError("at least one scheme path is required")


def load_config(path: Optional[str] = None) -> ServiceConfig:
    """Read a JSON config file; falls back to the CLASSWEAVE_CONFIG env var."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    config = ServiceConfig()
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        for key in ("scheme_paths", "docs_paths", "port", "default_lang",
                    "min_hits_default", "default_scheme"):
            if key in data:
                setattr(config, key, data[key])
        # relative fixture paths are resolved against the config file itself
        base = os.path.dirname(os.path.abspath(path))
        config.scheme_paths = [os.path.join(base, p) if not os.path.isabs(p) else p
                               for p in config.scheme_paths]
        config.docs_paths = [os.path.join(base, p) if not os.path.isabs(p) else p
                             for p in config.docs_paths]
    return config


class AppState:
    """Loaded schemes plus the retrieval snapshot for the default scheme."""

    def __init__(self, config: ServiceConfig):
        config.validate()
        self.config = config
        self.corpus: Corpus = load_corpus(list(config.scheme_paths) + list(config.docs_paths))
        if not self.corpus.schemes:
            raise ClassweaveError("no schemes loaded")
        default = config.default_scheme or next(iter(self.corpus.schemes))
        if default not in self.corpus.schemes:
            raise NotFoundError(f"default scheme {default!r} not among loaded schemes")
        self.default_scheme_id = default
        self.store = DocumentStore(self.scheme())
        self.ingest_rejects = ingest(self.store, self.corpus.documents)[1]

    def scheme(self, scheme_id: Optional[str] = None) -> Scheme:
        sid = (scheme_id or self.default_scheme_id).lower()
        try:
            return self.corpus.schemes[sid]
        except KeyError:
            raise NotFoundError(f"unknown scheme {scheme_id!r}") from None

    @property
    def schemes(self) -> Dict[str, Scheme]:
        return self.corpus.schemes
