"""Report rendering: delimited hit tables plus bar-chart figures.

Each report writes two files into the output directory: a ``.tsv`` with
the same rows the CLI prints, and a ``.png`` horizontal bar chart of the
hit counts, so a query result can be dropped straight into a write-up.
"""

from __future__ import annotations

import os
import re
from typing import List, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import views
from .config import AppState


def _slug(text: str) -> str:
    slug = re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-").lower()
    return slug or "root"


def _write_tsv(path: str, rows: List[dict], count_key: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("notation\tcaption\thits\n")
        for row in rows:
            fh.write(f"{row['notation']}\t{row['caption']}\t{row[count_key]}\n")


def _write_figure(path: str, title: str, rows: List[dict], count_key: str) -> None:
    labels = [f"{r['notation']}  {r['caption']}" for r in rows]
    counts = [r[count_key] for r in rows]
    height = max(2.0, 0.4 * len(rows) + 1.2)
    fig, ax = plt.subplots(figsize=(9, height))
    positions = range(len(rows))
    ax.barh(list(positions), counts, color="#4878a8")
    ax.set_yticks(list(positions))
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("documents")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _render(rows: List[dict], out_dir: str, stem: str, title: str,
            count_key: str) -> List[str]:
    os.makedirs(out_dir, exist_ok=True)
    tsv_path = os.path.join(out_dir, stem + ".tsv")
    png_path = os.path.join(out_dir, stem + ".png")
    _write_tsv(tsv_path, rows, count_key)
    _write_figure(png_path, title, rows, count_key)
    return [tsv_path, png_path]


def render_search_report(state: AppState, query: str, out_dir: str,
                         lang: Optional[str] = None) -> List[str]:
    data = views.search_view(state, query, lang)
    return _render(data["display_rows"], out_dir, "search-" + _slug(query),
                   f"search: {query}", "direct_hits")


def render_browse_report(state: AppState, notation: str, out_dir: str,
                         lang: Optional[str] = None) -> List[str]:
    data = views.browse_view(state, notation or None, aggregate=True, lang=lang)
    rows = ([data["current"]] if data["current"] else []) + data["children"]
    return _render(rows, out_dir, "browse-" + _slug(notation or "root"),
                   f"browse: {notation or 'top level'}", "aggregate_hits")
