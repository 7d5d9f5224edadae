"""Serializable views shared by the CLI (--json) and the HTTP API.

Every CLI subcommand has an HTTP twin; both call the same view builder so
the two surfaces cannot drift apart.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from . import notation as nt
from .config import AppState
from .errors import NotFoundError
from .indexes import lookup_term
from .kos import (Scheme, ancestors_of, caption_for, children_of, get_class,
                  parent_of, primary_digits)
from .retrieval import (BrowseView, DocumentStore, HitRow, broaden_until,
                        browse, explode, hit_row, search_term, suggest_classes,
                        syndetic_expand)


def hit_row_dict(row: HitRow) -> Dict:
    return {
        "notation": row.notation,
        "caption": row.caption,
        "direct_hits": row.direct_hits,
        "aggregate_hits": row.aggregate_hits,
    }


def subtree_rows(store: DocumentStore, scheme: Scheme, notation: str,
                 lang: Optional[str] = None) -> List[HitRow]:
    """Pre-order hit rows of a class and its subtree, filing order."""
    rec = scheme.require(notation)
    rows = [hit_row(store, scheme, rec, lang)]
    for child in children_of(scheme, rec.notation):
        rows.extend(subtree_rows(store, scheme, child.notation, lang))
    return rows


def search_view(state: AppState, query: str, lang: Optional[str] = None,
                scheme_id: Optional[str] = None) -> Dict:
    """Term search: flat disambiguation rows, or a systematic expansion
    (breadcrumb parent plus the whole subtree) when a single class matches.
    """
    scheme = state.scheme(scheme_id)
    rows = search_term(state.store, scheme, query, lang)
    expanded = len(rows) == 1
    if expanded:
        display: List[HitRow] = []
        parent = parent_of(scheme, rows[0].notation)
        if parent is not nt.ROOT:
            display.append(hit_row(state.store, scheme, scheme.require(parent), lang))
        display.extend(subtree_rows(state.store, scheme, rows[0].notation, lang))
    else:
        display = rows
    groups = []
    for row in rows:
        rec = scheme.require(row.notation)
        context = ""
        for ancestor in ancestors_of(scheme, rec.notation):
            if ancestor.is_discipline:
                context = caption_for(ancestor, lang or scheme.default_lang,
                                      scheme.default_lang)[0]
                break
        groups.append(context)
    return {
        "query": query,
        "scheme": scheme.id,
        "expanded": expanded,
        "rows": [dict(hit_row_dict(r), discipline=g) for r, g in zip(rows, groups)],
        "display_rows": [hit_row_dict(r) for r in display],
    }


def browse_view(state: AppState, notation, aggregate: bool = False,
                lang: Optional[str] = None, scheme_id: Optional[str] = None) -> Dict:
    scheme = state.scheme(scheme_id)
    view: BrowseView = browse(state.store, scheme, notation, lang)
    return {
        "scheme": scheme.id,
        "aggregate": aggregate,
        "parent": hit_row_dict(view.parent) if view.parent else None,
        "current": hit_row_dict(view.current) if view.current else None,
        "breadcrumbs": [hit_row_dict(r) for r in view.breadcrumbs],
        "children": [hit_row_dict(r) for r in view.children],
    }


def class_view(state: AppState, notation: str, lang: Optional[str] = None,
               scheme_id: Optional[str] = None) -> Dict:
    scheme = state.scheme(scheme_id)
    rec = scheme.require(notation)
    lang = lang or scheme.default_lang
    caption, fallback = caption_for(rec, lang, scheme.default_lang)
    ancestors = ancestors_of(scheme, rec.notation)
    return {
        "scheme": scheme.id,
        "notation": rec.notation,
        "kind": rec.kind,
        "caption": caption,
        "caption_fallback": fallback,
        "captions": dict(rec.captions),
        "index_terms": {k: list(v) for k, v in rec.index_terms.items()},
        "is_discipline": rec.is_discipline,
        "parent": ancestors[0].notation if ancestors else None,
        "breadcrumbs": [
            {"notation": a.notation,
             "caption": caption_for(a, lang, scheme.default_lang)[0]}
            for a in reversed(ancestors)
        ],
        "children": [
            {"notation": c.notation,
             "caption": caption_for(c, lang, scheme.default_lang)[0]}
            for c in children_of(scheme, rec.notation)
        ],
        "see_also": list(rec.see_also),
    }


def explode_view(state: AppState, notation: str,
                 scheme_id: Optional[str] = None) -> Dict:
    scheme = state.scheme(scheme_id)
    doc_ids = sorted(explode(state.store, scheme, notation))
    return {"scheme": scheme.id, "notation": scheme.canonicalize(notation),
            "count": len(doc_ids), "doc_ids": doc_ids}


def broaden_view(state: AppState, notation: str, min_hits: int,
                 scheme_id: Optional[str] = None) -> Dict:
    scheme = state.scheme(scheme_id)
    result, hits = broaden_until(state.store, scheme, notation, min_hits)
    return {
        "scheme": scheme.id,
        "start": scheme.canonicalize(notation),
        "min_hits": min_hits,
        "notation": None if result is nt.ROOT else result,
        "root": result is nt.ROOT,
        "hits": hits,
    }


def related_view(state: AppState, notation: str, lang: Optional[str] = None,
                 scheme_id: Optional[str] = None) -> Dict:
    scheme = state.scheme(scheme_id)
    rows = syndetic_expand(state.store, scheme, notation, lang)
    return {
        "scheme": scheme.id,
        "notation": scheme.canonicalize(notation),
        "related": [
            {"notation": n, "caption": c, "direct_hits": d} for n, c, d in rows
        ],
    }


def suggest_view(state: AppState, text: str, top_k: int,
                 lang: Optional[str] = None,
                 scheme_id: Optional[str] = None) -> Dict:
    scheme = state.scheme(scheme_id)
    ranked = suggest_classes(state.store, scheme, text, top_k, lang)
    out = []
    for notation, score in ranked:
        rec = get_class(scheme, notation)
        caption = caption_for(rec, lang or scheme.default_lang,
                              scheme.default_lang)[0] if rec else ""
        out.append({"notation": notation, "score": score, "caption": caption})
    return {"scheme": scheme.id, "text": text, "suggestions": out}


def authority_view(state: AppState, notation: str, langs: List[str],
                   scheme_id: Optional[str] = None) -> Dict:
    from .kos import authority_record

    scheme = state.scheme(scheme_id)
    record = authority_record(scheme, notation, langs)
    return {
        "scheme": scheme.id,
        "notation": record.notation,
        "terms": {lang: {"term": t, "fallback": f}
                  for lang, (t, f) in record.terms.items()},
        "broader": {lang: [{"term": t, "notation": n} for t, n in rows]
                    for lang, rows in record.broader.items()},
        "narrower": {lang: [{"term": t, "notation": n} for t, n in rows]
                     for lang, rows in record.narrower.items()},
        "related": {lang: [{"term": t, "notation": n} for t, n in rows]
                    for lang, rows in record.related.items()},
        "system_no": record.system_no,
    }


def map_view(state: AppState, source_scheme: str, notation: str,
             target_scheme: str) -> Dict:
    from .interchange import translate

    result = translate(state.corpus.concordance, source_scheme, notation,
                       target_scheme)
    if result is None:
        return {"source_scheme": source_scheme.lower(),
                "source_notation": nt.format_expr(nt.parse(notation)),
                "target_scheme": target_scheme.lower(),
                "mapped": False}
    return {
        "source_scheme": source_scheme.lower(),
        "source_notation": nt.format_expr(nt.parse(notation)),
        "target_scheme": target_scheme.lower(),
        "mapped": True,
        "target_notation": result.target_notation,
        "exactness": result.exactness,
        "hops_broadened": result.hops_broadened,
    }


def schemes_view(state: AppState) -> Dict:
    return {
        "default": state.default_scheme_id,
        "schemes": [
            {"id": s.id, "title": s.title, "hierarchy_mode": s.hierarchy_mode,
             "default_lang": s.default_lang, "classes": len(s.classes)}
            for s in state.schemes.values()
        ],
    }


def lookup_view(state: AppState, query: str, lang: Optional[str] = None,
                scheme_id: Optional[str] = None) -> Dict:
    scheme = state.scheme(scheme_id)
    return {
        "scheme": scheme.id,
        "query": query,
        "matches": [
            {"notation": n, "term": t, "match_kind": k}
            for n, t, k in lookup_term(scheme, query, lang)
        ],
    }
