"""Word-access structures: alphabetical, chain and relative indexes.

Captions are split into headwords (segments around ". ", with a leading
"Including:" tag stripped) so that a caption like "Nuclear physics. Atomic
physics. Molecular physics" yields three alphabetical entries.  Matching is
simple case folding, no stemming, to keep results auditable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import StructuralError
from .kos import (ClassRecord, Scheme, ancestors_of, caption_for, parent_of)
from . import notation as nt


@dataclass
class IndexEntry:
    term: str
    context: str            # discipline/ancestor label, "" when unqualified
    notation: str
    language: str


@dataclass
class ChainEntry:
    notation: str
    chain: List[str]         # caption texts, most specific first


def caption_headwords(caption: str) -> List[str]:
    """Split a schedule caption into index headwords."""
    out = []
    for part in caption.split("."):
        part = part.strip()
        if not part:
            continue
        if part.lower().startswith("including:"):
            part = part[len("including:"):].strip()
        if part:
            out.append(part)
    return out


def _terms_of(rec: ClassRecord, lang: str) -> List[str]:
    """Searchable terms of a class in one language: headwords + index terms."""
    terms = []
    caption = rec.captions.get(lang)
    if caption:
        terms.extend(caption_headwords(caption))
    terms.extend(rec.index_terms.get(lang, []))
    # dedupe, keep order
    seen = set()
    out = []
    for t in terms:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def _langs(scheme: Scheme, lang: Optional[str]) -> List[str]:
    if lang is not None:
        return [lang]
    langs = set()
    for rec in scheme.all_records():
        langs.update(rec.captions)
        langs.update(rec.index_terms)
    return sorted(langs)


def alphabetical_listing(scheme: Scheme, lang: str) -> List[Tuple[str, str]]:
    """Every headword and index term, once per class, codepoint-sorted."""
    out = []
    for rec in scheme.all_records():
        for term in _terms_of(rec, lang):
            out.append((term, rec.notation))
    out.sort()
    return out


def chain_index(scheme: Scheme, lang: str) -> List[ChainEntry]:
    """Per class, the caption chain along the parent walk, specific first."""
    entries = []
    for rec in scheme.classes.values():
        chain = [caption_for(rec, lang, scheme.default_lang)[0]]
        try:
            for ancestor in ancestors_of(scheme, rec.notation):
                chain.append(caption_for(ancestor, lang, scheme.default_lang)[0])
        except StructuralError:
            raise
        entries.append(ChainEntry(rec.notation, chain))
    return entries


def discipline_context(scheme: Scheme, rec: ClassRecord, lang: str) -> str:
    """Caption of the nearest ancestor flagged as a discipline, or ""."""
    for ancestor in ancestors_of(scheme, rec.notation):
        if ancestor.is_discipline:
            return caption_for(ancestor, lang, scheme.default_lang)[0]
    return ""


def relative_index(scheme: Scheme, lang: str) -> Dict[str, List[Tuple[str, str]]]:
    """Gather each index term's placements across all disciplines.

    Placements are (context, notation) pairs sorted by context; the
    unqualified primary placement (no discipline ancestor) sorts first
    with an empty context.
    """
    postings: Dict[str, List[Tuple[str, str]]] = {}
    for rec in scheme.classes.values():
        for term in rec.index_terms.get(lang, []):
            context = discipline_context(scheme, rec, lang)
            postings.setdefault(term, []).append((context, rec.notation))
    for term in postings:
        postings[term].sort()
    return postings


def _match_kind(query_cf: str, candidate: str) -> Optional[str]:
    cand_cf = candidate.casefold()
    if cand_cf == query_cf:
        return "exact"
    if cand_cf.startswith(query_cf):
        nxt = cand_cf[len(query_cf):len(query_cf) + 1]
        # word-prefix: the query extends into a longer word; a word
        # boundary right after the query counts as a plain containment
        if nxt.isalnum():
            return "prefix"
        return "substring"
    if query_cf in cand_cf:
        return "substring"
    return None


_KIND_RANK = {"exact": 0, "prefix": 1, "substring": 2}


def lookup_term(scheme: Scheme, query: str,
                lang: Optional[str] = None) -> List[Tuple[str, str, str]]:
    """Case-insensitive term lookup over captions and index terms.

    Returns (notation, matched term, match_kind) rows: exact matches first,
    then prefix, then substring; ties break by notation.  One row per class,
    keeping its best match.  When matching against captions the full caption
    is reported as the matched term.
    """
    query_cf = query.strip().casefold()
    if not query_cf:
        return []
    best: Dict[str, Tuple[int, str, str]] = {}
    for rec in scheme.all_records():
        for lg in ([lang] if lang else sorted(set(rec.captions) | set(rec.index_terms))):
            candidates = []
            caption = rec.captions.get(lg)
            if caption:
                candidates.append(caption)
            candidates.extend(rec.index_terms.get(lg, []))
            for cand in candidates:
                kind = _match_kind(query_cf, cand)
                if kind is None:
                    continue
                entry = (_KIND_RANK[kind], rec.notation, cand)
                if rec.notation not in best or entry < best[rec.notation]:
                    best[rec.notation] = entry
    rows = sorted(best.values())
    return [(notation, cand, _kind_name(rank)) for rank, notation, cand in rows]


def _kind_name(rank: int) -> str:
    return {0: "exact", 1: "prefix", 2: "substring"}[rank]


def export_chain_index(scheme: Scheme, lang: str) -> str:
    """Chain index as tab-separated text (term, context, notation)."""
    rows = []
    for entry in chain_index(scheme, lang):
        term = entry.chain[0]
        context = " - ".join(entry.chain[1:])
        rows.append((term, context, entry.notation))
    rows.sort()
    return "".join(f"{t}\t{c}\t{n}\n" for t, c, n in rows)


def export_relative_index(scheme: Scheme, lang: str) -> str:
    """Relative index as tab-separated text (term, context, notation)."""
    rows = []
    for term, placements in relative_index(scheme, lang).items():
        for context, notation in placements:
            rows.append((term, context, notation))
    rows.sort()
    return "".join(f"{t}\t{c}\t{n}\n" for t, c, n in rows)
