"""Classified-document store and subject search behaviors.

Documents are indexed under every decomposed component of every classmark,
so ``338.48(469)`` is retrievable via ``338.48`` and via place ``469``, and
``73:75`` via both operands.  Hit counts come in two flavours: *direct*
(documents carrying the class itself as a component) and *aggregate*
(documents anywhere in the class's subtree, the explode set).

Queries read an immutable snapshot; ingest builds new index dicts and swaps
them in at the end.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from . import notation as nt
from .errors import NotationParseError, NotFoundError
from .kos import ClassRecord, Scheme, children_of, caption_for, get_class, primary_digits
from .indexes import lookup_term


@dataclass
class RawDocument:
    """Unparsed document metadata as it arrives from interchange files."""

    doc_id: str
    title: str
    language: str
    classmarks: List[str]


@dataclass
class ClassifiedDocument:
    doc_id: str
    title: str
    language: str
    classmarks: List[nt.NotationExpr]
    classmark_texts: List[str] = dc_field(default_factory=list)


@dataclass
class HitRow:
    notation: str
    caption: str
    direct_hits: int
    aggregate_hits: int


@dataclass
class BrowseView:
    parent: Optional[HitRow]       # breadcrumb row, None at the top
    current: Optional[HitRow]      # None when browsing the root
    children: List[HitRow]
    breadcrumbs: List[HitRow] = dc_field(default_factory=list)


def _component_key(kind: str, payload: str) -> Tuple[str, str]:
    return (kind, payload)


class DocumentStore:
    """Document index bound to one scheme's notation grammar."""

    def __init__(self, scheme: Scheme):
        self.scheme = scheme
        self.docs: Dict[str, ClassifiedDocument] = {}
        # component postings: (kind, payload) -> doc ids
        self.postings: Dict[Tuple[str, str], Set[str]] = {}
        # exact canonical classmark text -> doc ids
        self.exact: Dict[str, Set[str]] = {}

    def component_docs(self, expr: nt.NotationExpr) -> Set[str]:
        out: Set[str] = set()
        for kind, payload in nt.decompose(expr):
            out |= self.postings.get((kind, payload), set())
        return out

    def direct_docs(self, expr: nt.NotationExpr) -> Set[str]:
        """Documents carrying exactly this class as a classmark component."""
        if isinstance(expr, nt.Compound) and expr.main is None and len(expr.auxiliaries) == 1:
            # bare auxiliary-table entry: its single component is the class
            return set(self.postings.get(expr.auxiliaries[0], set()))
        if isinstance(expr, (nt.Compound, nt.Relation)):
            return set(self.exact.get(self.scheme.format(expr), set()))
        components = nt.decompose(expr)
        kind, payload = components[0]
        return set(self.postings.get((kind, payload), set()))


def ingest(store: DocumentStore,
           documents: Iterable[RawDocument]) -> Tuple[int, List[Tuple[str, str]]]:
    """Index documents; returns (accepted count, [(doc_id, reason)] rejects).

    The new snapshot becomes visible only after every document has been
    processed.
    """
    parser = store.scheme.parser()
    docs = dict(store.docs)
    postings = {k: set(v) for k, v in store.postings.items()}
    exact = {k: set(v) for k, v in store.exact.items()}
    accepted = 0
    rejected: List[Tuple[str, str]] = []
    for raw in documents:
        if raw.doc_id in docs:
            rejected.append((raw.doc_id, "duplicate doc_id"))
            continue
        if not raw.classmarks:
            rejected.append((raw.doc_id, "empty classmark list"))
            continue
        try:
            exprs = [parser.parse(c) for c in raw.classmarks]
        except NotationParseError as exc:
            rejected.append((raw.doc_id, str(exc)))
            continue
        texts = [parser.format(e) for e in exprs]
        doc = ClassifiedDocument(raw.doc_id, raw.title, raw.language, exprs, texts)
        docs[doc.doc_id] = doc
        for expr, text in zip(exprs, texts):
            exact.setdefault(text, set()).add(doc.doc_id)
            for kind, payload in nt.decompose(expr):
                postings.setdefault((kind, payload), set()).add(doc.doc_id)
        accepted += 1
    store.docs, store.postings, store.exact = docs, postings, exact
    return accepted, rejected


# ---------------------------------------------------------------------------
# Hierarchy-aware retrieval
# ---------------------------------------------------------------------------


def _subtree(scheme: Scheme, rec: ClassRecord) -> List[ClassRecord]:
    """The record plus all tree descendants via child links."""
    out = [rec]
    frontier = [rec]
    seen = {rec.notation}
    while frontier:
        nxt = []
        for r in frontier:
            for child in children_of(scheme, r.notation):
                if child.notation not in seen:
                    seen.add(child.notation)
                    out.append(child)
                    nxt.append(child)
        frontier = nxt
    return out


def _covers(query: nt.NotationExpr, target: nt.NotationExpr) -> bool:
    """Notational containment of a class under a query node."""
    if isinstance(query, nt.Simple):
        qd = query.digits
        td = primary_digits(target)
        return len(td) > len(qd) and td.startswith(qd)
    if isinstance(query, nt.Span):
        if isinstance(target, nt.Simple):
            return nt.span_covers(query, target)
        if isinstance(target, nt.Span):
            width = len(query.left)
            return (len(target.left) >= width
                    and query.left <= target.left[:width] <= query.right)
    return False


def explode(store: DocumentStore, scheme: Scheme, text: str) -> Set[str]:
    """All documents under a class or any of its descendants.

    Descendants combine the stored tree (explicit links, spans as parents)
    with notational prefix containment for anything not stored.
    """
    expr = scheme.parse(text)
    canonical = scheme.format(expr)
    if isinstance(expr, (nt.Compound, nt.Relation)):
        rec = get_class(scheme, canonical)
        if rec is None:
            return set(store.exact.get(canonical, set()))
        subtree = _subtree(scheme, rec)
    else:
        rec = get_class(scheme, canonical)
        if rec is not None:
            subtree = _subtree(scheme, rec)
        else:
            subtree = []
            seen: Set[str] = set()
            for r in scheme.classes.values():
                if _covers(expr, r.expr):
                    for member in _subtree(scheme, r):
                        if member.notation not in seen:
                            seen.add(member.notation)
                            subtree.append(member)
    out: Set[str] = set()
    for member in subtree:
        out |= store.direct_docs(member.expr)
    subtree_keys = {m.notation for m in subtree}
    # components with no stored class of their own attach below their
    # longest stored prefix; pick them up when that anchor is in scope
    for (kind, payload), doc_ids in store.postings.items():
        if kind == "span":
            left = payload.split("/")[0]
            comp_expr: nt.NotationExpr = nt.Span(left, payload.split("/")[1])
            comp_digits = left
        elif kind == "main":
            comp_expr = nt.Simple(payload)
            comp_digits = payload
        else:
            continue  # auxiliary components anchor inside their facet table
        comp_canonical = scheme.format(comp_expr)
        if get_class(scheme, comp_canonical) is not None:
            continue  # stored: already handled through the subtree walk
        anchor = _anchor(scheme, comp_digits)
        if anchor is not None and anchor.notation in subtree_keys:
            out |= doc_ids
        elif rec is None and isinstance(expr, nt.Simple) and _covers(expr, comp_expr):
            out |= doc_ids
        elif rec is None and isinstance(expr, nt.Span) and _covers(expr, comp_expr):
            out |= doc_ids
    return out


def _anchor(scheme: Scheme, digits: str) -> Optional[ClassRecord]:
    """Longest stored simple class whose digits prefix the component's."""
    best = None
    best_len = -1
    for r in scheme.classes.values():
        if r.kind != "simple":
            continue
        rd = primary_digits(r.expr)
        if len(rd) <= len(digits) and digits.startswith(rd) and len(rd) > best_len:
            best, best_len = r, len(rd)
    return best


def direct_count(store: DocumentStore, scheme: Scheme, text: str) -> int:
    return len(store.direct_docs(scheme.parse(text)))


def aggregate_count(store: DocumentStore, scheme: Scheme, text: str) -> int:
    return len(explode(store, scheme, text))


def hit_row(store: DocumentStore, scheme: Scheme, rec: ClassRecord,
            lang: Optional[str] = None) -> HitRow:
    caption, _ = caption_for(rec, lang or scheme.default_lang, scheme.default_lang)
    return HitRow(
        notation=rec.notation,
        caption=caption,
        direct_hits=len(store.direct_docs(rec.expr)),
        aggregate_hits=aggregate_count(store, scheme, rec.notation),
    )


def search_term(store: DocumentStore, scheme: Scheme, query: str,
                lang: Optional[str] = None) -> List[HitRow]:
    """Hit rows for every class the query term resolves to.

    Rows are sorted by notation so distinct disciplines (perspective
    hierarchies) fall into separate groups.
    """
    rows = []
    for notation, _term, _kind in lookup_term(scheme, query, lang):
        rec = scheme.require(notation)
        rows.append(hit_row(store, scheme, rec, lang))
    rows.sort(key=lambda r: (primary_digits(scheme.parse(r.notation)), r.notation))
    return rows


def browse(store: DocumentStore, scheme: Scheme, text,
           lang: Optional[str] = None) -> BrowseView:
    """Breadcrumb parent, the class row and its children rows."""
    from .kos import ancestors_of, parent_of

    if text is nt.ROOT or text in (None, "", "ROOT"):
        children = [hit_row(store, scheme, c, lang)
                    for c in children_of(scheme, nt.ROOT)]
        return BrowseView(parent=None, current=None, children=children)
    rec = scheme.require(text)
    ancestors = ancestors_of(scheme, rec.notation)
    breadcrumbs = [hit_row(store, scheme, a, lang) for a in reversed(ancestors)]
    parent_row = breadcrumbs[-1] if breadcrumbs else None
    children = [hit_row(store, scheme, c, lang)
                for c in children_of(scheme, rec.notation)]
    return BrowseView(parent=parent_row,
                      current=hit_row(store, scheme, rec, lang),
                      children=children,
                      breadcrumbs=breadcrumbs)


def broaden_until(store: DocumentStore, scheme: Scheme, text: str,
                  min_hits: int):
    """Walk up the hierarchy until the explode count reaches min_hits.

    Returns (notation or ROOT, hit count); the root is returned with the
    full corpus size when no ancestor satisfies the threshold.
    """
    if min_hits < 1:
        raise ValueError("min_hits must be >= 1")
    expr = scheme.parse(text)
    if isinstance(expr, nt.Compound) and expr.main is not None:
        expr = expr.main
    if not isinstance(expr, nt.Simple):
        raise nt.SimpleExpected(expr)
    current: nt.NotationExpr = expr
    while True:
        canonical = scheme.format(current)
        hits = len(explode(store, scheme, canonical))
        if hits >= min_hits:
            return canonical, hits
        nxt = nt.broaden(current)  # type: ignore[arg-type]
        if nxt is nt.ROOT:
            return nt.ROOT, len(store.docs)
        current = nxt


def syndetic_expand(store: DocumentStore, scheme: Scheme, text: str,
                    lang: Optional[str] = None) -> List[Tuple[str, str, int]]:
    """One-hop see-also targets with their direct counts."""
    rec = scheme.require(text)
    out = []
    for target in rec.see_also:
        tgt = scheme.require(target)
        caption, _ = caption_for(tgt, lang or scheme.default_lang, scheme.default_lang)
        out.append((tgt.notation, caption, len(store.direct_docs(tgt.expr))))
    return out


_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_MATCH_WEIGHT = {"exact": 3, "prefix": 2, "substring": 1}


def suggest_classes(store: DocumentStore, scheme: Scheme, text: str,
                    top_k: int, lang: Optional[str] = None) -> List[Tuple[str, int]]:
    """Transparent term-matching classification suggestion.

    Tokens and adjacent bigrams are matched against the term lookup table;
    each match scores exact=3, prefix=2, substring=1 and scores add up per
    class.  Ties break by notation.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    tokens = [t.lower() for t in _TOKEN_RE.findall(text)]
    queries = list(tokens)
    queries.extend(f"{a} {b}" for a, b in zip(tokens, tokens[1:]))
    scores: Dict[str, int] = {}
    for query in queries:
        for notation, _term, kind in lookup_term(scheme, query, lang):
            scores[notation] = scores.get(notation, 0) + _MATCH_WEIGHT[kind]
    ranked = sorted(scores.items(),
                    key=lambda kv: (-kv[1], primary_digits(scheme.parse(kv[0])), kv[0]))
    return ranked[:top_k]
