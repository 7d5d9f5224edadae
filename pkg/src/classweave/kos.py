"""In-memory model of a classification scheme.

A :class:`Scheme` holds the main class table, the auxiliary facet tables,
add-instructions and facet formulas.  The canonical notation string is the
identity key throughout; captions are display data only.

Schemes are immutable after load: all query operations are pure reads.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

from . import notation as nt
from .errors import NotFoundError, StructuralError


@dataclass
class ClassRecord:
    """One class of a scheme (main table or auxiliary table).

    ``kind`` is ``simple`` or ``span`` for ordinary schedule records;
    pre-built compound numbers stored as first-class records (the
    enumerated combinations of analytico-synthetic schemes) carry
    ``compound``.
    """

    notation: str                      # canonical text, the identity key
    expr: nt.NotationExpr
    kind: str                          # "simple" | "span" | "compound"
    captions: Dict[str, str] = dc_field(default_factory=dict)
    index_terms: Dict[str, List[str]] = dc_field(default_factory=dict)
    # Authority display forms (e.g. uppercase OPAC terms). Searched never,
    # shown in authority records in preference to the caption.
    pref_terms: Dict[str, List[str]] = dc_field(default_factory=dict)
    parent: Optional[str] = None       # explicit parent link (canonical)
    see_also: List[str] = dc_field(default_factory=list)
    is_discipline: bool = False
    system_no: Optional[str] = None
    facet_id: Optional[str] = None     # set for auxiliary-table records

    def sort_key(self) -> Tuple[str, str]:
        digits = primary_digits(self.expr)
        return (digits, self.notation)


def primary_digits(expr: nt.NotationExpr) -> str:
    """Digit string used for filing and prefix ancestry."""
    if isinstance(expr, nt.Simple):
        return expr.digits
    if isinstance(expr, nt.Span):
        return expr.left
    if isinstance(expr, nt.Compound):
        if expr.main is not None:
            return expr.main.digits
        return expr.auxiliaries[0][1]
    if isinstance(expr, nt.Relation):
        return primary_digits(expr.operands[0])
    raise TypeError(f"not a notation expression: {expr!r}")


@dataclass
class AuxFacet:
    """A common-auxiliary table (place, language, form...)."""

    facet_id: str
    open_delim: str
    close_delim: str                   # "" for prefix-style facets
    classes: Dict[str, ClassRecord] = dc_field(default_factory=dict)


@dataclass
class AddInstruction:
    """DDC-style parallel-division synthesis rule."""

    base: str          # digit string
    source_left: str
    source_right: str
    strip_prefix: str


@dataclass
class FacetFormula:
    """Ordered facet slots with notation markers for citation-order synthesis."""

    name: str
    slots: Tuple[Tuple[str, str], ...]   # (facet_name, marker)


@dataclass
class AuthorityRecord:
    """Controlled record for one class: terms plus BT/NT/RT per language."""

    notation: str
    terms: Dict[str, Tuple[str, bool]]                  # lang -> (term, fallback)
    broader: Dict[str, List[Tuple[str, str]]]           # lang -> [(term, notation)]
    narrower: Dict[str, List[Tuple[str, str]]]
    related: Dict[str, List[Tuple[str, str]]]
    system_no: Optional[str] = None


@dataclass
class Scheme:
    """A classification scheme: classes, facets, synthesis data."""

    id: str
    title: str = ""
    hierarchy_mode: str = "notational"   # "notational" | "explicit"
    default_lang: str = "en"
    classes: Dict[str, ClassRecord] = dc_field(default_factory=dict)
    aux_facets: Dict[str, AuxFacet] = dc_field(default_factory=dict)
    add_instructions: List[AddInstruction] = dc_field(default_factory=list)
    facet_formulas: Dict[str, FacetFormula] = dc_field(default_factory=dict)

    # -- notation helpers -------------------------------------------------

    @property
    def facet_delims(self) -> Dict[str, Tuple[str, str]]:
        return {f.facet_id: (f.open_delim, f.close_delim)
                for f in self.aux_facets.values()}

    def parser(self) -> nt.NotationParser:
        return nt.NotationParser(self.facet_delims)

    def canonicalize(self, text: str) -> str:
        return self.parser().canonicalize(text)

    def parse(self, text: str) -> nt.NotationExpr:
        return self.parser().parse(text)

    def format(self, expr: nt.NotationExpr) -> str:
        return self.parser().format(expr)

    # -- record access ----------------------------------------------------

    def all_records(self):
        """Main-table records followed by auxiliary-table records."""
        yield from self.classes.values()
        for facet in self.aux_facets.values():
            yield from facet.classes.values()

    def get(self, text: str) -> Optional[ClassRecord]:
        return get_class(self, text)

    def require(self, text: str) -> ClassRecord:
        rec = get_class(self, text)
        if rec is None:
            raise NotFoundError(f"unknown class {text!r} in scheme {self.id!r}")
        return rec


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def get_class(scheme: Scheme, text: str) -> Optional[ClassRecord]:
    """Look a class up by (any spelling of) its notation; None when absent.

    Malformed notation raises :class:`NotationParseError`.
    """
    canonical = scheme.canonicalize(text)
    rec = scheme.classes.get(canonical)
    if rec is not None:
        return rec
    for facet in scheme.aux_facets.values():
        rec = facet.classes.get(canonical)
        if rec is not None:
            return rec
    return None


def parent_of(scheme: Scheme, text: str):
    """Parent notation of a class, or ROOT at the top level.

    Explicit parent links always win (they also insert span nodes into the
    browse tree).  In notational mode the fallback is the longest stored
    proper-prefix class, skipping unstored intermediate truncations.
    """
    canonical = scheme.canonicalize(text)
    rec = get_class(scheme, canonical)
    if rec is not None and rec.parent is not None:
        return rec.parent
    if scheme.hierarchy_mode == "explicit":
        return nt.ROOT
    if rec is not None and rec.facet_id is not None:
        return _prefix_parent(scheme.aux_facets[rec.facet_id].classes,
                              canonical, rec)
    expr = rec.expr if rec is not None else scheme.parse(canonical)
    return _prefix_parent(scheme.classes, canonical, rec, expr)


def _prefix_parent(table: Dict[str, ClassRecord], canonical: str,
                   rec: Optional[ClassRecord], expr=None):
    if expr is None:
        expr = rec.expr
    digits = primary_digits(expr)
    # A stored compound hangs below its own main number, so an equal-length
    # prefix (the bare main) is an admissible parent for it.
    allow_equal = isinstance(expr, nt.Compound)
    best = None
    best_len = -1
    for other in table.values():
        if other.notation == canonical or other.kind != "simple":
            continue
        odigits = primary_digits(other.expr)
        ok_len = len(odigits) < len(digits) or (allow_equal and len(odigits) == len(digits))
        if ok_len and digits.startswith(odigits):
            if len(odigits) > best_len:
                best, best_len = other, len(odigits)
    return best.notation if best is not None else nt.ROOT


def children_of(scheme: Scheme, text) -> List[ClassRecord]:
    """All classes whose parent resolves to the argument, in filing order.

    The argument may be a notation string or :data:`notation.ROOT`;
    spans order by their left endpoint.
    """
    if text is nt.ROOT:
        target = nt.ROOT
    else:
        target = scheme.canonicalize(text)
    out = []
    for rec in scheme.all_records():
        parent = parent_of(scheme, rec.notation)
        if parent == target or (parent is nt.ROOT and target is nt.ROOT):
            out.append(rec)
    out.sort(key=ClassRecord.sort_key)
    return out


def see_also_of(scheme: Scheme, text: str,
                lang: Optional[str] = None) -> List[Tuple[str, str]]:
    """Resolved see-also targets with captions, in stored order."""
    rec = scheme.require(text)
    lang = lang or scheme.default_lang
    out = []
    for target in rec.see_also:
        tgt = scheme.require(target)
        caption, _ = label_for(tgt, lang, scheme.default_lang)
        out.append((tgt.notation, caption))
    return out


def caption_for(rec: ClassRecord, lang: str, default_lang: str) -> Tuple[str, bool]:
    """Caption in the requested language, falling back to the default.

    Returns (text, fallback_used).
    """
    if lang in rec.captions:
        return rec.captions[lang], False
    if default_lang in rec.captions:
        return rec.captions[default_lang], True
    # last resort: any caption (the record invariant guarantees one)
    any_lang = next(iter(rec.captions))
    return rec.captions[any_lang], True


def label_for(rec: ClassRecord, lang: str, default_lang: str) -> Tuple[str, bool]:
    """Authority display label: preferred term first, else caption."""
    if rec.pref_terms.get(lang):
        return rec.pref_terms[lang][0], False
    if lang in rec.captions:
        return rec.captions[lang], False
    if rec.pref_terms.get(default_lang):
        return rec.pref_terms[default_lang][0], True
    return caption_for(rec, lang, default_lang)


def authority_record(scheme: Scheme, text: str,
                     langs: List[str]) -> AuthorityRecord:
    """Build the subject authority view of one class.

    Broader entries come from the parent, narrower from the children and
    related from the see-also links; labels missing in a requested language
    fall back to the scheme default and are flagged.
    """
    rec = scheme.require(text)
    terms = {}
    for lang in langs:
        terms[lang] = label_for(rec, lang, scheme.default_lang)

    def entries(targets) -> Dict[str, List[Tuple[str, str]]]:
        per_lang: Dict[str, List[Tuple[str, str]]] = {lang: [] for lang in langs}
        for tgt in targets:
            for lang in langs:
                label, _ = label_for(tgt, lang, scheme.default_lang)
                per_lang[lang].append((label, tgt.notation))
        return per_lang

    parent = parent_of(scheme, rec.notation)
    broader_targets = [] if parent is nt.ROOT else [scheme.require(parent)]
    narrower_targets = children_of(scheme, rec.notation)
    related_targets = [scheme.require(t) for t in rec.see_also]
    return AuthorityRecord(
        notation=rec.notation,
        terms=terms,
        broader=entries(broader_targets),
        narrower=entries(narrower_targets),
        related=entries(related_targets),
        system_no=rec.system_no,
    )


def validate(scheme: Scheme) -> List[str]:
    """Referential-integrity and acyclicity check; returns problem strings."""
    problems = []
    for rec in scheme.all_records():
        if not rec.captions:
            problems.append(f"{rec.notation}: no caption in any language")
        if rec.parent is not None and get_class(scheme, rec.parent) is None:
            problems.append(f"{rec.notation}: dangling parent {rec.parent}")
        for target in rec.see_also:
            if get_class(scheme, target) is None:
                problems.append(f"{rec.notation}: dangling see-also {target}")
            if target == rec.notation:
                problems.append(f"{rec.notation}: self see-also")
    # acyclic, rooted parent graph
    for rec in scheme.all_records():
        seen = {rec.notation}
        current = rec.notation
        while True:
            parent = parent_of(scheme, current)
            if parent is nt.ROOT:
                break
            if parent in seen:
                problems.append(f"{rec.notation}: parent cycle through {parent}")
                break
            seen.add(parent)
            current = parent
    return problems


def ancestors_of(scheme: Scheme, text: str) -> List[ClassRecord]:
    """Parent walk from a class up to the excerpt root, nearest first."""
    out = []
    current = scheme.canonicalize(text)
    seen = {current}
    while True:
        parent = parent_of(scheme, current)
        if parent is nt.ROOT:
            return out
        if parent in seen:
            raise StructuralError(
                f"parent cycle at {parent} while walking from {text}")
        rec = scheme.require(parent)
        out.append(rec)
        seen.add(parent)
        current = parent
