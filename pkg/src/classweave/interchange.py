"""File formats: scheme source loading, SKOS-style export, authority
records and concordance-based pivot mapping.

Scheme source format (UTF-8, LF, tab-separated, ``#`` comments)::

    S    scheme-id  title  hierarchy-mode  default-lang   (header, optional)
    C    notation  lang  caption
    P    notation  parent
    SA   notation  target
    T    notation  lang  index-term
    PT   notation  lang  preferred-term       (authority display form)
    DISC notation                             (discipline flag)
    SYS  notation  system-number
    AUX  facet-id  open  [close]
    A    facet-id  notation  lang  caption
    ADD  base  left  right  strip
    F    formula-name  slot=marker;slot=marker...
    MAP  src-scheme  src-notation  tgt-scheme  tgt-notation  exactness
    D    doc-id  lang  classmark(;classmark)*  title

Several files may contribute to the same scheme (matched by scheme id);
link resolution and validation run after all files are read.  Duplicate
class keys are fatal; everything else is a per-line diagnostic and the
offending record is dropped.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import notation as nt
from .errors import NotationParseError, NotFoundError, SchemeLoadError
from .kos import (AddInstruction, AuxFacet, ClassRecord, FacetFormula, Scheme,
                  authority_record, children_of, parent_of)
from .retrieval import RawDocument
from .synthesis import MARKER_PATTERNS


@dataclass
class LoadReport:
    diagnostics: List[Tuple[str, int, str]] = dc_field(default_factory=list)

    def add(self, path: str, line_no: int, message: str) -> None:
        self.diagnostics.append((path, line_no, message))

    def __bool__(self) -> bool:
        return bool(self.diagnostics)

    def render(self) -> str:
        return "".join(f"{p}:{n}: {m}\n" for p, n, m in self.diagnostics)


@dataclass
class ConcordanceEntry:
    source_scheme: str
    source_notation: str
    target_scheme: str
    target_notation: str
    exactness: str            # exact | broader | narrower


class Concordance:
    """Mapping table between schemes, keyed (src scheme, notation, tgt scheme)."""

    def __init__(self):
        self.entries: Dict[Tuple[str, str, str], ConcordanceEntry] = {}
        self.scheme_ids: set = set()

    def add(self, entry: ConcordanceEntry) -> None:
        key = (entry.source_scheme, entry.source_notation, entry.target_scheme)
        if key in self.entries:
            raise SchemeLoadError(f"duplicate concordance entry for {key}")
        self.entries[key] = entry
        self.scheme_ids.add(entry.source_scheme)
        self.scheme_ids.add(entry.target_scheme)


@dataclass
class TranslationResult:
    target_notation: str
    exactness: str
    hops_broadened: int


def translate(concordance: Concordance, source_scheme: str, text: str,
              target_scheme: str) -> Optional[TranslationResult]:
    """Map a notation via the concordance, broadening until an entry matches.

    An exact entry wins with zero hops; otherwise the notation is broadened
    digit by digit, and any entry found that way reports exactness
    ``broader`` with the hop count.  Returns None when the root is reached
    without a match.
    """
    src = source_scheme.lower()
    tgt = target_scheme.lower()
    if src not in concordance.scheme_ids or tgt not in concordance.scheme_ids:
        raise NotFoundError(
            f"no concordance entries for {source_scheme!r} -> {target_scheme!r}")
    expr = nt.parse(text)
    hops = 0
    current = expr
    while True:
        canonical = nt.format_expr(current) if not isinstance(current, nt.Compound) \
            else nt.redot(nt.decompose(current)[0][1])
        entry = concordance.entries.get((src, canonical, tgt))
        if entry is not None:
            exactness = entry.exactness if hops == 0 else "broader"
            return TranslationResult(entry.target_notation, exactness, hops)
        if isinstance(current, nt.Compound) and current.main is not None:
            current = current.main
            continue
        if not isinstance(current, nt.Simple):
            return None
        nxt = nt.broaden(current)
        if nxt is nt.ROOT:
            return None
        current = nxt
        hops += 1


@dataclass
class Corpus:
    """Everything a fixture set can carry: schemes, mappings, documents."""

    schemes: Dict[str, Scheme] = dc_field(default_factory=dict)
    concordance: Concordance = dc_field(default_factory=Concordance)
    documents: List[RawDocument] = dc_field(default_factory=list)
    report: LoadReport = dc_field(default_factory=LoadReport)


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

_EXACTNESS = {"exact", "broader", "narrower"}


class _SchemeDraft:
    def __init__(self, scheme_id: str):
        self.scheme = Scheme(id=scheme_id, title=scheme_id)
        # raw link lines resolved after all class lines are known
        self.links: List[Tuple[str, Sequence[str], str, int]] = []


def load_corpus(paths: Iterable[str]) -> Corpus:
    """Read fixture files into schemes, a concordance and document records."""
    corpus = Corpus()
    drafts: Dict[str, _SchemeDraft] = {}
    for path in paths:
        _read_file(path, drafts, corpus)
    for draft in drafts.values():
        _resolve_links(draft, corpus.report)
        corpus.schemes[draft.scheme.id] = draft.scheme
    _validate_schemes(corpus)
    return corpus


def load_scheme(path: str) -> Scheme:
    """Load a single scheme file; raises on fatal diagnostics."""
    scheme, report = load_scheme_with_report(path)
    return scheme


def load_scheme_with_report(path: str) -> Tuple[Scheme, LoadReport]:
    corpus = load_corpus([path])
    if len(corpus.schemes) != 1:
        raise SchemeLoadError(
            f"{path}: expected exactly one scheme, found {sorted(corpus.schemes)}")
    (scheme,) = corpus.schemes.values()
    return scheme, corpus.report


def _default_scheme_id(path: str) -> str:
    stem = os.path.splitext(os.path.basename(path))[0]
    return stem.split("_")[0].lower()


def _read_file(path: str, drafts: Dict[str, _SchemeDraft], corpus: Corpus) -> None:
    with open(path, encoding="utf-8") as fh:
        raw_lines = fh.read().split("\n")
    # Pre-scan for the scheme header and facet declarations: delimiters
    # change how every other notation in the file parses.
    scheme_id = _default_scheme_id(path)
    for line in raw_lines:
        if line.startswith("S\t"):
            scheme_id = line.split("\t")[1].strip().lower()
            break
    draft = drafts.setdefault(scheme_id, _SchemeDraft(scheme_id))
    scheme = draft.scheme
    for no, line in enumerate(raw_lines, start=1):
        if line.startswith("AUX\t"):
            fields = line.split("\t")
            if len(fields) < 3:
                corpus.report.add(path, no, "AUX needs facet-id and open delimiter")
                continue
            facet_id = fields[1]
            open_delim = fields[2]
            close_delim = fields[3] if len(fields) > 3 else ""
            clash = any(f.open_delim == open_delim for f in scheme.aux_facets.values()
                        if f.facet_id != facet_id)
            if clash:
                corpus.report.add(path, no, f"duplicate facet delimiter {open_delim!r}")
                continue
            scheme.aux_facets.setdefault(
                facet_id, AuxFacet(facet_id, open_delim, close_delim))

    for no, line in enumerate(raw_lines, start=1):
        stripped = line.strip("\r")
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split("\t")
        tag = fields[0]
        try:
            _dispatch(tag, fields, scheme, draft, corpus, path, no)
        except (NotationParseError, SchemeLoadError) as exc:
            if isinstance(exc, SchemeLoadError):
                raise
            corpus.report.add(path, no, str(exc))


def _dispatch(tag: str, fields: Sequence[str], scheme: Scheme,
              draft: _SchemeDraft, corpus: Corpus, path: str, no: int) -> None:
    if tag == "S":
        if len(fields) > 2 and fields[2]:
            scheme.title = fields[2]
        if len(fields) > 3 and fields[3]:
            scheme.hierarchy_mode = fields[3]
        if len(fields) > 4 and fields[4]:
            scheme.default_lang = fields[4]
    elif tag == "C":
        _need(fields, 4, path, no)
        notation, lang, caption = fields[1], fields[2], fields[3]
        expr = scheme.parse(notation)
        canonical = scheme.format(expr)
        rec = scheme.classes.get(canonical)
        if rec is None:
            rec = ClassRecord(notation=canonical, expr=expr, kind=_kind_of(expr))
            scheme.classes[canonical] = rec
        if lang in rec.captions:
            raise SchemeLoadError(
                f"{path}:{no}: duplicate class key {canonical} for language {lang}")
        rec.captions[lang] = caption
    elif tag == "A":
        _need(fields, 5, path, no)
        facet_id, notation, lang, caption = fields[1], fields[2], fields[3], fields[4]
        facet = scheme.aux_facets.get(facet_id)
        if facet is None:
            corpus.report.add(path, no, f"unknown facet id {facet_id!r}")
            return
        digits = notation.strip(facet.open_delim + facet.close_delim).replace(".", "")
        if not digits.isdigit():
            corpus.report.add(path, no, f"auxiliary notation {notation!r} is not digits")
            return
        canonical = facet.open_delim + nt.redot(digits) + facet.close_delim
        rec = facet.classes.get(canonical)
        if rec is None:
            expr = nt.Compound(None, ((facet_id, digits),))
            rec = ClassRecord(notation=canonical, expr=expr, kind="simple",
                              facet_id=facet_id)
            facet.classes[canonical] = rec
        if lang in rec.captions:
            raise SchemeLoadError(
                f"{path}:{no}: duplicate auxiliary key {canonical} for language {lang}")
        rec.captions[lang] = caption
    elif tag in ("P", "SA", "T", "PT", "DISC", "SYS"):
        draft.links.append((tag, tuple(fields), path, no))
    elif tag == "AUX":
        pass  # handled in the pre-scan
    elif tag == "ADD":
        _need(fields, 5, path, no)
        base, left, right, strip = (f.replace(".", "") for f in fields[1:5])
        if not (left.startswith(strip) and right.startswith(strip) and left < right):
            corpus.report.add(path, no, "malformed add-instruction span")
            return
        scheme.add_instructions.append(AddInstruction(base, left, right, strip))
    elif tag == "F":
        _need(fields, 3, path, no)
        name = fields[1]
        slots = []
        for part in fields[2].split(";"):
            slot_name, _, marker = part.partition("=")
            if marker not in MARKER_PATTERNS:
                corpus.report.add(path, no, f"unknown slot marker {marker!r}")
                return
            slots.append((slot_name, marker))
        scheme.facet_formulas[name] = FacetFormula(name, tuple(slots))
    elif tag == "MAP":
        _need(fields, 6, path, no)
        src, src_n, tgt, tgt_n, exactness = fields[1:6]
        if exactness not in _EXACTNESS:
            corpus.report.add(path, no, f"unknown exactness {exactness!r}")
            return
        corpus.concordance.add(ConcordanceEntry(
            src.lower(), nt.format_expr(nt.parse(src_n)),
            tgt.lower(), nt.format_expr(nt.parse(tgt_n)), exactness))
    elif tag == "D":
        _need(fields, 5, path, no)
        doc_id, lang, classmarks, title = fields[1], fields[2], fields[3], fields[4]
        marks = [m for m in classmarks.split(";") if m]
        corpus.documents.append(RawDocument(doc_id, title, lang, marks))
    else:
        corpus.report.add(path, no, f"unknown line tag {tag!r}")


def _need(fields: Sequence[str], count: int, path: str, no: int) -> None:
    if len(fields) < count:
        raise NotationParseError(
            f"{fields[0]} line needs {count - 1} fields", "\t".join(fields), 0)


def _kind_of(expr: nt.NotationExpr) -> str:
    if isinstance(expr, nt.Simple):
        return "simple"
    if isinstance(expr, nt.Span):
        return "span"
    return "compound"


def _resolve_links(draft: _SchemeDraft, report: LoadReport) -> None:
    scheme = draft.scheme
    for tag, fields, path, no in draft.links:
        try:
            canonical = scheme.canonicalize(fields[1])
        except NotationParseError as exc:
            report.add(path, no, str(exc))
            continue
        rec = scheme.get(canonical)
        if rec is None:
            report.add(path, no, f"{tag} refers to unknown class {fields[1]}")
            continue
        if tag == "P":
            try:
                target = scheme.canonicalize(fields[2])
            except NotationParseError as exc:
                report.add(path, no, str(exc))
                continue
            if scheme.get(target) is None:
                report.add(path, no, f"dangling parent reference {fields[2]}")
                continue
            rec.parent = target
        elif tag == "SA":
            try:
                target = scheme.canonicalize(fields[2])
            except NotationParseError as exc:
                report.add(path, no, str(exc))
                continue
            if scheme.get(target) is None:
                report.add(path, no, f"dangling see-also reference {fields[2]}")
                continue
            if target == rec.notation:
                report.add(path, no, "see-also pointing at itself")
                continue
            rec.see_also.append(target)
        elif tag == "T":
            rec.index_terms.setdefault(fields[2], []).append(fields[3])
        elif tag == "PT":
            rec.pref_terms.setdefault(fields[2], []).append(fields[3])
        elif tag == "DISC":
            rec.is_discipline = True
        elif tag == "SYS":
            rec.system_no = fields[2]


def _validate_schemes(corpus: Corpus) -> None:
    from .kos import validate

    for scheme in corpus.schemes.values():
        for problem in validate(scheme):
            corpus.report.add(f"<scheme {scheme.id}>", 0, problem)


# ---------------------------------------------------------------------------
# SKOS-style export
# ---------------------------------------------------------------------------


def percent_encode(text: str) -> str:
    """Encode every non-alphanumeric byte, keeping compound marks addressable."""
    out = []
    for ch in text:
        if ch.isalnum() and ch.isascii():
            out.append(ch)
        else:
            out.extend("%%%02X" % b for b in ch.encode("utf-8"))
    return "".join(out)


def concept_urn(scheme: Scheme, notation: str) -> str:
    return f"urn:kos:{scheme.id}:{percent_encode(notation)}"


def export_skos(scheme: Scheme) -> str:
    """Line-oriented subject/predicate/object triples, deterministically sorted.

    One concept per main-table class; labels per language, a notation
    literal, broader/narrower along the browse tree and symmetric related
    statements from the see-also web.
    """
    lines = []
    related_pairs = set()
    for rec in scheme.classes.values():
        urn = concept_urn(scheme, rec.notation)
        for lang in sorted(rec.captions):
            lines.append(f'{urn}\tprefLabel\t"{rec.captions[lang]}"@{lang}')
        lines.append(f'{urn}\tnotation\t"{rec.notation}"')
        parent = parent_of(scheme, rec.notation)
        if parent is not nt.ROOT:
            lines.append(f"{urn}\tbroader\t{concept_urn(scheme, parent)}")
        for child in children_of(scheme, rec.notation):
            if child.facet_id is None:
                lines.append(f"{urn}\tnarrower\t{concept_urn(scheme, child.notation)}")
        for target in rec.see_also:
            related_pairs.add((rec.notation, target))
            related_pairs.add((target, rec.notation))
    for a, b in related_pairs:
        lines.append(f"{concept_urn(scheme, a)}\trelated\t{concept_urn(scheme, b)}")
    lines.sort()
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# Authority-record export
# ---------------------------------------------------------------------------


def export_authority(scheme: Scheme, notations: Sequence[str],
                     langs: Sequence[str]) -> Tuple[str, List[str]]:
    """Line-oriented authority records for the given classes.

    Field order mirrors OPAC authority displays: notation, one Term line per
    language, Broader/Narrower/Related as ``LABEL : notation`` grouped by
    target, optional system number.  Unknown notations are skipped and
    reported.  Returns (text, diagnostics).
    """
    blocks = []
    diagnostics = []
    for text in notations:
        try:
            record = authority_record(scheme, text, list(langs))
        except (NotFoundError, NotationParseError) as exc:
            diagnostics.append(f"{text}: {exc}")
            continue
        lines = [f"{scheme.id.upper()}\t{record.notation}"]
        for lang in langs:
            term, fallback = record.terms[lang]
            marker = " *" if fallback else ""
            lines.append(f"Term\t{term}{marker}")
        for label, entries in (("Broader term", record.broader),
                               ("Narrower term", record.narrower),
                               ("Related term", record.related)):
            count = len(entries[langs[0]]) if langs else 0
            for i in range(count):
                for lang in langs:
                    term, target = entries[lang][i]
                    lines.append(f"{label}\t{term} : {target}")
        if record.system_no:
            lines.append(f"System No\t{record.system_no}")
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks), diagnostics
