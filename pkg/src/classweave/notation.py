"""Classmark grammar, parser, canonicalizer and structural algebra.

A classmark is one of:

* a simple decimal number (``539.125.46``) -- dots are purely presentational,
  the comparison domain is the bare digit string;
* a span (``539.123/.124``) denoting a range of sibling classes;
* a compound: a main number qualified by common auxiliaries whose facet is
  recognised by its delimiter (``338.48(469)``, ``=821.221``);
* a relator expression joining independent subjects with ``+`` or ``:``
  (``73:75``).

The canonical textual rendering produced by :func:`format_expr` is the wire
form used by every other module.  Local conventions that group digits in a
non-standard way (e.g. ``539.12.000.1``) are preserved verbatim: the parser
records the observed grouping and the formatter replays it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence, Tuple, Union

from .errors import NotationParseError

# Facet registry: facet_id -> (open_delim, close_delim). close_delim is ""
# for prefix-style facets such as "=" (language) or "-" (special).
FacetDelims = Mapping[str, Tuple[str, str]]


class _Root:
    """Sentinel for the (virtual) root above all top-level classes."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ROOT"


ROOT = _Root()


@dataclass(frozen=True)
class Simple:
    """A plain hierarchically expressive number, kept as a digit string.

    ``groups`` remembers a non-canonical display grouping (opaque local
    segments like ``.000.``); it never participates in equality.
    """

    digits: str
    groups: Optional[Tuple[int, ...]] = field(default=None, compare=False)


@dataclass(frozen=True)
class Span:
    """An inclusive range of sibling classes, endpoints of equal length."""

    left: str
    right: str


@dataclass(frozen=True)
class Compound:
    """A main number plus ordered facet auxiliaries.

    ``main`` is ``None`` for bare auxiliary notations such as ``=821.221``
    that identify entries of an auxiliary table on their own.
    """

    main: Optional[Simple]
    auxiliaries: Tuple[Tuple[str, str], ...]  # (facet_id, digit-string)


@dataclass(frozen=True)
class Relation:
    """A phase relationship: ``+`` (juxtaposed) or ``:`` (simple relation)."""

    op: str  # "+" or ":"
    operands: Tuple["NotationExpr", ...]


NotationExpr = Union[Simple, Span, Compound, Relation]

RELATORS = ("+", ":")


def canonical_groups(digits: str) -> Tuple[int, ...]:
    """Digit grouping implied by the dot-after-every-third-digit rule."""
    n = len(digits)
    groups = [3] * (n // 3)
    if n % 3:
        groups.append(n % 3)
    return tuple(groups)


def redot(digits: str, groups: Optional[Sequence[int]] = None) -> str:
    """Render a digit string with presentational dots."""
    if groups is None:
        groups = canonical_groups(digits)
    parts = []
    pos = 0
    for size in groups:
        parts.append(digits[pos:pos + size])
        pos += size
    return ".".join(parts)


def _validate_digits(payload: str, text: str, offset: int) -> None:
    if not payload:
        raise NotationParseError("empty digit string", text, offset)
    if not payload.isdigit():
        bad = next(i for i, c in enumerate(payload) if not c.isdigit())
        raise NotationParseError("non-digit payload", text, offset + bad)


class NotationParser:
    """Parser bound to a facet-delimiter registry.

    The registry decides which characters open auxiliaries; everything else
    about the grammar is fixed.
    """

    def __init__(self, facets: Optional[FacetDelims] = None):
        self.facets = dict(facets or {})
        self._open_map = {od: (fid, cd) for fid, (od, cd) in self.facets.items()}
        for od, cd in self.facets.values():
            if od in RELATORS or od in "./" or (cd and cd in "./"):
                raise ValueError(f"facet delimiter clashes with core grammar: {od!r}")

    # -- public API ------------------------------------------------------

    def parse(self, text: str) -> NotationExpr:
        """Parse a classmark string into its syntax tree.

        ``+`` and ``:`` split at top level, left to right, with equal
        precedence; runs of the same operator are flattened.
        """
        stripped = text.strip()
        if not stripped:
            raise NotationParseError("empty input", text, 0)
        pieces = self._split_relators(stripped)
        if len(pieces) == 1:
            return self._parse_atom(stripped, pieces[0][0], pieces[0][1])
        expr = self._parse_atom(stripped, pieces[0][0], pieces[0][1])
        for op, (start, end) in zip((p[2] for p in pieces[:-1]), ((p[0], p[1]) for p in pieces[1:])):
            operand = self._parse_atom(stripped, start, end)
            if isinstance(expr, Relation) and expr.op == op:
                expr = Relation(op, expr.operands + (operand,))
            else:
                expr = Relation(op, (expr, operand))
        return expr

    def format(self, expr: NotationExpr) -> str:
        """Render an expression in canonical text form."""
        if isinstance(expr, Simple):
            return redot(expr.digits, expr.groups)
        if isinstance(expr, Span):
            return format_span(expr)
        if isinstance(expr, Compound):
            out = "" if expr.main is None else self.format(expr.main)
            for facet_id, digits in expr.auxiliaries:
                try:
                    od, cd = self.facets[facet_id]
                except KeyError:
                    raise NotationParseError(
                        f"unknown facet {facet_id!r}", facet_id, 0)
                out += od + redot(digits) + cd
            return out
        if isinstance(expr, Relation):
            return expr.op.join(self.format(op_) for op_ in expr.operands)
        raise TypeError(f"not a notation expression: {expr!r}")

    def canonicalize(self, text: str) -> str:
        return self.format(self.parse(text))

    # -- internals -------------------------------------------------------

    def _split_relators(self, text: str):
        """Return (start, end, following_op) pieces split at top level."""
        pieces = []
        depth_close = []  # stack of expected close delimiters
        start = 0
        for i, ch in enumerate(text):
            if depth_close:
                if ch == depth_close[-1]:
                    depth_close.pop()
                continue
            closes = {cd for _, cd in self.facets.values() if cd}
            if ch in {od for od, cd in self.facets.values() if cd}:
                fid, cd = self._open_map[ch]
                depth_close.append(cd)
            elif ch in closes:
                raise NotationParseError("unbalanced delimiter", text, i)
            elif ch in RELATORS:
                if i == start:
                    raise NotationParseError("empty relator operand", text, i)
                pieces.append((start, i, ch))
                start = i + 1
        if depth_close:
            raise NotationParseError("unbalanced delimiter", text, len(text) - 1)
        if start >= len(text):
            raise NotationParseError("empty relator operand", text, len(text) - 1)
        pieces.append((start, len(text), None))
        return pieces

    def _parse_atom(self, text: str, start: int, end: int) -> NotationExpr:
        """Parse one relator operand: [main][auxiliary]*"""
        i = start
        main: Optional[NotationExpr] = None
        if i < end and (text[i].isdigit() or text[i] == "."):
            main, i = self._parse_main(text, i, end)
        auxiliaries = []
        while i < end:
            ch = text[i]
            if ch not in self._open_map:
                raise NotationParseError("unknown facet delimiter", text, i)
            fid, cd = self._open_map[ch]
            i += 1
            run_start = i
            if cd:
                while i < end and text[i] != cd:
                    i += 1
                if i >= end:
                    raise NotationParseError("unbalanced delimiter", text, run_start - 1)
                payload = text[run_start:i]
                i += 1  # consume close
            else:
                while i < end and (text[i].isdigit() or text[i] == "."):
                    i += 1
                payload = text[run_start:i]
            digits = payload.replace(".", "")
            _validate_digits(digits, text, run_start)
            if any(fid == f for f, _ in auxiliaries):
                raise NotationParseError(
                    f"duplicate auxiliary for facet {fid!r}", text, run_start)
            auxiliaries.append((fid, digits))
        if main is None and not auxiliaries:
            raise NotationParseError("empty classmark", text, start)
        if not auxiliaries:
            return main
        if isinstance(main, (Span, Relation)):
            raise NotationParseError("auxiliary on non-simple main", text, start)
        return Compound(main, tuple(auxiliaries))

    def _parse_main(self, text: str, start: int, end: int):
        i = start
        while i < end and (text[i].isdigit() or text[i] == "."):
            i += 1
        raw_left = text[start:i]
        left_digits = raw_left.replace(".", "")
        _validate_digits(left_digits, text, start)
        if i < end and text[i] == "/":
            slash = i
            i += 1
            run_start = i
            while i < end and (text[i].isdigit() or text[i] == "."):
                i += 1
            raw_right = text[run_start:i]
            if not raw_right:
                raise NotationParseError("malformed span", text, slash)
            if raw_right.startswith("."):
                # suffix form: right side shares the left's leading digits
                sfx = raw_right.lstrip(".")
                _validate_digits(sfx.replace(".", ""), text, run_start)
                sfx_digits = sfx.replace(".", "")
                if len(sfx_digits) >= len(left_digits):
                    raise NotationParseError("malformed span suffix", text, run_start)
                right_digits = left_digits[:len(left_digits) - len(sfx_digits)] + sfx_digits
            else:
                right_digits = raw_right.replace(".", "")
                _validate_digits(right_digits, text, run_start)
            if len(right_digits) != len(left_digits) or not left_digits < right_digits:
                raise NotationParseError("span endpoints out of order", text, slash)
            return Span(left_digits, right_digits), i
        if "" in raw_left.split("."):
            raise NotationParseError("malformed dotting", text, start)
        groups: Optional[Tuple[int, ...]]
        if "." not in raw_left:
            groups = None        # undotted input renders with canonical dots
        else:
            groups = tuple(len(g) for g in raw_left.split("."))
            if groups == canonical_groups(left_digits):
                groups = None
        return Simple(left_digits, groups), i


def format_span(span: Span) -> str:
    """Render a span, preferring the shared-prefix suffix form.

    The longest run of whole leading dot-groups common to both endpoints is
    elided from the right side (``539.123/.124``); with no common leading
    group the right side is written in full.
    """
    left = redot(span.left)
    right = redot(span.right)
    lparts = left.split(".")
    rparts = right.split(".")
    common = 0
    while (common < len(lparts) - 1 and common < len(rparts) - 1
           and lparts[common] == rparts[common]):
        common += 1
    if common:
        return left + "/." + ".".join(rparts[common:])
    return left + "/" + right


# Module-level conveniences bound to an empty facet registry; schemes hold
# their own parser with the registered delimiters.
_BARE = NotationParser()


def parse(text: str, facets: Optional[FacetDelims] = None) -> NotationExpr:
    return (NotationParser(facets) if facets else _BARE).parse(text)


def format_expr(expr: NotationExpr, facets: Optional[FacetDelims] = None) -> str:
    return (NotationParser(facets) if facets else _BARE).format(expr)


def broaden(expr: NotationExpr):
    """Remove the last digit of a simple number; single digit broadens to ROOT."""
    if not isinstance(expr, Simple):
        raise SimpleExpected(expr)
    if len(expr.digits) <= 1:
        return ROOT
    return Simple(expr.digits[:-1])


class SimpleExpected(TypeError, Exception):
    """Digit algebra only applies to the Simple variant.

    Broadening a compound is done by dropping its last auxiliary; use
    :func:`decompose` to get at the parts.
    """

    def __init__(self, expr):
        super().__init__(f"operation requires a Simple number, got {type(expr).__name__}")


def is_descendant(ancestor: Simple, candidate: Simple) -> bool:
    """True iff the ancestor's digit string is a proper prefix of the candidate's."""
    if not isinstance(ancestor, Simple) or not isinstance(candidate, Simple):
        raise SimpleExpected(ancestor if not isinstance(ancestor, Simple) else candidate)
    a, c = ancestor.digits, candidate.digits
    return len(a) < len(c) and c.startswith(a)


def span_covers(span: Span, candidate: Simple) -> bool:
    """True iff the candidate, truncated to endpoint length, falls in [left, right]."""
    width = len(span.left)
    digits = candidate.digits
    if len(digits) < width:
        return False
    head = digits[:width]
    return span.left <= head <= span.right


def decompose(expr: NotationExpr):
    """Flatten an expression into (component_kind, digit-string) pairs.

    Kinds are ``"main"`` for simple numbers, the facet id for auxiliaries
    and ``"span"`` for range components (payload ``left/right``).  Order is
    preserved; relation operands recurse.
    """
    out = []
    _decompose_into(expr, out)
    return out


def _decompose_into(expr: NotationExpr, out) -> None:
    if isinstance(expr, Simple):
        out.append(("main", expr.digits))
    elif isinstance(expr, Span):
        out.append(("span", f"{expr.left}/{expr.right}"))
    elif isinstance(expr, Compound):
        if expr.main is not None:
            out.append(("main", expr.main.digits))
        out.extend(expr.auxiliaries)
    elif isinstance(expr, Relation):
        for op in expr.operands:
            _decompose_into(op, out)
    else:
        raise TypeError(f"not a notation expression: {expr!r}")


def walk_broadenings(expr: Simple) -> Iterator[NotationExpr]:
    """Yield successive broadenings down to (and including) ROOT."""
    current: NotationExpr = expr
    while current is not ROOT:
        current = broaden(current)  # type: ignore[arg-type]
        yield current
