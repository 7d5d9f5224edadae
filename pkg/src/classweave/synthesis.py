"""Number building: auxiliaries, add-instructions and facet formulas.

Covers the three synthesis devices of analytico-synthetic schemes:

* attaching common auxiliaries to a main number (``94`` + place ``469``
  -> ``94(469)``);
* expanding parallel-division add-instructions ("add to base number 565.7
  the number following 595.7 in 595.72-595.79");
* composing and parsing classmarks under a citation-order facet formula
  with syntactically expressive markers (``A-1aa031``).

All functions are pure.
"""

from __future__ import annotations

import re
from typing import Dict, List, Mapping

from . import notation as nt
from .errors import NotFoundError, SynthesisError
from .kos import AddInstruction, FacetFormula, Scheme

# Marker character classes for facet-formula slots.  Consecutive slots of a
# formula must use distinguishable markers so segmentation is deterministic.
MARKER_PATTERNS: Dict[str, str] = {
    "uppercase-letters": r"[A-Z]+",
    "dash-digits": r"-[0-9]+",
    "lowercase-letters": r"[a-z]+",
    "zero-led-digits": r"0[0-9]*",
}


def apply_auxiliary(scheme: Scheme, main, facet_id: str, aux: str) -> nt.Compound:
    """Attach a common auxiliary to a main number.

    ``main`` may be a Simple/Compound expression or a notation string; the
    auxiliary is appended after any existing auxiliaries.  One value per
    facet per compound.
    """
    if isinstance(main, str):
        main = scheme.parse(main)
    facet = scheme.aux_facets.get(facet_id)
    if facet is None:
        raise NotFoundError(f"unknown facet {facet_id!r} in scheme {scheme.id!r}")
    aux_digits = aux.replace(".", "")
    aux_canonical = facet.open_delim + nt.redot(aux_digits) + facet.close_delim
    if aux_canonical not in facet.classes:
        raise NotFoundError(
            f"auxiliary {aux!r} not in facet {facet_id!r} of scheme {scheme.id!r}")
    if isinstance(main, nt.Simple):
        base, existing = main, ()
    elif isinstance(main, nt.Compound):
        base, existing = main.main, main.auxiliaries
    else:
        raise SynthesisError(f"cannot attach auxiliary to {type(main).__name__}")
    if base is not None and scheme.get(scheme.format(base)) is None:
        raise NotFoundError(
            f"main number {scheme.format(base)!r} not in scheme {scheme.id!r}")
    if any(fid == facet_id for fid, _ in existing):
        raise SynthesisError(
            f"facet {facet_id!r} already present; one value per facet per compound")
    return nt.Compound(base, existing + ((facet_id, aux_digits),))


def relate(op: str, operands: List[nt.NotationExpr]) -> nt.Relation:
    """Join independent subjects with ``+`` or ``:``; flattened, order kept."""
    if op not in nt.RELATORS:
        raise SynthesisError(f"unknown relator {op!r}")
    if len(operands) < 2:
        raise SynthesisError("a phase relationship needs at least two operands")
    flat = []
    for operand in operands:
        if isinstance(operand, nt.Relation) and operand.op == op:
            flat.extend(operand.operands)
        else:
            flat.append(operand)
    return nt.Relation(op, tuple(flat))


def expand_add(instr: AddInstruction, source) -> nt.Simple:
    """Build a number from an add-instruction and an in-span source.

    The result is the base followed by the source digits with the strip
    prefix removed; e.g. base 565.7, strip 595.7, source 595.76 -> 565.76.
    """
    if isinstance(source, str):
        source = nt.parse(source)
    if not isinstance(source, nt.Simple):
        raise SynthesisError("add-instruction source must be a simple number")
    digits = source.digits
    if not digits.startswith(instr.strip_prefix):
        raise SynthesisError(
            f"source {nt.redot(digits)} does not start with "
            f"strip prefix {nt.redot(instr.strip_prefix)}")
    span = nt.Span(instr.source_left, instr.source_right)
    if not nt.span_covers(span, source):
        raise SynthesisError(
            f"source {nt.redot(digits)} outside add span "
            f"{nt.redot(instr.source_left)}-{nt.redot(instr.source_right)}")
    return nt.Simple(instr.base + digits[len(instr.strip_prefix):])


def _slot_regexes(formula: FacetFormula):
    try:
        return [(name, re.compile(MARKER_PATTERNS[marker]))
                for name, marker in formula.slots]
    except KeyError as exc:
        raise SynthesisError(f"unknown marker {exc.args[0]!r}") from None


def synthesize_faceted(formula: FacetFormula,
                       components: Mapping[str, str]) -> str:
    """Concatenate components in the formula's citation order.

    Omitted slots contribute nothing; output order depends only on the
    formula, never on the insertion order of the mapping.
    """
    regexes = dict((name, rx) for name, rx in _slot_regexes(formula))
    unknown = set(components) - set(regexes)
    if unknown:
        raise SynthesisError(f"unknown formula slots: {sorted(unknown)}")
    out = []
    for name, _marker in formula.slots:
        if name not in components:
            continue
        token = components[name]
        if not regexes[name].fullmatch(token):
            raise SynthesisError(
                f"token {token!r} does not match the {name!r} slot marker")
        out.append(token)
    if not out:
        raise SynthesisError("no components supplied")
    return "".join(out)


def parse_faceted(formula: FacetFormula, text: str) -> Dict[str, str]:
    """Segment a faceted classmark back into its slot components.

    Tries every way of carving the text into marker-valid tokens in slot
    order (each slot optional).  Exactly one segmentation is required;
    none means the input violates the citation order, several mean the
    classmark is ambiguous under this formula.
    """
    if not text:
        raise SynthesisError("empty faceted classmark")
    slots = _slot_regexes(formula)
    solutions: List[Dict[str, str]] = []

    def search(slot_idx: int, pos: int, acc: Dict[str, str]) -> None:
        if slot_idx == len(slots):
            if pos == len(text):
                solutions.append(dict(acc))
            return
        name, rx = slots[slot_idx]
        # skip this slot
        search(slot_idx + 1, pos, acc)
        # or consume any marker-valid chunk starting here
        m = rx.match(text, pos)
        if m:
            longest = m.end()
            for end in range(pos + 1, longest + 1):
                token = text[pos:end]
                if rx.fullmatch(token):
                    acc[name] = token
                    search(slot_idx + 1, end, acc)
                    del acc[name]

    search(0, 0, {})
    if not solutions:
        raise SynthesisError(
            f"cannot segment {text!r}: violates the citation order of "
            f"formula {formula.name!r}")
    if len(solutions) > 1:
        raise SynthesisError(
            f"ambiguous segmentation of {text!r} under formula {formula.name!r}")
    return solutions[0]
