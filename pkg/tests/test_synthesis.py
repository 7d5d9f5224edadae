"""Number building: auxiliaries, add-instructions, facet formulas."""

import random
import re

import pytest

from classweave import notation as nt
from classweave.errors import NotFoundError, SynthesisError
from classweave.synthesis import (apply_auxiliary, expand_add, parse_faceted,
                                  relate, synthesize_faceted)

PLACE_COMBINATIONS = [
    ("027", "469", "027(469)"),
    ("338.48", "469", "338.48(469)"),
    ("726", "469", "726(469)"),
    ("91", "469", "91(469)"),
    ("94", "469", "94(469)"),
    ("06", "7", "06(7)"),
    ("06", "41", "06(41)"),
    ("06", "430", "06(430)"),
    ("070", "7", "070(7)"),
    ("070", "41", "070(41)"),
    ("070", "430", "070(430)"),
]


@pytest.mark.parametrize("main,place,expected", PLACE_COMBINATIONS)
def test_place_combinations(udc, main, place, expected):
    expr = apply_auxiliary(udc, main, "place", place)
    assert udc.format(expr) == expected


def test_apply_auxiliary_validates_everything(udc):
    with pytest.raises(NotFoundError):
        apply_auxiliary(udc, "06", "time", "1990")
    with pytest.raises(NotFoundError):
        apply_auxiliary(udc, "06", "place", "999")
    with pytest.raises(NotFoundError):
        apply_auxiliary(udc, "999", "place", "469")
    compound = apply_auxiliary(udc, "06", "place", "430")
    with pytest.raises(SynthesisError):
        apply_auxiliary(udc, compound, "place", "7")


def test_apply_auxiliary_appends_across_facets(udc):
    expr = apply_auxiliary(udc, "06", "place", "430")
    expr = apply_auxiliary(udc, expr, "language", "821.221")
    assert udc.format(expr) == "06(430)=821.221"


def test_relate_flattens(udc):
    expr = relate(":", [nt.Simple("73"), nt.Simple("75")])
    assert udc.format(expr) == "73:75"
    nested = relate("+", [expr.operands[0], relate("+", [nt.Simple("75"),
                                                         nt.Simple("76")])])
    assert nested.operands == (nt.Simple("73"), nt.Simple("75"), nt.Simple("76"))
    with pytest.raises(SynthesisError):
        relate("*", [nt.Simple("73"), nt.Simple("75")])
    with pytest.raises(SynthesisError):
        relate(":", [nt.Simple("73")])


def _add_instruction(scheme):
    (instr,) = [i for i in scheme.add_instructions if i.base == "5657"]
    return instr


def test_expand_add_printed_example(ddc):
    instr = _add_instruction(ddc)
    assert nt.redot(expand_add(instr, "595.76").digits) == "565.76"


def test_expand_add_rejects_out_of_span(ddc):
    instr = _add_instruction(ddc)
    with pytest.raises(SynthesisError):
        expand_add(instr, "595.71")
    with pytest.raises(SynthesisError):
        expand_add(instr, "596.76")
    with pytest.raises(SynthesisError):
        expand_add(instr, "539.125/.126")


def test_expand_add_randomized_against_string_oracle(ddc):
    instr = _add_instruction(ddc)
    rng = random.Random(20110401)
    for _ in range(1000):
        tail = str(rng.randint(2, 9)) + "".join(
            rng.choice("0123456789") for _ in range(rng.randint(0, 4)))
        source = "5957" + tail
        result = expand_add(instr, nt.redot(source))
        # oracle: strip the shared zoology prefix, concatenate, re-dot
        assert result.digits == "5657" + source[len("5957"):]
        assert nt.redot(result.digits) == nt.format_expr(result)


# -- facet formulas ---------------------------------------------------------

PRINTED_CLASSMARKS = {
    "A-1aa031": {"language": "A", "form": "-1", "period": "aa",
                 "document": "031"},
    "B-2ac02": {"language": "B", "form": "-2", "period": "ac",
                "document": "02"},
    "C-1ac03": {"language": "C", "form": "-1", "period": "ac",
                "document": "03"},
    "C-3ac031": {"language": "C", "form": "-3", "period": "ac",
                 "document": "031"},
}


def formula(bc2):
    return bc2.facet_formulas["literature"]


def test_printed_classmarks_roundtrip(bc2):
    f = formula(bc2)
    for text, components in PRINTED_CLASSMARKS.items():
        assert synthesize_faceted(f, components) == text
        assert parse_faceted(f, text) == components


def test_citation_order_is_fixed_by_formula(bc2):
    f = formula(bc2)
    shuffled = {"document": "031", "language": "A", "period": "aa", "form": "-1"}
    assert synthesize_faceted(f, shuffled) == "A-1aa031"


def test_out_of_order_text_rejected(bc2):
    with pytest.raises(SynthesisError):
        parse_faceted(formula(bc2), "aa-1A031")


def test_invalid_tokens_rejected(bc2):
    f = formula(bc2)
    with pytest.raises(SynthesisError):
        synthesize_faceted(f, {"language": "a"})
    with pytest.raises(SynthesisError):
        synthesize_faceted(f, {"document": "131"})
    with pytest.raises(SynthesisError):
        synthesize_faceted(f, {"tone": "X"})
    with pytest.raises(SynthesisError):
        synthesize_faceted(f, {})


def test_ambiguous_classmark_raises(bc2):
    # "-10" could be form -10, or form -1 with document 0
    with pytest.raises(SynthesisError, match="[Aa]mbiguous"):
        parse_faceted(formula(bc2), "-10")


def test_formula_roundtrip_randomized(bc2):
    f = formula(bc2)
    rng = random.Random(19333)
    upper = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    lower = upper.lower()
    count = 0
    while count < 500:
        components = {}
        if rng.random() < 0.7:
            components["language"] = "".join(
                rng.choice(upper) for _ in range(rng.randint(1, 3)))
        has_period = rng.random() < 0.7
        if rng.random() < 0.7:
            # without a period separator, digits shared with the document
            # slot would make the classmark ambiguous; keep zeros out then
            alphabet = "123456789" if not has_period else "0123456789"
            components["form"] = "-" + "".join(
                rng.choice(alphabet) for _ in range(rng.randint(1, 3)))
        if has_period:
            components["period"] = "".join(
                rng.choice(lower) for _ in range(rng.randint(1, 4)))
        if rng.random() < 0.7 and (has_period or "form" not in components):
            components["document"] = "0" + "".join(
                rng.choice("0123456789") for _ in range(rng.randint(0, 3)))
        if not components:
            continue
        count += 1
        text = synthesize_faceted(f, components)
        assert re.fullmatch(r"[A-Z]*(-[0-9]+)?[a-z]*(0[0-9]*)?", text)
        assert parse_faceted(f, text) == components
