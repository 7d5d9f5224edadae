"""File formats: loading diagnostics, SKOS export, authority export, pivot."""

import os
import tempfile

import pytest

from classweave.errors import NotFoundError, SchemeLoadError
from classweave.interchange import (Concordance, ConcordanceEntry, LoadReport,
                                    concept_urn, export_authority, export_skos,
                                    load_corpus, translate)


def _load_lines(lines):
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "toy.tsv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        return load_corpus([path])


# -- loading ----------------------------------------------------------------


def test_schemes_merge_across_files_by_header_id(udc):
    from classweave.kos import get_class

    # classes contributed by different fixture files live in one scheme
    assert udc.get("539.1") is not None
    assert udc.get("176") is not None
    assert get_class(udc, "(469)") is not None


def test_dangling_see_also_is_dropped_with_diagnostic():
    corpus = _load_lines(["S\ttoy", "C\t1\ten\tOne", "SA\t1\t999"])
    assert any("see-also" in m for _, _, m in corpus.report.diagnostics)
    assert corpus.schemes["toy"].require("1").see_also == []


def test_dangling_parent_is_dropped_with_diagnostic():
    corpus = _load_lines(["S\ttoy", "C\t1\ten\tOne", "P\t1\t999"])
    assert any("parent" in m for _, _, m in corpus.report.diagnostics)
    assert corpus.schemes["toy"].require("1").parent is None


def test_duplicate_class_key_is_fatal():
    with pytest.raises(SchemeLoadError, match="duplicate"):
        _load_lines(["S\ttoy", "C\t1\ten\tOne", "C\t1\ten\tOne again"])


def test_same_class_different_language_is_fine():
    corpus = _load_lines(["S\ttoy", "C\t1\ten\tOne", "C\t1\tfr\tUn"])
    rec = corpus.schemes["toy"].require("1")
    assert rec.captions == {"en": "One", "fr": "Un"}


def test_unknown_tag_and_bad_notation_are_diagnostics_not_fatal():
    corpus = _load_lines(["S\ttoy", "C\t1\ten\tOne", "XX\tnope",
                          "C\t1x2\ten\tBad"])
    messages = [m for _, _, m in corpus.report.diagnostics]
    assert any("unknown line tag" in m for m in messages)
    assert len(corpus.schemes["toy"].classes) == 1


def test_comments_and_blank_lines_ignored():
    corpus = _load_lines(["# heading", "", "S\ttoy", "C\t1\ten\tOne", ""])
    assert not corpus.report
    assert len(corpus.schemes["toy"].classes) == 1


def test_load_report_render_format():
    report = LoadReport()
    report.add("file.tsv", 7, "something odd")
    assert report.render() == "file.tsv:7: something odd\n"
    assert bool(report)
    assert not LoadReport()


def test_fixture_corpus_loads_clean(state):
    assert state.corpus.report.diagnostics == []
    assert state.ingest_rejects == []
    assert set(state.schemes) == {"udc", "nebis", "ddc", "bc2"}


# -- SKOS export ------------------------------------------------------------


def test_percent_encoding():
    assert export_skos is not None
    from classweave.interchange import percent_encode

    assert percent_encode("539.125.46") == "539%2E125%2E46"
    assert percent_encode("539.123/.124") == "539%2E123%2F%2E124"
    assert percent_encode("(469)") == "%28469%29"
    assert percent_encode("=821.221") == "%3D821%2E221"
    assert percent_encode("é") == "%C3%A9"


def test_concept_urn(udc):
    assert concept_urn(udc, "539.12") == "urn:kos:udc:539%2E12"


def test_skos_export_is_deterministic(udc):
    first = export_skos(udc)
    second = export_skos(udc)
    assert first == second
    lines = first.splitlines()
    assert lines == sorted(lines)


def test_skos_concept_count_matches_main_table(udc):
    text = export_skos(udc)
    notations = {line.split("\t")[0] for line in text.splitlines()}
    assert len(notations) == len(udc.classes)


def test_skos_broader_narrower_reciprocity(udc, nebis):
    for scheme in (udc, nebis):
        text = export_skos(scheme)
        broader = set()
        narrower = set()
        for line in text.splitlines():
            subject, predicate, obj = line.split("\t")
            if predicate == "broader":
                broader.add((subject, obj))
            elif predicate == "narrower":
                narrower.add((obj, subject))
        assert broader == narrower


def test_skos_related_is_symmetric(udc):
    related = set()
    for line in export_skos(udc).splitlines():
        subject, predicate, obj = line.split("\t")
        if predicate == "related":
            related.add((subject, obj))
    assert related == {(b, a) for a, b in related}
    assert related  # the see-also web is present


def test_skos_single_broader_for_leaf(udc):
    urn = concept_urn(udc, "539.125.46")
    lines = [l for l in export_skos(udc).splitlines()
             if l.startswith(urn + "\tbroader\t")]
    assert lines == [f"{urn}\tbroader\t{concept_urn(udc, '539.125.4')}"]


def test_skos_preflabel_carries_language_tag(udc):
    text = export_skos(udc)
    assert f'{concept_urn(udc, "536")}\tprefLabel\t"Chaleur. Thermodynamique"@fr' \
        in text.splitlines()


# -- authority export -------------------------------------------------------


def test_export_authority_text_and_diagnostics(nebis):
    text, diagnostics = export_authority(nebis, ["539.12.000.1", "999"],
                                         ["de", "en", "fr"])
    assert len(diagnostics) == 1 and diagnostics[0].startswith("999")
    lines = text.splitlines()
    assert lines[0] == "NEBIS\t539.12.000.1"
    assert sum(1 for l in lines if l.startswith("Term\t")) == 3
    assert sum(1 for l in lines if l.startswith("Broader term\t")) == 3
    assert sum(1 for l in lines if l.startswith("Narrower term\t")) == 6
    assert sum(1 for l in lines if l.startswith("Related term\t")) == 3
    assert "System No\t000015327" in lines


# -- concordance ------------------------------------------------------------


def test_duplicate_concordance_entry_is_fatal():
    concordance = Concordance()
    entry = ConcordanceEntry("a", "1", "b", "2", "exact")
    concordance.add(entry)
    with pytest.raises(SchemeLoadError, match="duplicate"):
        concordance.add(ConcordanceEntry("a", "1", "b", "3", "broader"))


def test_translate_exact_and_broadened(state):
    concordance = state.corpus.concordance
    result = translate(concordance, "udc", "536", "ddc")
    assert (result.target_notation, result.exactness, result.hops_broadened) \
        == ("536", "exact", 0)
    result = translate(concordance, "udc", "536.2", "ddc")
    assert (result.target_notation, result.exactness, result.hops_broadened) \
        == ("536", "broader", 1)
    result = translate(concordance, "udc", "539.1", "ddc")
    assert (result.target_notation, result.exactness, result.hops_broadened) \
        == ("530", "broader", 2)


def test_translate_reaching_root_gives_none(state):
    assert translate(state.corpus.concordance, "udc", "7", "ddc") is None
    assert translate(state.corpus.concordance, "udc", "4", "ddc") is None


def test_translate_unknown_scheme_raises(state):
    with pytest.raises(NotFoundError):
        translate(state.corpus.concordance, "udc", "536", "lcc")


def test_translate_never_exact_after_broadening(state):
    concordance = state.corpus.concordance
    for text in ("536.2", "536.21", "539.1", "539.125.46", "53.9"):
        result = translate(concordance, "udc", text, "ddc")
        if result is not None and result.hops_broadened > 0:
            assert result.exactness == "broader"
