import csv
import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from galoismine import oracle
from galoismine.bases import (
    Rule,
    base_from_dict,
    bases_to_json,
    compactness,
    compactness_report,
    derive_from_gba,
    derive_from_gbe,
    derive_from_igb,
    derive_rules,
    extract_gba,
    extract_gbe,
    extract_igb,
    rules_to_csv,
)
from galoismine.context import ExtractionContext
from galoismine.prince import IcebergLattice, prince
from conftest import contexts


def word(ctx, itemset):
    return "".join(sorted(ctx.decode(itemset)))


def as_text(ctx, base):
    return {(word(ctx, r.premise), word(ctx, r.conclusion), r.support, r.confidence)
            for r in base}


def test_exact_base_of_worked_context(gen_ctx):
    ice = prince(gen_ctx, 2)
    got = as_text(gen_ctx, extract_gbe(ice))
    assert got == {
        ("B", "E", 4, 1), ("E", "B", 4, 1), ("A", "C", 3, 1),
        ("BC", "E", 3, 1), ("CE", "B", 3, 1),
        ("AB", "CE", 2, 1), ("AE", "BC", 2, 1),
    }


def test_factual_rule_from_empty_generator(gen_ctx):
    ice = prince(gen_ctx, 2)
    without = as_text(gen_ctx, extract_gba(ice, "0.5"))
    assert not any(p == "" for p, *_ in without)
    with_empty = as_text(gen_ctx, extract_gba(ice, "0.5", empty_premise=True))
    assert ("", "BE", 4, Fraction(4, 5)) in with_empty
    assert ("", "C", 4, Fraction(4, 5)) in with_empty
    igb = as_text(gen_ctx, extract_igb(ice, "0.8"))
    assert ("", "BE", 4, Fraction(4, 5)) in igb


def test_approximate_base_is_empty_at_full_confidence(gen_ctx, intro):
    for ctx in (gen_ctx, intro):
        ice = prince(ctx, 1)
        assert len(extract_gba(ice, 1, empty_premise=True)) == 0


def test_reduced_base_keeps_only_cover_edges(gen_ctx):
    ice = prince(gen_ctx, 2)
    full = extract_gba(ice, 0, empty_premise=True)
    red = extract_gba(ice, 0, reduced=True, empty_premise=True)
    assert red.rules < full.rules
    assert derive_from_gba(red) == derive_from_gba(full)


def test_rule_validation():
    with pytest.raises(ValueError):
        Rule(frozenset({1}), frozenset(), 1, Fraction(1))
    with pytest.raises(ValueError):
        Rule(frozenset({1}), frozenset({1, 2}), 1, Fraction(1))
    with pytest.raises(ValueError):
        extract_gba(prince(ExtractionContext.from_strings(["AB", "A"]), 1), "1.5")


def test_compactness_edges():
    assert compactness(0, 0) == 0.0
    assert compactness(0, 10) == 1.0
    assert compactness(10, 10) == 0.0
    assert compactness(3, 12) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        compactness(1, 0)


def test_compactness_report(gen_ctx):
    ice = prince(gen_ctx, 2)
    ar = oracle.association_rules(gen_ctx, 2, "0.5")
    rows = compactness_report({"GBE": extract_gbe(ice), "IGB": extract_igb(ice, "0.5")}, len(ar))
    assert [r[0] for r in rows] == ["GBE", "IGB"]
    assert all(0 <= r[2] <= 1 for r in rows)


def test_csv_format(gen_ctx):
    ice = prince(gen_ctx, 2)
    text = rules_to_csv([extract_gbe(ice)])
    rows = list(csv.reader(io.StringIO(text), delimiter=";"))
    assert rows[0] == ["premise", "conclusion", "support", "confidence", "kind"]
    assert ["A", "C", "3", "1", "GBE"] in rows
    assert ["A B", "C E", "2", "1", "GBE"] in rows
    assert text == rules_to_csv([extract_gbe(prince(gen_ctx, 2))])


def test_json_round_trip(gen_ctx):
    ice = prince(gen_ctx, 2)
    bases = [extract_gbe(ice), extract_gba(ice, "0.5", reduced=True), extract_igb(ice, "0.5")]
    data = json.loads(bases_to_json(bases, ice))
    back_ice = IcebergLattice.from_dict(data["iceberg"])
    for b, d in zip(bases, data["bases"]):
        back = base_from_dict(d, back_ice)
        assert back.rules == b.rules
        assert (back.kind, back.minconf, back.reduced) == (b.kind, b.minconf, b.reduced)
        assert derive_rules(back) == derive_rules(b)


def test_derivation_needs_supports(gen_ctx):
    base = extract_gba(prince(gen_ctx, 2), "0.5")
    base.iceberg = None
    with pytest.raises(ValueError):
        derive_from_gba(base)


def check_derivations(ctx, minsup, minconf):
    ice = prince(ctx, minsup)
    gbe = extract_gbe(ice, empty_premise=True)
    gba = extract_gba(ice, minconf, empty_premise=True)
    red = extract_gba(ice, minconf, reduced=True, empty_premise=True)
    igb = extract_igb(ice, minconf)
    for flag in (False, True):
        ar = oracle.association_rules(ctx, minsup, minconf, empty_premise=flag)
        exact = {k: v for k, v in ar.items() if v[1] == 1}
        assert derive_from_gbe(gbe, empty_premise=flag) == exact
        assert {**derive_from_gbe(gbe, empty_premise=flag),
                **derive_from_gba(gba, empty_premise=flag)} == ar
        assert {**derive_from_gbe(gbe, empty_premise=flag),
                **derive_from_gba(red, empty_premise=flag)} == ar
        assert derive_from_igb(igb, empty_premise=flag) == ar
    assert igb.rules <= gbe.rules | gba.rules


@settings(max_examples=150, deadline=None)
@given(contexts(max_items=6, max_rows=10), st.integers(1, 3),
       st.sampled_from(["0", "0.3", "0.5", "2/3", "0.8", "1"]))
def test_derivations_rebuild_every_rule(ctx, minsup, minconf):
    check_derivations(ctx, minsup, minconf)


@settings(max_examples=100, deadline=None)
@given(contexts(max_items=6, max_rows=10), st.integers(1, 3),
       st.sampled_from(["0.3", "0.5", "0.8", "1"]))
def test_premises_are_generators(ctx, minsup, minconf):
    ice = prince(ctx, minsup)
    gens = oracle.minimal_generators(ctx, minsup)
    for base in (extract_gbe(ice, True), extract_gba(ice, minconf, empty_premise=True),
                 extract_igb(ice, minconf)):
        for r in base:
            assert r.premise in gens
            assert oracle.closure(ctx, r.premise | r.conclusion) == r.premise | r.conclusion
            assert r.confidence >= base.minconf
