from fractions import Fraction

import pytest

from galoismine import oracle
from galoismine.context import CapacityError, ExtractionContext


def words(ctx, itemsets):
    return {"".join(sorted(ctx.decode(x))) for x in itemsets}


def test_frequent_itemsets_of_nine_row_context(nine):
    freq = oracle.enumerate_frequent(nine, 1)
    assert words(nine, freq) == {"A", "B", "C", "D", "AB", "AC", "AD", "BC", "BD", "CD", "ABC"}
    assert freq[nine.encode("AB")] == (2, 7, 2)
    assert oracle.enumerate_frequent(nine, 10) == {}


def test_frequent_itemsets_of_generator_context(gen_ctx):
    assert len(oracle.enumerate_frequent(gen_ctx, 2)) == 15


def test_maximal_frequent(nine, intro):
    assert words(nine, oracle.maximal_frequent(nine, 1)) == {"AD", "BD", "CD", "ABC"}
    assert words(intro, oracle.maximal_frequent(intro, 1)) == {"ABCDEF"}
    assert oracle.maximal_frequent(intro, 6) == set()


def test_closed_and_generators(gen_ctx, intro):
    b = oracle.all_closed_and_generators(gen_ctx, 2)
    assert words(gen_ctx, b.closed) == {"", "C", "BE", "AC", "BCE", "ABCE"}
    assert words(gen_ctx, b.generators[gen_ctx.encode("BCE")]) == {"BC", "CE"}
    assert words(gen_ctx, b.generators[gen_ctx.encode("ABCE")]) == {"AB", "AE"}
    assert b.rules == set()
    assert oracle.closure(intro, intro.encode("A")) == intro.encode("AB")
    single = ExtractionContext.from_strings(["A"])
    assert words(single, oracle.all_closed_and_generators(single, 1).closed) == {"A"}


def test_valid_rules(gen_ctx):
    rules = oracle.all_valid_rules(gen_ctx, 2, "0.5", empty_premise=True)
    be = [r for r in rules if not r.premise and r.conclusion == gen_ctx.encode("BE")]
    assert len(be) == 1 and (be[0].support, be[0].confidence) == (4, Fraction(4, 5))
    assert len(oracle.all_valid_rules(gen_ctx, 2, "0.5")) == 50
    table = oracle.support_table(gen_ctx)
    for r in oracle.all_valid_rules(gen_ctx, 2, 1):
        assert table[r.premise] == table[r.premise | r.conclusion]
    with pytest.raises(ValueError):
        oracle.all_valid_rules(gen_ctx, 2, "1.2")


def test_disjunctive_side(seven, intro):
    assert oracle.oracle_disjunctive_closure(seven, seven.encode("B")) == seven.encode("B")
    assert oracle.oracle_disjunctive_closure(seven, seven.encode("BC")) == seven.encode("BC")
    assert oracle.oracle_disjunctive_closure(seven, seven.encode("A")) == seven.encode("ABCD")
    assert not oracle.oracle_essential(intro, intro.encode("AB"))
    assert oracle.oracle_essential(intro, intro.encode("AC"))


def test_bounds_of_a_single_item(intro):
    for i in range(intro.n_items):
        assert oracle.oracle_ndi_bounds(intro, {i}) == (0, 5)


def test_guard():
    wide = ExtractionContext.from_transactions([[str(i) for i in range(25)]])
    with pytest.raises(CapacityError):
        oracle.support_table(wide)
    with pytest.raises(CapacityError):
        oracle.oracle_disjunctive_closure(wide, {0})
