import io
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from galoismine import oracle
from galoismine.context import (
    ExtractionContext,
    absolute_minsup,
    as_fraction,
    common_items,
    conj_closure,
    conj_from_disj,
    count_frequent,
    disj_from_conj,
    parse_fimi,
    read_fimi,
    relative_support,
    supp_conj,
    supp_disj,
    supp_neg,
    supports,
    tidset,
    write_fimi,
)
from conftest import contexts


def test_support_triple(intro):
    bc = intro.encode("BC")
    assert supports(intro, bc) == (2, 5, 0)
    assert supp_disj(intro, intro.encode("B")) == 3
    assert supp_disj(intro, intro.encode("C")) == 4


def test_empty_itemset_supports(intro):
    assert supp_conj(intro, ()) == 5
    assert supp_disj(intro, ()) == 0
    assert supp_neg(intro, ()) == 5


def test_inclusion_exclusion_on_bc(intro):
    bc = intro.encode("BC")
    disj = {frozenset(s): supp_disj(intro, s) for k in (1, 2) for s in combinations(bc, k)}
    conj = {frozenset(s): supp_conj(intro, s) for k in (1, 2) for s in combinations(bc, k)}
    assert conj_from_disj(disj, bc) == 2
    assert disj_from_conj(conj, bc) == 5


def test_identity_needs_every_subset(intro):
    with pytest.raises(ValueError):
        conj_from_disj({intro.encode("B"): 3}, intro.encode("BC"))
    with pytest.raises(ValueError):
        conj_from_disj({}, frozenset())


def test_galois_maps(intro):
    a = intro.encode("A")
    assert intro.fmt(conj_closure(intro, a)) == "AB"
    assert tidset(intro, ()) == frozenset(range(5))
    assert common_items(intro, ()) == frozenset(range(6))
    assert intro.fmt(common_items(intro, {0, 3})) == "ABCD"


def test_unknown_ids(intro):
    with pytest.raises(ValueError):
        supp_conj(intro, {17})
    with pytest.raises(ValueError):
        common_items(intro, {5})
    with pytest.raises(ValueError):
        intro.encode("Z")


def test_parse_fimi_details():
    ctx = parse_fimi("3 1 1\n\n2 3\n")
    assert ctx.n_transactions == 3
    assert ctx.labels == ("1", "2", "3")
    assert ctx.transaction(0) == frozenset({0, 2})
    assert ctx.transaction(1) == frozenset()
    assert parse_fimi("").n_transactions == 0
    assert parse_fimi(io.StringIO("a b\n")).n_items == 2
    assert parse_fimi("10 9 x\n2\n").labels == ("2", "9", "10", "x")
    fixed = ExtractionContext.from_transactions([["b", "a"]], items=["z", "b"])
    assert fixed.labels == ("z", "b", "a")


def test_fimi_round_trip(tmp_path, gen_ctx):
    path = tmp_path / "k.dat"
    write_fimi(gen_ctx, path)
    back = read_fimi(path)
    assert [back.decode(back.transaction(t)) for t in range(5)] == \
        [gen_ctx.decode(gen_ctx.transaction(t)) for t in range(5)]


def test_columns_agree_with_rows(gen_ctx):
    for i, col in enumerate(gen_ctx.columns):
        assert col == sum(1 << t for t, r in enumerate(gen_ctx.rows) if r >> i & 1)


def test_bad_rows():
    with pytest.raises(ValueError):
        ExtractionContext(("a",), (0b10,))
    with pytest.raises(ValueError):
        ExtractionContext(("a", "a"), ())


def test_thresholds():
    assert absolute_minsup(3196, 90) == 2877
    assert absolute_minsup(3196, 90, "floor") == 2876
    assert absolute_minsup(10, 25) == 3
    assert absolute_minsup(10, 0) == 0
    with pytest.raises(ValueError):
        absolute_minsup(10, 101)
    with pytest.raises(ValueError):
        absolute_minsup(10, 5, "round")
    assert as_fraction(0.8) == Fraction(4, 5)
    assert as_fraction("1.0") == 1
    assert relative_support(4, 5) == Fraction(4, 5)
    with pytest.raises(ValueError):
        relative_support(0, 0)


@settings(max_examples=150, deadline=None)
@given(contexts(), st.data())
def test_inclusion_exclusion_round_trip(ctx, data):
    x = frozenset(data.draw(st.sets(st.integers(0, ctx.n_items - 1), min_size=1)))
    subs = [frozenset(s) for k in range(1, len(x) + 1) for s in combinations(sorted(x), k)]
    disj = {s: supp_disj(ctx, s) for s in subs}
    conj = {s: supp_conj(ctx, s) for s in subs}
    assert conj_from_disj(disj, x) == conj[x]
    assert disj_from_conj(conj, x) == disj[x]
    assert supp_neg(ctx, x) + disj[x] == ctx.n_transactions


@settings(max_examples=150, deadline=None)
@given(contexts(), st.data())
def test_closure_laws(ctx, data):
    a = frozenset(data.draw(st.sets(st.integers(0, ctx.n_items - 1))))
    b = a | frozenset(data.draw(st.sets(st.integers(0, ctx.n_items - 1))))
    ca, cb = conj_closure(ctx, a), conj_closure(ctx, b)
    assert a <= ca
    assert ca <= cb
    assert conj_closure(ctx, ca) == ca
    assert tidset(ctx, b) <= tidset(ctx, a)
    assert supp_conj(ctx, ca) == supp_conj(ctx, a)
    assert ca == oracle.closure(ctx, a)


@settings(max_examples=100, deadline=None)
@given(contexts(), st.integers(1, 4))
def test_count_frequent(ctx, minsup):
    expect = len(oracle.frequent_itemsets(ctx, minsup, include_empty=False))
    assert count_frequent(ctx, minsup) == expect
