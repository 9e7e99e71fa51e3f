import json

import pytest
from hypothesis import given, settings, strategies as st

from galoismine import oracle
from galoismine.context import ExtractionContext
from galoismine.prince import (
    IcebergLattice,
    build_generator_lattice,
    derive_closures,
    mine_minimal_generators,
    prince,
    verify_iceberg,
)
from conftest import contexts, ctx_generators


def labelled(ctx, itemset):
    return "".join(sorted(ctx.decode(itemset)))


GMF = {"": 5, "B": 4, "C": 4, "E": 4, "A": 3, "BC": 3, "CE": 3, "AB": 2, "AE": 2}
CLOSED = {"": 5, "C": 4, "BE": 4, "AC": 3, "BCE": 3, "ABCE": 2}


def test_generators_of_worked_context(gen_ctx):
    mined = mine_minimal_generators(gen_ctx, 2)
    got = {labelled(gen_ctx, r.itemset): r.support for r in mined.gmf}
    assert got == GMF
    assert [(labelled(gen_ctx, r.itemset), r.support) for r in mined.border] == [("D", 1)]
    order = [(labelled(gen_ctx, r.itemset), r.support) for r in mined.gmf]
    assert order == [("", 5), ("B", 4), ("C", 4), ("E", 4), ("A", 3),
                     ("BC", 3), ("CE", 3), ("AB", 2), ("AE", 2)]
    assert mined.empty_closure == frozenset()
    gmf, border = mined
    assert gmf is mined.gmf and border is mined.border


def test_generators_of_intro_context(intro):
    gmf = {r.itemset for r in mine_minimal_generators(intro, 2).gmf}
    assert intro.encode("A") in gmf
    # supp(AB) = supp(A) = 3 while supp(AC) = 2
    assert intro.encode("AB") not in gmf
    assert intro.encode("AC") in gmf
    assert gmf == set(oracle.minimal_generators(intro, 2))


def test_redundant_context_has_one_class():
    ctx = ExtractionContext.from_transactions([["a", "b"]] * 4, items=["a", "b", "c"])
    mined = mine_minimal_generators(ctx, 1)
    assert [(r.itemset, r.support) for r in mined.gmf] == [(frozenset(), 4)]
    lat = build_generator_lattice(mined)
    assert len(lat.classes) == 1 and not lat.classes[lat.bottom].successors
    ice = derive_closures(lat)
    assert [n.closed for n in ice.nodes] == [ctx.encode("ab")]


def test_classes_and_order_of_worked_context(gen_ctx):
    lat = build_generator_lattice(mine_minimal_generators(gen_ctx, 2))
    enc = gen_ctx.encode
    be = lat.class_of(enc("E"))
    assert be is lat.class_of(enc("B"))
    assert be.representative == enc("B")
    a, c = lat.class_of(enc("A")), lat.class_of(enc("C"))
    assert a.id in c.successors
    # AB is itself a frequent generator: A and B sit in incomparable classes
    assert a.id not in be.successors and be.id not in a.successors
    bottom = lat.classes[lat.bottom]
    assert bottom.successors == {c.id, be.id}


def test_closures_of_worked_context(gen_ctx):
    ice = prince(gen_ctx, 2)
    assert {labelled(gen_ctx, x): s for x, s in ice.closed_itemsets().items()} == CLOSED
    assert ice.closure(gen_ctx.encode("C")) == gen_ctx.encode("C")
    assert ice.closure(frozenset()) == frozenset()
    assert ice.closure(gen_ctx.encode("B")) == gen_ctx.encode("BE")
    assert ice.closure(gen_ctx.encode("D")) is None
    verify_iceberg(ice, gen_ctx)


def test_stages_two_and_three_never_touch_the_context(gen_ctx):
    class Counting:
        def __init__(self, ctx):
            self._ctx, self.reads = ctx, 0

        def __getattr__(self, name):
            self.reads += 1
            return getattr(self._ctx, name)

    probe = Counting(gen_ctx)
    mined = mine_minimal_generators(probe, 2)
    after_stage_one = probe.reads
    assert after_stage_one > 0
    assert not any(isinstance(v, (ExtractionContext, Counting)) for v in vars(mined).values())
    ice = derive_closures(build_generator_lattice(mined))
    assert probe.reads == after_stage_one
    assert len(ice) == 6


def test_empty_and_degenerate_inputs():
    ctx = ExtractionContext.from_strings(["AB", "AB"])
    ice = prince(ctx, 3)
    assert len(ice) == 0
    ice = prince(ctx, 1)
    assert ice.closed_itemsets() == {ctx.encode("AB"): 2}
    assert ice.nodes[0].generators == (frozenset(),)
    empty = ExtractionContext.from_strings([])
    assert len(prince(empty, 1)) == 0
    with pytest.raises(ValueError):
        prince(ctx, 0)
    with pytest.raises(TypeError):
        prince(ctx, 1.5)


def test_json_round_trip(gen_ctx):
    ice = prince(gen_ctx, 2)
    data = json.loads(ice.to_json())
    assert data["classes"][0] == {"closed": [], "support": 5, "generators": [[]],
                                  "successors": [1, 2]}
    back = IcebergLattice.from_dict(data)
    assert back.closed_itemsets() == ice.closed_itemsets()
    assert back.covers() == ice.covers()
    assert back.generator_table() == ice.generator_table()


def test_maximal_nodes(intro):
    ice = prince(intro, 1)
    assert [intro.fmt(n.closed) for n in ice.maximal()] == ["ABCDEF"]


def check_against_oracle(ctx, minsup):
    ice = prince(ctx, minsup)
    assert ice.closed_itemsets() == oracle.closed_itemsets(ctx, minsup)
    assert ice.covers() == oracle.cover_relation(ctx, minsup)
    classes = {}
    for n in ice.nodes:
        classes[n.closed] = set(n.generators)
    assert classes == oracle.generator_classes(ctx, minsup)
    mined = mine_minimal_generators(ctx, minsup)
    assert {r.itemset: r.support for r in mined.border} == oracle.generator_border(ctx, minsup)


@settings(max_examples=200, deadline=None)
@given(contexts(max_items=7, max_rows=12), st.integers(1, 4))
def test_matches_oracle(ctx, minsup):
    check_against_oracle(ctx, minsup)


def test_generator_order_does_not_matter():
    # classes are created below existing ones when a larger generator has
    # a higher support than a smaller one
    ctx = ExtractionContext.from_strings(["ABCD", "ABC", "A", "B", "C", "ABC"])
    check_against_oracle(ctx, 1)
    ctx = ExtractionContext.from_strings(["ABC", "A", "B", "C"])
    check_against_oracle(ctx, 1)
