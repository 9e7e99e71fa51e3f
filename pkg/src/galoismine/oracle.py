"""Brute-force reference computations over small contexts.

Everything here enumerates the full powerset of items and scans the
transactions row by row.  Nothing is shared with the mining modules except
the context container, so agreement between the two is meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .context import CapacityError, ExtractionContext, SupportTriple, as_fraction

MAX_ORACLE_ITEMS = 24


def _rows(ctx):
    return [frozenset(i for i in range(ctx.n_items) if row >> i & 1) for row in ctx.rows]


def powerset(items):
    items = sorted(items)
    for k in range(len(items) + 1):
        for sub in combinations(items, k):
            yield frozenset(sub)


def _guard(ctx):
    if ctx.n_items > MAX_ORACLE_ITEMS:
        raise CapacityError(f"oracle limited to {MAX_ORACLE_ITEMS} items")


def support_table(ctx: ExtractionContext) -> dict:
    """Conjunctive support of every itemset of the universe."""
    _guard(ctx)
    rows = _rows(ctx)
    return {x: sum(1 for r in rows if x <= r) for x in powerset(range(ctx.n_items))}


def disjunctive_table(ctx: ExtractionContext) -> dict:
    _guard(ctx)
    rows = _rows(ctx)
    return {x: sum(1 for r in rows if x & r) for x in powerset(range(ctx.n_items))}


def frequent_itemsets(ctx, minsup, include_empty=True) -> dict:
    return {x: s for x, s in support_table(ctx).items()
            if s >= minsup and (include_empty or x)}


def closure(ctx, itemset) -> frozenset:
    rows = [r for r in _rows(ctx) if frozenset(itemset) <= r]
    out = frozenset(range(ctx.n_items))
    for r in rows:
        out &= r
    return out


def closed_itemsets(ctx, minsup) -> dict:
    """Frequent itemsets with no proper superset of equal support."""
    table = support_table(ctx)
    out = {}
    for x, s in table.items():
        if s < minsup:
            continue
        if all(table[x | {i}] < s for i in range(ctx.n_items) if i not in x):
            out[x] = s
    return out


def minimal_generators(ctx, minsup=0) -> dict:
    """Itemsets whose immediate subsets all have strictly larger support."""
    table = support_table(ctx)
    return {x: s for x, s in table.items()
            if s >= minsup and all(table[x - {i}] > s for i in x)}


def generator_border(ctx, minsup) -> dict:
    """Infrequent minimal generators whose proper subsets are frequent."""
    table = support_table(ctx)
    gens = minimal_generators(ctx)
    return {x: s for x, s in gens.items()
            if s < minsup and all(table[x - {i}] >= minsup for i in x)}


def generator_classes(ctx, minsup) -> dict:
    """Closed itemset -> set of its frequent minimal generators."""
    out: dict = {}
    for g in minimal_generators(ctx, minsup):
        out.setdefault(closure(ctx, g), set()).add(g)
    return out


def cover_relation(ctx, minsup) -> set:
    """Pairs (a, b) of frequent closed itemsets with b covering a."""
    closed = list(closed_itemsets(ctx, minsup))
    out = set()
    for a in closed:
        for b in closed:
            if a < b and not any(a < c < b for c in closed):
                out.add((a, b))
    return out


def association_rules(ctx, minsup, minconf, empty_premise=False) -> dict:
    """All valid rules as ``(premise, conclusion) -> (support, confidence)``."""
    minconf = as_fraction(minconf)
    if not 0 <= minconf <= 1:
        raise ValueError("minconf must lie in [0, 1]")
    table = support_table(ctx)
    out = {}
    for z, s in table.items():
        if s < minsup or not z:
            continue
        for x in powerset(z):
            if x == z or (not x and not empty_premise):
                continue
            conf = Fraction(s, table[x])
            if conf >= minconf:
                out[(x, z - x)] = (s, conf)
    return out


# disjunctive side -----------------------------------------------------------
def disjunctive_closure(ctx, itemset) -> frozenset:
    """Items all of whose occurrences fall in transactions hitting ``itemset``."""
    x = frozenset(itemset)
    out = set(range(ctx.n_items))
    for r in _rows(ctx):
        if not r & x:
            out -= r
    return frozenset(out)


def essential_itemsets(ctx) -> dict:
    """Itemsets whose disjunctive support beats every immediate subset."""
    d = disjunctive_table(ctx)
    return {x: d[x] for x in d if x and all(d[x] > d[x - {i}] for i in x)}


def frequent_essentials(ctx, minsup) -> dict:
    table = support_table(ctx)
    return {x: v for x, v in essential_itemsets(ctx).items() if table[x] >= minsup}


def ifde(ctx, minsup) -> dict:
    d = disjunctive_table(ctx)
    return {disjunctive_closure(ctx, x): d[x] for x in frequent_essentials(ctx, minsup)}


def ifda(ctx, minsup, include_singletons=True) -> dict:
    """Closures of infrequent odd-sized essentials bordering the frequent
    essentials, with every itemset of that closure infrequent, kept only when
    strictly inside some element of :func:`ifde`."""
    table = support_table(ctx)
    d = disjunctive_table(ctx)
    ess = essential_itemsets(ctx)
    fe = frequent_essentials(ctx, minsup)
    top = ifde(ctx, minsup)
    closures = {x: disjunctive_closure(ctx, x) for x in table}
    out = {}
    for x in ess:
        if x in fe or len(x) % 2 == 0:
            continue
        if len(x) == 1 and not include_singletons:
            continue
        if not all(y in fe for y in powerset(x) if y and y != x):
            continue
        c = closures[x]
        if any(table[y] >= minsup for y, cy in closures.items() if cy == c):
            continue
        if any(c < f for f in top):
            out[c] = d[x]
    return out


def maximal_frequent(ctx, minsup) -> set:
    freq = frequent_itemsets(ctx, minsup)
    return {x for x in freq
            if all(x | {i} not in freq for i in range(ctx.n_items) if i not in x)}


# non-derivable side ---------------------------------------------------------
def brute_bounds(table, itemset):
    """Tightest inclusion-exclusion bounds, evaluated straight from the
    defining sums over every ``I`` inside ``J``."""
    j = frozenset(itemset)
    lows, ups = [], []
    for i in powerset(j):
        total = 0
        for x in powerset(j):
            if i <= x and x != j:
                total += (-1) ** (len(j - x) + 1) * table[x]
        (lows if len(j - i) % 2 == 0 else ups).append(total)
    return max(lows), (min(ups) if ups else table[frozenset()])


def non_derivable(ctx, minsup) -> dict:
    table = support_table(ctx)
    out = {}
    for x, s in table.items():
        if s < minsup or not x:
            continue
        lo, up = brute_bounds(table, x)
        if lo != up:
            out[x] = s
    return out


# named entry points ---------------------------------------------------------
@dataclass
class OracleBundle:
    """Everything the fast modules are checked against on one context."""

    frequent: dict
    closed: set
    generators: dict
    rules: set = field(default_factory=set)


def enumerate_frequent(ctx, minsup) -> dict:
    """Non-empty frequent itemsets with their full support triple."""
    conj, disj = support_table(ctx), disjunctive_table(ctx)
    n = ctx.n_transactions
    return {x: SupportTriple(s, disj[x], n - disj[x])
            for x, s in conj.items() if x and s >= minsup}


def all_closed_and_generators(ctx, minsup, minconf=None, empty_premise=False) -> OracleBundle:
    """Closed itemsets, their generators and, given ``minconf``, the valid rules."""
    from .bases import Rule

    rules = set()
    if minconf is not None:
        rules = {Rule(p, c, s, f) for (p, c), (s, f) in
                 association_rules(ctx, minsup, minconf, empty_premise).items()}
    return OracleBundle(enumerate_frequent(ctx, minsup), set(closed_itemsets(ctx, minsup)),
                        generator_classes(ctx, minsup), rules)


def all_valid_rules(ctx, minsup, minconf, empty_premise=False) -> set:
    return all_closed_and_generators(ctx, minsup, minconf, empty_premise).rules


def oracle_disjunctive_closure(ctx, itemset) -> frozenset:
    _guard(ctx)
    return disjunctive_closure(ctx, itemset)


def oracle_essential(ctx, itemset) -> bool:
    return frozenset(itemset) in essential_itemsets(ctx)


def oracle_ndi_bounds(ctx, itemset) -> tuple:
    return brute_bounds(support_table(ctx), itemset)
