"""Frequent closed itemsets through minimal generators.

The miner works in three stages:

1. a levelwise pass over the context that keeps the frequent minimal
   generators and their infrequent border;
2. an ordering pass that groups generators into equivalence classes (same
   closure) and links the classes by immediate precedence;
3. a bottom-up pass that reads every closed itemset off the order.

Only stage 1 touches the context.  Stages 2 and 3 work from generator
supports alone: the support of a union of generators is the smallest
support of a known generator it contains.
"""
from __future__ import annotations

import json
from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from ._bits import iter_bits, labelled, to_mask
from .context import ExtractionContext

__all__ = [
    "GeneratorRecord",
    "MinedGenerators",
    "EquivalenceClass",
    "GeneratorLattice",
    "IcebergNode",
    "IcebergLattice",
    "mine_minimal_generators",
    "build_generator_lattice",
    "derive_closures",
    "prince",
    "verify_iceberg",
]

SAME, ABOVE, BELOW, INCOMPARABLE = "same", "above", "below", "incomparable"
_WORD = (1 << 64) - 1


def generator_key(itemset, support):
    """Order used for generator lists: size, support descending, ids."""
    return (len(itemset), -support, tuple(sorted(itemset)))


@dataclass(frozen=True)
class GeneratorRecord:
    itemset: frozenset
    support: int
    class_id: int = -1


@dataclass
class MinedGenerators:
    """Output of the levelwise stage.

    Attributes
    ----------
    gmf : list of GeneratorRecord
        Frequent minimal generators, sorted by :func:`generator_key`.
    border : list of GeneratorRecord
        Infrequent minimal generators whose proper subsets are all frequent.
    empty_closure : frozenset
        Items shared by every transaction.
    """

    gmf: list
    border: list
    empty_closure: frozenset
    n_transactions: int
    n_items: int
    minsup: int

    def __iter__(self):
        # unpacks as (gmf, border)
        return iter((self.gmf, self.border))


def _check_minsup(minsup):
    if isinstance(minsup, bool) or not isinstance(minsup, (int, np.integer)):
        raise TypeError("minsup must be an integer transaction count")
    if minsup < 1:
        raise ValueError("minsup must be at least 1")
    return int(minsup)


def mine_minimal_generators(ctx: ExtractionContext, minsup: int) -> MinedGenerators:
    """Levelwise extraction of frequent minimal generators.

    A candidate of size k is generated only if all its (k-1)-subsets are
    frequent generators.  It is itself a generator iff its support is below
    the smallest support of those subsets.

    Parameters
    ----------
    ctx : ExtractionContext
    minsup : int
        Absolute support threshold.

    Returns
    -------
    MinedGenerators
    """
    minsup = _check_minsup(minsup)
    n = ctx.n_transactions
    empty = frozenset()
    if n < minsup:
        return MinedGenerators([], [GeneratorRecord(empty, n)], empty, n, ctx.n_items, minsup)
    columns = ctx.columns
    all_tids = ctx.all_tids
    empty_closure = frozenset(i for i, c in enumerate(columns) if c == all_tids)

    gmf = [GeneratorRecord(empty, n)]
    border = []
    level = []  # (sorted tuple, tid mask, support)
    for i, col in enumerate(columns):
        s = col.bit_count()
        if s == n:
            continue
        if s >= minsup:
            level.append(((i,), col, s))
        else:
            border.append(GeneratorRecord(frozenset((i,)), s))
    while level:
        gmf.extend(GeneratorRecord(frozenset(t), s) for t, _, s in level)
        known = {t: s for t, _, s in level}
        level.sort()
        nxt = []
        for a in range(len(level)):
            ta, ma, _ = level[a]
            prefix = ta[:-1]
            for b in range(a + 1, len(level)):
                tb, mb, _ = level[b]
                if tb[:-1] != prefix:
                    break
                cand = ta + (tb[-1],)
                est = None
                ok = True
                for skip in range(len(cand)):
                    sub = cand[:skip] + cand[skip + 1:]
                    s_sub = known.get(sub)
                    if s_sub is None:
                        ok = False
                        break
                    est = s_sub if est is None else min(est, s_sub)
                if not ok:
                    continue
                tm = ma & mb
                s = tm.bit_count()
                if s == est:
                    continue
                if s >= minsup:
                    nxt.append((cand, tm, s))
                else:
                    border.append(GeneratorRecord(frozenset(cand), s))
        level = nxt
    gmf.sort(key=lambda r: generator_key(r.itemset, r.support))
    border.sort(key=lambda r: generator_key(r.itemset, r.support))
    return MinedGenerators(gmf, border, empty_closure, n, ctx.n_items, minsup)


# stage 2 ---------------------------------------------------------------------
class _UnionSupport:
    """Support of unions of generators, from generator supports only."""

    def __init__(self, records, n_items):
        self.words = max(1, (n_items + 63) // 64)
        pairs = sorted(((r.support, to_mask(r.itemset)) for r in records), key=lambda p: p[0])
        self.supp = [p[0] for p in pairs]
        # one uint64 column per 64-item word, rows sorted by support
        self.cols = [np.array([(m >> (64 * w)) & _WORD for _, m in pairs], dtype=np.uint64)
                     for w in range(self.words)]

    def _outside(self, zmask: int, p: int):
        """Items outside ``zmask`` for the first ``p`` generators; zero rows
        are generators contained in ``zmask``."""
        acc = None
        for w, col in enumerate(self.cols):
            part = col[:p] & np.uint64((~zmask >> (64 * w)) & _WORD)
            acc = part if acc is None else np.bitwise_or(acc, part, out=acc)
        return acc

    def has_below(self, zmask: int, threshold: int) -> bool:
        """True iff a known generator inside ``zmask`` has support < threshold."""
        p = bisect_left(self.supp, threshold)
        return p > 0 and np.count_nonzero(self._outside(zmask, p)) < p

    def support(self, zmask: int):
        """Smallest support of a known generator inside ``zmask``."""
        if not self.supp:
            return None
        hit = self._outside(zmask, len(self.supp)) == 0
        return self.supp[int(np.argmax(hit))] if hit.any() else None


@dataclass
class EquivalenceClass:
    """Generators sharing one closure, with immediate neighbours by id."""

    id: int
    support: int
    generators: list
    successors: set = field(default_factory=set)
    predecessors: set = field(default_factory=set)

    @property
    def representative(self) -> frozenset:
        return self.generators[0]


@dataclass
class GeneratorLattice:
    classes: list
    bottom: int | None
    mined: MinedGenerators
    comparisons: int = 0

    def class_of(self, itemset) -> EquivalenceClass:
        for c in self.classes:
            if frozenset(itemset) in c.generators:
                return c
        raise KeyError(f"{sorted(itemset)} is not a frequent minimal generator")


def _relation(oracle, gmask, gsupp, xmask, xsupp):
    """Position of the class of ``g`` relative to the class of ``x``."""
    # nested representatives need no union test
    if xmask & ~gmask == 0:
        return SAME if gsupp == xsupp else ABOVE
    if gmask & ~xmask == 0:
        return SAME if gsupp == xsupp else BELOW
    t = min(gsupp, xsupp)
    if oracle.has_below(gmask | xmask, t):
        return INCOMPARABLE
    if gsupp == xsupp:
        return SAME
    return ABOVE if gsupp < xsupp else BELOW


def build_generator_lattice(mined: MinedGenerators) -> GeneratorLattice:
    """Group generators into classes and order the classes.

    Generators are inserted in list order.  A new generator joins an
    existing class when its union with the class representative keeps their
    common support.  Otherwise a new class is created; its lower covers are
    found by walking successor lists upwards from the bottom class through
    classes below it, its upper covers by continuing the walk through
    incomparable classes.  After every insertion the successor lists are the
    exact covering relation of the classes created so far.
    """
    records = mined.gmf
    if not records:
        return GeneratorLattice([], None, mined)
    oracle = _UnionSupport(list(mined.gmf) + list(mined.border), mined.n_items)
    first = records[0]
    if first.itemset:
        raise ValueError("generator list must start with the empty set")
    classes = [EquivalenceClass(0, first.support, [first.itemset])]
    reps = [0]
    of = {0: 0}
    by_support = defaultdict(list)
    by_support[first.support].append(0)
    counter = 0

    def rel_class(a, b):
        nonlocal counter
        counter += 1
        return _relation(oracle, reps[a], classes[a].support, reps[b], classes[b].support)

    for rec in records[1:]:
        g = to_mask(rec.itemset)
        s = rec.support
        cache = {}

        def rel(cid):
            nonlocal counter
            r = cache.get(cid)
            if r is None:
                counter += 1
                r = cache[cid] = _relation(oracle, g, s, reps[cid], classes[cid].support)
            return r

        target = next((cid for cid in by_support[s] if rel(cid) == SAME), None)
        if target is not None:
            classes[target].generators.append(rec.itemset)
            of[g] = target
            continue

        below_known = {of[g & ~(1 << i)] for i in iter_bits(g)}
        down = {0}
        visited = {0}
        queue = [0]
        while queue:
            x = queue.pop()
            for y in classes[x].successors:
                if y in visited:
                    continue
                visited.add(y)
                if y in below_known or rel(y) == ABOVE:
                    down.add(y)
                    queue.append(y)
        lowers = [d for d in down if not classes[d].successors & down]

        candidates = set()
        seen = set()
        stack = [y for d in lowers for y in classes[d].successors if y not in down]
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            r = rel(y)
            if r == BELOW:
                candidates.add(y)
            elif r == INCOMPARABLE:
                stack.extend(z for z in classes[y].successors if z not in seen)
        uppers = [u for u in candidates
                  if not any(v != u and rel_class(v, u) == BELOW for v in candidates)]

        nid = len(classes)
        node = EquivalenceClass(nid, s, [rec.itemset])
        classes.append(node)
        reps.append(g)
        for lo in lowers:
            for up in uppers:
                if up in classes[lo].successors:
                    classes[lo].successors.discard(up)
                    classes[up].predecessors.discard(lo)
            classes[lo].successors.add(nid)
            node.predecessors.add(lo)
        for up in uppers:
            node.successors.add(up)
            classes[up].predecessors.add(nid)
        of[g] = nid
        by_support[s].append(nid)
    return GeneratorLattice(classes, 0, mined, counter)


# stage 3 ---------------------------------------------------------------------
@dataclass(frozen=True)
class IcebergNode:
    closed: frozenset
    support: int
    generators: tuple
    successors: tuple
    predecessors: tuple


@dataclass
class IcebergLattice:
    """Frequent closed itemsets with their generators and covering order.

    Nodes are sorted by support descending, then by closed itemset (size
    first, then ids), so the bottom node is always index 0.
    """

    nodes: tuple
    n_transactions: int
    minsup: int
    n_items: int
    labels: tuple | None = None
    _masks: list = field(default=None, repr=False, compare=False)
    _up: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._masks = [to_mask(n.closed) for n in self.nodes]

    def __len__(self):
        return len(self.nodes)

    def closed_itemsets(self) -> dict:
        return {n.closed: n.support for n in self.nodes}

    def generator_table(self) -> dict:
        return {g: idx for idx, n in enumerate(self.nodes) for g in n.generators}

    def covers(self) -> set:
        return {(self.nodes[a].closed, self.nodes[b].closed)
                for a, n in enumerate(self.nodes) for b in n.successors}

    def omega_index(self, itemset):
        """Index of the smallest closed itemset containing ``itemset``, or
        ``None`` when the itemset is infrequent."""
        m = to_mask(itemset)
        for idx, cm in enumerate(self._masks):
            if m & ~cm == 0:
                return idx
        return None

    def closure(self, itemset):
        idx = self.omega_index(itemset)
        return None if idx is None else self.nodes[idx].closed

    def support(self, itemset):
        idx = self.omega_index(itemset)
        return None if idx is None else self.nodes[idx].support

    def above(self, idx) -> frozenset:
        """Indices of all nodes strictly above ``idx``."""
        out = self._up.get(idx)
        if out is None:
            acc = set()
            for s in self.nodes[idx].successors:
                acc.add(s)
                acc |= self.above(s)
            out = self._up[idx] = frozenset(acc)
        return out

    def maximal(self) -> list:
        return [n for n in self.nodes if not n.successors]

    # serialisation ---------------------------------------------------------
    def _enc(self, itemset):
        if self.labels is None:
            return sorted(itemset)
        return labelled(self.labels, itemset)

    def to_dict(self) -> dict:
        return {
            "n_transactions": self.n_transactions,
            "minsup": self.minsup,
            "items": list(self.labels) if self.labels is not None else self.n_items,
            "classes": [
                {
                    "closed": self._enc(n.closed),
                    "support": n.support,
                    "generators": [self._enc(g) for g in n.generators],
                    "successors": list(n.successors),
                }
                for n in self.nodes
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "IcebergLattice":
        items = data["items"]
        if isinstance(items, int):
            labels, n_items = None, items
            dec = frozenset
        else:
            labels, n_items = tuple(items), len(items)
            index = {lab: i for i, lab in enumerate(items)}
            def dec(xs):
                return frozenset(index[x] for x in xs)
        raw = data["classes"]
        preds = defaultdict(list)
        for a, c in enumerate(raw):
            for b in c["successors"]:
                preds[b].append(a)
        nodes = tuple(
            IcebergNode(dec(c["closed"]), int(c["support"]),
                        tuple(dec(g) for g in c["generators"]),
                        tuple(c["successors"]), tuple(preds[a]))
            for a, c in enumerate(raw)
        )
        return cls(nodes, int(data["n_transactions"]), int(data["minsup"]), n_items, labels)


def _closed_key(node_closed, support):
    return (-support, len(node_closed), tuple(sorted(node_closed)))


def derive_closures(lattice: GeneratorLattice, labels=None) -> IcebergLattice:
    """Closed itemset of every class: its generators united with the closed
    itemsets of its immediate predecessors.  The bottom class takes the
    items common to all transactions."""
    mined = lattice.mined
    if lattice.bottom is None:
        return IcebergLattice((), mined.n_transactions, mined.minsup, mined.n_items, labels)
    classes = lattice.classes
    closed = {}
    for c in sorted(classes, key=lambda c: -c.support):
        if c.id == lattice.bottom:
            closed[c.id] = frozenset(mined.empty_closure)
            continue
        acc = set()
        for g in c.generators:
            acc |= g
        for p in c.predecessors:
            acc |= closed[p]
        closed[c.id] = frozenset(acc)
    order = sorted(classes, key=lambda c: _closed_key(closed[c.id], c.support))
    new_id = {c.id: k for k, c in enumerate(order)}
    nodes = tuple(
        IcebergNode(
            closed[c.id],
            c.support,
            tuple(sorted(c.generators, key=lambda g: generator_key(g, c.support))),
            tuple(sorted(new_id[s] for s in c.successors)),
            tuple(sorted(new_id[p] for p in c.predecessors)),
        )
        for c in order
    )
    return IcebergLattice(nodes, mined.n_transactions, mined.minsup, mined.n_items, labels)


def prince(ctx: ExtractionContext, minsup: int) -> IcebergLattice:
    """Run the three stages on ``ctx``."""
    mined = mine_minimal_generators(ctx, minsup)
    return derive_closures(build_generator_lattice(mined), labels=ctx.labels)


def verify_iceberg(iceberg: IcebergLattice, ctx: ExtractionContext) -> None:
    """Check every node against the data; raise ``AssertionError`` on mismatch."""
    from .context import conj_closure, supp_conj
    for n in iceberg.nodes:
        assert supp_conj(ctx, n.closed) == n.support, n
        for g in n.generators:
            assert conj_closure(ctx, g) == n.closed, (g, n)
            assert supp_conj(ctx, g) == n.support, (g, n)
