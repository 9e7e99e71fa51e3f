"""Disjunctive closures and the concise representation built from them.

The disjunctive counterpart of the Galois connection maps an itemset to the
transactions it hits (:func:`g_d`) and a set of transactions to the items
occurring there and nowhere else (:func:`f_d`).  :func:`h_d` composes the
two.  Essential itemsets are exactly those not contained in the closure of
any of their immediate subsets, which is the pruning test used by
:func:`dcpr_mine`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from ._bits import from_mask, iter_bits, labelled, to_mask
from .context import ExtractionContext

__all__ = [
    "EssentialRecord",
    "DisjunctiveRepresentation",
    "f_d",
    "g_d",
    "h_d",
    "is_essential",
    "mine_essential_frequent",
    "dcpr_mine",
    "regenerate_frequent",
]


@dataclass(frozen=True)
class EssentialRecord:
    itemset: frozenset
    supp_disj: int
    supp_conj: int
    closure: frozenset


def g_d(ctx: ExtractionContext, itemset) -> frozenset:
    """Transactions containing at least one item of ``itemset``."""
    return from_mask(ctx.hit_mask(itemset))


def f_d(ctx: ExtractionContext, tids) -> frozenset:
    """Items occurring in some transaction of ``tids`` and in no other."""
    tmask = to_mask(ctx.check_tids(tids))
    return frozenset(i for i, col in enumerate(ctx.columns) if col and not col & ~tmask)


def _closure_mask(ctx, hit: int) -> int:
    out = 0
    for i, col in enumerate(ctx.columns):
        if not col & ~hit:
            out |= 1 << i
    return out


def h_d(ctx: ExtractionContext, itemset) -> frozenset:
    """Items whose every occurrence lies in a transaction hitting ``itemset``.

    Items that never occur belong to every closure, including that of the
    empty itemset.
    """
    return from_mask(_closure_mask(ctx, ctx.hit_mask(itemset)))


def is_essential(ctx: ExtractionContext, itemset) -> bool:
    """True iff removing any item lowers the disjunctive support."""
    items = ctx.check_items(itemset)
    if not items:
        return False
    hit = ctx.hit_mask(items)
    d = hit.bit_count()
    return all(ctx.hit_mask(items - {i}).bit_count() < d for i in items)


# levelwise mining --------------------------------------------------------------
def _scan_transactions(ctx, cands):
    """One pass over the transactions, as in the horizontal layout."""
    disj = [0] * len(cands)
    conj = [0] * len(cands)
    miss = [0] * len(cands)
    for row in ctx.rows:
        for k, x in enumerate(cands):
            w = x & row
            if w:
                disj[k] += 1
                if w == x:
                    conj[k] += 1
            else:
                miss[k] |= row
    universe = ctx.all_items
    return [(disj[k], conj[k], universe & ~miss[k]) for k in range(len(cands))]


def _scan_tidsets(ctx, cands):
    """Same statistics from the per-item transaction masks."""
    cols = ctx.columns
    out = []
    for x in cands:
        hit = 0
        inter = ctx.all_tids
        for i in iter_bits(x):
            hit |= cols[i]
            inter &= cols[i]
        out.append((hit.bit_count(), inter.bit_count(), _closure_mask(ctx, hit)))
    return out


_SCANS = {"transactions": _scan_transactions, "tidsets": _scan_tidsets}


def _levels(ctx, minsup, scan):
    """Yield ``(size, candidates, stats)`` level by level.

    Candidates of size 1 are the items outside the closure of the empty set;
    larger ones join frequent essentials sharing a prefix, keep only those
    whose immediate subsets are all frequent essentials, and drop those
    contained in the closure of an immediate subset.
    """
    try:
        scan_fn = _SCANS[scan]
    except KeyError:
        raise ValueError(f"unknown scan {scan!r}") from None
    never = _closure_mask(ctx, 0)
    cands = [(i,) for i in range(ctx.n_items) if not never >> i & 1]
    size = 1
    while cands:
        masks = [to_mask(c) for c in cands]
        stats = scan_fn(ctx, masks)
        yield size, cands, stats
        freq = {c: st for c, st in zip(cands, stats) if st[1] >= minsup}
        ordered = sorted(freq)
        nxt = []
        for a in range(len(ordered)):
            ta = ordered[a]
            for b in range(a + 1, len(ordered)):
                tb = ordered[b]
                if tb[:-1] != ta[:-1]:
                    break
                cand = ta + (tb[-1],)
                cm = to_mask(cand)
                ok = True
                for skip in range(len(cand)):
                    sub = cand[:skip] + cand[skip + 1:]
                    st = freq.get(sub)
                    if st is None or cm & ~st[2] == 0:
                        ok = False
                        break
                if ok:
                    nxt.append(cand)
        cands = nxt
        size += 1


def mine_essential_frequent(ctx: ExtractionContext, minsup: int,
                            scan: str = "tidsets") -> list:
    """Frequent essential itemsets with both supports and their closure.

    Returns
    -------
    list of EssentialRecord
        Sorted by size, then ids.
    """
    out = []
    for _, cands, stats in _levels(ctx, minsup, scan):
        for c, (d, s, cl) in zip(cands, stats):
            if s >= minsup:
                out.append(EssentialRecord(frozenset(c), d, s, from_mask(cl)))
    return out


@dataclass
class DisjunctiveRepresentation:
    """Disjunctive closures with their disjunctive supports.

    ``ifde`` maps the closures of frequent essentials, ``ifda`` the added
    closures of infrequent odd-sized essentials needed for exact
    regeneration.  ``absent`` lists items that occur in no transaction;
    they belong to every closure and are skipped when regenerating.
    """

    ifde: dict
    ifda: dict
    minsup: int
    n_transactions: int
    n_items: int
    labels: tuple | None = None
    n_essential: int = 0
    absent: frozenset = frozenset()
    _elements: list = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.ifde) + len(self.ifda)

    def validate(self) -> None:
        """Raise ``ValueError`` when the representation is inconsistent."""
        if set(self.ifde) & set(self.ifda):
            raise ValueError("a closure appears in both parts")
        elems = list(self.ifde.items()) + list(self.ifda.items())
        for x, d in elems:
            if any(i < 0 or i >= self.n_items for i in x):
                raise ValueError(f"unknown item in {sorted(x)}")
            if not 0 <= d <= self.n_transactions:
                raise ValueError(f"disjunctive support {d} out of range")
        for x in self.ifda:
            if not any(x < f for f in self.ifde):
                raise ValueError(f"added closure {sorted(x)} is not covered")
        for x, dx in elems:
            for y, dy in elems:
                if x < y and not dx < dy:
                    raise ValueError("disjunctive supports must grow strictly along inclusion")

    def cover_support(self, itemset):
        """Disjunctive support of the smallest stored closure containing
        ``itemset``, or ``None`` when none does."""
        if self._elements is None:
            elems = [(d, len(x), tuple(sorted(x)), to_mask(x))
                     for x, d in list(self.ifde.items()) + list(self.ifda.items())]
            elems.sort()
            self._elements = [(e[3], e[0]) for e in elems]
        m = to_mask(itemset)
        for cm, d in self._elements:
            if m & ~cm == 0:
                return d
        return None

    def _enc(self, x):
        if self.labels is None:
            return sorted(x)
        return labelled(self.labels, x)

    def to_dict(self) -> dict:
        def rows(part):
            items = sorted(part.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
            return [{"items": self._enc(x), "supp_disj": d} for x, d in items]
        return {
            "minsup": self.minsup,
            "n_transactions": self.n_transactions,
            "items": list(self.labels) if self.labels is not None else self.n_items,
            "ifde": rows(self.ifde),
            "ifda": rows(self.ifda),
            "absent": self._enc(self.absent),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "DisjunctiveRepresentation":
        items = data["items"]
        if isinstance(items, int):
            labels, n_items = None, items
            dec = frozenset
        else:
            labels, n_items = tuple(items), len(items)
            index = {lab: i for i, lab in enumerate(items)}
            def dec(xs):
                return frozenset(index[x] for x in xs)
        part = lambda key: {dec(r["items"]): int(r["supp_disj"]) for r in data[key]}
        return cls(part("ifde"), part("ifda"), int(data["minsup"]),
                   int(data["n_transactions"]), n_items, labels,
                   absent=dec(data.get("absent", [])))


def dcpr_mine(ctx: ExtractionContext, minsup: int, scan: str = "tidsets",
              singleton_border: bool = False) -> DisjunctiveRepresentation:
    """Mine the disjunctive-closure representation.

    Parameters
    ----------
    ctx : ExtractionContext
    minsup : int
        Absolute conjunctive support threshold.
    scan : {"tidsets", "transactions"}
        How each level's statistics are counted.  Both give identical
        output; ``"transactions"`` makes one pass over the rows per level.
    singleton_border : bool
        Also turn infrequent single items into added closures.  Without
        this an infrequent item whose closure is strictly covered cannot be
        told apart from a frequent one at regeneration time.

    Returns
    -------
    DisjunctiveRepresentation
    """
    if minsup < 1:
        raise ValueError("minsup must be at least 1")
    ifde: dict = {}
    raw: dict = {}
    n_ess = 0
    for size, cands, stats in _levels(ctx, minsup, scan):
        odd = size % 2 == 1 and (size >= 3 or singleton_border)
        for c, (d, s, cl) in zip(cands, stats):
            closure = from_mask(cl)
            if s >= minsup:
                ifde[closure] = d
                n_ess += 1
            elif odd:
                raw[closure] = d
    ifda = {x: d for x, d in raw.items()
            if x not in ifde and any(x < f for f in ifde)}
    absent = frozenset(i for i, col in enumerate(ctx.columns) if not col)
    return DisjunctiveRepresentation(ifde, ifda, minsup, ctx.n_transactions,
                                     ctx.n_items, ctx.labels, n_ess, absent)


def regenerate_frequent(rep: DisjunctiveRepresentation) -> dict:
    """Every non-empty frequent itemset with ``(supp_conj, supp_disj)``.

    Itemsets are visited breadth-first.  The disjunctive support of a
    candidate is read from the smallest stored closure covering it; its
    conjunctive support follows by inclusion-exclusion over its subsets.
    A candidate with no covering closure is infrequent.
    """
    rep.validate()
    disj: dict = {}
    out: dict = {}
    level = []
    for i in range(rep.n_items):
        if i in rep.absent:
            continue
        x = frozenset((i,))
        d = rep.cover_support(x)
        if d is not None and d >= rep.minsup:
            disj[x] = d
            out[x] = (d, d)
            level.append((i,))
    while level:
        known = set(level)
        level.sort()
        nxt = []
        for a in range(len(level)):
            ta = level[a]
            for b in range(a + 1, len(level)):
                tb = level[b]
                if tb[:-1] != ta[:-1]:
                    break
                cand = ta + (tb[-1],)
                if any(cand[:k] + cand[k + 1:] not in known for k in range(len(cand))):
                    continue
                x = frozenset(cand)
                d = rep.cover_support(x)
                if d is None:
                    continue
                total = d if len(cand) % 2 else -d
                for k in range(1, len(cand)):
                    sign = 1 if k % 2 else -1
                    for sub in combinations(cand, k):
                        total += sign * disj[frozenset(sub)]
                if total >= rep.minsup:
                    disj[x] = d
                    out[x] = (total, d)
                    nxt.append(cand)
        level = nxt
    return out
