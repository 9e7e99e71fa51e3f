"""Non-derivable itemsets.

For ``I`` inside ``J`` the signed sum

    sigma(I, J) = sum over I <= X < J of (-1)**(|J - X| + 1) * supp(X)

bounds ``supp(J)`` from below when ``|J - I|`` is even and from above when
it is odd; the gap equals the number of transactions whose projection on
``J`` is exactly ``I``.  An itemset is derivable when the tightest bounds
meet.  Derivability is inherited by supersets, so the frequent
non-derivable itemsets are mined levelwise and every other frequent
support is rebuilt from them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from ._bits import iter_bits, labelled, to_mask
from .context import CapacityError, ExtractionContext

__all__ = [
    "Bounds",
    "NDIRepresentation",
    "project",
    "fraction",
    "sigma",
    "bounds",
    "mine_ndi",
    "derive_support",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 16


@dataclass(frozen=True)
class Bounds:
    lower: int
    upper: int

    @property
    def width(self) -> int:
        return self.upper - self.lower

    @property
    def derivable(self) -> bool:
        return self.lower == self.upper


def project(ctx: ExtractionContext, itemset) -> list:
    """Each transaction restricted to ``itemset``, in transaction order."""
    m = to_mask(ctx.check_items(itemset))
    return [frozenset(iter_bits(row & m)) for row in ctx.rows]


def fraction(ctx: ExtractionContext, inner, outer) -> int:
    """Transactions whose projection on ``outer`` is exactly ``inner``."""
    i = ctx.check_items(inner)
    j = ctx.check_items(outer)
    if not i <= j:
        raise ValueError("inner itemset must be contained in outer itemset")
    return sum(1 for p in project(ctx, j) if p == i)


def sigma(inner, outer, supports: Mapping) -> int:
    """Signed sum over the interval ``[inner, outer)`` of supports."""
    i = frozenset(inner)
    j = frozenset(outer)
    if not i <= j:
        raise ValueError("inner itemset must be contained in outer itemset")
    rest = sorted(j - i)
    total = 0
    for m in range((1 << len(rest)) - 1):
        x = i | {rest[b] for b in range(len(rest)) if m >> b & 1}
        if x not in supports:
            raise ValueError(f"missing support for {sorted(x)}")
        gap = len(rest) - m.bit_count()
        total += supports[x] if gap % 2 else -supports[x]
    return total


def _all_sigmas(items, supports):
    """``sigma(I, J)`` for every ``I`` inside ``J``, indexed by local mask."""
    k = len(items)
    full = (1 << k) - 1
    vals = [0] * (1 << k)
    for m in range(full):
        x = frozenset(items[b] for b in range(k) if m >> b & 1)
        try:
            s = supports[x]
        except KeyError:
            raise ValueError(f"missing support for {sorted(x)}") from None
        vals[m] = s if (k - m.bit_count()) % 2 == 0 else -s
    for b in range(k):
        bit = 1 << b
        for m in range(1 << k):
            if not m & bit:
                vals[m] += vals[m | bit]
    return [-v for v in vals]


def bounds(itemset, supports: Mapping, cap: int = DEFAULT_CAP) -> Bounds:
    """Tightest lower and upper bounds on the support of a non-empty itemset.

    Parameters
    ----------
    itemset : iterable of int
    supports : mapping
        Supports of every proper subset, the empty set included.
    cap : int
        Largest itemset size accepted.
    """
    items = sorted(frozenset(itemset))
    if not items:
        raise ValueError("bounds are defined for non-empty itemsets")
    if len(items) > cap:
        raise CapacityError(f"itemset of size {len(items)} exceeds cap {cap}")
    sig = _all_sigmas(items, supports)
    k = len(items)
    lo, up = None, None
    for m, v in enumerate(sig):
        if (k - m.bit_count()) % 2 == 0:
            lo = v if lo is None else max(lo, v)
        else:
            up = v if up is None else min(up, v)
    return Bounds(lo, up)


@dataclass
class NDIRepresentation:
    """Frequent non-derivable itemsets with their supports.

    ``supports`` holds the empty itemset (mapped to the number of
    transactions) whenever anything is frequent.  Its bounds never meet, so
    it counts as non-derivable and :meth:`__len__` includes it;
    :meth:`itemsets` leaves it out.
    """

    supports: dict
    minsup: int
    n_transactions: int
    n_items: int
    labels: tuple | None = None
    cap: int = DEFAULT_CAP
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self):
        return len(self.supports)

    def itemsets(self) -> dict:
        return {x: s for x, s in self.supports.items() if x}

    def to_dict(self) -> dict:
        enc = (lambda x: sorted(x)) if self.labels is None else \
            (lambda x: labelled(self.labels, x))
        rows = sorted(self.itemsets().items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        return {"minsup": self.minsup, "n_transactions": self.n_transactions,
                "items": list(self.labels) if self.labels is not None else self.n_items,
                "ndi": [{"items": enc(x), "support": s} for x, s in rows]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def mine_ndi(ctx: ExtractionContext, minsup: int, cap: int = DEFAULT_CAP) -> NDIRepresentation:
    """Levelwise mining of frequent non-derivable itemsets.

    A candidate is counted only when its immediate subsets are all frequent
    and non-derivable, its bounds differ and its upper bound reaches
    ``minsup``.

    Raises
    ------
    CapacityError
        When a candidate larger than ``cap`` items shows up.
    """
    if minsup < 1:
        raise ValueError("minsup must be at least 1")
    n = ctx.n_transactions
    rep = NDIRepresentation({}, minsup, n, ctx.n_items, ctx.labels, cap)
    if n < minsup:
        return rep
    supports = rep.supports
    supports[frozenset()] = n
    level = []
    for i, col in enumerate(ctx.columns):
        s = col.bit_count()
        # bounds of a single item are (0, n)
        if n > 0 and s >= minsup:
            supports[frozenset((i,))] = s
            level.append(((i,), col))
    while level:
        level.sort()
        known = {t for t, _ in level}
        nxt = []
        for a in range(len(level)):
            ta, ma = level[a]
            for b in range(a + 1, len(level)):
                tb, mb = level[b]
                if tb[:-1] != ta[:-1]:
                    break
                cand = ta + (tb[-1],)
                if any(cand[:k] + cand[k + 1:] not in known for k in range(len(cand))):
                    continue
                if len(cand) > cap:
                    raise CapacityError(f"candidate of size {len(cand)} exceeds cap {cap}")
                bd = bounds(cand, supports, cap)
                if bd.derivable or bd.upper < minsup:
                    continue
                tm = ma & mb
                s = tm.bit_count()
                if s >= minsup:
                    supports[frozenset(cand)] = s
                    nxt.append((cand, tm))
        level = nxt
    return rep


def derive_support(rep: NDIRepresentation, itemset):
    """Support of ``itemset`` rebuilt from the representation.

    Returns
    -------
    int or None
        ``None`` means the itemset is not frequent.
    """
    x = frozenset(itemset)
    for i in x:
        if not 0 <= i < rep.n_items:
            raise ValueError(f"unknown item id {i!r}")
    return _derive(rep, x)


def _derive(rep, x):
    if x in rep.supports:
        return rep.supports[x]
    if not rep.supports:
        return None
    if x in rep._cache:
        return rep._cache[x]
    out = None
    ok = True
    for i in sorted(x):
        if _derive(rep, x - {i}) is None:
            ok = False
            break
    if ok:
        table = _subset_table(rep, x)
        bd = bounds(x, table, rep.cap)
        if bd.derivable and bd.lower >= rep.minsup:
            out = bd.lower
    rep._cache[x] = out
    return out


def _subset_table(rep, x):
    items = sorted(x)
    table = {}
    for m in range((1 << len(items)) - 1):
        sub = frozenset(items[b] for b in range(len(items)) if m >> b & 1)
        table[sub] = _derive(rep, sub)
    return table
