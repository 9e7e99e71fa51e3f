"""Extraction contexts and the support measures defined over them.

A context stores a binary relation between transactions and items twice:
as one item bitmask per transaction and as one transaction bitmask
(tidset) per item.  Itemsets are ``frozenset`` objects of integer item
ids; ids follow the order of first appearance in the input.
"""
from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, TextIO

from ._bits import _label_key, from_mask, iter_bits, to_mask

__all__ = [
    "CapacityError",
    "ExtractionContext",
    "SupportTriple",
    "parse_fimi",
    "read_fimi",
    "write_fimi",
    "supp_conj",
    "supp_disj",
    "supp_neg",
    "supports",
    "conj_from_disj",
    "disj_from_conj",
    "tidset",
    "common_items",
    "conj_closure",
    "absolute_minsup",
    "as_fraction",
    "relative_support",
    "count_frequent",
    "frequent_supports",
]


class CapacityError(RuntimeError):
    """Raised when a request exceeds a configured size cap."""


class SupportTriple(NamedTuple):
    conj: int
    disj: int
    neg: int


@dataclass(frozen=True)
class ExtractionContext:
    """A finite binary relation between transactions and items.

    Parameters
    ----------
    labels : tuple of str
        Item labels indexed by item id.
    rows : tuple of int
        ``rows[t]`` is the bitmask of the items of transaction ``t``.

    Notes
    -----
    ``columns`` is derived from ``rows`` at construction so that both views
    always agree.
    """

    labels: tuple
    rows: tuple
    columns: tuple = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        universe = (1 << len(self.labels)) - 1
        columns = [0] * len(self.labels)
        for t, row in enumerate(self.rows):
            if row & ~universe:
                raise ValueError(f"transaction {t} uses an unknown item id")
            for i in iter_bits(row):
                columns[i] |= 1 << t
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("item labels must be distinct")
        object.__setattr__(self, "columns", tuple(columns))
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    # construction -------------------------------------------------------
    @classmethod
    def from_transactions(cls, transactions: Iterable[Iterable[str]],
                          items: Iterable[str] | None = None) -> "ExtractionContext":
        """Build a context from label sequences.

        ``items`` optionally fixes the universe (and its id order); labels not
        listed there get the following ids in label order, numeric labels
        numerically.  Duplicate labels inside one transaction collapse.
        """
        labels = list(dict.fromkeys(str(x) for x in items or ()))
        trans = [[str(lab) for lab in tr] for tr in transactions]
        extra = {lab for tr in trans for lab in tr} - set(labels)
        labels += sorted(extra, key=_label_key)
        index = {lab: i for i, lab in enumerate(labels)}
        rows = []
        for tr in trans:
            mask = 0
            for lab in tr:
                mask |= 1 << index[lab]
            rows.append(mask)
        return cls(tuple(labels), tuple(rows))

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "ExtractionContext":
        """Shorthand for single-character labels, e.g. ``["ABC", "BD"]``."""
        return cls.from_transactions([list(r) for r in rows])

    # sizes --------------------------------------------------------------
    @property
    def n_items(self) -> int:
        return len(self.labels)

    @property
    def n_transactions(self) -> int:
        return len(self.rows)

    @property
    def all_tids(self) -> int:
        return (1 << len(self.rows)) - 1

    @property
    def all_items(self) -> int:
        return (1 << len(self.labels)) - 1

    # itemset helpers ----------------------------------------------------
    def check_items(self, itemset: Iterable[int]) -> frozenset:
        s = frozenset(itemset)
        for i in s:
            if not isinstance(i, int) or not 0 <= i < self.n_items:
                raise ValueError(f"unknown item id {i!r}")
        return s

    def check_tids(self, tids: Iterable[int]) -> frozenset:
        s = frozenset(tids)
        for t in s:
            if not isinstance(t, int) or not 0 <= t < self.n_transactions:
                raise ValueError(f"unknown transaction id {t!r}")
        return s

    def encode(self, labels: Iterable[str] | str) -> frozenset:
        """Map labels to ids.  A plain string is split into characters when
        every label is one character long, otherwise on whitespace."""
        if isinstance(labels, str):
            if all(len(lab) == 1 for lab in self.labels):
                labels = [c for c in labels if not c.isspace()]
            else:
                labels = labels.split()
        try:
            return frozenset(self._index[lab] for lab in labels)
        except KeyError as exc:
            raise ValueError(f"unknown item label {exc.args[0]!r}") from None

    def decode(self, itemset: Iterable[int]) -> tuple:
        return tuple(self.labels[i] for i in sorted(itemset))

    def fmt(self, itemset: Iterable[int]) -> str:
        labs = self.decode(itemset)
        if all(len(lab) == 1 for lab in self.labels):
            return "".join(labs)
        return " ".join(labs)

    def transaction(self, t: int) -> frozenset:
        self.check_tids([t])
        return from_mask(self.rows[t])

    def tid_mask(self, itemset: Iterable[int]) -> int:
        """Bitmask of transactions containing every item of ``itemset``."""
        mask = self.all_tids
        for i in self.check_items(itemset):
            mask &= self.columns[i]
        return mask

    def hit_mask(self, itemset: Iterable[int]) -> int:
        """Bitmask of transactions containing at least one item."""
        mask = 0
        for i in self.check_items(itemset):
            mask |= self.columns[i]
        return mask


# I/O ------------------------------------------------------------------------
def parse_fimi(source: str | TextIO) -> ExtractionContext:
    """Read whitespace-separated transactions, one per line.

    Empty lines are kept as empty transactions, except that a single
    trailing newline does not create one.
    """
    text = source if isinstance(source, str) else source.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return ExtractionContext.from_transactions(line.split() for line in lines)


def read_fimi(path: str | os.PathLike) -> ExtractionContext:
    with open(path, encoding="utf-8") as fh:
        return parse_fimi(fh)


def write_fimi(ctx: ExtractionContext, path_or_stream) -> None:
    out = io.StringIO()
    for row in ctx.rows:
        out.write(" ".join(ctx.decode(from_mask(row))) + "\n")
    if hasattr(path_or_stream, "write"):
        path_or_stream.write(out.getvalue())
    else:
        with open(path_or_stream, "w", encoding="utf-8") as fh:
            fh.write(out.getvalue())


# supports -------------------------------------------------------------------
def supp_conj(ctx: ExtractionContext, itemset: Iterable[int]) -> int:
    """Transactions containing every item; ``n`` for the empty itemset."""
    return ctx.tid_mask(itemset).bit_count()


def supp_disj(ctx: ExtractionContext, itemset: Iterable[int]) -> int:
    """Transactions containing at least one item; 0 for the empty itemset."""
    return ctx.hit_mask(itemset).bit_count()


def supp_neg(ctx: ExtractionContext, itemset: Iterable[int]) -> int:
    """Transactions containing none of the items."""
    return ctx.n_transactions - supp_disj(ctx, itemset)


def supports(ctx: ExtractionContext, itemset: Iterable[int]) -> SupportTriple:
    d = supp_disj(ctx, itemset)
    return SupportTriple(supp_conj(ctx, itemset), d, ctx.n_transactions - d)


def _signed_sum(table: Mapping, itemset: Iterable[int]) -> int:
    items = sorted(frozenset(itemset))
    if not items:
        raise ValueError("the identity needs a non-empty itemset")
    total = 0
    for k in range(1, len(items) + 1):
        sign = 1 if k % 2 else -1
        for sub in combinations(items, k):
            key = frozenset(sub)
            if key not in table:
                raise ValueError(f"missing support for subset {sorted(key)}")
            total += sign * table[key]
    return total


def conj_from_disj(disj_supports: Mapping, itemset: Iterable[int]) -> int:
    """Conjunctive support from disjunctive supports of all non-empty subsets."""
    return _signed_sum(disj_supports, itemset)


def disj_from_conj(conj_supports: Mapping, itemset: Iterable[int]) -> int:
    """Disjunctive support from conjunctive supports of all non-empty subsets."""
    return _signed_sum(conj_supports, itemset)


# Galois connection ----------------------------------------------------------
def tidset(ctx: ExtractionContext, itemset: Iterable[int]) -> frozenset:
    return from_mask(ctx.tid_mask(itemset))


def common_items(ctx: ExtractionContext, tids: Iterable[int]) -> frozenset:
    """Items shared by all given transactions (all items for no transaction)."""
    mask = ctx.all_items
    for t in ctx.check_tids(tids):
        mask &= ctx.rows[t]
    return from_mask(mask)


def _common_items_mask(ctx: ExtractionContext, tmask: int) -> int:
    mask = ctx.all_items
    for t in iter_bits(tmask):
        mask &= ctx.rows[t]
        if not mask:
            break
    return mask


def conj_closure(ctx: ExtractionContext, itemset: Iterable[int]) -> frozenset:
    """Smallest closed itemset containing ``itemset``."""
    return from_mask(_common_items_mask(ctx, ctx.tid_mask(itemset)))


# thresholds -----------------------------------------------------------------
def as_fraction(x) -> Fraction:
    """Exact rational view of a user threshold (``0.8`` becomes 4/5)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


def absolute_minsup(n_transactions: int, pct, rounding: str = "ceil") -> int:
    """Convert a percentage threshold into a transaction count.

    Parameters
    ----------
    n_transactions : int
    pct : number
        Percentage in ``[0, 100]``.
    rounding : {"ceil", "floor"}

    Returns
    -------
    int
    """
    p = as_fraction(pct)
    if p < 0 or p > 100:
        raise ValueError("percentage must lie in [0, 100]")
    value = Fraction(n_transactions) * p / 100
    if rounding == "ceil":
        return math.ceil(value)
    if rounding == "floor":
        return math.floor(value)
    raise ValueError(f"unknown rounding {rounding!r}")


def relative_support(count: int, n_transactions: int) -> Fraction:
    if n_transactions <= 0:
        raise ValueError("relative support of an empty context is undefined")
    return Fraction(count, n_transactions)


def count_frequent(ctx: ExtractionContext, minsup: int, include_empty: bool = False) -> int:
    """Number of frequent itemsets, by depth-first tidset intersection."""
    if minsup > ctx.n_transactions:
        return 0
    cols = [(i, c) for i, c in enumerate(ctx.columns) if c.bit_count() >= minsup]
    total = 1 if include_empty else 0
    stack = [cols]
    while stack:
        level = stack.pop()
        for j, (_, tm) in enumerate(level):
            total += 1
            ext = []
            for _, tm2 in level[j + 1:]:
                inter = tm & tm2
                if inter.bit_count() >= minsup:
                    ext.append((None, inter))
            if ext:
                stack.append(ext)
    return total


def frequent_supports(ctx: ExtractionContext, minsup: int, limit: int | None = None) -> dict:
    """Every frequent itemset, the empty one included, with its support.

    Raises
    ------
    CapacityError
        When more than ``limit`` itemsets are frequent.
    """
    out = {}
    if minsup > ctx.n_transactions:
        return out
    out[frozenset()] = ctx.n_transactions
    cols = [((i,), c) for i, c in enumerate(ctx.columns) if c.bit_count() >= minsup]
    stack = [cols]
    while stack:
        level = stack.pop()
        for j, (items, tm) in enumerate(level):
            out[frozenset(items)] = tm.bit_count()
            if limit is not None and len(out) > limit:
                raise CapacityError(f"more than {limit} frequent itemsets")
            ext = []
            for items2, tm2 in level[j + 1:]:
                inter = tm & tm2
                if inter.bit_count() >= minsup:
                    ext.append((items + items2[-1:], inter))
            if ext:
                stack.append(ext)
    return out
