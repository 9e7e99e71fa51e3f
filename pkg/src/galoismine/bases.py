"""Generic bases of association rules and their derivation.

Three bases are extracted from an :class:`~galoismine.prince.IcebergLattice`:

* ``GBE`` exact rules ``g => f - g`` for each generator ``g`` of a closed
  itemset ``f``;
* ``GBA`` approximate rules ``g => f - g`` for each closed ``f`` strictly
  above the closure of ``g``, optionally restricted to immediate successors;
* ``IGB`` informative rules ``g => f - g`` whose premise is minimal among
  generators inside ``f`` reaching the confidence threshold, the empty
  premise giving factual rules.

Each base has a derivation engine that rebuilds every valid rule, with its
exact support and confidence, from the base and the closed itemsets'
supports.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from ._bits import labelled
from .context import as_fraction
from .prince import IcebergLattice

__all__ = [
    "Rule",
    "GenericBase",
    "extract_gbe",
    "extract_gba",
    "extract_igb",
    "derive_from_gbe",
    "derive_from_gba",
    "derive_from_igb",
    "derive_rules",
    "compactness",
    "count_rules",
    "compactness_report",
    "rules_to_csv",
    "base_to_dict",
    "base_from_dict",
]


@dataclass(frozen=True, order=True)
class Rule:
    """An association rule ``premise => conclusion``.

    ``support`` is the support of the union, ``confidence`` an exact
    fraction.
    """

    premise: frozenset
    conclusion: frozenset
    support: int
    confidence: Fraction

    def __post_init__(self):
        if not self.conclusion:
            raise ValueError("conclusion must be non-empty")
        if self.premise & self.conclusion:
            raise ValueError("premise and conclusion must be disjoint")

    @property
    def key(self):
        return (self.premise, self.conclusion)


@dataclass
class GenericBase:
    kind: str
    rules: frozenset
    minsup: int
    minconf: Fraction
    n_transactions: int
    empty_premise: bool = False
    reduced: bool = False
    iceberg: IcebergLattice | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(sorted(self.rules, key=_rule_sort_key))


def _rule_sort_key(r: Rule):
    return (len(r.premise), tuple(sorted(r.premise)), len(r.conclusion),
            tuple(sorted(r.conclusion)))


def _check_minconf(minconf) -> Fraction:
    c = as_fraction(minconf)
    if c < 0 or c > 1:
        raise ValueError("minconf must lie in [0, 1]")
    return c


# extraction -----------------------------------------------------------------
def extract_gbe(iceberg: IcebergLattice, empty_premise: bool = False) -> GenericBase:
    """Exact generic base."""
    rules = set()
    for n in iceberg.nodes:
        for g in n.generators:
            if g == n.closed or (not g and not empty_premise):
                continue
            rules.add(Rule(g, n.closed - g, n.support, Fraction(1)))
    return GenericBase("GBE", frozenset(rules), iceberg.minsup, Fraction(1),
                       iceberg.n_transactions, empty_premise, False, iceberg)


def extract_gba(iceberg: IcebergLattice, minconf, reduced: bool = False,
                empty_premise: bool = False) -> GenericBase:
    """Approximate generic base.

    Parameters
    ----------
    iceberg : IcebergLattice
    minconf : number
        Confidence threshold, converted exactly.
    reduced : bool
        Keep only rules towards immediate successors (the transitive
        reduction).  :func:`derive_from_gba` expands them back.
    empty_premise : bool
        Keep rules whose premise is the empty generator.
    """
    minconf = _check_minconf(minconf)
    rules = set()
    for idx, n in enumerate(iceberg.nodes):
        targets = n.successors if reduced else iceberg.above(idx)
        for t in targets:
            tn = iceberg.nodes[t]
            conf = Fraction(tn.support, n.support)
            if conf < minconf:
                continue
            for g in n.generators:
                if not g and not empty_premise:
                    continue
                rules.add(Rule(g, tn.closed - g, tn.support, conf))
    return GenericBase("GBA", frozenset(rules), iceberg.minsup, minconf,
                       iceberg.n_transactions, empty_premise, reduced, iceberg)


def extract_igb(iceberg: IcebergLattice, minconf) -> GenericBase:
    """Informative generic base.

    For each closed itemset ``f`` the premises are the generators ``g``
    inside ``f`` with ``supp(f)/supp(g) >= minconf`` and no proper subset
    passing the same test.  The empty generator turns into a factual rule
    ``{} => f`` exactly when ``f`` itself meets the threshold relative to
    the number of transactions.
    """
    minconf = _check_minconf(minconf)
    gens = {}
    for n in iceberg.nodes:
        for g in n.generators:
            gens[g] = n.support
    rules = set()
    for n in iceberg.nodes:
        f = n.closed
        for g, sg in gens.items():
            if not g <= f or g == f:
                continue
            if Fraction(n.support, sg) < minconf:
                continue
            # any failing subset makes every larger subset pass too, so the
            # immediate subsets are enough
            if any(Fraction(n.support, gens[g - {i}]) >= minconf for i in g):
                continue
            rules.add(Rule(g, f - g, n.support, Fraction(n.support, sg)))
    return GenericBase("IGB", frozenset(rules), iceberg.minsup, minconf,
                       iceberg.n_transactions, True, False, iceberg)


# derivation -----------------------------------------------------------------
def _subsets(items: Iterable[int], proper=False, nonempty=False):
    items = sorted(items)
    lo = 1 if nonempty else 0
    hi = len(items) - 1 if proper else len(items)
    for k in range(lo, hi + 1):
        for sub in combinations(items, k):
            yield frozenset(sub)


def _keep(premise, empty_premise):
    return empty_premise or bool(premise)


def derive_from_gbe(base: GenericBase, empty_premise: bool | None = None) -> dict:
    """All exact rules: ``X u Z1 => Z2`` for ``X => Y`` in the base,
    ``Z1`` a proper subset of ``Y`` and ``Z2`` non-empty in ``Y - Z1``."""
    if empty_premise is None:
        empty_premise = base.empty_premise
    out = {}
    for r in base.rules:
        for z1 in _subsets(r.conclusion, proper=True):
            x = r.premise | z1
            if not _keep(x, empty_premise):
                continue
            for z2 in _subsets(r.conclusion - z1, nonempty=True):
                out[(x, z2)] = (r.support, Fraction(1))
    return out


def _expand_reduced(base: GenericBase, iceberg: IcebergLattice) -> set:
    """Close a reduced approximate base under transitivity."""
    by_source = {}
    for r in base.rules:
        src = iceberg.omega_index(r.premise)
        dst = iceberg.omega_index(r.premise | r.conclusion)
        by_source.setdefault(src, set()).add(dst)
    full = set()
    for src, gens in ((i, n.generators) for i, n in enumerate(iceberg.nodes)):
        if src not in by_source:
            continue
        s_src = iceberg.nodes[src].support
        seen = set()
        stack = list(by_source[src])
        while stack:
            t = stack.pop()
            if t in seen:
                continue
            conf = Fraction(iceberg.nodes[t].support, s_src)
            if conf < base.minconf:
                continue
            seen.add(t)
            stack.extend(by_source.get(t, ()))
        for t in seen:
            tn = iceberg.nodes[t]
            for g in gens:
                if g or base.empty_premise:
                    full.add(Rule(g, tn.closed - g, tn.support,
                                  Fraction(tn.support, s_src)))
    return full


def derive_from_gba(base: GenericBase, iceberg: IcebergLattice | None = None,
                    empty_premise: bool | None = None) -> dict:
    """All approximate rules (confidence below 1).

    Augmentation moves part ``Z`` of the conclusion into the premise when
    ``X u Z`` has the same closure as ``X``.  Decomposition then keeps any
    non-empty part ``Z`` of the remaining conclusion ``Y'`` for which
    ``X' u Z`` has the same closure as ``X' u Y'``.
    """
    iceberg = iceberg or base.iceberg
    if iceberg is None:
        raise ValueError("derivation needs the closed itemsets and supports")
    if empty_premise is None:
        empty_premise = base.empty_premise
    rules = _expand_reduced(base, iceberg) if base.reduced else base.rules
    out = {}
    for r in rules:
        cx = iceberg.closure(r.premise)
        whole = r.premise | r.conclusion
        cw = iceberg.closure(whole)
        for z in _subsets(r.conclusion, proper=True):
            x2 = r.premise | z
            if z and iceberg.closure(x2) != cx:
                continue
            y2 = r.conclusion - z
            for z2 in _subsets(y2, nonempty=True):
                if z2 != y2 and iceberg.closure(x2 | z2) != cw:
                    continue
                if _keep(x2, empty_premise):
                    out[(x2, z2)] = (r.support, r.confidence)
    return out


def derive_from_igb(base: GenericBase, iceberg: IcebergLattice | None = None,
                    empty_premise: bool = False) -> dict:
    """All valid rules from the informative base.

    Moving any proper part ``Z`` of the conclusion into the premise gives
    ``X u Z => Y - Z``; its confidence is recomputed from the supports.
    Each such rule then yields ``X' => Z`` for every non-empty ``Z`` of its
    conclusion with ``X' u Z`` closing onto the same itemset.
    """
    iceberg = iceberg or base.iceberg
    if iceberg is None:
        raise ValueError("derivation needs the closed itemsets and supports")
    out = {}
    for r in base.rules:
        whole = r.premise | r.conclusion
        s_whole = iceberg.support(whole)
        closed_whole = iceberg.closure(whole)
        for z in _subsets(r.conclusion, proper=True):
            x2 = r.premise | z
            conf = Fraction(s_whole, iceberg.support(x2))
            if conf < base.minconf:
                continue
            y2 = r.conclusion - z
            keep = _keep(x2, empty_premise)
            if not keep:
                continue
            for z2 in _subsets(y2, nonempty=True):
                if z2 != y2 and iceberg.closure(x2 | z2) != closed_whole:
                    continue
                out[(x2, z2)] = (s_whole, conf)
    return out


def derive_rules(base: GenericBase, iceberg: IcebergLattice | None = None, **kw) -> dict:
    if base.kind == "GBE":
        return derive_from_gbe(base, **kw)
    if base.kind == "GBA":
        return derive_from_gba(base, iceberg, **kw)
    if base.kind == "IGB":
        return derive_from_igb(base, iceberg, **kw)
    raise ValueError(f"unknown base kind {base.kind!r}")


# reporting ------------------------------------------------------------------
def count_rules(supports: dict, minconf, empty_premise: bool = False) -> int:
    """Number of valid rules given the support of every frequent itemset."""
    minconf = _check_minconf(minconf)
    total = 0
    for z, s in supports.items():
        for x in _subsets(z, proper=True, nonempty=not empty_premise):
            if Fraction(s, supports[x]) >= minconf:
                total += 1
    return total


def compactness(base_size: int, ar_size: int) -> float:
    """``1 - base_size / ar_size``; 0 when both counts are 0."""
    if ar_size == 0:
        if base_size:
            raise ValueError("a non-empty base cannot summarise an empty rule set")
        return 0.0
    return 1.0 - base_size / ar_size


def compactness_report(bases: dict, ar_size: int) -> list:
    """Rows ``(name, size, compactness)`` for each entry of ``bases``."""
    return [(name, len(b), compactness(len(b), ar_size)) for name, b in bases.items()]


def _labels(iceberg, itemset):
    if iceberg is not None and iceberg.labels is not None:
        return labelled(iceberg.labels, itemset)
    return sorted(itemset)


def rules_to_csv(bases: Iterable[GenericBase]) -> str:
    """Semicolon-separated ``premise;conclusion;support;confidence;kind``."""
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=";", lineterminator="\n")
    w.writerow(["premise", "conclusion", "support", "confidence", "kind"])
    for b in bases:
        for r in b:
            w.writerow([" ".join(map(str, _labels(b.iceberg, r.premise))),
                        " ".join(map(str, _labels(b.iceberg, r.conclusion))),
                        r.support, str(r.confidence), b.kind])
    return buf.getvalue()


def base_to_dict(base: GenericBase) -> dict:
    return {
        "kind": base.kind,
        "minsup": base.minsup,
        "minconf": str(base.minconf),
        "n_transactions": base.n_transactions,
        "empty_premise": base.empty_premise,
        "reduced": base.reduced,
        "rules": [
            {"premise": _labels(base.iceberg, r.premise),
             "conclusion": _labels(base.iceberg, r.conclusion),
             "support": r.support, "confidence": str(r.confidence)}
            for r in base
        ],
    }


def base_from_dict(data: dict, iceberg: IcebergLattice) -> GenericBase:
    if iceberg.labels is not None:
        index = {lab: i for i, lab in enumerate(iceberg.labels)}
        def dec(xs):
            return frozenset(index[x] for x in xs)
    else:
        dec = frozenset
    rules = frozenset(
        Rule(dec(r["premise"]), dec(r["conclusion"]), int(r["support"]),
             Fraction(r["confidence"]))
        for r in data["rules"]
    )
    return GenericBase(data["kind"], rules, int(data["minsup"]), Fraction(data["minconf"]),
                       int(data["n_transactions"]), bool(data["empty_premise"]),
                       bool(data["reduced"]), iceberg)


def bases_to_json(bases: Iterable[GenericBase], iceberg: IcebergLattice, **kw) -> str:
    return json.dumps({"iceberg": iceberg.to_dict(),
                       "bases": [base_to_dict(b) for b in bases]}, **kw)
