"""Representation sizes on the benchmark contexts, next to reference values.

For every dataset found under ``data/`` (or ``$GALOISMINE_DATA``) and every
requested threshold, prints ``IFDE+IFDA``, ``IFF``, ``NDI`` and ``IEF+BD+``
together with the reference row and whether the counts agree.

Usage::

    python scripts/reproduce_tables.py                 # 90% on each dataset
    python scripts/reproduce_tables.py --pct 90 80 70 --datasets chess
    python scripts/reproduce_tables.py --suite         # random-context rule bases
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path

from galoismine import oracle
from galoismine.bases import compactness, extract_gba, extract_gbe, extract_igb
from galoismine.cli import compare_row
from galoismine.context import ExtractionContext, absolute_minsup, read_fimi
from galoismine.prince import prince

ROOT = Path(__file__).resolve().parents[1]

# pct: (IFDE, IFDA, IFF, NDI, IEF, BD+)
REFERENCE = {
    "chess": {
        90: (40, 3, 499, 95, 84, 34),
        80: (129, 21, 5084, 279, 241, 226),
        70: (349, 71, 23893, 684, 591, 891),
        60: (773, 144, 98393, 1594, 1314, 3323),
    },
    "mushroom": {
        40: (79, 12, 140, 146, 110, 41),
        30: (182, 31, 427, 329, 247, 63),
        20: (759, 182, 1197, 1141, 1100, 158),
    },
    "connect": {
        90: (22, 0, 3487, 199, 176, 222),
        80: (83, 0, 15108, 348, 304, 673),
    },
}
DEFAULT_PCT = {"chess": 90, "mushroom": 40, "connect": 90}
KEYS = ("IFDE", "IFDA", "IFF", "NDI", "IEF", "BD+")


def find(name):
    dirs = [Path(os.environ["GALOISMINE_DATA"])] if "GALOISMINE_DATA" in os.environ else []
    for d in dirs + [ROOT / "data"]:
        if (d / f"{name}.dat").exists():
            return d / f"{name}.dat"
    return None


def fmt_row(v):
    return f"{v[0]}+{v[1]}={v[0] + v[1]} | {v[2]} | {v[3]} | {v[4]}+{v[5]}={v[4] + v[5]}"


def tables(names, pcts):
    ok = True
    for name in names:
        path = find(name)
        if path is None:
            print(f"{name}: not found, skipped")
            continue
        ctx = read_fimi(path)
        print(f"{name}: {ctx.n_transactions} transactions, {ctx.n_items} items")
        for pct in pcts or [DEFAULT_PCT[name]]:
            row = compare_row(ctx, absolute_minsup(ctx.n_transactions, pct))
            got = tuple(row[k] for k in KEYS)
            ref = REFERENCE[name].get(pct)
            status = "no reference" if ref is None else ("match" if got == ref else "MISMATCH")
            ok &= ref is None or got == ref
            print(f"  {pct:>3}% minsup={row['minsup']:>5}  {fmt_row(got)}  "
                  f"|IF|={row['IF']}  {row['seconds']} s  [{status}]")
            if ref is not None and got != ref:
                print(f"        reference  {fmt_row(ref)}")
    return ok


def rule_suite(n=200, seed=20240601):
    """Average base sizes and compactness over random small contexts."""
    rng = random.Random(seed)
    letters = "ABCDEFGH"
    totals = {}
    for k in range(n):
        n_items = rng.randint(1, 8)
        dens = rng.choice([0.2, 0.4, 0.6, 0.8])
        rows = [[letters[i] for i in range(n_items) if rng.random() < dens]
                for _ in range(rng.randint(0, 12))]
        ctx = ExtractionContext.from_transactions(rows, items=letters[:n_items])
        minsup, minconf = 1 + k % 3, ("0.5", "0.8", "1.0")[(k // 3) % 3]
        ice = prince(ctx, minsup)
        ar = len(oracle.association_rules(ctx, minsup, minconf, empty_premise=True))
        pair = len(extract_gbe(ice, True).rules | extract_gba(ice, minconf, empty_premise=True).rules)
        igb = len(extract_igb(ice, minconf))
        t = totals.setdefault(minconf, [0, 0, 0, 0.0, 0.0, 0])
        t[0] += ar
        t[1] += pair
        t[2] += igb
        t[3] += compactness(pair, ar)
        t[4] += compactness(igb, ar)
        t[5] += 1
    print("minconf  AR  GBE+GBA  IGB  comp(GBE+GBA)  comp(IGB)   (sums, mean rates)")
    for c, (ar, pair, igb, cp, ci, m) in sorted(totals.items()):
        print(f"{c:>7} {ar:>5} {pair:>8} {igb:>4} {cp / m:>14.3f} {ci / m:>10.3f}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--datasets", nargs="*", default=list(REFERENCE))
    p.add_argument("--pct", nargs="*", type=int)
    p.add_argument("--suite", action="store_true", help="rule-base sizes on random contexts")
    args = p.parse_args(argv)
    if args.suite:
        rule_suite()
        return 0
    return 0 if tables(args.datasets, args.pct) else 1


if __name__ == "__main__":
    sys.exit(main())
