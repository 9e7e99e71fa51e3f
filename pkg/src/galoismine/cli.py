"""Command-line front end.

Examples
--------
::

    galoismine closed  --input data/chess.dat --minsup-pct 90
    galoismine bases   --input toy.dat --minsup-count 2 --minconf 0.5 --format json --out b.json
    galoismine derive  --input b.json --format csv
    galoismine compare --input data/chess.dat --minsup-pct 90

CSV output uses ``;`` as separator and one space between the items of an
itemset.  Summary counts go to standard error so that standard output stays
a clean table.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from ._bits import label_sort_key, labelled
from .bases import (base_from_dict, bases_to_json, compactness, count_rules, derive_rules,
                    extract_gba, extract_gbe, extract_igb, rules_to_csv)
from .context import (CapacityError, absolute_minsup, as_fraction, count_frequent,
                      frequent_supports, read_fimi)
from .dcpr import dcpr_mine
from .ndi import DEFAULT_CAP, mine_ndi
from .prince import IcebergLattice, build_generator_lattice, derive_closures, mine_minimal_generators

KINDS = ("GBE", "GBA", "IGB")


@dataclass
class RunConfig:
    """One command invocation.

    Exactly one of ``minsup_count`` and ``minsup_pct`` is set for every
    command except ``derive``.  ``ar_limit`` bounds the number of
    (premise, itemset) pairs examined when counting all valid rules for
    the compactness report.
    """

    command: str
    input: str
    fmt: str = "csv"
    out: str | None = None
    minsup_count: int | None = None
    minsup_pct: float | None = None
    rounding: str = "ceil"
    minconf: Fraction = Fraction(1, 2)
    empty_premise: bool = False
    gba_reduce: bool = False
    kinds: tuple = KINDS
    ndi_cap: int = DEFAULT_CAP
    singleton_border: bool = False
    ar_limit: int = 2_000_000

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        self.minconf = as_fraction(self.minconf)
        if not 0 < self.minconf <= 1:
            raise ValueError("minconf must lie in (0, 1]")
        self.kinds = tuple(k.strip().upper() for k in self.kinds)
        if not set(self.kinds) <= set(KINDS) or not self.kinds:
            raise ValueError(f"kinds must be taken among {', '.join(KINDS)}")
        if self.command == "derive":
            return
        if (self.minsup_count is None) == (self.minsup_pct is None):
            raise ValueError("exactly one of --minsup-count or --minsup-pct is required")
        if self.minsup_count is not None and self.minsup_count < 1:
            raise ValueError("--minsup-count must be at least 1")
        if self.minsup_pct is not None and not 0 < self.minsup_pct <= 100:
            raise ValueError("--minsup-pct must lie in (0, 100]")

    def minsup(self, ctx) -> int:
        if self.minsup_count is not None:
            return self.minsup_count
        return max(1, absolute_minsup(ctx.n_transactions, self.minsup_pct, self.rounding))

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        kinds = ns.kinds.split(",") if getattr(ns, "kinds", None) else KINDS
        return cls(ns.command, ns.input, ns.format, ns.out,
                   getattr(ns, "minsup_count", None), getattr(ns, "minsup_pct", None),
                   getattr(ns, "rounding", "ceil"), getattr(ns, "minconf", "0.5"),
                   getattr(ns, "empty_premise", False),
                   getattr(ns, "gba_reduce", False), kinds,
                   getattr(ns, "ndi_cap", DEFAULT_CAP), getattr(ns, "singleton_border", False))


@dataclass
class Report:
    """Text for standard output plus summary lines for standard error."""

    text: str
    notes: tuple = ()


def _labels(labels, itemset):
    return " ".join(labelled(labels, itemset))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=";", lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# commands ---------------------------------------------------------------------
def cmd_mine_closed(cfg: RunConfig) -> Report:
    ctx = read_fimi(cfg.input)
    mined = mine_minimal_generators(ctx, cfg.minsup(ctx))
    ice = derive_closures(build_generator_lattice(mined), ctx.labels)
    counts = {"IFF": len(ice), "GMF": len(mined.gmf), "GBd-": len(mined.border)}
    note = " ".join(f"{k}={v}" for k, v in counts.items())
    if cfg.fmt == "json":
        return Report(json.dumps({"counts": counts, **ice.to_dict()}, indent=1) + "\n", (note,))
    rows = [(_labels(ctx.labels, n.closed), n.support,
             " | ".join(_labels(ctx.labels, g) for g in n.generators), n.closed)
            for n in ice.nodes]
    rows.sort(key=lambda r: (-r[1], label_sort_key(ctx.labels, r[3])))
    return Report(_csv(["closed", "support", "generators"], [r[:3] for r in rows]), (note,))


def _ar_size(ctx, minsup, cfg):
    """Number of valid rules, or ``None`` when the guard is exceeded."""
    try:
        supports = frequent_supports(ctx, minsup, limit=cfg.ar_limit)
    except CapacityError:
        return None
    if sum(2 ** len(x) for x in supports) > cfg.ar_limit:
        return None
    return count_rules(supports, cfg.minconf, cfg.empty_premise)


def cmd_mine_bases(cfg: RunConfig) -> Report:
    ctx = read_fimi(cfg.input)
    minsup = cfg.minsup(ctx)
    ice = derive_closures(build_generator_lattice(mine_minimal_generators(ctx, minsup)),
                          ctx.labels)
    make = {
        "GBE": lambda: extract_gbe(ice, empty_premise=cfg.empty_premise),
        "GBA": lambda: extract_gba(ice, cfg.minconf, reduced=cfg.gba_reduce,
                                   empty_premise=cfg.empty_premise),
        "IGB": lambda: extract_igb(ice, cfg.minconf),
    }
    bases = [make[k]() for k in KINDS if k in cfg.kinds]
    ar = _ar_size(ctx, minsup, cfg)
    report = [{"kind": b.kind, "size": len(b),
               "compactness": None if ar is None else round(compactness(len(b), ar), 4)}
              for b in bases]
    notes = [f"AR={ar}" if ar is not None else "AR=? (guard exceeded, compactness omitted)"]
    notes += [f"{r['kind']}={r['size']}" + ("" if ar is None else f" comp={r['compactness']}")
              for r in report]
    if cfg.fmt == "json":
        data = json.loads(bases_to_json(bases, ice))
        data["report"] = {"AR": ar, "bases": report}
        return Report(json.dumps(data, indent=1) + "\n", tuple(notes))
    return Report(rules_to_csv(bases), tuple(notes))


def cmd_derive(cfg: RunConfig) -> Report:
    with open(cfg.input, encoding="utf-8") as fh:
        data = json.load(fh)
    ice = IcebergLattice.from_dict(data["iceberg"])
    merged = {}
    for raw in data["bases"]:
        b = base_from_dict(raw, ice)
        merged.update(derive_rules(b, ice, empty_premise=cfg.empty_premise))
    labels = ice.labels or tuple(str(i) for i in range(ice.n_items))
    keyed = sorted(merged.items(), key=lambda kv: (label_sort_key(labels, kv[0][0]),
                                                    label_sort_key(labels, kv[0][1])))
    note = f"rules={len(keyed)}"
    if cfg.fmt == "json":
        rows = [{"premise": labelled(labels, p), "conclusion": labelled(labels, c),
                 "support": s, "confidence": str(conf)} for (p, c), (s, conf) in keyed]
        return Report(json.dumps({"rules": rows}, indent=1) + "\n", (note,))
    return Report(_csv(["premise", "conclusion", "support", "confidence"],
                       [(_labels(labels, p), _labels(labels, c), s, str(conf))
                        for (p, c), (s, conf) in keyed]), (note,))


def cmd_mine_dcpr(cfg: RunConfig) -> Report:
    ctx = read_fimi(cfg.input)
    rep = dcpr_mine(ctx, cfg.minsup(ctx), singleton_border=cfg.singleton_border)
    note = f"IFDE={len(rep.ifde)} IFDA={len(rep.ifda)} IEF={rep.n_essential}"
    if cfg.fmt == "json":
        return Report(rep.to_json(indent=1) + "\n", (note,))
    key = lambda kv: label_sort_key(ctx.labels, kv[0])
    rows = [("IFDE", _labels(ctx.labels, x), d) for x, d in sorted(rep.ifde.items(), key=key)]
    rows += [("IFDA", _labels(ctx.labels, x), d) for x, d in sorted(rep.ifda.items(), key=key)]
    return Report(_csv(["part", "items", "supp_disj"], rows), (note,))


def cmd_mine_ndi(cfg: RunConfig) -> Report:
    ctx = read_fimi(cfg.input)
    rep = mine_ndi(ctx, cfg.minsup(ctx), cap=cfg.ndi_cap)
    note = f"NDI={len(rep)}"
    if cfg.fmt == "json":
        return Report(rep.to_json(indent=1) + "\n", (note,))
    rows = sorted(rep.supports.items(), key=lambda kv: label_sort_key(ctx.labels, kv[0]))
    return Report(_csv(["items", "support"], [(_labels(ctx.labels, x), s) for x, s in rows]),
                  (note,))


def compare_row(ctx, minsup, ndi_cap=DEFAULT_CAP, singleton_border=False) -> dict:
    """Sizes of the four concise representations on one context.

    ``IFF`` and ``NDI`` count the empty itemset; ``BD+`` is the number of
    maximal frequent itemsets.
    """
    t0 = time.perf_counter()
    mined = mine_minimal_generators(ctx, minsup)
    ice = derive_closures(build_generator_lattice(mined))
    rep = dcpr_mine(ctx, minsup, singleton_border=singleton_border)
    ndi = mine_ndi(ctx, minsup, cap=ndi_cap)
    n_if = count_frequent(ctx, minsup)
    row = {
        "minsup": minsup,
        "IF": n_if,
        "IFDE": len(rep.ifde),
        "IFDA": len(rep.ifda),
        "IFD": len(rep),
        "IFF": len(ice),
        "NDI": len(ndi),
        "IEF": rep.n_essential,
        "BD+": len(ice.maximal()),
    }
    row["IEF+BD+"] = row["IEF"] + row["BD+"]
    for key in ("IFD", "IFF", "NDI", "IEF+BD+"):
        row[f"{key}/IF"] = round(row[key] / n_if, 4) if n_if else 0.0
    row["seconds"] = round(time.perf_counter() - t0, 2)
    return row


def cmd_compare_reps(cfg: RunConfig) -> Report:
    ctx = read_fimi(cfg.input)
    row = {"input": cfg.input,
           **compare_row(ctx, cfg.minsup(ctx), cfg.ndi_cap, cfg.singleton_border)}
    if cfg.fmt == "json":
        return Report(json.dumps(row, indent=1) + "\n")
    return Report(_csv(list(row), [list(row.values())]))


COMMANDS = {
    "closed": (cmd_mine_closed, "frequent closed itemsets with their generators"),
    "bases": (cmd_mine_bases, "generic bases of association rules"),
    "dcpr": (cmd_mine_dcpr, "disjunctive-closure concise representation"),
    "ndi": (cmd_mine_ndi, "frequent non-derivable itemsets"),
    "compare": (cmd_compare_reps, "sizes of the concise representations"),
    "derive": (cmd_derive, "all valid rules from a saved JSON base file"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="galoismine")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--input", required=True,
                        help="FIMI file (JSON base file for derive)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="write here instead of stdout")
        if name == "derive":
            sp.add_argument("--empty-premise", action="store_true",
                            help="keep derived rules with an empty premise")
            continue
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--minsup-count", type=int)
        g.add_argument("--minsup-pct", type=float)
        sp.add_argument("--rounding", choices=("ceil", "floor"), default="ceil",
                        help="how a percentage turns into a count")
        if name == "bases":
            sp.add_argument("--minconf", default="0.5")
            sp.add_argument("--empty-premise", action="store_true",
                            help="keep empty-premise rules in GBE, GBA and the AR count")
            sp.add_argument("--gba-reduce", action="store_true",
                            help="only immediate successors in GBA")
            sp.add_argument("--kinds", help="comma list among GBE,GBA,IGB")
        if name in ("ndi", "compare"):
            sp.add_argument("--ndi-cap", type=int, default=DEFAULT_CAP)
        if name in ("dcpr", "compare"):
            sp.add_argument("--singleton-border", action="store_true",
                            help="also add closures of infrequent single items")
    return p


def run(cfg: RunConfig) -> Report:
    return COMMANDS[cfg.command][0](cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        report = run(cfg)
    except (ValueError, CapacityError, OSError, KeyError) as exc:
        print(f"galoismine: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(report.text)
    else:
        sys.stdout.write(report.text)
    for line in report.notes:
        print(line, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
