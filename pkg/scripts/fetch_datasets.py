"""Prepare benchmark contexts in FIMI format under ``data/``.

Chess is rebuilt from the UCI "King-Rook vs. King-Pawn" table shipped in
the ``keel_ds`` wheel: every ``column=value`` pair becomes one item, which
gives the usual 3196 transactions over 75 items.

Mushroom and Connect are not redistributed in any package reachable from
this environment.  Drop ``mushroom.dat`` and ``connect.dat`` (FIMI format)
into ``data/`` or point ``GALOISMINE_DATA`` at a directory holding them.

Usage::

    python scripts/fetch_datasets.py [--wheel PATH] [--out data]
"""
from __future__ import annotations

import argparse
import glob
import os
import subprocess
import sys
import tempfile
import zipfile

MEMBER = "keel_ds/data/balanced/raw/chess.dat"


def find_wheel(path=None):
    if path:
        return path
    tmp = tempfile.mkdtemp()
    subprocess.run([sys.executable, "-m", "pip", "download", "--no-deps", "-q",
                    "keel_ds==0.2.5", "-d", tmp], check=True)
    return glob.glob(os.path.join(tmp, "keel_ds-*.whl"))[0]


def chess_rows(wheel):
    raw = zipfile.ZipFile(wheel).read(MEMBER).decode("latin-1")
    rows = []
    for line in raw.splitlines():
        vals = [v.strip() for v in line.split(",")]
        if len(vals) != 37:
            continue
        rows.append(vals)
    return rows


def to_fimi(rows):
    ids = {}
    lines = []
    for vals in rows:
        items = []
        for col, v in enumerate(vals):
            key = (col, v)
            if key not in ids:
                ids[key] = len(ids) + 1
            items.append(ids[key])
        lines.append(" ".join(map(str, sorted(items))))
    return "\n".join(lines) + "\n", len(ids)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--wheel", help="local keel_ds wheel (downloaded if omitted)")
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    rows = chess_rows(find_wheel(args.wheel))
    text, n_items = to_fimi(rows)
    dest = os.path.join(args.out, "chess.dat")
    with open(dest, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {dest}: {len(rows)} transactions, {n_items} items")
    for name in ("mushroom", "connect"):
        if not os.path.exists(os.path.join(args.out, f"{name}.dat")):
            print(f"{name}.dat missing: supply it in FIMI format to run its benchmark")


if __name__ == "__main__":
    main()
