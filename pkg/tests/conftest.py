import os
import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from galoismine.context import ExtractionContext

ROOT = Path(__file__).resolve().parents[1]
ITEMS = "ABCDEFGH"


# reference contexts ------------------------------------------------------------
def ctx_intro():
    return ExtractionContext.from_strings(["ABCD", "CDE", "ABEF", "ABCDEF", "CDF"])


def ctx_generators():
    return ExtractionContext.from_strings(["ACD", "BCE", "ABCE", "BE", "ABCE"])


def ctx_seven():
    return ExtractionContext.from_strings(["A", "AB", "AC", "AD", "ABC", "ABD", "ACD"])


def ctx_nine():
    return ExtractionContext.from_strings(["A", "AD", "AC", "ABC", "AB", "BD", "BC", "C", "CD"])


@pytest.fixture
def intro():
    return ctx_intro()


@pytest.fixture
def gen_ctx():
    return ctx_generators()


@pytest.fixture
def seven():
    return ctx_seven()


@pytest.fixture
def nine():
    return ctx_nine()


# random contexts ---------------------------------------------------------------
def random_context(rng: random.Random, max_items=8, max_rows=12, declare_all=True):
    n_items = rng.randint(1, max_items)
    n_rows = rng.randint(0, max_rows)
    dens = rng.choice([0.2, 0.4, 0.6, 0.8])
    rows = [[ITEMS[i] for i in range(n_items) if rng.random() < dens] for _ in range(n_rows)]
    items = ITEMS[:n_items] if declare_all else None
    return ExtractionContext.from_transactions(rows, items=items)


def suite(n=200, seed=20240601):
    """The fixed 200-context suite: ``(ctx, minsup, minconf)`` triples cover
    every minsup in {1, 2, 3} and minconf in {0.5, 0.8, 1.0}."""
    rng = random.Random(seed)
    out = []
    for k in range(n):
        ctx = random_context(rng)
        out.append((ctx, 1 + k % 3, ("0.5", "0.8", "1.0")[(k // 3) % 3]))
    return out


@st.composite
def contexts(draw, max_items=6, max_rows=10, declare_all=True):
    n_items = draw(st.integers(1, max_items))
    rows = draw(st.lists(st.sets(st.integers(0, n_items - 1)), max_size=max_rows))
    items = ITEMS[:n_items] if declare_all else None
    return ExtractionContext.from_transactions(
        [[ITEMS[i] for i in sorted(r)] for r in rows], items=items)


def itemsets_of(ctx, draw):
    return frozenset(draw(st.sets(st.integers(0, ctx.n_items - 1))))


# benchmark data ----------------------------------------------------------------
def data_path(name):
    base = os.environ.get("GALOISMINE_DATA")
    for d in ([Path(base)] if base else []) + [ROOT / "data"]:
        p = d / f"{name}.dat"
        if p.exists():
            return p
    return None


# acceptance summary ------------------------------------------------------------
_RESULTS = []


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    ok = call.excinfo is None
    detail = "" if ok else str(call.excinfo.value).splitlines()[0][:120]
    _RESULTS.append((marker.args[0], item.name, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, name, ok, detail in sorted(_RESULTS, key=lambda r: r[0]):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {name}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
