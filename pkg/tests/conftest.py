from fractions import Fraction
from pathlib import Path

import pytest

import pnpatch
from pnpatch import interpolate
from pnpatch.io import load_grid

DATA = Path(pnpatch.__file__).parent / "data" / "example_grid.json"

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE = {}


def record(num: int, title: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[num] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[num]
        line = f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {title}"
        terminalreporter.write_line(line + (f" -- {detail}" if detail else ""))


def uniform_scales(grid, s):
    rows, cols = grid.shape
    s = Fraction(s)
    return grid.with_scales([[(s, s)] * cols for _ in range(rows)])


@pytest.fixture(scope="session")
def grid5():
    return load_grid(DATA)


@pytest.fixture(scope="session")
def network5(grid5):
    return interpolate(grid5)


@pytest.fixture(scope="session")
def half5(grid5):
    """Same data with every tangent scaled by 1/2."""
    return interpolate(uniform_scales(grid5, Fraction(1, 2)))


@pytest.fixture(scope="session")
def cli5(tmp_path_factory):
    """One `pnpatch interpolate` run on the shipped grid: (exit code, output dir, seconds)."""
    import time

    from pnpatch.cli import main

    out = tmp_path_factory.mktemp("interp5")
    t0 = time.perf_counter()
    code = main(["-q", "interpolate", "--input", str(DATA), "--output", str(out)])
    return code, out, time.perf_counter() - t0
