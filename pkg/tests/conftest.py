from __future__ import annotations

import numpy as np
import pytest

from lnuca.algebra import LaurentPoly, SymbolMatrix
from lnuca.core.rules import LinearRule


def lin(p: int, k: int, coeffs: dict) -> LinearRule:
    return LinearRule.from_offsets(p, k, coeffs)


def poly(p: int, d: int, terms: dict) -> LaurentPoly:
    return LaurentPoly(p, d, {(e,) if isinstance(e, int) else e: c for e, c in terms.items()})


def sym(p: int, d: int, rows) -> SymbolMatrix:
    return SymbolMatrix.from_rows([[poly(p, d, t) for t in r] for r in rows], p, d)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the lines are repeated in the terminal summary."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}: {detail}"
        print(line)
        _CRITERIA.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
