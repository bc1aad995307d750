import itertools
from fractions import Fraction

import pytest
import sympy

from amen import structures as st
from amen.configuration import ConfigurationPair

A, B = (1,), (2,)


@pytest.fixture
def f2_pair():
    return ConfigurationPair(st.FreeGroup(2), (st.LeftTranslation(A), st.LeftTranslation(B)), st.FirstLetter(2))


@pytest.fixture
def z6():
    return st.cyclic_group(6)


@pytest.fixture
def parity():
    return st.ExplicitPartition(([0, 2, 4], [1, 3, 5]))


def sympy_rank(dense) -> int:
    return sympy.Matrix(dense).rank()


def brute_force_feasible(dense) -> bool:
    """Vertex enumeration: {A v = 0, sum v = 1, v >= 0} is feasible iff some basic
    feasible solution exists, i.e. some set of independent columns solves the
    augmented system with a non-negative solution."""
    rows = [list(r) for r in dense] + [[1] * len(dense[0])]
    M = sympy.Matrix(rows)
    b = sympy.Matrix([0] * (len(rows) - 1) + [1])
    ncols = M.shape[1]
    for k in range(1, min(ncols, M.shape[0]) + 1):
        for cols in itertools.combinations(range(ncols), k):
            sub = M[:, list(cols)]
            if sub.rank() != k:
                continue
            try:
                sol, params = sub.gauss_jordan_solve(b)
            except ValueError:
                continue
            if params.shape[0] == 0 and all(v >= 0 for v in sol):
                return True
    return False


def frac(*xs):
    return tuple(Fraction(x) for x in xs)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title, detail in sorted(RESULTS):
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title} ({detail})")
