"""Exact rational linear algebra for configuration systems.

Nothing here touches floating point: rank uses fraction-free (Bareiss)
elimination on integers, the nullspace comes from an exact reduced row
echelon form, and feasibility of the normalized system is decided by a
phase-one simplex over :class:`fractions.Fraction` with Bland's rule.
Every certificate can be re-checked with :func:`verify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .configuration import EquationSystem
from .errors import NotInfeasible, ShapeMismatch

Rational = Fraction


@dataclass(frozen=True)
class NullspaceVector:
    values: tuple


@dataclass(frozen=True)
class NormalizedSolution:
    values: tuple


@dataclass(frozen=True)
class RankFull:
    rank: int
    column_count: int


@dataclass(frozen=True)
class FarkasDual:
    """Row weights ``y`` over ``[A; 1]`` with ``y^T [A; 1] > 0`` columnwise and ``y[-1] <= 0``."""

    y: tuple


Certificate = Union[NullspaceVector, NormalizedSolution, RankFull, FarkasDual]


def _as_rows(matrix) -> list[list]:
    if isinstance(matrix, EquationSystem):
        return [list(r) for r in matrix.dense().tolist()]
    return [list(r) for r in matrix]


def _integer_rows(rows: list[list]) -> list[list[int]]:
    out = []
    for r in rows:
        fr = [Fraction(v) for v in r]
        scale = math.lcm(*(v.denominator for v in fr)) if fr else 1
        out.append([int(v * scale) for v in fr])
    return out


def rank(matrix) -> int:
    """Exact rank by Bareiss fraction-free elimination."""
    a = _integer_rows(_as_rows(matrix))
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                # exact division is the Bareiss invariant
                a[i][j] = (p * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def rref(matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and its pivot columns."""
    a = [[Fraction(v) for v in row] for row in _as_rows(matrix)]
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def nonzero_solution(system: EquationSystem) -> Certificate:
    """A nullspace vector (first free column set to 1), or ``RankFull`` when none exists."""
    h = system.homogeneous()
    ncols = len(h.columns)
    if not h.rows:
        return NullspaceVector(tuple(Fraction(int(c == 0)) for c in range(ncols)))
    reduced, pivots = rref(h)
    if len(pivots) == ncols:
        return RankFull(len(pivots), ncols)
    free = next(c for c in range(ncols) if c not in pivots)
    v = [Fraction(0)] * ncols
    v[free] = Fraction(1)
    for row, p in zip(reduced, pivots):
        v[p] = -row[free]
    return NullspaceVector(tuple(v))


def nullspace_basis(system: EquationSystem) -> list[tuple]:
    h = system.homogeneous()
    ncols = len(h.columns)
    reduced, pivots = rref(h) if h.rows else ([], [])
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[free]
        basis.append(tuple(v))
    return basis


@dataclass
class _PhaseOne:
    values: Optional[tuple]
    duals: tuple
    objective: Fraction


def _phase_one(system: EquationSystem) -> _PhaseOne:
    """Minimize the sum of artificials for ``[A; 1] v = e_last, v >= 0``."""
    aug = system.with_normalization()
    mat = aug.dense().tolist()
    b = aug.rhs()
    nr, nv = len(mat), len(aug.columns)
    # columns: nv structural, then nr artificials
    t = [[Fraction(v) for v in mat[i]] + [Fraction(int(i == k)) for k in range(nr)] for i in range(nr)]
    rhs = [Fraction(v) for v in b]
    basis = [nv + i for i in range(nr)]
    cost = [Fraction(0)] * nv + [Fraction(1)] * nr
    ncols = nv + nr

    while True:
        duals = _duals(t, basis, cost, nv, nr)
        entering = None
        for j in range(ncols):
            if j in basis:
                continue
            reduced_cost = cost[j] - sum(duals[i] * _column_entry(mat, i, j, nv) for i in range(nr))
            if reduced_cost < 0:
                entering = j
                break
        if entering is None:
            break
        best = None
        for i in range(nr):
            if t[i][entering] > 0:
                ratio = rhs[i] / t[i][entering]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # unbounded cannot happen: objective is bounded below by 0
            raise AssertionError("phase-one simplex reported an unbounded direction")
        r = best[1]
        piv = t[r][entering]
        t[r] = [v / piv for v in t[r]]
        rhs[r] /= piv
        for i in range(nr):
            if i != r and t[i][entering] != 0:
                f = t[i][entering]
                t[i] = [x - f * y for x, y in zip(t[i], t[r])]
                rhs[i] -= f * rhs[r]
        basis[r] = entering

    objective = sum((rhs[i] for i in range(nr) if basis[i] >= nv), Fraction(0))
    values = None
    if objective == 0:
        v = [Fraction(0)] * nv
        for i in range(nr):
            if basis[i] < nv:
                v[basis[i]] = rhs[i]
        values = tuple(v)
    return _PhaseOne(values, tuple(_duals(t, basis, cost, nv, nr)), objective)


def _column_entry(mat, i, j, nv) -> int:
    if j < nv:
        return mat[i][j]
    return int(j - nv == i)


def _duals(t, basis, cost, nv, nr) -> list[Fraction]:
    # the artificial block of the tableau holds B^-1, so y^T = c_B^T B^-1
    return [sum((cost[basis[i]] * t[i][nv + k] for i in range(nr)), Fraction(0)) for k in range(nr)]


def normalized_solution(system: EquationSystem) -> Optional[NormalizedSolution]:
    result = _phase_one(system)
    if result.values is None:
        return None
    return NormalizedSolution(result.values)


def farkas(system: EquationSystem) -> FarkasDual:
    """Dual certificate that ``A v = 0, sum(v) = 1, v >= 0`` has no solution."""
    result = _phase_one(system)
    if result.values is not None:
        raise NotInfeasible("the normalized system is feasible")
    # phase-one duals y satisfy y^T [A;1] <= 0 and y_last > 0; flip the sign and
    # drop the normalization weight so that every column becomes strictly positive
    y = [-v for v in result.duals]
    y[-1] = Fraction(0)
    return FarkasDual(tuple(y))


def _matvec(rows: Sequence, v: Sequence) -> list[Fraction]:
    return [sum((c * v[col] for col, c in row), Fraction(0)) for row in rows]


def _column_weights(rows: Sequence, y: Sequence, ncols: int) -> list[Fraction]:
    out = [Fraction(0)] * ncols
    for row, w in zip(rows, y):
        if w:
            for col, c in row:
                out[col] += w * c
    return out


def verify(system: EquationSystem, certificate: Certificate) -> bool:
    """Re-check a certificate against the system from scratch."""
    h = system.homogeneous()
    ncols = len(h.columns)
    if isinstance(certificate, RankFull):
        if certificate.column_count != ncols:
            raise ShapeMismatch(f"certificate has {certificate.column_count} columns, system {ncols}")
        return rank(h) == certificate.rank == ncols
    if isinstance(certificate, FarkasDual):
        aug = h.with_normalization()
        if len(certificate.y) != len(aug.rows):
            raise ShapeMismatch(f"dual has {len(certificate.y)} entries, system {len(aug.rows)} rows")
        y = [Fraction(v) for v in certificate.y]
        weights = _column_weights(aug.rows, y, ncols)
        return y[-1] <= 0 and all(w > 0 for w in weights)
    values = [Fraction(v) for v in certificate.values]
    if len(values) != ncols:
        raise ShapeMismatch(f"vector has {len(values)} entries, system {ncols} columns")
    if any(r != 0 for r in _matvec(h.rows, values)):
        return False
    if isinstance(certificate, NullspaceVector):
        return any(values)
    return all(v >= 0 for v in values) and sum(values) == 1


@dataclass(frozen=True)
class Verdicts:
    nonzero: Certificate
    normalized: Certificate

    @property
    def has_nonzero(self) -> bool:
        return isinstance(self.nonzero, NullspaceVector)

    @property
    def has_normalized(self) -> bool:
        return isinstance(self.normalized, NormalizedSolution)

    @property
    def divergent(self) -> bool:
        return self.has_nonzero != self.has_normalized


def decide(system: EquationSystem) -> Verdicts:
    """Both verdicts with certificates; the normalized side is a solution or a Farkas dual."""
    nz = nonzero_solution(system)
    result = _phase_one(system)
    if result.values is not None:
        norm: Certificate = NormalizedSolution(result.values)
    else:
        norm = farkas(system)
    return Verdicts(nz, norm)


def rational_to_json(q) -> dict:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def rational_from_json(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def certificate_to_json(cert: Certificate) -> dict:
    if isinstance(cert, RankFull):
        return {"kind": "rank_full", "rank": cert.rank, "column_count": cert.column_count}
    if isinstance(cert, FarkasDual):
        return {"kind": "farkas_dual", "y": [rational_to_json(v) for v in cert.y]}
    kind = "nullspace_vector" if isinstance(cert, NullspaceVector) else "normalized_solution"
    return {"kind": kind, "values": [rational_to_json(v) for v in cert.values]}


def certificate_from_json(d: dict) -> Certificate:
    kind = d["kind"]
    if kind == "rank_full":
        return RankFull(int(d["rank"]), int(d["column_count"]))
    if kind == "farkas_dual":
        return FarkasDual(tuple(rational_from_json(v) for v in d["y"]))
    values = tuple(rational_from_json(v) for v in d["values"])
    if kind == "nullspace_vector":
        return NullspaceVector(values)
    if kind == "normalized_solution":
        return NormalizedSolution(values)
    raise ValueError(f"unknown certificate kind {kind!r}")
