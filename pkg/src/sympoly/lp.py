"""Exact two-phase simplex over the rationals.

The tableau is kept fraction-free: the true tableau is ``M / d`` where ``M``
is an integer matrix and ``d > 0`` the current pivot denominator.  A pivot on
``(p, q)`` leaves row ``p`` untouched and replaces every other row by
``(M[i] * M[p, q] - M[i, q] * M[p]) / d``; the division is always exact.
Entries are int64 while they stay small and switch to Python integers
(object dtype) before any product could overflow.

Variables of the system are free.  Each row ``a x <= b`` gets a slack
``s >= 0`` and each equality row a slack fixed at zero.  Free variables are
pivoted into the basis first and never leave it; the remaining LP lives on
the slacks and is solved with Bland's rule in both phases.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .system import EQ, GE, ConstraintSystem, Row

__all__ = [
    "LPResult",
    "LPSolver",
    "lp_solve",
    "is_implicit_equality",
    "is_redundant",
    "implicit_equalities",
    "PivotLimitExceeded",
    "pivot_count",
]

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"

PIVOT_CEILING = 10**7
_SAFE = 1 << 31
_pivots = 0

_FREE, _NONNEG, _FIXED, _ART = 0, 1, 2, 3


class PivotLimitExceeded(RuntimeError):
    pass


def pivot_count() -> int:
    """Total pivots performed in this process (checked against PIVOT_CEILING)."""
    return _pivots


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _int_row(row: Row, num_vars: int) -> tuple[list[int], int]:
    r = row.as_le() if row.rel == GE else row
    den = lcm(r.rhs.denominator, *(c.denominator for _, c in r.coeffs))
    dense = [0] * num_vars
    for k, c in r.coeffs:
        dense[k] = int(c * den)
    return dense, int(r.rhs * den)


class _Tableau:
    def __init__(self, M: np.ndarray, kinds: list[int], basis: list[int]):
        self.M = M
        self.d = 1
        self.kinds = kinds
        self.basis = basis

    def copy(self) -> _Tableau:
        t = _Tableau(self.M.copy(), list(self.kinds), list(self.basis))
        t.d = self.d
        return t

    def pivot(self, p: int, q: int) -> None:
        global _pivots
        _pivots += 1
        if _pivots > PIVOT_CEILING:
            raise PivotLimitExceeded("simplex pivot ceiling reached")
        M = self.M
        if M.dtype != object and int(np.abs(M).max()) >= _SAFE:
            M = self.M = M.astype(object)
        piv = M[p, q]
        col = M[:, q].copy()
        rowp = M[p].copy()
        M *= piv
        M -= np.outer(col, rowp)
        M //= self.d
        M[p] = rowp
        self.d = int(piv)
        if self.d < 0:
            np.negative(M, out=M)
            self.d = -self.d
        self.basis[p] = q

    def value(self, r: int) -> Fraction:
        return Fraction(int(self.M[r, -1]), self.d)

    def run(self, eligible: np.ndarray, obj_row: int) -> str:
        """Bland's rule on the objective row (maximisation form: enter on negative)."""
        M = self.M
        restricted = None
        while True:
            M = self.M
            R = M[obj_row, :-1]
            cand = np.flatnonzero(eligible & (R < 0))
            if cand.size == 0:
                return OPTIMAL
            q = int(cand[0])
            restricted = [r for r in range(obj_row) if self.kinds[self.basis[r]] != _FREE and M[r, q] > 0]
            if not restricted:
                return UNBOUNDED
            best = None
            for r in restricted:
                num, den = int(M[r, -1]), int(M[r, q])
                if best is None:
                    best = (r, num, den)
                    continue
                _, bn, bd = best
                lhs, rhs = num * bd, bn * den
                if lhs < rhs or (lhs == rhs and self.basis[r] < self.basis[best[0]]):
                    best = (r, num, den)
            self.pivot(best[0], q)


class LPSolver:
    """Exact LP over one constraint system; phase one is done once and reused."""

    def __init__(self, system: ConstraintSystem):
        self.system = system
        N, m = system.num_vars, len(system.rows)
        self.num_vars = N
        cols = N + m
        A = [[0] * (cols + 1) for _ in range(m)]
        kinds = [_FREE] * N + [_NONNEG] * m
        for r, row in enumerate(system.rows):
            dense, b = _int_row(row, N)
            A[r][:N] = dense
            A[r][N + r] = 1
            A[r][-1] = b
            if row.rel == EQ:
                kinds[N + r] = _FIXED
        M = np.array(A, dtype=np.int64).reshape(m, cols + 1) if m else np.zeros((0, cols + 1), dtype=np.int64)
        if m and int(np.abs(M).max()) >= _SAFE:
            M = np.array(A, dtype=object).reshape(m, cols + 1)
        t = _Tableau(M, kinds, [N + r for r in range(m)])

        # Pivot every free variable into the basis, preferring equality rows.
        for j in range(N):
            col = t.M[:, j]
            nz = [r for r in range(m) if col[r] != 0 and t.kinds[t.basis[r]] != _FREE]
            if not nz:
                continue
            fixed = [r for r in nz if t.kinds[t.basis[r]] == _FIXED]
            t.pivot((fixed or nz)[0], j)

        self.feasible = self._phase_one(t)
        self._tab = t

    def _phase_one(self, t: _Tableau) -> bool:
        m = t.M.shape[0]
        bad = []
        for r in range(m):
            kind = t.kinds[t.basis[r]]
            if kind == _FIXED or (kind == _NONNEG and t.M[r, -1] < 0):
                bad.append(r)
        if not bad:
            return True
        for r in bad:
            if t.M[r, -1] < 0:
                t.M[r] = -t.M[r]
        ncols = t.M.shape[1]
        art = np.zeros((m, len(bad)), dtype=t.M.dtype)
        for a, r in enumerate(bad):
            art[r, a] = t.d
        obj = np.zeros((1, ncols + len(bad)), dtype=t.M.dtype)
        M = np.hstack([t.M[:, :-1], art, t.M[:, -1:]])
        M = np.vstack([M, obj])
        first_art = ncols - 1
        for a, r in enumerate(bad):
            M[m, first_art + a] = t.d
            t.basis[r] = first_art + a
        t.kinds = t.kinds + [_ART] * len(bad)
        for r in bad:
            M[m] -= M[r]
        t.M = M
        eligible = np.array([k == _NONNEG for k in t.kinds], dtype=bool)
        t.run(eligible, m)
        if t.M[m, -1] < 0:
            return False
        # Drive zero-level artificials out of the basis where possible.
        for r in range(m):
            if t.kinds[t.basis[r]] != _ART:
                continue
            basic = set(t.basis)
            row = t.M[r, :-1]
            for j in np.flatnonzero(row != 0):
                j = int(j)
                if t.kinds[j] == _NONNEG and j not in basic:
                    t.pivot(r, j)
                    break
        t.M = t.M[:m]
        return True

    def solve(self, objective: Sequence, sense: str = "min") -> LPResult:
        if len(objective) != self.num_vars:
            raise ValueError("objective length does not match the number of variables")
        if not self.feasible:
            return LPResult(INFEASIBLE)
        if sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        cf = [Fraction(c) for c in objective]
        den = lcm(*(c.denominator for c in cf)) if cf else 1
        c = [int(v * den) for v in cf]
        if sense == "min":
            c = [-v for v in c]
        t = self._tab.copy()
        m, ncols = t.M.shape
        N = self.num_vars
        obj = [0] * ncols
        R = np.array(obj, dtype=object)
        R[:N] = [-t.d * v for v in c]
        for r in range(m):
            b = t.basis[r]
            if b < N and c[b] != 0:
                R = R + c[b] * t.M[r].astype(object)
        basic = set(t.basis)
        for j in range(N):
            if j not in basic and R[j] != 0:
                return LPResult(UNBOUNDED)
        dtype = t.M.dtype
        if dtype != object and max(abs(int(v)) for v in R) >= _SAFE:
            dtype = object
        t.M = np.vstack([t.M.astype(dtype), R.astype(dtype).reshape(1, -1)])
        eligible = np.array([k == _NONNEG for k in t.kinds], dtype=bool)
        status = t.run(eligible, m)
        if status != OPTIMAL:
            return LPResult(status)
        x = [Fraction(0)] * N
        for r in range(m):
            if t.basis[r] < N:
                x[t.basis[r]] = t.value(r)
        value = sum((a * b for a, b in zip(cf, x)), Fraction(0))
        return LPResult(OPTIMAL, value, tuple(x))


def lp_solve(system: ConstraintSystem, objective: Sequence, sense: str = "min") -> LPResult:
    return LPSolver(system).solve(objective, sense)


def _objective_for(row: Row, num_vars: int) -> list[Fraction]:
    return row.dense(num_vars)


def is_implicit_equality(system: ConstraintSystem, row_index: int, solver: LPSolver | None = None) -> bool:
    """True iff the row is tight at every feasible point."""
    row = system.rows[row_index]
    if row.rel == EQ:
        return True
    solver = solver or LPSolver(system)
    if not solver.feasible:
        raise ValueError("system is infeasible")
    sense = "min" if row.rel != GE else "max"
    res = solver.solve(_objective_for(row, system.num_vars), sense)
    return res.optimal and res.value == row.rhs


def implicit_equalities(system: ConstraintSystem) -> list[int]:
    """Indices of inequality rows that hold with equality on the whole polyhedron."""
    solver = LPSolver(system)
    if not solver.feasible:
        raise ValueError("system is infeasible")
    return [i for i in system.inequalities if is_implicit_equality(system, i, solver)]


def is_redundant(system: ConstraintSystem, row_index: int) -> bool:
    """True iff the remaining rows already imply this row."""
    row = system.rows[row_index]
    rest = LPSolver(system.without(row_index))
    if not rest.feasible:
        return True
    obj = _objective_for(row, system.num_vars)
    if row.rel in (EQ, GE):
        lo = rest.solve(obj, "min")
        if not lo.optimal or lo.value < row.rhs:
            return False
    if row.rel in (EQ, "<="):
        hi = rest.solve(obj, "max")
        if not hi.optimal or hi.value > row.rhs:
            return False
    return True
