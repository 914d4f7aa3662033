"""Brute-force enumeration of ASMs and symmetry-class members.

Two independent routes are provided:

* :func:`enumerate_symmetric` fills an n x n matrix cell by cell in row-major
  order, tracking row- and column-prefix states in {0, 1}; cells whose orbit
  under the class subgroup contains an earlier cell are copied, not chosen.
* :func:`enumerate_class` enumerates the integer points of the core system
  and assembles them.

Agreement of the two routes is the central oracle check of the package.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .asm import SignMatrix, SymmetryClass, is_member
from .core import CoreVector, assemble_sign, core_positions
from .lp import LPSolver
from .system import EQ, GE, LE, ConstraintSystem

__all__ = [
    "CAPS",
    "CapExceeded",
    "EnumerationReport",
    "max_n_for",
    "enumerate_asms",
    "enumerate_symmetric",
    "enumerate_class",
    "integer_points",
    "min_cost_brute",
    "class_report",
]

CAPS = {
    SymmetryClass.ASM: 6,
    SymmetryClass.VSASM: 9,
    SymmetryClass.TSASM: 9,
    SymmetryClass.VHSASM: 11,
    SymmetryClass.HTSASM: 6,
    SymmetryClass.QTSASM: 6,
    SymmetryClass.DSASM: 6,
    SymmetryClass.DASASM: 7,
}


class CapExceeded(ValueError):
    pass


def max_n_for(cls: SymmetryClass, override: int | None = None) -> int:
    """Per-class cap, overridden by the argument or the SYMPOLY_MAX_N variable."""
    if override is not None:
        return override
    env = os.environ.get("SYMPOLY_MAX_N")
    if env:
        return int(env)
    return CAPS[cls]


def _check_cap(cls: SymmetryClass, n: int, max_n: int | None) -> None:
    cap = max_n_for(cls, max_n)
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap} for {cls.value}")
    if n < 1:
        raise ValueError("n must be at least 1")


@dataclass(frozen=True)
class EnumerationReport:
    cls: SymmetryClass
    n: int
    count: int
    members: tuple[SignMatrix, ...]


def _sort_key(m: SignMatrix) -> tuple[int, ...]:
    return m.flat()


# --- direct matrix backtracking ----------------------------------------------


def _orbit_sources(cls: SymmetryClass, n: int) -> list[int]:
    """For each flat cell, the smallest flat index in its orbit."""
    group = cls.subgroup()
    out = []
    for i in range(n):
        for j in range(n):
            orbit = [a * n + b for a, b in (g.source(n, i, j) for g in group)]
            out.append(min(orbit))
    return out


def enumerate_symmetric(cls: SymmetryClass, n: int, max_n: int | None = None) -> list[SignMatrix]:
    """Members of ``cls`` by direct backtracking over the full matrix."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if max_n is not None and n > max_n:
        raise CapExceeded(f"n={n} exceeds the cap {max_n}")
    src = _orbit_sources(cls, n)
    vals = [0] * (n * n)
    col = [0] * n
    found: list[SignMatrix] = []
    last = n - 1

    def cell(t: int, rowsum: int) -> None:
        if t == n * n:
            m = SignMatrix.from_flat(n, vals)
            if is_member(m, cls):
                found.append(m)
            return
        i, j = divmod(t, n)
        if src[t] < t:
            options = (vals[src[t]],)
        elif i == last:
            options = (1 - col[j],)
        else:
            options = (0, 1, -1)
        for v in options:
            s = rowsum + v
            c = col[j] + v
            if s not in (0, 1) or c not in (0, 1):
                continue
            if j == last and s != 1:
                continue
            if i == last and c != 1:
                continue
            vals[t] = v
            col[j] = c
            cell(t + 1, 0 if j == last else s)
            col[j] = c - v
        vals[t] = 0

    cell(0, 0)
    found.sort(key=_sort_key)
    return found


def enumerate_asms(n: int, max_n: int | None = None) -> list[SignMatrix]:
    """All n x n ASMs (row-by-row backtracking over column-prefix states)."""
    _check_cap(SymmetryClass.ASM, n, max_n)
    return enumerate_symmetric(SymmetryClass.ASM, n)


# --- integer points of a bounded system ---------------------------------------


def _bounds(system: ConstraintSystem) -> list[tuple[int, int]] | None:
    solver = LPSolver(system)
    if not solver.feasible:
        return None
    out = []
    N = system.num_vars
    for v in range(N):
        e = [0] * N
        e[v] = 1
        lo = solver.solve(e, "min")
        hi = solver.solve(e, "max")
        if not (lo.optimal and hi.optimal):
            raise ValueError("integer enumeration needs a bounded system")
        lb = -((-lo.value.numerator) // lo.value.denominator)
        ub = hi.value.numerator // hi.value.denominator
        out.append((lb, ub))
    return out


def integer_points(
    system: ConstraintSystem, values: Sequence[int] = (0, 1, -1), jobs: int = 1
) -> list[tuple[int, ...]]:
    """All integer points of a bounded system, searched in variable order.

    Candidate values are tried in the given order and clipped to LP bounds;
    each row is pruned with interval arithmetic over the unassigned variables.
    The result is sorted lexicographically.
    """
    N = system.num_vars
    if N == 0:
        return [()] if system.satisfied_by([]) else []
    bounds = _bounds(system)
    if bounds is None:
        return []
    rows = []
    for r in system.rows:
        lo = r.rhs if r.rel in (EQ, GE) else None
        hi = r.rhs if r.rel in (EQ, LE) else None
        rows.append((dict(r.coeffs), lo, hi))
    # rem[r][t]: (min, max) of the row's terms over variables >= t
    rem = []
    for co, _, _ in rows:
        mins = [Fraction(0)] * (N + 1)
        maxs = [Fraction(0)] * (N + 1)
        for t in range(N - 1, -1, -1):
            c = co.get(t, 0)
            lb, ub = bounds[t]
            a, b = c * lb, c * ub
            mins[t] = mins[t + 1] + min(a, b)
            maxs[t] = maxs[t + 1] + max(a, b)
        rem.append((mins, maxs))
    by_var = [[r for r, (co, _, _) in enumerate(rows) if t in co] for t in range(N)]
    cand = [[v for v in values if bounds[t][0] <= v <= bounds[t][1]] for t in range(N)]
    spec = (rows, rem, by_var, cand, N)
    if jobs > 1 and cand[0] and len(cand[0]) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_search_prefix, [(spec, v) for v in cand[0]]))
        found = [p for part in parts for p in part]
    else:
        found = _search(spec, None)
    found.sort()
    return found


def _search_prefix(args):
    spec, first = args
    return _search(spec, first)


def _search(spec, first: int | None) -> list[tuple[int, ...]]:
    rows, rem, by_var, cand, N = spec
    partial = [Fraction(0)] * len(rows)
    x = [0] * N
    out: list[tuple[int, ...]] = []

    def go(t: int) -> None:
        if t == N:
            out.append(tuple(x))
            return
        options = cand[t] if (t or first is None) else [first]
        for v in options:
            ok = True
            touched = by_var[t]
            for r in touched:
                co, lo, hi = rows[r]
                s = partial[r] + co[t] * v
                mins, maxs = rem[r]
                if (lo is not None and s + maxs[t + 1] < lo) or (hi is not None and s + mins[t + 1] > hi):
                    ok = False
                    break
            if not ok:
                continue
            for r in touched:
                partial[r] += rows[r][0][t] * v
            x[t] = v
            go(t + 1)
            for r in touched:
                partial[r] -= rows[r][0][t] * v
        x[t] = 0

    go(0)
    return out


def enumerate_class(
    cls: SymmetryClass, n: int, max_n: int | None = None, jobs: int = 1
) -> list[SignMatrix]:
    """Members of ``cls`` via integer points of its core system, assembled by phi.

    For QTSASM the base core system suffices: its integer points are exactly
    the cores.  Every assembled matrix is re-checked with :func:`is_member`,
    which also discards the spurious cores of even-size VSASM/VHSASM/TSASM.
    """
    from .hrep import build_core

    _check_cap(cls, n, max_n)
    pattern = core_positions(cls, n)
    system = build_core(cls, n)
    members = []
    for pt in integer_points(system, jobs=jobs):
        try:
            m = assemble_sign(CoreVector.of(pattern, pt))
        except ValueError:
            continue
        if is_member(m, cls):
            members.append(m)
    members.sort(key=_sort_key)
    return members


def class_report(cls: SymmetryClass, n: int, max_n: int | None = None, jobs: int = 1) -> EnumerationReport:
    members = tuple(enumerate_class(cls, n, max_n, jobs))
    return EnumerationReport(cls, n, len(members), members)


def _cost(m: SignMatrix, cost: Sequence[Sequence[int | Fraction]]) -> Fraction:
    return sum((Fraction(cost[i][j]) * m.entries[i][j] for i in range(m.n) for j in range(m.n)), Fraction(0))


def min_cost_brute(
    cls: SymmetryClass,
    n: int,
    cost: Sequence[Sequence[int | Fraction]],
    members: Sequence[SignMatrix] | None = None,
) -> tuple[Fraction, SignMatrix]:
    """Exact minimum of sum c_ij x_ij over all members (first argmin in lex order)."""
    if members is None:
        members = enumerate_class(cls, n)
    best: tuple[Fraction, SignMatrix] | None = None
    for m in members:
        v = _cost(m, cost)
        if best is None or v < best[0]:
            best = (v, m)
    if best is None:
        raise ValueError(f"{cls.value} is empty at n={n}")
    return best


def iter_members_json(members: Sequence[SignMatrix]) -> Iterator[str]:
    from .asm import matrix_to_json

    for m in members:
        yield matrix_to_json(m)
