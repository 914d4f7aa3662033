"""Parity-constrained sign matrices and the cuts they generate for quarter-turn cores.

For (i, j) in D let z_ij be the row-prefix of row i up to column j written in
core variables.  A sign matrix S over D is valid when, for every core
position (i, j), sum_{j'>=j} s_{i,j'} + sum_{i'>=n+1-i} s_{j,i'} is even; the
combination sum s_ij z_ij then has even y-coefficients and

    (sum s_ij z_ij) / 2 <= floor((#{s = +1} - #{(i, n): s_in = -1}) / 2)

holds for every quarter-turn symmetric ASM core.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterator, Sequence

import numpy as np

from .asm import SymmetryClass
from .core import core_positions
from .hrep import build_core, qtsasm_domain, qtsasm_prefix
from .lp import LPSolver
from .system import LE, ConstraintSystem, Row

__all__ = [
    "QtsasmDomain",
    "CutSign",
    "MAX_CUT_N",
    "is_valid_sign",
    "cut_from_sign",
    "cut_via_recursion",
    "enumerate_valid_signs",
    "count_valid_signs",
    "canonical_cuts",
    "separate",
    "build_qtsasm_hull",
]

MAX_CUT_N = 5
_QT = SymmetryClass.QTSASM


@dataclass(frozen=True)
class QtsasmDomain:
    """Index set D (0-based, row-major) with the last column n_i of each row."""

    n: int
    positions: tuple[tuple[int, int], ...]
    row_ends: tuple[int, ...]

    @classmethod
    @lru_cache(maxsize=None)
    def of(cls, n: int) -> QtsasmDomain:
        k = n // 2
        pos = tuple((i - 1, j - 1) for i, j in qtsasm_domain(n))
        rows = max((i for i, _ in pos), default=-1) + 1
        ends = tuple(n if i < k else k for i in range(rows))
        return cls(n, pos, ends)

    @property
    def size(self) -> int:
        return len(self.positions)

    def index(self, i: int, j: int) -> int:
        return self.positions.index((i, j))


@dataclass(frozen=True)
class CutSign:
    domain: QtsasmDomain
    s: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.s) != self.domain.size or any(v not in (-1, 0, 1) for v in self.s):
            raise ValueError("sign vector must have one entry in {-1, 0, 1} per position of D")

    @classmethod
    def from_entries(cls, n: int, entries: dict[tuple[int, int], int]) -> CutSign:
        """Build from 1-based {(i, j): sign}; unspecified positions are 0."""
        dom = QtsasmDomain.of(n)
        s = [0] * dom.size
        for (i, j), v in entries.items():
            s[dom.index(i - 1, j - 1)] = v
        return cls(dom, tuple(s))


@lru_cache(maxsize=None)
def _matrices(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(parity matrix |C| x |D|, prefix matrix |D| x |C|, full-row mask over D)."""
    dom = QtsasmDomain.of(n)
    pattern = core_positions(_QT, n)
    index = pattern._index_map()
    y = lambda i, j: index[(i - 1, j - 1)]
    D1 = [(i + 1, j + 1) for i, j in dom.positions]
    dpos = {p: t for t, p in enumerate(D1)}
    parity = np.zeros((pattern.size, dom.size), dtype=np.int64)
    for c, (a, b) in enumerate(pattern.positions):
        i, j = a + 1, b + 1
        for jj in range(j, dom.row_ends[i - 1] + 1):
            parity[c, dpos[(i, jj)]] += 1
        for ii in range(n + 1 - i, n + 1):
            parity[c, dpos[(j, ii)]] += 1
    prefix = np.zeros((dom.size, pattern.size), dtype=np.int64)
    for t, (i, j) in enumerate(D1):
        for v, c in qtsasm_prefix(n, y, i, j).items():
            prefix[t, v] = c
    k = n // 2
    full = np.array([i <= k and j == n for i, j in D1], dtype=bool)
    return parity, prefix, full


def is_valid_sign(S: CutSign) -> bool:
    parity, _, _ = _matrices(S.domain.n)
    return bool(np.all((parity @ np.array(S.s, dtype=np.int64)) % 2 == 0))


def _rhs(s: Sequence[int], full: np.ndarray) -> int:
    plus = sum(1 for v in s if v == 1)
    minus_full = sum(1 for v, f in zip(s, full) if f and v == -1)
    return (plus - minus_full) // 2


def cut_from_sign(S: CutSign, tag: str = "qtsasm:cut") -> Row:
    """The cut generated by a valid sign matrix, in core variables (not yet reduced)."""
    n = S.domain.n
    _, prefix, full = _matrices(n)
    doubled = np.array(S.s, dtype=np.int64) @ prefix
    if np.any(doubled % 2):
        raise ValueError("sign matrix violates the parity condition")
    coeffs = {v: int(c) // 2 for v, c in enumerate(doubled) if c}
    return Row.build(coeffs, LE, _rhs(S.s, full), tag) if coeffs else Row((), LE, Fraction(_rhs(S.s, full)), tag)


def cut_via_recursion(S: CutSign) -> Row:
    """Same cut, rebuilding every z_ij from the one-step recursion in j."""
    n = S.domain.n
    k = n // 2
    pattern = core_positions(_QT, n)
    index = pattern._index_map()
    y = lambda i, j: index[(i - 1, j - 1)]
    z: dict[tuple[int, int], dict[int, int]] = {}
    for i, j in qtsasm_domain(n):
        prev = dict(z[(i, j - 1)]) if j > 1 else {}
        new = y(i, j) if j <= k else y(n + 1 - j, i)
        prev[new] = prev.get(new, 0) + 1
        z[(i, j)] = prev
    total: dict[int, int] = {}
    for (a, b), s in zip(S.domain.positions, S.s):
        for v, c in z[(a + 1, b + 1)].items():
            total[v] = total.get(v, 0) + s * c
    if any(c % 2 for c in total.values()):
        raise ValueError("sign matrix violates the parity condition")
    _, _, full = _matrices(n)
    return Row.build({v: c // 2 for v, c in total.items()}, LE, _rhs(S.s, full), "qtsasm:cut")


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > MAX_CUT_N:
        raise ValueError(f"sign enumeration is capped at n={MAX_CUT_N}")


@lru_cache(maxsize=None)
def _valid_sign_array(n: int) -> np.ndarray:
    """All valid signs, lexicographic in the flattened s (with -1 < 0 < 1)."""
    _check_n(n)
    parity, _, _ = _matrices(n)
    d = QtsasmDomain.of(n).size
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    codes = np.arange(3**d, dtype=np.int64)
    digits = np.empty((codes.size, d), dtype=np.int64)
    for p in range(d):
        digits[:, d - 1 - p] = (codes // 3**p) % 3 - 1
    ok = np.all((digits @ parity.T) % 2 == 0, axis=1)
    return digits[ok]


def enumerate_valid_signs(n: int) -> Iterator[CutSign]:
    dom = QtsasmDomain.of(n)
    for row in _valid_sign_array(n):
        yield CutSign(dom, tuple(int(v) for v in row))


def count_valid_signs(n: int) -> int:
    return int(_valid_sign_array(n).shape[0])


@lru_cache(maxsize=None)
def _variable_bounds(n: int) -> tuple[tuple[Fraction, Fraction], ...]:
    base = build_core(_QT, n)
    solver = LPSolver(base)
    out = []
    for v in range(base.num_vars):
        e = [0] * base.num_vars
        e[v] = 1
        out.append((solver.solve(e, "min").value, solver.solve(e, "max").value))
    return tuple(out)


def _all_cuts(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Halved coefficient rows and floored right-hand sides for every valid sign."""
    signs = _valid_sign_array(n)
    _, prefix, full = _matrices(n)
    doubled = signs @ prefix
    assert not np.any(doubled % 2), "parity condition does not give even coefficients"
    plus = (signs == 1).sum(axis=1)
    minus_full = ((signs == -1) & full).sum(axis=1)
    return doubled // 2, (plus - minus_full) // 2


@lru_cache(maxsize=None)
def canonical_cuts(n: int) -> tuple[Row, ...]:
    """Distinct non-trivial cuts after gcd reduction, minus rows implied by variable bounds.

    Each row is tagged ``qtsasm:cut:<t>`` with t the lexicographic index of
    the first valid sign that produces it.
    """
    _check_n(n)
    coef, rhs = _all_cuts(n)
    bounds = _variable_bounds(n)
    seen: dict[tuple, int] = {}
    out: list[Row] = []
    for t in range(coef.shape[0]):
        a = [int(v) for v in coef[t]]
        b = int(rhs[t])
        if not any(a):
            continue
        g = 0
        for v in a:
            g = gcd(g, v)
        a = [v // g for v in a]
        b = b // g
        key = (tuple(a), b)
        if key in seen:
            continue
        seen[key] = t
        worst = sum(max(c * lo, c * hi) for c, (lo, hi) in zip(a, bounds))
        if worst <= b:
            continue
        out.append(Row.build({v: c for v, c in enumerate(a) if c}, LE, b, f"qtsasm:cut:{t}"))
    return tuple(out)


def _reduced_cuts(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cuts of every valid sign divided by the gcd of their coefficients."""
    coef, rhs = _all_cuts(n)
    g = np.gcd.reduce(coef, axis=1)
    g[g == 0] = 1
    return coef // g[:, None], rhs // g


def separate(y: Sequence[Fraction | int], n: int) -> Row | None:
    """A most violated cut at y, or None when y satisfies every cut.

    Violation is measured on gcd-reduced cuts.  Ties go to the smaller
    coefficient norm, then to the lexicographically largest coefficient
    vector (cuts on earlier core variables first), then to the first sign.
    """
    _check_n(n)
    coef, rhs = _reduced_cuts(n)
    if coef.shape[1] == 0:
        return None
    yf = [Fraction(v) for v in y]
    L = lcm(*(v.denominator for v in yf))
    Y = np.array([int(v * L) for v in yf], dtype=object)
    # violation * L = coef . (y L) - rhs L, kept integral
    viol = coef.astype(object) @ Y - rhs.astype(object) * L
    best = max(viol)
    if best <= 0:
        return None
    norms = (coef * coef).sum(axis=1)
    ties = [t for t in range(len(viol)) if viol[t] == best]
    t = min(ties, key=lambda t: (int(norms[t]), tuple(-int(v) for v in coef[t]), t))
    a = [int(v) for v in coef[t]]
    return Row.build({v: c for v, c in enumerate(a) if c}, LE, int(rhs[t]), f"qtsasm:cut:{t}")


def violation(row: Row, y: Sequence) -> Fraction:
    return row.lhs(y) - row.rhs


def build_qtsasm_hull(n: int, prune_implied: bool = False) -> ConstraintSystem:
    """Base core system plus all canonical cut rows.

    With ``prune_implied`` cuts already implied by the base system (checked
    by LP) are dropped; the described polytope is unchanged.
    """
    _check_n(n)
    base = build_core(_QT, n)
    cuts = list(canonical_cuts(n))
    if prune_implied and cuts:
        solver = LPSolver(base)
        kept = []
        for r in cuts:
            res = solver.solve(r.dense(base.num_vars), "max")
            if not (res.optimal and res.value <= r.rhs):
                kept.append(r)
        cuts = kept
    return base.with_rows(cuts)
