"""Exact rank, determinant and affine-hull dimension over the rationals."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

__all__ = ["integer_rows", "rank", "rank_by_fractions", "det", "affine_hull_dim"]

Number = int | Fraction


def integer_rows(rows: Sequence[Sequence[Number]]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (rank-preserving)."""
    out = []
    for r in rows:
        f = [Fraction(v) for v in r]
        m = lcm(*(v.denominator for v in f)) if f else 1
        out.append([int(v * m) for v in f])
    return out


def _bareiss_rank(a: list[list[int]]) -> int:
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    prev = 1
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, rows):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            for j in range(c + 1, cols):
                ai[j] = (ai[j] * p - f * ar[j]) // prev
            ai[c] = 0
        prev = p
        r += 1
        if r == rows:
            break
    return r


def rank(m: Sequence[Sequence[Number]]) -> int:
    """Rank by fraction-free (Bareiss) elimination, pivoting left to right."""
    a = integer_rows(m)
    if not a or not a[0]:
        return 0
    return _bareiss_rank(a)


def rank_by_fractions(m: Sequence[Sequence[Number]]) -> int:
    """Independent rank: Fraction Gauss-Jordan with pivots taken right to left."""
    a = [[Fraction(v) for v in row] for row in m]
    if not a or not a[0]:
        return 0
    rows, cols = len(a), len(a[0])
    used = [False] * rows
    r = 0
    for c in reversed(range(cols)):
        piv = next((i for i in reversed(range(rows)) if not used[i] and a[i][c] != 0), None)
        if piv is None:
            continue
        used[piv] = True
        r += 1
        pr = a[piv]
        for i in range(rows):
            if i != piv and a[i][c] != 0:
                f = a[i][c] / pr[c]
                a[i] = [x - f * y for x, y in zip(a[i], pr)]
    return r


def det(m: Sequence[Sequence[Number]]) -> Fraction:
    """Exact determinant of a square matrix (Bareiss with row swaps)."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    f = [[Fraction(v) for v in row] for row in m]
    a = integer_rows(f)
    scale = 1
    for row, src in zip(a, f):
        scale *= lcm(*(v.denominator for v in src))
    sign = 1
    prev = 1
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        p = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * p - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = p
    return Fraction(sign * a[n - 1][n - 1], scale)


def affine_hull_dim(points: Sequence[Sequence[Number]]) -> int:
    """Dimension of the affine hull: rank of {p - p0}."""
    if not points:
        raise ValueError("affine_hull_dim needs at least one point")
    p0 = [Fraction(v) for v in points[0]]
    diffs = [[Fraction(v) - a for v, a in zip(p, p0)] for p in points[1:]]
    return rank(diffs) if diffs else 0
