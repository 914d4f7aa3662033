"""Matrices whose total unimodularity underlies the integrality results.

* laminar incidence: supports of the prefix rows of a core system, split into
  a row family and a column family, each laminar;
* digraph incidence: the DSASM system rewritten in the cumulative variables
  z_ij = sum_{i'<=i, j'>=j} y_i'j', where every row is a difference z_a - z_b.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .asm import SymmetryClass
from .hrep import build_core
from .linalg import det
from .rng import SplitMix64
from .system import parse_tag

__all__ = [
    "LAMINAR_CLASSES",
    "laminar_families",
    "laminar_incidence",
    "is_laminar",
    "dsasm_z_system",
    "dsasm_z_map",
    "digraph_incidence",
    "is_difference_matrix",
    "random_square_submatrices",
    "submatrix_dets",
]

LAMINAR_CLASSES = (SymmetryClass.ASM, SymmetryClass.VSASM, SymmetryClass.VHSASM, SymmetryClass.HTSASM)

_ROW_EQS = ("row-prefix", "row-sum", "mid-row-pref")
_COL_EQS = ("col-prefix", "col-sum", "mid-col-pref")


def laminar_families(cls: SymmetryClass, n: int) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """Distinct supports of the row-type and column-type rows of the core system."""
    if cls not in LAMINAR_CLASSES:
        raise ValueError(f"{cls.value} core system is not a laminar-pair system")
    fams: tuple[dict, dict] = ({}, {})
    for r in build_core(cls, n).rows:
        if any(c != 1 for _, c in r.coeffs):
            raise ValueError(f"row {r.tag} is not a 0/1 row")
        eq = parse_tag(r.tag)[0].split(":", 1)[1]
        side = 0 if eq in _ROW_EQS else 1 if eq in _COL_EQS else None
        if side is None:
            raise ValueError(f"unexpected row {r.tag}")
        fams[side].setdefault(frozenset(k for k, _ in r.coeffs), None)
    return list(fams[0]), list(fams[1])


def is_laminar(family: Sequence[frozenset[int]]) -> bool:
    for a in range(len(family)):
        for b in range(a + 1, len(family)):
            x, y = family[a], family[b]
            if x & y and not (x <= y or y <= x):
                return False
    return True


def laminar_incidence(cls: SymmetryClass, n: int) -> list[list[int]]:
    """Incidence matrix (sets x core variables) of the union of both families."""
    rows, cols = laminar_families(cls, n)
    N = build_core(cls, n).num_vars
    return [[1 if v in s else 0 for v in range(N)] for s in rows + cols]


def _z_index(n: int) -> dict[tuple[int, int], int]:
    return {(i, j): t for t, (i, j) in enumerate((i, j) for i in range(n + 1) for j in range(i, n + 2))}


def dsasm_z_system(n: int) -> tuple[list[list[int]], list[tuple[int, int]]]:
    """Coefficient rows and (lo, hi) bounds of the DSASM system in z-variables."""
    z = _z_index(n)
    rows, bounds = [], []

    def diff(a, b, lo, hi):
        r = [0] * len(z)
        r[z[a]] += 1
        r[z[b]] -= 1
        rows.append(r)
        bounds.append((lo, hi))

    for i in range(1, n + 1):
        for j in range(1, i):
            diff((j, i), (j, i + 1), 0, 1)
        for j in range(i, n):
            diff((i, j + 1), (i - 1, j + 1), 0, 1)
        diff((i, i), (i - 1, i + 1), 1, 1)
    return rows, bounds


def dsasm_z_map(n: int, y: Sequence[int | Fraction], positions: Sequence[tuple[int, int]]) -> list[Fraction]:
    """z_ij = sum of y over rows <= i and columns >= j (core entries are upper-triangular)."""
    val = {(a + 1, b + 1): Fraction(v) for (a, b), v in zip(positions, y)}
    z = _z_index(n)
    out = [Fraction(0)] * len(z)
    for (i, j), t in z.items():
        out[t] = sum((v for (a, b), v in val.items() if a <= i and b >= j), Fraction(0))
    return out


def digraph_incidence(num_nodes: int, arcs: Sequence[tuple[int, int]]) -> list[list[int]]:
    """Node-arc incidence matrix: +1 at the head, -1 at the tail of each arc."""
    M = [[0] * len(arcs) for _ in range(num_nodes)]
    for a, (u, v) in enumerate(arcs):
        if u == v:
            raise ValueError("loops have no incidence column")
        M[u][a] -= 1
        M[v][a] += 1
    return M


def is_difference_matrix(M: Sequence[Sequence[int]]) -> bool:
    """Every row has at most one +1, at most one -1 and zeros elsewhere."""
    for r in M:
        if any(v not in (-1, 0, 1) for v in r) or sum(v == 1 for v in r) > 1 or sum(v == -1 for v in r) > 1:
            return False
    return True


def _sample(rng: SplitMix64, population: int, k: int) -> list[int]:
    pool = list(range(population))
    for t in range(k):
        s = rng.randint(t, population - 1)
        pool[t], pool[s] = pool[s], pool[t]
    return sorted(pool[:k])


def random_square_submatrices(
    M: Sequence[Sequence[int]], count: int, rng: SplitMix64, max_size: int = 8
) -> list[list[list[int]]]:
    m, n = len(M), len(M[0]) if M else 0
    top = min(max_size, m, n)
    if top < 1:
        raise ValueError("matrix has no square submatrix")
    out = []
    for _ in range(count):
        s = rng.randint(1, top)
        rows = _sample(rng, m, s)
        # draw columns from the rows' support when it is large enough, so
        # that most samples are not trivially singular
        support = sorted({c for r in rows for c in range(n) if M[r][c]})
        if len(support) >= s:
            cols = [support[t] for t in _sample(rng, len(support), s)]
        else:
            cols = _sample(rng, n, s)
        out.append([[M[r][c] for c in cols] for r in rows])
    return out


def submatrix_dets(M: Sequence[Sequence[int]], count: int, seed: int = 0, max_size: int = 8) -> list[Fraction]:
    return [det(S) for S in random_square_submatrices(M, count, SplitMix64(seed), max_size)]
