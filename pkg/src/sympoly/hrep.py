"""Exact constraint systems for every class: core systems and full-space descriptions.

Core systems live in the core variables (ordered as in :func:`core_positions`).
Full-space systems live in the n*n matrix entries, indexed row-major.
Every row carries a tag ``<equation>[<1-based indices>]`` with ``:lo``/``:hi``
for the two halves of a two-sided bound.
"""
from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Iterable

from .asm import D4Element, SymmetryClass
from .core import core_positions
from .system import EQ, GE, LE, ConstraintSystem, Row, make_tag

__all__ = [
    "SystemKind",
    "build_asm",
    "build_core",
    "build_fullspace",
    "build_system",
    "export_ine",
    "import_ine",
    "export_json",
    "import_json",
    "symmetry_equalities",
]


class SystemKind(Enum):
    CORE = "core"
    FULLSPACE = "fullspace"
    # P_ASM intersected with the symmetry subspace only (no prescribed middle lines)
    FULLSPACE_INTERSECTION = "fullspace_intersection"


def chi_even(i: int) -> int:
    return 1 if i % 2 == 0 else 0


class _Builder:
    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self.rows: list[Row] = []

    def _add(self, coeffs: dict[int, int], rel: str, rhs, tag: str) -> None:
        row = Row.build(coeffs, rel, rhs, tag)
        if not row.coeffs:
            if not row.satisfied_by([]):
                raise ValueError(f"row {tag} is an empty contradiction")
            return
        self.rows.append(row)

    def between(self, coeffs: dict[int, int], lo, hi, eq: str, index: tuple[int, ...]) -> None:
        self._add(coeffs, GE, lo, make_tag(eq, index, "lo"))
        self._add(coeffs, LE, hi, make_tag(eq, index, "hi"))

    def equal(self, coeffs: dict[int, int], rhs, eq: str, index: tuple[int, ...]) -> None:
        self._add(coeffs, EQ, rhs, make_tag(eq, index))

    def system(self) -> ConstraintSystem:
        return ConstraintSystem(self.num_vars, tuple(self.rows))


def _acc(pairs: Iterable[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for t in pairs:
        out[t] = out.get(t, 0) + 1
    return out


def build_asm(n: int) -> ConstraintSystem:
    """Prefix-sum description of the ASM polytope in the n*n entries."""
    if n < 1:
        raise ValueError("n must be at least 1")
    b = _Builder(n * n)
    _asm_rows(b, n)
    return b.system()


def _asm_rows(b: _Builder, n: int) -> None:
    x = lambda i, j: (i - 1) * n + (j - 1)
    R = range(1, n + 1)
    for i in R:
        for j in range(1, n):
            b.between(_acc(x(i, jj) for jj in range(1, j + 1)), 0, 1, "asm:row-prefix", (i, j))
    for i in range(1, n):
        for j in R:
            b.between(_acc(x(ii, j) for ii in range(1, i + 1)), 0, 1, "asm:col-prefix", (i, j))
    for i in R:
        b.equal(_acc(x(i, j) for j in R), 1, "asm:row-sum", (i,))
    for j in R:
        b.equal(_acc(x(i, j) for i in R), 1, "asm:col-sum", (j,))


# --- core systems --------------------------------------------------------


def _core_vsasm(b, n, y):
    k = n // 2
    for i in range(1, n + 1):
        for j in range(1, k):
            b.between(_acc(y(i, jj) for jj in range(1, j + 1)), 0, 1, "vsasm:row-prefix", (i, j))
    for i in range(1, n):
        for j in range(1, k + 1):
            b.between(_acc(y(ii, j) for ii in range(1, i + 1)), 0, 1, "vsasm:col-prefix", (i, j))
    for i in range(1, n + 1):
        b.equal(_acc(y(i, j) for j in range(1, k + 1)), chi_even(i), "vsasm:row-sum", (i,))
    for j in range(1, k + 1):
        b.equal(_acc(y(i, j) for i in range(1, n + 1)), 1, "vsasm:col-sum", (j,))


def _core_vhsasm(b, n, y):
    k = n // 2
    for i in range(1, k + 1):
        for j in range(1, k):
            b.between(_acc(y(i, jj) for jj in range(1, j + 1)), 0, 1, "vhsasm:row-prefix", (i, j))
    for i in range(1, k):
        for j in range(1, k + 1):
            b.between(_acc(y(ii, j) for ii in range(1, i + 1)), 0, 1, "vhsasm:col-prefix", (i, j))
    for i in range(1, k + 1):
        b.equal(_acc(y(i, j) for j in range(1, k + 1)), chi_even(i), "vhsasm:row-sum", (i,))
    for j in range(1, k + 1):
        b.equal(_acc(y(i, j) for i in range(1, k + 1)), chi_even(j), "vhsasm:col-sum", (j,))


def _htsasm_row_prefix(n, y, i, j):
    l = (n + 1) // 2
    terms = [y(i, jj) for jj in range(1, min(l, j) + 1)]
    terms += [y(n + 1 - i, n + 1 - jj) for jj in range(l + 1, j + 1)]
    return _acc(terms)


def _core_htsasm(b, n, y):
    k, l = n // 2, (n + 1) // 2
    for i in range(1, k + 1):
        for j in range(1, n):
            b.between(_htsasm_row_prefix(n, y, i, j), 0, 1, "htsasm:row-prefix", (i, j))
    for i in range(1, n):
        for j in range(1, k + 1):
            b.between(_acc(y(ii, j) for ii in range(1, i + 1)), 0, 1, "htsasm:col-prefix", (i, j))
    for i in range(1, k + 1):
        b.equal(_htsasm_row_prefix(n, y, i, n), 1, "htsasm:row-sum", (i,))
    for j in range(1, k + 1):
        b.equal(_acc(y(i, j) for i in range(1, n + 1)), 1, "htsasm:col-sum", (j,))
    if n % 2 == 1:
        for j in range(1, k + 1):
            b.between(_acc(y(l, jj) for jj in range(1, j + 1)), 0, 1, "htsasm:mid-row-pref", (j,))
        for i in range(1, k + 1):
            b.between(_acc(y(ii, l) for ii in range(1, i + 1)), 0, 1, "htsasm:mid-col-pref", (i,))


def qtsasm_domain(n: int) -> list[tuple[int, int]]:
    """The index set D (1-based, row-major)."""
    k = n // 2
    D = [(i, j) for i in range(1, k + 1) for j in range(1, n + 1)]
    if n % 2 == 1:
        D += [(k + 1, j) for j in range(1, k + 1)]
    return D


def qtsasm_prefix(n: int, y, i: int, j: int) -> dict[int, int]:
    """Row-prefix of row i up to column j, written in core variables."""
    k = n // 2
    terms = [y(i, jj) for jj in range(1, min(j, k) + 1)]
    terms += [y(n + 1 - jj, i) for jj in range(k + 1, j + 1)]
    return _acc(terms)


def _core_qtsasm(b, n, y):
    k = n // 2
    for i, j in qtsasm_domain(n):
        if i <= k and j == n:
            continue
        b.between(qtsasm_prefix(n, y, i, j), 0, 1, "qtsasm:prefix", (i, j))
    for i in range(1, k + 1):
        b.equal(qtsasm_prefix(n, y, i, n), 1, "qtsasm:full", (i,))


def _dsasm_L(y, i, j):
    terms = [y(ii, i) for ii in range(1, min(i, j) + 1)]
    terms += [y(i, jj) for jj in range(i + 1, j + 1)]
    return _acc(terms)


def _core_dsasm(b, n, y):
    for i in range(1, n + 1):
        for j in range(1, n):
            b.between(_dsasm_L(y, i, j), 0, 1, "dsasm:L-prefix", (i, j))
    for i in range(1, n + 1):
        b.equal(_dsasm_L(y, i, n), 1, "dsasm:L-sum", (i,))


def _dasasm_row(n, y, i, j):
    terms = [y(ii, i) for ii in range(1, min(i - 1, j) + 1)]
    terms += [y(i, jj) for jj in range(i, min(n + 1 - i, j) + 1)]
    terms += [y(n + 1 - ii, n + 1 - i) for ii in range(n - i + 2, j + 1)]
    return _acc(terms)


def _core_dasasm(b, n, y):
    k = n // 2
    for i in range(1, k + 1):
        for j in range(1, n):
            b.between(_dasasm_row(n, y, i, j), 0, 1, "dasasm:row-prefix", (i, j))
    for i in range(1, k + 1):
        b.equal(_dasasm_row(n, y, i, n), 1, "dasasm:row-sum", (i,))
    if n % 2 == 1:
        for i in range(1, k + 1):
            b.between(_acc(y(ii, k + 1) for ii in range(1, i + 1)), 0, 1, "dasasm:mid-col-pref", (i,))


def _core_tsasm(b, n, y):
    k = n // 2
    for i in range(1, k + 1):
        for j in range(1, k):
            b.between(_dsasm_L(y, i, j), 0, 1, "tsasm:L-prefix", (i, j))
    for i in range(1, k + 1):
        b.equal(_dsasm_L(y, i, k), chi_even(i), "tsasm:L-sum", (i,))


_CORE = {
    SymmetryClass.VSASM: _core_vsasm,
    SymmetryClass.VHSASM: _core_vhsasm,
    SymmetryClass.HTSASM: _core_htsasm,
    SymmetryClass.QTSASM: _core_qtsasm,
    SymmetryClass.DSASM: _core_dsasm,
    SymmetryClass.DASASM: _core_dasasm,
    SymmetryClass.TSASM: _core_tsasm,
}


def build_core(cls: SymmetryClass, n: int) -> ConstraintSystem:
    """Core system of ``cls`` (for QTSASM: base rows only, no cut rows).

    For VSASM, VHSASM and TSASM the system is only a description of the core
    polytope for odd n; at even n it is still built from the same formulas.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if cls is SymmetryClass.ASM:
        return build_asm(n)
    pattern = core_positions(cls, n)
    index = pattern._index_map()

    def y(i: int, j: int) -> int:
        return index[(i - 1, j - 1)]

    b = _Builder(pattern.size)
    _CORE[cls](b, n, y)
    return b.system()


# --- full-space systems -----------------------------------------------------

_SUBSPACES = {
    SymmetryClass.ASM: (),
    SymmetryClass.VSASM: (("P_VS", D4Element.REFL_V),),
    SymmetryClass.VHSASM: (("P_VS", D4Element.REFL_V), ("P_HS", D4Element.REFL_H)),
    SymmetryClass.HTSASM: (("P_HTS", D4Element.ROT180),),
    SymmetryClass.QTSASM: (("P_QTS", D4Element.ROT90),),
    SymmetryClass.DSASM: (("P_DS", D4Element.REFL_D),),
    SymmetryClass.DASASM: (("P_DAS", D4Element.REFL_D), ("P_DAS", D4Element.REFL_A)),
    SymmetryClass.TSASM: (("P_VS", D4Element.REFL_V), ("P_DS", D4Element.REFL_D)),
}


def symmetry_equalities(cls: SymmetryClass, n: int) -> list[Row]:
    """Rows x_p - x_q = 0 (p < q row-major), deduplicated, for the class subspace."""
    seen: set[tuple[int, int]] = set()
    rows = []
    for name, g in _SUBSPACES[cls]:
        for i in range(n):
            for j in range(n):
                a = i * n + j
                si, sj = g.source(n, i, j)
                c = si * n + sj
                p, q = min(a, c), max(a, c)
                if p == q or (p, q) in seen:
                    continue
                seen.add((p, q))
                tag = make_tag(name, (p // n + 1, p % n + 1, q // n + 1, q % n + 1))
                rows.append(Row.build({p: 1, q: -1}, EQ, 0, tag))
    rows.sort(key=lambda r: (r.coeffs[0][0], r.coeffs[1][0]))
    return rows


def _middle_fixings(cls: SymmetryClass, n: int) -> list[Row]:
    k = n // 2
    rows = []
    if cls in (SymmetryClass.VSASM, SymmetryClass.VHSASM, SymmetryClass.TSASM):
        for i in range(1, n + 1):
            v = 1 if i % 2 == 1 else -1
            rows.append(Row.build({(i - 1) * n + k: 1}, EQ, v, make_tag("mid-col", (i,))))
    if cls in (SymmetryClass.VHSASM, SymmetryClass.TSASM):
        for j in range(1, n + 1):
            v = 1 if j % 2 == 1 else -1
            rows.append(Row.build({k * n + j - 1: 1}, EQ, v, make_tag("mid-row", (j,))))
    return rows


def build_fullspace(cls: SymmetryClass, n: int, prescribed_middle: bool = True) -> ConstraintSystem:
    """P_ASM intersected with the class subspace (and the prescribed middle lines).

    With ``prescribed_middle=False`` only P_ASM and the symmetry subspace are
    used.  QTSASM never includes cut rows here.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    b = _Builder(n * n)
    _asm_rows(b, n)
    b.rows.extend(symmetry_equalities(cls, n))
    if prescribed_middle:
        # At (k+1, k+1) the middle row and column prescribe the same value.
        seen = set()
        for r in _middle_fixings(cls, n):
            key = (r.coeffs, r.rhs)
            if key not in seen:
                seen.add(key)
                b.rows.append(r)
    return b.system()


def build_system(cls: SymmetryClass, n: int, kind: SystemKind | str = SystemKind.CORE) -> ConstraintSystem:
    kind = SystemKind(kind)
    if kind is SystemKind.CORE:
        return build_core(cls, n)
    return build_fullspace(cls, n, prescribed_middle=kind is SystemKind.FULLSPACE)


def export_ine(system: ConstraintSystem) -> str:
    return system.to_ine()


def import_ine(text: str) -> ConstraintSystem:
    return ConstraintSystem.from_ine(text)


def export_json(system: ConstraintSystem) -> str:
    return system.to_json()


def import_json(text: str) -> ConstraintSystem:
    return ConstraintSystem.from_json(text)


def fractional_midpoint(n: int) -> tuple[Fraction, ...]:
    """(I_n + I'_n) / 2 as a flat n*n vector."""
    return tuple(
        Fraction(int(i == j) + int(i + j == n - 1), 2) for i in range(n) for j in range(n)
    )
