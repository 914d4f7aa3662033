"""Sign matrices, the dihedral group of the square, and symmetry-class membership.

Indices are 0-based throughout the code; documentation uses 1-based
matrix coordinates, so internal index = documented index - 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "SignMatrix",
    "D4Element",
    "SymmetryClass",
    "compose",
    "is_asm",
    "is_asm_by_definition",
    "apply_symmetry",
    "transform_array",
    "is_member",
    "parse_matrix",
    "format_matrix_text",
    "matrix_to_json",
    "identity_matrix",
]


@dataclass(frozen=True)
class SignMatrix:
    """Dense n x n matrix with entries in {-1, 0, 1}."""

    n: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("matrix size must be at least 1")
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError(f"expected a {self.n}x{self.n} matrix")
        for row in self.entries:
            for v in row:
                if v not in (-1, 0, 1) or isinstance(v, bool):
                    raise ValueError(f"entry {v!r} is not in {{-1, 0, 1}}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> SignMatrix:
        entries = tuple(tuple(int(v) for v in row) for row in rows)
        return cls(len(entries), entries)

    @classmethod
    def from_flat(cls, n: int, flat: Sequence[int]) -> SignMatrix:
        if len(flat) != n * n:
            raise ValueError("flat vector has the wrong length")
        return cls(n, tuple(tuple(int(flat[i * n + j]) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def flat(self) -> tuple[int, ...]:
        return tuple(v for row in self.entries for v in row)

    def to_rational(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(Fraction(v) for v in row) for row in self.entries)

    def __str__(self) -> str:
        return format_matrix_text(self).rstrip("\n")


def identity_matrix(n: int) -> SignMatrix:
    return SignMatrix(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


class D4Element(Enum):
    """Symmetries of the square acting on n x n matrices."""

    IDENTITY = "identity"
    REFL_V = "reflV"
    REFL_H = "reflH"
    REFL_D = "reflD"
    REFL_A = "reflA"
    ROT90 = "rot90"
    ROT180 = "rot180"
    ROT270 = "rot270"

    @property
    def source_map(self) -> tuple[tuple[int, int], tuple[int, int]]:
        # Integer 2x2 matrix A on centred coordinates: g(X)[t] = X[A t].
        return _SOURCE_MAPS[self]

    def source(self, n: int, i: int, j: int) -> tuple[int, int]:
        """Position of X read by g(X) at (i, j)."""
        m = n - 1
        if self is D4Element.IDENTITY:
            return i, j
        if self is D4Element.REFL_V:
            return i, m - j
        if self is D4Element.REFL_H:
            return m - i, j
        if self is D4Element.REFL_D:
            return j, i
        if self is D4Element.REFL_A:
            return m - j, m - i
        if self is D4Element.ROT90:
            return j, m - i
        if self is D4Element.ROT180:
            return m - i, m - j
        return m - j, i


_SOURCE_MAPS = {
    D4Element.IDENTITY: ((1, 0), (0, 1)),
    D4Element.REFL_V: ((1, 0), (0, -1)),
    D4Element.REFL_H: ((-1, 0), (0, 1)),
    D4Element.REFL_D: ((0, 1), (1, 0)),
    D4Element.REFL_A: ((0, -1), (-1, 0)),
    D4Element.ROT90: ((0, 1), (-1, 0)),
    D4Element.ROT180: ((-1, 0), (0, -1)),
    D4Element.ROT270: ((0, -1), (1, 0)),
}
_BY_MAP = {v: k for k, v in _SOURCE_MAPS.items()}


def _matmul(a, b):
    return tuple(
        tuple(sum(a[r][t] * b[t][c] for t in range(2)) for c in range(2)) for r in range(2)
    )


def compose(h: D4Element, g: D4Element) -> D4Element:
    """The element acting as g first, then h."""
    # h(g(X))[t] = g(X)[A_h t] = X[A_g A_h t]
    return _BY_MAP[_matmul(g.source_map, h.source_map)]


class SymmetryClass(Enum):
    """The eight symmetry classes, each with generators of its subgroup."""

    ASM = "ASM"
    VSASM = "VSASM"
    VHSASM = "VHSASM"
    HTSASM = "HTSASM"
    QTSASM = "QTSASM"
    DSASM = "DSASM"
    DASASM = "DASASM"
    TSASM = "TSASM"

    @property
    def generators(self) -> tuple[D4Element, ...]:
        return _GENERATORS[self]

    def subgroup(self) -> frozenset[D4Element]:
        group = {D4Element.IDENTITY}
        frontier = list(group)
        while frontier:
            a = frontier.pop()
            for g in self.generators:
                c = compose(g, a)
                if c not in group:
                    group.add(c)
                    frontier.append(c)
        return frozenset(group)

    @classmethod
    def parse(cls, label: str) -> SymmetryClass:
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown symmetry class {label!r}") from None


_E = D4Element
_GENERATORS = {
    SymmetryClass.ASM: (),
    SymmetryClass.VSASM: (_E.REFL_V,),
    SymmetryClass.VHSASM: (_E.REFL_V, _E.REFL_H),
    SymmetryClass.HTSASM: (_E.ROT180,),
    SymmetryClass.QTSASM: (_E.ROT90,),
    SymmetryClass.DSASM: (_E.REFL_D,),
    SymmetryClass.DASASM: (_E.REFL_D, _E.REFL_A),
    SymmetryClass.TSASM: (_E.REFL_V, _E.REFL_D),
}


def is_asm(m: SignMatrix) -> bool:
    """Prefix-sum test: all line prefixes in {0, 1}, all line sums 1."""
    n = m.n
    col = [0] * n
    for row in m.entries:
        s = 0
        for j, v in enumerate(row):
            s += v
            if s not in (0, 1):
                return False
            col[j] += v
            if col[j] not in (0, 1):
                return False
        if s != 1:
            return False
    return all(c == 1 for c in col)


def _line_alternates(line: Sequence[int]) -> bool:
    nz = [v for v in line if v != 0]
    if not nz or nz[0] != 1 or nz[-1] != 1:
        return False
    return all(a == -b for a, b in zip(nz, nz[1:]))


def is_asm_by_definition(m: SignMatrix) -> bool:
    """Scan nonzeros of every line: they alternate, starting and ending with +1."""
    cols = list(zip(*m.entries))
    return all(_line_alternates(r) for r in m.entries) and all(_line_alternates(c) for c in cols)


def transform_array(rows: Sequence[Sequence], g: D4Element) -> tuple[tuple, ...]:
    """Apply g to any square array (rational entries allowed)."""
    n = len(rows)
    out = []
    for i in range(n):
        out.append(tuple(rows[a][b] for a, b in (g.source(n, i, j) for j in range(n))))
    return tuple(out)


def apply_symmetry(m: SignMatrix, g: D4Element) -> SignMatrix:
    return SignMatrix(m.n, transform_array(m.entries, g))


def is_member(m: SignMatrix, cls: SymmetryClass) -> bool:
    if not is_asm(m):
        return False
    return all(apply_symmetry(m, g) == m for g in cls.generators)


def parse_matrix(text: str) -> SignMatrix:
    """Read the plain text format ("n" then n rows) or the JSON object form."""
    stripped = text.strip()
    if stripped.startswith("{"):
        obj = json.loads(stripped)
        m = SignMatrix.from_rows(obj["entries"])
        if m.n != int(obj["n"]):
            raise ValueError("declared n does not match the entries")
        return m
    lines = [ln.split() for ln in stripped.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise ValueError("first line must hold the matrix size")
    n = int(lines[0][0])
    rows = lines[1:]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, found {len(rows)}")
    return SignMatrix(n, tuple(tuple(int(v) for v in r) for r in rows))


def format_matrix_text(m: SignMatrix) -> str:
    lines = [str(m.n)] + [" ".join(str(v) for v in row) for row in m.entries]
    return "\n".join(lines) + "\n"


def matrix_to_json(m: SignMatrix) -> str:
    return json.dumps({"n": m.n, "entries": [list(r) for r in m.entries]}, separators=(",", ":"))
