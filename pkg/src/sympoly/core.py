"""Core positions, projection onto the core, and the affine assembly map.

Every class reduces to a set of core positions C from which the whole matrix
is rebuilt by an affine map phi.  phi is stored cell by cell as an
:class:`Affine` expression in the core variables, so evaluation, cost
pull-back and symmetry checks all work on the same data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .asm import SignMatrix, SymmetryClass

__all__ = [
    "Affine",
    "CorePattern",
    "CoreVector",
    "core_positions",
    "project",
    "assemble",
    "assemble_sign",
    "roundtrip_class",
    "core_size",
    "format_rational",
    "parse_rational",
]

Number = int | Fraction


def format_rational(q: Number) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str | int) -> Fraction:
    return Fraction(text) if isinstance(text, int) else Fraction(str(text).strip())


@dataclass(frozen=True)
class Affine:
    """const + sum(coef * y[idx]) with integer data."""

    const: int
    terms: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def var(idx: int) -> Affine:
        return Affine(0, ((idx, 1),))

    @staticmethod
    def constant(c: int) -> Affine:
        return Affine(c)

    def evaluate(self, values: Sequence[Number]) -> Fraction:
        return Fraction(self.const) + sum((c * Fraction(values[t]) for t, c in self.terms), Fraction(0))


@dataclass(frozen=True)
class CorePattern:
    """Ordered core positions (row-major, 0-based) and the cell-wise recipe of phi."""

    cls: SymmetryClass
    n: int
    positions: tuple[tuple[int, int], ...]
    cells: tuple[tuple[Affine, ...], ...]

    @property
    def size(self) -> int:
        return len(self.positions)

    def index(self, i: int, j: int) -> int:
        return self._index_map()[(i, j)]

    def _index_map(self) -> dict[tuple[int, int], int]:
        return _index_map(self.positions)

    def pullback(self, cost: Sequence[Sequence[Number]]) -> tuple[Fraction, list[Fraction]]:
        """Write sum c_ij phi(Y)_ij as const + w . Y."""
        const = Fraction(0)
        w = [Fraction(0)] * self.size
        for i in range(self.n):
            for j in range(self.n):
                c = Fraction(cost[i][j])
                if c == 0:
                    continue
                cell = self.cells[i][j]
                const += c * cell.const
                for t, a in cell.terms:
                    w[t] += c * a
        return const, w


@lru_cache(maxsize=None)
def _index_map(positions: tuple[tuple[int, int], ...]) -> dict[tuple[int, int], int]:
    return {p: t for t, p in enumerate(positions)}


@dataclass(frozen=True)
class CoreVector:
    pattern: CorePattern
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.pattern.size:
            raise ValueError("core vector length does not match the pattern")

    @classmethod
    def of(cls, pattern: CorePattern, values: Sequence[Number]) -> CoreVector:
        return cls(pattern, tuple(Fraction(v) for v in values))

    def to_json(self) -> str:
        return json.dumps(
            {
                "class": self.pattern.cls.value,
                "n": self.pattern.n,
                "values": [format_rational(v) for v in self.values],
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> CoreVector:
        obj = json.loads(text)
        pattern = core_positions(SymmetryClass.parse(obj["class"]), int(obj["n"]))
        return cls.of(pattern, [parse_rational(v) for v in obj["values"]])


def _sign(e: int) -> int:
    return 1 if e % 2 == 0 else -1


# Each builder works in 1-based coordinates and returns (C, cases) where
# cases(i, j, y) lists every applicable case value for the cell.
CaseFn = Callable[[int, int, Callable[[int, int], Affine]], list[Affine]]


def _asm(n: int):
    C = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    return C, lambda i, j, y: [y(i, j)]


def _vsasm(n: int):
    k = n // 2
    C = [(i, j) for i in range(1, n + 1) for j in range(1, k + 1)]

    def cases(i, j, y):
        out = []
        if j <= k:
            out.append(y(i, j))
        if n % 2 == 1 and j == k + 1:
            out.append(Affine.constant(_sign(i + 1)))
        if j >= n + 1 - k:
            out.append(y(i, n + 1 - j))
        return out

    return C, cases


def _vhsasm(n: int):
    k = n // 2
    odd = n % 2 == 1
    C = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]

    def cases(i, j, y):
        out = []
        lo_i, lo_j = i <= k, j <= k
        hi_i, hi_j = i >= n + 1 - k, j >= n + 1 - k
        if lo_i and lo_j:
            out.append(y(i, j))
        if odd and j == k + 1:
            out.append(Affine.constant(_sign(i + 1)))
        if odd and i == k + 1:
            out.append(Affine.constant(_sign(j + 1)))
        if lo_i and hi_j:
            out.append(y(i, n + 1 - j))
        if hi_i and lo_j:
            out.append(y(n + 1 - i, j))
        if hi_i and hi_j:
            out.append(y(n + 1 - i, n + 1 - j))
        return out

    return C, cases


def _htsasm(n: int):
    k = n // 2
    odd = n % 2 == 1
    C = [(i, j) for i in range(1, n + 1) for j in range(1, k + 1)]
    if odd:
        C += [(i, k + 1) for i in range(1, k + 1)]
    C.sort()
    cset = set(C)

    def cases(i, j, y):
        if (i, j) in cset:
            return [y(i, j)]
        if odd and i == j == k + 1:
            terms = {}
            for jj in range(1, k + 1):
                (t, c), = y(k + 1, jj).terms
                terms[t] = terms.get(t, 0) - 2 * c
            return [Affine(1, tuple(sorted(terms.items())))]
        return [y(n + 1 - i, n + 1 - j)]

    return C, cases


def _qtsasm(n: int):
    k = n // 2
    l = n - k
    C = [(i, j) for i in range(1, l + 1) for j in range(1, k + 1)]

    def cases(i, j, y):
        out = []
        if i <= l and j <= k:
            out.append(y(i, j))
        if n % 2 == 1 and i == j == l:
            out.append(Affine.constant(_sign(k)))
        if i >= l + 1 and j <= l:
            out.append(y(j, n + 1 - i))
        if i >= k + 1 and j >= l + 1:
            out.append(y(n + 1 - i, n + 1 - j))
        if i <= k and j >= k + 1:
            out.append(y(n + 1 - j, i))
        return out

    return C, cases


def _dsasm(n: int):
    C = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    return C, lambda i, j, y: [y(i, j) if i <= j else y(j, i)]


def _dasasm(n: int):
    k = n // 2
    odd = n % 2 == 1
    C = [(i, j) for i in range(1, k + 1) for j in range(i, n + 2 - i)]
    cset = set(C)

    def cases(i, j, y):
        out = []
        if (i, j) in cset:
            out.append(y(i, j))
        if odd and i == j == k + 1:
            terms = {}
            for ii in range(1, k + 1):
                (t, c), = y(ii, k + 1).terms
                terms[t] = terms.get(t, 0) - 2 * c
            out.append(Affine(1, tuple(sorted(terms.items()))))
        if 1 <= j <= min(i - 1, n + 1 - i):
            out.append(y(j, i))
        if max(i, n + 2 - i) <= j <= n:
            out.append(y(n + 1 - j, n + 1 - i))
        if n + 2 - i <= j <= i - 1:
            out.append(y(n + 1 - i, n + 1 - j))
        return out

    return C, cases


def _tsasm(n: int):
    k = n // 2
    odd = n % 2 == 1
    C = [(i, j) for i in range(1, k + 1) for j in range(i, k + 1)]

    def ym(y, a, b):
        return y(min(a, b), max(a, b))

    def cases(i, j, y):
        out = []
        lo_i, lo_j = i <= k, j <= k
        hi_i, hi_j = i >= n + 1 - k, j >= n + 1 - k
        if lo_i and lo_j:
            out.append(ym(y, i, j))
        if odd and j == k + 1:
            out.append(Affine.constant(_sign(i + 1)))
        if odd and i == k + 1:
            out.append(Affine.constant(_sign(j + 1)))
        if lo_i and hi_j:
            out.append(ym(y, i, n + 1 - j))
        if hi_i and lo_j:
            out.append(ym(y, n + 1 - i, j))
        if hi_i and hi_j:
            out.append(ym(y, n + 1 - i, n + 1 - j))
        return out

    return C, cases


_BUILDERS = {
    SymmetryClass.ASM: _asm,
    SymmetryClass.VSASM: _vsasm,
    SymmetryClass.VHSASM: _vhsasm,
    SymmetryClass.HTSASM: _htsasm,
    SymmetryClass.QTSASM: _qtsasm,
    SymmetryClass.DSASM: _dsasm,
    SymmetryClass.DASASM: _dasasm,
    SymmetryClass.TSASM: _tsasm,
}


@lru_cache(maxsize=None)
def core_positions(cls: SymmetryClass, n: int) -> CorePattern:
    """Core pattern of ``cls`` at size ``n`` (for ASM: all cells, identity map)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    C1, cases = _BUILDERS[cls](n)
    C1 = sorted(C1)
    index = {p: t for t, p in enumerate(C1)}

    def y(i: int, j: int) -> Affine:
        return Affine.var(index[(i, j)])

    cells = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            options = cases(i, j, y)
            if not options:
                raise AssertionError(f"no assembly case covers ({i},{j}) for {cls.value} n={n}")
            if __debug__ and any(o != options[0] for o in options[1:]):
                raise AssertionError(f"assembly cases disagree at ({i},{j}) for {cls.value} n={n}")
            row.append(options[0])
        cells.append(tuple(row))
    positions = tuple((i - 1, j - 1) for i, j in C1)
    return CorePattern(cls, n, positions, tuple(cells))


def core_size(cls: SymmetryClass, n: int) -> int:
    k, l = n // 2, (n + 1) // 2
    return {
        SymmetryClass.ASM: n * n,
        SymmetryClass.VSASM: n * k,
        SymmetryClass.VHSASM: k * k,
        SymmetryClass.HTSASM: n * k + (k if n % 2 else 0),
        SymmetryClass.QTSASM: l * k,
        SymmetryClass.DSASM: n * (n + 1) // 2,
        SymmetryClass.DASASM: k * (n + 1 - k),
        SymmetryClass.TSASM: k * (k + 1) // 2,
    }[cls]


def project(m: SignMatrix | Sequence[Sequence[Number]], pattern: CorePattern) -> CoreVector:
    rows = m.entries if isinstance(m, SignMatrix) else m
    if len(rows) != pattern.n or any(len(r) != pattern.n for r in rows):
        raise ValueError(f"matrix is not {pattern.n}x{pattern.n}")
    return CoreVector.of(pattern, [rows[i][j] for i, j in pattern.positions])


def assemble(y: CoreVector) -> tuple[tuple[Fraction, ...], ...]:
    vals = y.values
    return tuple(tuple(cell.evaluate(vals) for cell in row) for row in y.pattern.cells)


def assemble_sign(y: CoreVector) -> SignMatrix:
    """Assemble an integral core into a SignMatrix (raises if entries leave {-1,0,1})."""
    rows = assemble(y)
    if any(v.denominator != 1 for r in rows for v in r):
        raise ValueError("core is not integral")
    return SignMatrix.from_rows([[int(v) for v in r] for r in rows])


@dataclass(frozen=True)
class RoundtripResult:
    ok: bool
    first_failure: SignMatrix | None = None

    def __bool__(self) -> bool:
        return self.ok


def roundtrip_class(cls: SymmetryClass, n: int, members: Sequence[SignMatrix]) -> RoundtripResult:
    """Check phi(pi_C(X)) == X for every member."""
    pattern = core_positions(cls, n)
    for m in members:
        if assemble(project(m, pattern)) != m.to_rational():
            return RoundtripResult(False, m)
    return RoundtripResult(True)
