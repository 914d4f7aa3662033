"""Linear constraint systems with exact coefficients and provenance tags."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

__all__ = ["Row", "ConstraintSystem", "make_tag", "parse_tag", "LE", "EQ", "GE"]

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)

_TAG_RE = re.compile(r"^(?P<eq>[^\[]+?)(?:\[(?P<idx>[^\]]*)\])?(?::(?P<side>lo|hi))?$")


def make_tag(eq: str, index: Sequence[int] = (), side: str | None = None) -> str:
    """Tag such as ``vsasm:row-prefix[2,3]:lo``; indices are 1-based."""
    tag = eq
    if index:
        tag += "[" + ",".join(str(v) for v in index) + "]"
    if side:
        tag += ":" + side
    return tag


def parse_tag(tag: str) -> tuple[str, tuple[int, ...], str | None]:
    m = _TAG_RE.match(tag)
    if not m:
        raise ValueError(f"malformed tag {tag!r}")
    idx = m.group("idx")
    index = tuple(int(v) for v in idx.split(",")) if idx else ()
    return m.group("eq"), index, m.group("side")


@dataclass(frozen=True)
class Row:
    coeffs: tuple[tuple[int, Fraction], ...]
    rel: str
    rhs: Fraction
    tag: str = ""

    @classmethod
    def build(
        cls, coeffs: Mapping[int, int | Fraction] | Iterable[tuple[int, int | Fraction]], rel: str, rhs, tag: str = ""
    ) -> Row:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for k, v in items:
            acc[int(k)] = acc.get(int(k), Fraction(0)) + Fraction(v)
        if rel not in _RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        return cls(tuple(sorted((k, v) for k, v in acc.items() if v != 0)), rel, Fraction(rhs), tag)

    def lhs(self, x: Sequence) -> Fraction:
        return sum((c * Fraction(x[k]) for k, c in self.coeffs), Fraction(0))

    def satisfied_by(self, x: Sequence) -> bool:
        v = self.lhs(x)
        if self.rel == LE:
            return v <= self.rhs
        if self.rel == GE:
            return v >= self.rhs
        return v == self.rhs

    def dense(self, num_vars: int) -> list[Fraction]:
        out = [Fraction(0)] * num_vars
        for k, c in self.coeffs:
            out[k] = c
        return out

    def as_le(self) -> Row:
        """Same half-space written with <= (equalities unchanged)."""
        if self.rel != GE:
            return self
        return Row(tuple((k, -c) for k, c in self.coeffs), LE, -self.rhs, self.tag)

    def canonical(self) -> Row:
        """Integer coefficients with gcd 1, <= or = form; rhs floored for <= rows.

        Flooring is only valid for rows whose variables are integral; callers
        use it for cut rows over integer cores.
        """
        r = self.as_le()
        if not r.coeffs:
            return r
        m = lcm(*(c.denominator for _, c in r.coeffs))
        ints = [(k, int(c * m)) for k, c in r.coeffs]
        g = 0
        for _, c in ints:
            g = gcd(g, c)
        rhs = r.rhs * m / g
        if r.rel == LE:
            rhs = Fraction(rhs.numerator // rhs.denominator)
        return Row(tuple((k, Fraction(c // g)) for k, c in ints), r.rel, rhs, r.tag)


@dataclass(frozen=True)
class ConstraintSystem:
    num_vars: int
    rows: tuple[Row, ...] = field(default=())
    var_names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        for r in self.rows:
            if not r.coeffs:
                raise ValueError(f"row {r.tag!r} has no coefficients")
            if r.coeffs[-1][0] >= self.num_vars or r.coeffs[0][0] < 0:
                raise ValueError(f"row {r.tag!r} references a variable out of range")

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def equalities(self) -> list[int]:
        return [i for i, r in enumerate(self.rows) if r.rel == EQ]

    @property
    def inequalities(self) -> list[int]:
        return [i for i, r in enumerate(self.rows) if r.rel != EQ]

    def with_rows(self, rows: Iterable[Row]) -> ConstraintSystem:
        return replace(self, rows=self.rows + tuple(rows))

    def select(self, indices: Iterable[int]) -> ConstraintSystem:
        return replace(self, rows=tuple(self.rows[i] for i in indices))

    def without(self, index: int) -> ConstraintSystem:
        return replace(self, rows=self.rows[:index] + self.rows[index + 1 :])

    def find(self, tag: str) -> int:
        for i, r in enumerate(self.rows):
            if r.tag == tag:
                return i
        raise KeyError(tag)

    def satisfied_by(self, x: Sequence) -> bool:
        return all(r.satisfied_by(x) for r in self.rows)

    def violated_rows(self, x: Sequence) -> list[int]:
        return [i for i, r in enumerate(self.rows) if not r.satisfied_by(x)]

    # serialisation -------------------------------------------------------

    def to_json(self) -> str:
        from .core import format_rational

        return json.dumps(
            {
                "vars": self.num_vars,
                "rows": [
                    {
                        "coeffs": {str(k): format_rational(c) for k, c in r.coeffs},
                        "rel": r.rel,
                        "rhs": format_rational(r.rhs),
                        "tag": r.tag,
                    }
                    for r in self.rows
                ],
            },
            indent=1,
        )

    @classmethod
    def from_json(cls, text: str) -> ConstraintSystem:
        obj = json.loads(text)
        rows = tuple(
            Row.build({int(k): Fraction(v) for k, v in r["coeffs"].items()}, r["rel"], Fraction(r["rhs"]), r.get("tag", ""))
            for r in obj["rows"]
        )
        return cls(int(obj["vars"]), rows)

    def to_ine(self) -> str:
        """cdd H-representation; rows written as b - A x >= 0, equalities under linearity."""
        from .core import format_rational

        def fmt(q: Fraction) -> str:
            return str(q.numerator) if q.denominator == 1 else format_rational(q)

        lines = [f"* row {t + 1} {r.rel} {r.tag}".rstrip() for t, r in enumerate(self.rows)]
        lines.append("H-representation")
        eq = [i + 1 for i, r in enumerate(self.rows) if r.rel == EQ]
        if eq:
            lines.append(f"linearity {len(eq)} " + " ".join(str(i) for i in eq))
        lines.append("begin")
        lines.append(f"{len(self.rows)} {self.num_vars + 1} rational")
        for r in self.rows:
            # a x <= b  ->  b - a x >= 0 ;  a x >= b  ->  -b + a x >= 0
            sgn = -1 if r.rel == GE else 1
            dense = r.dense(self.num_vars)
            vals = [sgn * r.rhs] + [-sgn * c for c in dense]
            lines.append(" ".join(fmt(v) for v in vals))
        lines.append("end")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_ine(cls, text: str) -> ConstraintSystem:
        raw = [ln.strip() for ln in text.splitlines() if ln.strip()]
        meta: dict[int, tuple[str, str]] = {}
        for ln in raw:
            parts = ln.split(maxsplit=4)
            if len(parts) >= 4 and parts[0] == "*" and parts[1] == "row":
                meta[int(parts[2])] = (parts[3], parts[4] if len(parts) > 4 else "")
        lines = [ln for ln in raw if not ln.startswith("*")]
        lin: set[int] = set()
        it = iter(lines)
        for ln in it:
            if ln.startswith("linearity"):
                parts = ln.split()
                lin = {int(v) for v in parts[2 : 2 + int(parts[1])]}
            if ln == "begin":
                break
        m, d, _ = next(it).split()
        m, d = int(m), int(d)
        rows = []
        for t in range(m):
            vals = [Fraction(v) for v in next(it).split()]
            b, a = vals[0], vals[1:]
            rel, tag = meta.get(t + 1, (EQ if t + 1 in lin else LE, ""))
            if rel == GE:
                rows.append(Row.build({k: c for k, c in enumerate(a) if c != 0}, GE, -b, tag))
            else:
                rows.append(Row.build({k: -c for k, c in enumerate(a) if c != 0}, rel, b, tag))
        return cls(d - 1, tuple(rows))
