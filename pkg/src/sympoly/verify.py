"""Checks of dimensions, facet sets, hull equalities and minimum-cost optimisation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .asm import SignMatrix, SymmetryClass, is_member
from .core import CoreVector, assemble_sign, core_positions, project
from .enumeration import enumerate_class, enumerate_symmetric, min_cost_brute
from .hrep import build_core, build_fullspace, chi_even
from .linalg import affine_hull_dim, rank
from .lp import LPSolver, implicit_equalities, is_redundant
from .rng import SplitMix64, random_cost, random_objective
from .system import EQ, ConstraintSystem, Row, make_tag

__all__ = [
    "FACET_THRESHOLDS",
    "FacetPrediction",
    "VerificationReport",
    "FractionalVertex",
    "predicted_dimension",
    "predicted_facet_count",
    "predicted_facets",
    "dimension_routes",
    "compute_dimension",
    "verify_dimension",
    "irredundant_rows",
    "verify_facets",
    "verify_hull_equality",
    "min_cost_xasm",
    "format_table",
]

S = SymmetryClass
MATCH, MISMATCH, REPORT = "match", "mismatch", "report"

FACET_THRESHOLDS = {S.ASM: 3, S.VSASM: 7, S.VHSASM: 9, S.HTSASM: 4, S.DSASM: 3, S.DASASM: 2, S.TSASM: 9}
_ODD_ONLY = (S.VSASM, S.VHSASM, S.TSASM)


class FractionalVertex(RuntimeError):
    """An LP that should have an integral optimum returned a fractional vertex."""


@dataclass(frozen=True)
class VerificationReport:
    claim: str
    predicted: str
    computed: str
    status: str
    witnesses: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.status != MISMATCH

    def to_json(self) -> str:
        obj = {"claim": self.claim, "predicted": self.predicted, "computed": self.computed, "status": self.status}
        if self.witnesses:
            obj["witnesses"] = list(self.witnesses)
        return json.dumps(obj)


def _report(claim: str, predicted, computed, witnesses: Sequence[str] = ()) -> VerificationReport:
    status = MATCH if str(predicted) == str(computed) and not witnesses else MISMATCH
    return VerificationReport(claim, str(predicted), str(computed), status, tuple(witnesses))


def format_table(reports: Sequence[VerificationReport]) -> str:
    head = ("claim", "predicted", "computed", "status")
    rows = [head] + [(r.claim, r.predicted, r.computed, r.status) for r in reports]
    widths = [max(len(r[c]) for r in rows) for c in range(4)]
    return "\n".join("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in rows)


# --- dimensions ---------------------------------------------------------------


def predicted_dimension(cls: SymmetryClass, n: int) -> int:
    """Closed-form dimension of the class polytope (QTSASM: the conjectured value)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if cls in _ODD_ONLY and n % 2 == 0:
        raise ValueError(f"{cls.value} dimension formula is stated for odd n only")
    if cls is S.ASM:
        return (n - 1) ** 2
    if cls is S.VSASM:
        if n < 3:
            raise ValueError("VSASM dimension formula needs n >= 3")
        return (n - 3) ** 2 // 2
    if cls is S.VHSASM:
        if n < 5:
            raise ValueError("VHSASM dimension formula needs n >= 5")
        return (n - 5) ** 2 // 4
    if cls is S.HTSASM:
        return ((n - 1) ** 2 + 1) // 2
    if cls is S.DSASM:
        return n * (n - 1) // 2
    if cls is S.DASASM:
        return n * n // 4
    if cls is S.TSASM:
        if n < 3:
            raise ValueError("TSASM dimension formula needs n >= 3")
        return (n - 5) * (n - 3) // 8
    if n < 5 or n % 4 == 2:
        raise ValueError("conjectured QTSASM dimension needs n >= 5 and n != 2 mod 4")
    return (n - 1) ** 2 // 4 - 2


def _members(cls: SymmetryClass, n: int) -> list[SignMatrix]:
    return enumerate_class(cls, n)


def _implicit_rank(system: ConstraintSystem) -> int:
    rows = [system.rows[i].dense(system.num_vars) for i in system.equalities]
    rows += [system.rows[i].dense(system.num_vars) for i in implicit_equalities(system)]
    return rank(rows) if rows else 0


def dimension_routes(cls: SymmetryClass, n: int) -> tuple[int, int | None]:
    """(affine hull of enumerated cores, |C| - rank of explicit plus implicit equalities).

    For QTSASM the second route runs on the cut-extended system and only for
    n <= 4; beyond that it is ``None``.
    """
    pattern = core_positions(cls, n)
    members = _members(cls, n)
    if not members:
        raise ValueError(f"{cls.value} is empty at n={n}")
    hull = affine_hull_dim([project(m, pattern).values for m in members])
    if cls is S.QTSASM:
        if n > 4:
            return hull, None
        from .cuts import build_qtsasm_hull

        system = build_qtsasm_hull(n)
    else:
        system = build_core(cls, n)
    return hull, pattern.size - _implicit_rank(system)


def compute_dimension(cls: SymmetryClass, n: int) -> int:
    hull, lp = dimension_routes(cls, n)
    if lp is not None and lp != hull:
        raise AssertionError(f"dimension routes disagree for {cls.value} n={n}: {hull} vs {lp}")
    return hull


def verify_dimension(cls: SymmetryClass, n: int) -> VerificationReport:
    claim = f"dim {cls.value} n={n}"
    hull, lp = dimension_routes(cls, n)
    witnesses = [f"implicit-equality route gives {lp}"] if lp is not None and lp != hull else []
    try:
        predicted = predicted_dimension(cls, n)
    except ValueError:
        return VerificationReport(claim, "n/a", str(hull), REPORT, tuple(witnesses))
    if cls is S.QTSASM:
        # conjectural value: surfaced, never asserted
        return VerificationReport(claim + " (conjecture)", str(predicted), str(hull), REPORT, tuple(witnesses))
    return _report(claim, predicted, hull, witnesses)


# --- facets ---------------------------------------------------------------------


@dataclass(frozen=True)
class FacetPrediction:
    cls: SymmetryClass
    n: int
    entries: tuple[tuple[str, str, tuple[int, ...]], ...]

    @property
    def tags(self) -> list[str]:
        return [make_tag(eq, idx, side) for eq, side, idx in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def predicted_facet_count(cls: SymmetryClass, n: int) -> int:
    _check_threshold(cls, n)
    if cls is S.ASM:
        return 4 * ((n - 2) ** 2 + 1)
    if cls is S.VSASM:
        return 2 * n * n - 19 * n + 49
    if cls is S.VHSASM:
        return n * n - 15 * n + 60
    if cls is S.HTSASM:
        return 2 * ((n - 2) ** 2 + chi_even(n))
    if cls is S.DSASM:
        return 2 * (n - 2) ** 2 + 3
    if cls is S.DASASM:
        return (n - 2) ** 2 + 2
    return (n * n - 15 * n + 62) // 2


def _check_threshold(cls: SymmetryClass, n: int) -> None:
    if cls not in FACET_THRESHOLDS:
        raise ValueError(f"no facet theorem for {cls.value}")
    if n < FACET_THRESHOLDS[cls]:
        raise ValueError(f"{cls.value} facet theorem needs n >= {FACET_THRESHOLDS[cls]}")
    if cls in _ODD_ONLY and n % 2 == 0:
        raise ValueError(f"{cls.value} facet theorem is stated for odd n only")


def _rng(a: int, b: int) -> range:
    return range(a, b + 1)


def _asm_facets(n):
    lo = [(1, 1)] + [(i, j) for i in _rng(2, n - 1) for j in _rng(1, n - 2)] + [(n, 1)]
    hi = [(1, n - 1)] + [(i, j) for i in _rng(2, n - 1) for j in _rng(2, n - 1)] + [(n, n - 1)]
    clo = [(i, j) for i in _rng(1, n - 2) for j in _rng(2, n - 1)]
    chi = [(i, j) for i in _rng(2, n - 1) for j in _rng(2, n - 1)]
    return [("asm:row-prefix", lo, hi), ("asm:col-prefix", clo, chi)]


def _vsasm_facets(n):
    k = n // 2
    e, o = chi_even, lambda v: 1 - chi_even(v)
    lo = [(i, j) for i in _rng(3, n - 2) for j in _rng(1, k - 1 - e(i))]
    hi = [(i, j) for i in _rng(4, n - 3) for j in _rng(2, k - 1 - o(i))]
    clo = [(2, 1)] + [(i, j) for i in _rng(2, n - 4) for j in _rng(2, k - e(i))]
    chi = [(n - 2, 1)] + [(i, j) for i in _rng(4, n - 2) for j in _rng(2, k - o(i))]
    return [("vsasm:row-prefix", lo, hi), ("vsasm:col-prefix", clo, chi)]


def _vhsasm_facets(n):
    k = n // 2
    e, o = chi_even, lambda v: 1 - chi_even(v)
    lo = [(2, 2)] + [(i, j) for i in _rng(3, k - 1) for j in _rng(2, k - 1 - e(i))]
    lo += [(k, j) for j in _rng(3, k - 1) if j % 2]
    hi = [(i, j) for i in _rng(4, k - 1) for j in _rng(4, k - 1 - o(i))]
    hi += [(k, j) for j in _rng(4, k - 1) if j % 2 == 0]
    clo = [(i, j) for j in _rng(3, k - 1) for i in _rng(2, k - 1 - e(j))]
    clo += [(i, k) for i in _rng(3, k - 2) if i % 2]
    chi = [(i, j) for j in _rng(4, k - 1) for i in _rng(4, k - 1 - o(j))]
    chi += [(i, k) for i in _rng(4, k - 2) if i % 2 == 0]
    return [("vhsasm:row-prefix", lo, hi), ("vhsasm:col-prefix", clo, chi)]


def _htsasm_facets(n):
    k = n // 2
    lo = [(1, 1)] + [(i, j) for i in _rng(2, k) for j in _rng(1, n - 2)]
    hi = [(1, n - 1)] + [(i, j) for i in _rng(2, k) for j in _rng(2, n - 1)]
    clo = [(i, j) for i in _rng(1, n - 2) for j in _rng(2, k)]
    chi = [(i, j) for i in _rng(2, n - 1) for j in _rng(2, k)]
    out = [("htsasm:row-prefix", lo, hi), ("htsasm:col-prefix", clo, chi)]
    if n % 2:
        out.append(("htsasm:mid-row-pref", [(j,) for j in _rng(1, k)], [(j,) for j in _rng(2, k)]))
        out.append(("htsasm:mid-col-pref", [(i,) for i in _rng(1, k - 1)], [(i,) for i in _rng(2, k - 1)]))
    return out


def _dsasm_facets(n):
    inner = [(i, j) for i in _rng(2, n - 1) for j in _rng(2, n - 2)]
    lo = inner + [(i, 1) for i in _rng(1, n)]
    hi = inner + [(i, n - 1) for i in _rng(2, n)]
    return [("dsasm:L-prefix", lo, hi)]


def _dasasm_facets(n):
    k = n // 2
    lo = [(1, 1)] + [(i, j) for i in _rng(2, k) for j in _rng(1, n - 2)]
    hi = [(1, n - 1)] + [(i, j) for i in _rng(2, k) for j in _rng(2, n - 1)]
    out = [("dasasm:row-prefix", lo, hi)]
    if n % 2:
        out.append(("dasasm:mid-col-pref", [(j,) for j in _rng(1, k)], [(j,) for j in _rng(2, k)]))
    return out


def _tsasm_facets(n):
    k = n // 2
    e, o = chi_even, lambda v: 1 - chi_even(v)
    lo = [(2, 2)] + [(i, j) for i in _rng(3, k - 1) for j in _rng(2, k - 1 - e(i))]
    lo += [(k, j) for j in _rng(3, k - 1 - o(k)) if j % 2]
    hi = [(i, j) for i in _rng(4, k - 1) for j in _rng(4, k - 1 - o(i))]
    hi += [(k, j) for j in _rng(4, k - 1 - e(k)) if j % 2 == 0]
    return [("tsasm:L-prefix", lo, hi)]


_FACETS = {
    S.ASM: _asm_facets,
    S.VSASM: _vsasm_facets,
    S.VHSASM: _vhsasm_facets,
    S.HTSASM: _htsasm_facets,
    S.DSASM: _dsasm_facets,
    S.DASASM: _dasasm_facets,
    S.TSASM: _tsasm_facets,
}


def predicted_facets(cls: SymmetryClass, n: int) -> FacetPrediction:
    """Facet-defining rows of the core system, as (equation, side, index) triples."""
    _check_threshold(cls, n)
    entries = []
    for eq, lo, hi in _FACETS[cls](n):
        entries += [(eq, "lo", idx) for idx in lo]
        entries += [(eq, "hi", idx) for idx in hi]
    pred = FacetPrediction(cls, n, tuple(entries))
    assert len(set(pred.entries)) == len(pred) == predicted_facet_count(cls, n)
    return pred


def _as_equality(row: Row) -> Row:
    return Row(row.coeffs, EQ, row.rhs, row.tag)


def _implies(solver: LPSolver, row: Row, num_vars: int) -> bool:
    """Whether every point of the solver's polyhedron satisfies ``row``."""
    if not solver.feasible:
        return True
    obj = row.dense(num_vars)
    if row.rel != "<=":
        lo = solver.solve(obj, "min")
        if not lo.optimal or lo.value < row.rhs:
            return False
    if row.rel != ">=":
        hi = solver.solve(obj, "max")
        if not hi.optimal or hi.value > row.rhs:
            return False
    return True


def irredundant_rows(system: ConstraintSystem) -> tuple[list[int], list[int]]:
    """(implicit-equality rows, a minimal set of facet rows), both as row indices.

    Rows are discarded greedily in order whenever the rows still kept imply
    them; the survivors are in bijection with the facets.
    """
    implicit = implicit_equalities(system)
    eqs = [system.rows[i] for i in system.equalities] + [_as_equality(system.rows[i]) for i in implicit]
    skip = set(implicit)
    kept = [i for i in system.inequalities if i not in skip]
    for i in list(kept):
        rest = ConstraintSystem(system.num_vars, tuple(eqs) + tuple(system.rows[t] for t in kept if t != i))
        if _implies(LPSolver(rest), system.rows[i], system.num_vars):
            kept.remove(i)
    return implicit, kept


def verify_facets(cls: SymmetryClass, n: int, report_only: bool = False) -> VerificationReport:
    """Check a facet theorem on the core system.

    (a) every predicted row is non-implicit and irredundant among the
    predicted rows plus all equalities, (b) every other inequality row is
    implied by them, (c) the count equals the closed form.  Below the
    theorem threshold, or with ``report_only``, the true facet count is
    computed and reported without a prediction.
    """
    system = build_core(cls, n)
    N = system.num_vars
    below = cls not in FACET_THRESHOLDS or n < FACET_THRESHOLDS[cls] or (cls in _ODD_ONLY and n % 2 == 0)
    if report_only or below:
        _, kept = irredundant_rows(system)
        return VerificationReport(f"facets {cls.value} n={n}", "n/a", str(len(kept)), REPORT)

    pred = predicted_facets(cls, n)
    claim = f"facets {cls.value} n={n}"
    witnesses: list[str] = []
    by_tag = {r.tag: i for i, r in enumerate(system.rows)}
    chosen = []
    for tag in pred.tags:
        if tag not in by_tag:
            witnesses.append(f"predicted row {tag} is not in the core system")
        else:
            chosen.append(by_tag[tag])
    implicit = set(implicit_equalities(system))
    eqs = [system.rows[i] for i in system.equalities] + [_as_equality(system.rows[i]) for i in sorted(implicit)]
    bad = set()
    for i in chosen:
        if i in implicit:
            bad.add(i)
            witnesses.append(f"predicted row {system.rows[i].tag} is an implicit equality")
    facet_rows = [system.rows[i] for i in chosen]
    described = ConstraintSystem(N, tuple(eqs) + tuple(facet_rows))
    base = len(eqs)
    # (a) irredundancy
    for t, row in enumerate(facet_rows):
        if chosen[t] not in implicit and is_redundant(described, base + t):
            bad.add(chosen[t])
            witnesses.append(f"predicted row {row.tag} is redundant")
    # (b) every excluded row is implied
    solver = LPSolver(described)
    picked = set(chosen)
    for i in system.inequalities:
        if i in picked or i in implicit:
            continue
        if not _implies(solver, system.rows[i], N):
            witnesses.append(f"excluded row {system.rows[i].tag} is not implied")
    computed = len(chosen) - len(bad)
    return _report(claim, predicted_facet_count(cls, n), computed, witnesses)


# --- hull equality and optimisation ---------------------------------------------


def _flat_cost(cost: Sequence[Sequence[int]]) -> list[int]:
    return [c for row in cost for c in row]


def verify_hull_equality(
    cls: SymmetryClass,
    n: int,
    trials: int = 100,
    seed: int = 0,
    system: ConstraintSystem | None = None,
) -> VerificationReport:
    """Optimisation-oracle check that the full-space system describes the class polytope.

    Members come from direct matrix backtracking, so the check is independent
    of the core systems.  Every member must be feasible, and for each seeded
    random cost the LP optimum must equal the brute-force optimum at an
    integral vertex that is itself a member.
    """
    system = system if system is not None else build_fullspace(cls, n)
    claim = f"hull {cls.value} n={n} trials={trials}"
    members = enumerate_symmetric(cls, n)
    solver = LPSolver(system)
    if not members:
        computed = "feasible" if solver.feasible else "infeasible"
        return _report(claim, "infeasible", computed)
    if not solver.feasible:
        return _report(claim, f"{trials}/{trials}", "infeasible system", ["system is infeasible on a non-empty class"])
    witnesses = [f"member {m.flat()} violates {system.rows[system.violated_rows(m.flat())[0]].tag}"
                 for m in members if not system.satisfied_by(m.flat())][:3]
    rng = SplitMix64(seed)
    agree = 0
    for t in range(trials):
        cost = random_cost(rng, n)
        brute, _ = min_cost_brute(cls, n, cost, members)
        res = solver.solve(_flat_cost(cost), "min")
        ok = res.optimal and res.value == brute
        if ok and any(v.denominator != 1 for v in res.point):
            ok = False
        if ok and not is_member(SignMatrix.from_flat(n, [int(v) for v in res.point]), cls):
            ok = False
        if ok:
            agree += 1
        elif len(witnesses) < 3:
            got = res.value if res.optimal else res.status
            witnesses.append(f"trial {t}: lp {got} vs brute {brute}")
    return _report(claim, f"{trials}/{trials}", f"{agree}/{trials}", witnesses)


@lru_cache(maxsize=None)
def _optimisation_solver(cls: SymmetryClass, n: int) -> LPSolver:
    if cls is S.QTSASM:
        from .cuts import build_qtsasm_hull

        return LPSolver(build_qtsasm_hull(n))
    return LPSolver(build_core(cls, n))


def min_cost_xasm(cls: SymmetryClass, n: int, cost: Sequence[Sequence[int]]) -> tuple[SignMatrix, Fraction]:
    """Minimum of sum c_ij x_ij over the class, solved as an LP over the cores."""
    if len(cost) != n or any(len(r) != n for r in cost):
        raise ValueError(f"cost must be {n}x{n}")
    pattern = core_positions(cls, n)
    const, w = pattern.pullback(cost)
    if pattern.size == 0:
        m = assemble_sign(CoreVector.of(pattern, []))
        if not is_member(m, cls):
            raise ValueError(f"{cls.value} is empty at n={n}")
        return m, const
    solver = _optimisation_solver(cls, n)
    res = solver.solve(w, "min")
    if not res.optimal:
        raise ValueError(f"{cls.value} is empty at n={n}" if res.status == "infeasible" else res.status)
    if any(v.denominator != 1 for v in res.point):
        raise FractionalVertex(f"{cls.value} n={n}: fractional optimum {res.point}")
    m = assemble_sign(CoreVector.of(pattern, [int(v) for v in res.point]))
    if not is_member(m, cls):
        raise ValueError(f"{cls.value} n={n}: integral optimum is not a member (no such matrices exist)")
    return m, const + res.value


def random_core_objectives(n_vars: int, trials: int, seed: int = 0) -> list[list[int]]:
    rng = SplitMix64(seed)
    return [random_objective(rng, n_vars) for _ in range(trials)]
