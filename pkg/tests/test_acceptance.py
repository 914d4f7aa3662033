"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line."""
from __future__ import annotations

from fractions import Fraction

from sympoly.asm import SymmetryClass
from sympoly.core import assemble_sign, core_positions, project
from sympoly.cuts import (
    build_qtsasm_hull,
    canonical_cuts,
    cut_from_sign,
    enumerate_valid_signs,
    separate,
)
from sympoly.enumeration import enumerate_class, enumerate_symmetric, integer_points, min_cost_brute
from sympoly.hrep import build_core
from sympoly.lp import LPSolver
from sympoly.rng import SplitMix64, random_cost, random_objective
from sympoly.tu import LAMINAR_CLASSES, dsasm_z_system, laminar_incidence, submatrix_dets
from sympoly.verify import (
    dimension_routes,
    min_cost_xasm,
    predicted_dimension,
    verify_facets,
    verify_hull_equality,
)

S = SymmetryClass
HALF = Fraction(1, 2)

RANGES = {
    S.VSASM: (1, 3, 5, 7),
    S.VHSASM: (5, 7, 9),
    S.HTSASM: (2, 3, 4, 5),
    S.QTSASM: (3, 4, 5),
    S.DSASM: (2, 3, 4, 5),
    S.DASASM: (2, 3, 4, 5, 6),
    S.TSASM: (3, 5, 7, 9),
    S.ASM: (1, 2, 3, 4, 5),
}
PAIRS = [(cls, n) for cls, ns in RANGES.items() for n in ns]

DIMENSIONS = {
    S.ASM: {3: 4, 4: 9},
    S.VSASM: {3: 0, 5: 2, 7: 8},
    S.VHSASM: {5: 0, 7: 1, 9: 4},
    S.HTSASM: {2: 1, 3: 2, 4: 5, 5: 8},
    S.DSASM: {2: 1, 3: 3, 4: 6, 5: 10},
    S.DASASM: {2: 1, 3: 2, 4: 4, 5: 6, 6: 9},
    S.TSASM: {3: 0, 5: 0, 7: 1, 9: 3},
}

FACETS = {
    (S.ASM, 3): 8, (S.ASM, 4): 20,
    (S.HTSASM, 4): 10, (S.HTSASM, 5): 18,
    (S.DSASM, 3): 5, (S.DSASM, 4): 11,
    (S.DASASM, 2): 2, (S.DASASM, 3): 3, (S.DASASM, 4): 6,
    (S.VSASM, 7): 14, (S.VHSASM, 9): 6, (S.TSASM, 9): 4,
}

HULLS = {
    S.HTSASM: (3, 4, 5), S.DSASM: (3, 4, 5), S.DASASM: (3, 4, 5),
    S.VSASM: (3, 5, 7), S.VHSASM: (5, 7, 9), S.TSASM: (5, 7, 9),
}

EMPTY = [(S.VSASM, n) for n in (2, 4, 6, 8)] + [(S.VHSASM, n) for n in (2, 4, 6)] + [(S.TSASM, n) for n in (2, 4, 6)] + [(S.QTSASM, 6)]


def _cores(cls, n):
    pattern = core_positions(cls, n)
    return [tuple(project(m, pattern).values) for m in enumerate_symmetric(cls, n)]


def test_criterion_01_integer_points_equal_cores(acceptance):
    with acceptance(1, "integer points of every core system equal the projected members"):
        bad = []
        for cls, n in PAIRS:
            points = set(integer_points(build_core(cls, n)))
            cores = set(_cores(cls, n))
            if not cores or points != cores:
                bad.append(f"{cls.value} n={n}: {len(points)} points vs {len(cores)} cores")
        assert not bad, "; ".join(bad)


def test_criterion_02_assembly_round_trip(acceptance):
    with acceptance(2, "assembling the projected core gives back every member"):
        bad = []
        for cls, n in PAIRS:
            pattern = core_positions(cls, n)
            for m in enumerate_symmetric(cls, n):
                if assemble_sign(project(m, pattern)) != m:
                    bad.append(f"{cls.value} n={n}: {m.flat()}")
        assert not bad, "; ".join(bad[:5])


def test_criterion_03_dimensions(acceptance):
    with acceptance(3, "dimensions agree with the closed forms by both routes"):
        bad = []
        for cls, table in DIMENSIONS.items():
            for n, dim in table.items():
                hull, lp = dimension_routes(cls, n)
                if not (hull == lp == dim == predicted_dimension(cls, n)):
                    bad.append(f"{cls.value} n={n}: hull {hull}, lp {lp}, expected {dim}")
        assert not bad, "; ".join(bad)


def test_criterion_04_facets(acceptance):
    with acceptance(4, "predicted facet sets are exactly the facets at the threshold sizes"):
        bad = []
        for (cls, n), count in FACETS.items():
            r = verify_facets(cls, n)
            if r.status != "match" or r.computed != str(count):
                bad.append(f"{cls.value} n={n}: {r.computed} ({'; '.join(r.witnesses[:2])})")
        assert not bad, "; ".join(bad)


def test_criterion_05_hull_equality(acceptance):
    with acceptance(5, "full-space LP optima equal brute force over 100 seeded objectives"):
        bad = []
        for cls, ns in HULLS.items():
            for n in ns:
                r = verify_hull_equality(cls, n, trials=100, seed=0)
                if r.status != "match" or r.computed != "100/100":
                    bad.append(f"{cls.value} n={n}: {r.computed} {list(r.witnesses)}")
        assert not bad, "; ".join(bad)


def test_criterion_06_qtsasm_cuts(acceptance):
    with acceptance(6, "QTSASM cuts separate the fractional point, are valid and give the hull"):
        # (a) the half-sum point of I4 and its anti-diagonal partner
        y = [HALF, 0, 0, HALF]
        assert build_core(S.QTSASM, 4).satisfied_by(y)
        row = separate(y, 4)
        assert row is not None and row.coeffs == ((0, Fraction(1)),) and row.rel == "<=" and row.rhs == 0
        assert row.lhs(y) > row.rhs
        for n in (4, 5):
            cores = _cores(S.QTSASM, n)
            # (b) every cut from every valid sign, reduced or not
            for sign in enumerate_valid_signs(n):
                cut = cut_from_sign(sign)
                assert all(cut.satisfied_by(c) for c in cores), f"n={n}: cut from {sign.s} cuts off a core"
            assert all(r.satisfied_by(c) for r in canonical_cuts(n) for c in cores)
            # (c) optimisation oracle against the enumeration
            solver = LPSolver(build_qtsasm_hull(n))
            rng = SplitMix64(0)
            for t in range(100):
                w = random_objective(rng, len(cores[0]))
                res = solver.solve(w, "min")
                brute = min(sum(a * b for a, b in zip(w, c)) for c in cores)
                assert res.optimal and res.value == brute, f"n={n} trial {t}: {res.value} vs {brute}"
                assert tuple(res.point) in set(cores), f"n={n} trial {t}: vertex {res.point} is not a core"


def test_criterion_07_nonexistence(acceptance):
    with acceptance(7, "classes with no members at the excluded sizes"):
        bad = []
        for cls, n in EMPTY:
            direct = len(enumerate_symmetric(cls, n))
            via_core = len(enumerate_class(cls, n))
            if direct or via_core:
                bad.append(f"{cls.value} n={n}: {direct}/{via_core}")
        assert not bad, "; ".join(bad)


def test_criterion_08_structural_lemmas(acceptance):
    with acceptance(8, "middle-column alternation and the quarter-turn center value"):
        checked = 0
        for cls in (S.VSASM, S.VHSASM, S.TSASM):
            for n in RANGES[cls]:
                k = n // 2
                for m in enumerate_symmetric(cls, n):
                    assert all(m.entries[i][k] == (-1) ** i for i in range(n)), f"{cls.value} n={n}: {m.flat()}"
                    checked += 1
        for n in RANGES[S.QTSASM]:
            if n % 2 == 0:
                continue
            k = n // 2
            for m in enumerate_symmetric(S.QTSASM, n):
                assert m.entries[k][k] == (-1) ** k, f"QTSASM n={n}: {m.flat()}"
                checked += 1
        assert checked > 0


def test_criterion_09_vertex_integrality(acceptance):
    with acceptance(9, "integral LP vertices on every integral class; fractional QTSASM control"):
        bad = []
        for cls, n in PAIRS:
            if cls is S.QTSASM:
                continue
            system = build_core(cls, n)
            solver = LPSolver(system)
            rng = SplitMix64(0)
            for t in range(100):
                res = solver.solve(random_objective(rng, system.num_vars), "min")
                if not res.optimal or any(v.denominator != 1 for v in res.point):
                    bad.append(f"{cls.value} n={n} trial {t}")
                    break
        assert not bad, "; ".join(bad)
        base = build_core(S.QTSASM, 4)
        solver = LPSolver(base)
        rng = SplitMix64(0)
        fractional = 0
        for _ in range(100):
            res = solver.solve(random_objective(rng, base.num_vars), "min")
            fractional += any(v.denominator != 1 for v in res.point)
        assert fractional >= 1, "no fractional vertex found on the QTSASM base system"


def test_criterion_10_min_cost(acceptance):
    with acceptance(10, "LP minimum-cost members agree with brute force on 50 costs per pair"):
        bad = []
        for cls, n in PAIRS:
            members = enumerate_symmetric(cls, n)
            rng = SplitMix64(0)
            for t in range(50):
                cost = random_cost(rng, n)
                m, value = min_cost_xasm(cls, n, cost)
                brute, _ = min_cost_brute(cls, n, cost, members)
                if value != brute or m not in members:
                    bad.append(f"{cls.value} n={n} trial {t}: {value} vs {brute}")
                    break
        assert not bad, "; ".join(bad)


def test_criterion_11_total_unimodularity(acceptance):
    with acceptance(11, "1000 sampled square submatrices have determinant in {-1, 0, 1}"):
        matrices = {f"laminar {cls.value} n={n}": laminar_incidence(cls, n)
                    for cls, n in zip(LAMINAR_CLASSES, (5, 7, 9, 5))}
        matrices |= {f"digraph DSASM n={n}": dsasm_z_system(n)[0] for n in (3, 4, 5)}
        bad = []
        for label, M in matrices.items():
            dets = submatrix_dets(M, 1000, seed=0, max_size=8)
            if len(dets) != 1000 or not set(dets) <= {-1, 0, 1}:
                bad.append(f"{label}: {sorted(set(dets))}")
            if not any(dets):
                bad.append(f"{label}: every sample was singular")
        assert not bad, "; ".join(bad)
