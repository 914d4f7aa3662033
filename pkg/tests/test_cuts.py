from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sympoly.asm import SymmetryClass
from sympoly.core import core_positions, project
from sympoly.cuts import (
    CutSign,
    QtsasmDomain,
    build_qtsasm_hull,
    canonical_cuts,
    count_valid_signs,
    cut_from_sign,
    cut_via_recursion,
    enumerate_valid_signs,
    is_valid_sign,
    separate,
    violation,
)
from sympoly.enumeration import enumerate_class
from sympoly.hrep import build_core
from sympoly.lp import LPSolver
from sympoly.rng import SplitMix64, random_objective

QT = SymmetryClass.QTSASM
HALF = Fraction(1, 2)

# Frozen after the vectorised and the per-sign routes agreed.
VALID_SIGNS = {1: 1, 2: 3, 3: 21, 4: 249, 5: 9729}
CANONICAL = {1: 0, 2: 2, 3: 5, 4: 61, 5: 1777}

KNOWN_S = {(1, 4): 1, (2, 4): -1, (2, 1): -1, (2, 3): 1}


def _cores(n):
    return [project(m, core_positions(QT, n)).values for m in enumerate_class(QT, n)]


@pytest.mark.parametrize("n, size", [(1, 0), (2, 2), (3, 4), (4, 8), (5, 12)])
def test_domain_shape(n, size):
    dom = QtsasmDomain.of(n)
    assert dom.size == size
    k = n // 2
    expect = [(i, j) for i in range(k) for j in range(n)]
    if n % 2:
        expect += [(k, j) for j in range(k)]
    assert list(dom.positions) == expect


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_valid_sign_counts(n):
    assert count_valid_signs(n) == VALID_SIGNS[n]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vectorised_enumeration_matches_per_sign_check(n):
    import itertools

    dom = QtsasmDomain.of(n)
    brute = [s for s in itertools.product((-1, 0, 1), repeat=dom.size) if is_valid_sign(CutSign(dom, s))]
    assert [S.s for S in enumerate_valid_signs(n)] == brute


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_canonical_cut_counts(n):
    cuts = canonical_cuts(n)
    assert len(cuts) == CANONICAL[n]
    assert len({(r.coeffs, r.rhs) for r in cuts}) == len(cuts)
    assert all(r.tag.startswith("qtsasm:cut:") and r.rel == "<=" for r in cuts)


def test_zero_sign_is_valid():
    dom = QtsasmDomain.of(4)
    assert is_valid_sign(CutSign(dom, (0,) * dom.size))


def test_known_sign_gives_y11_cut_both_routes():
    S = CutSign.from_entries(4, KNOWN_S)
    assert is_valid_sign(S)
    for row in (cut_from_sign(S), cut_via_recursion(S)):
        assert row.coeffs == ((0, Fraction(1)),)
        assert row.rhs == 0


def test_shifted_four_entry_sign_is_invalid():
    S = CutSign.from_entries(4, {(1, 3): 1, (2, 3): -1, (2, 1): -1, (2, 2): 1})
    assert not is_valid_sign(S)
    with pytest.raises(ValueError):
        cut_from_sign(S)


def test_single_entry_sign_is_invalid():
    assert not is_valid_sign(CutSign.from_entries(4, {(1, 1): 1}))


def test_sign_vector_validation():
    dom = QtsasmDomain.of(4)
    with pytest.raises(ValueError):
        CutSign(dom, (0,) * (dom.size - 1))
    with pytest.raises(ValueError):
        CutSign(dom, (2,) + (0,) * (dom.size - 1))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_prefix_and_recursion_routes_agree(n):
    for S in enumerate_valid_signs(n) if n < 5 else list(enumerate_valid_signs(n))[::97]:
        assert cut_from_sign(S).canonical() == cut_via_recursion(S).canonical()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_cuts_valid_on_cores(n):
    cores = _cores(n)
    assert cores
    for row in canonical_cuts(n):
        for y in cores:
            assert row.satisfied_by(y), (row.tag, y)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_separate_returns_none_on_cores(n):
    for y in _cores(n):
        assert separate(y, n) is None


def test_separate_fractional_point():
    y = [HALF, 0, 0, HALF]
    assert build_core(QT, 4).satisfied_by(y)
    row = separate(y, 4)
    assert row is not None
    assert row.coeffs == ((0, Fraction(1)),) and row.rhs == 0 and row.rel == "<="
    assert violation(row, y) == HALF


def test_separate_midpoint_of_cores_is_not_cut():
    a, b = _cores(4)
    mid = [(Fraction(u) + Fraction(v)) / 2 for u, v in zip(a, b)]
    assert separate(mid, 4) is None


@given(st.lists(st.sampled_from([Fraction(0), Fraction(1, 4), HALF, Fraction(3, 4), Fraction(1)]), min_size=4, max_size=4))
def test_separate_consistent_with_cut_list(y):
    row = separate(y, 4)
    worst = max((violation(r, y) for r in canonical_cuts(4)), default=Fraction(0))
    if row is None:
        assert worst <= 0
    else:
        assert violation(row, y) > 0


@pytest.mark.parametrize("n", [4, 5])
def test_hull_vertices_integral(n):
    hull = build_qtsasm_hull(n)
    solver = LPSolver(hull)
    cores = {tuple(Fraction(v) for v in y) for y in _cores(n)}
    rng = SplitMix64(0)
    for _ in range(100):
        res = solver.solve(random_objective(rng, hull.num_vars), "min")
        assert res.optimal
        assert tuple(res.point) in cores


def test_prune_implied_keeps_polytope():
    full = LPSolver(build_qtsasm_hull(4))
    pruned_sys = build_qtsasm_hull(4, prune_implied=True)
    pruned = LPSolver(pruned_sys)
    assert len(pruned_sys.rows) < len(build_qtsasm_hull(4).rows)
    rng = SplitMix64(7)
    for _ in range(30):
        c = random_objective(rng, pruned_sys.num_vars)
        assert full.solve(c, "min").value == pruned.solve(c, "min").value


def test_n1_hull_is_base():
    assert build_qtsasm_hull(1) == build_core(QT, 1)


@pytest.mark.parametrize("n", [0, 6])
def test_size_limits(n):
    with pytest.raises(ValueError):
        canonical_cuts(n)
