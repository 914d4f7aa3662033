from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sympoly.asm import SignMatrix, SymmetryClass, apply_symmetry, identity_matrix
from sympoly.core import (
    CoreVector,
    assemble,
    assemble_sign,
    core_positions,
    core_size,
    format_rational,
    parse_rational,
    project,
    roundtrip_class,
)
from sympoly.enumeration import enumerate_asms, enumerate_symmetric

S = SymmetryClass
ALL = list(S)
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=7)


def _expected_positions(cls, n):
    k, l = n // 2, (n + 1) // 2
    R = range(1, n + 1)
    if cls is S.ASM:
        C = [(i, j) for i in R for j in R]
    elif cls is S.VSASM:
        C = [(i, j) for i in R for j in range(1, k + 1)]
    elif cls is S.VHSASM:
        C = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]
    elif cls is S.HTSASM:
        C = [(i, j) for i in R for j in range(1, k + 1)] + ([(i, k + 1) for i in range(1, k + 1)] if n % 2 else [])
    elif cls is S.QTSASM:
        C = [(i, j) for i in range(1, l + 1) for j in range(1, k + 1)]
    elif cls is S.DSASM:
        C = [(i, j) for i in R for j in R if i <= j]
    elif cls is S.DASASM:
        C = [(i, j) for i in range(1, k + 1) for j in R if i <= j <= n + 1 - i]
    else:
        C = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1) if i <= j]
    return sorted((i - 1, j - 1) for i, j in C)


@pytest.mark.parametrize("cls", ALL)
@pytest.mark.parametrize("n", range(1, 10))
def test_positions_match_definition(cls, n):
    p = core_positions(cls, n)
    assert list(p.positions) == _expected_positions(cls, n)
    assert p.size == core_size(cls, n)


def test_position_examples():
    assert core_positions(S.VSASM, 3).positions == ((0, 0), (1, 0), (2, 0))
    assert core_positions(S.DSASM, 3).size == 6
    assert [i for i, _ in core_positions(S.DASASM, 5).positions] == [0] * 5 + [1] * 3


def test_project_examples():
    assert project(identity_matrix(3), core_positions(S.DSASM, 3)).values == (1, 0, 0, 1, 0, 1)
    half = Fraction(1, 2)
    mid = [[half * ((i == j) + (i + j == 2)) for j in range(3)] for i in range(3)]
    assert project(mid, core_positions(S.VSASM, 3)).values == (half, 0, half)


def test_project_size_mismatch():
    with pytest.raises(ValueError):
        project(identity_matrix(3), core_positions(S.VSASM, 5))


def test_vsasm_assembly_example(diamond):
    y = CoreVector.of(core_positions(S.VSASM, 3), (0, 1, 0))
    assert assemble_sign(y) == diamond


def test_qtsasm_center_example(diamond):
    y = CoreVector.of(core_positions(S.QTSASM, 3), (0, 1))
    assert assemble(y)[1][1] == -1
    assert assemble_sign(y) == diamond


@st.composite
def class_cores(draw):
    cls = draw(st.sampled_from(ALL))
    n = draw(st.integers(1, 7))
    p = core_positions(cls, n)
    vals = draw(st.lists(rationals, min_size=p.size, max_size=p.size))
    return cls, CoreVector.of(p, vals)


@given(class_cores())
def test_project_after_assemble_is_identity(case):
    _, y = case
    assert project(assemble(y), y.pattern) == y


@given(class_cores())
def test_assembly_is_invariant_for_rational_cores(case):
    from sympoly.asm import transform_array

    cls, y = case
    X = assemble(y)
    for g in cls.generators:
        assert transform_array(X, g) == X


@given(class_cores(), st.data())
def test_assembly_is_affine(case, data):
    _, y = case
    z = CoreVector.of(y.pattern, data.draw(st.lists(rationals, min_size=y.pattern.size, max_size=y.pattern.size)))
    lam = data.draw(rationals)
    mix = CoreVector.of(y.pattern, [lam * a + (1 - lam) * b for a, b in zip(y.values, z.values)])
    Xy, Xz, Xm = assemble(y), assemble(z), assemble(mix)
    n = y.pattern.n
    assert all(Xm[i][j] == lam * Xy[i][j] + (1 - lam) * Xz[i][j] for i in range(n) for j in range(n))


@given(class_cores())
def test_core_vector_json_round_trip(case):
    _, y = case
    assert CoreVector.from_json(y.to_json()) == y


@pytest.mark.parametrize("q, text", [(Fraction(-3, 6), "-1/2"), (Fraction(0), "0/1"), (4, "4/1")])
def test_rational_format(q, text):
    assert format_rational(q) == text
    assert parse_rational(text) == Fraction(q)


@pytest.mark.parametrize("cls, n", [(S.ASM, 3), (S.VSASM, 5), (S.DASASM, 5), (S.HTSASM, 4), (S.TSASM, 7)])
def test_roundtrip_examples(cls, n):
    members = enumerate_asms(n) if cls is S.ASM else enumerate_symmetric(cls, n)
    assert members
    assert roundtrip_class(cls, n, members)


def test_roundtrip_reports_failure():
    bad = identity_matrix(3)  # not a VSASM: the fixed middle column is lost
    result = roundtrip_class(S.VSASM, 3, [bad])
    assert not result and result.first_failure == bad


def test_assemble_sign_rejects_fractional():
    y = CoreVector.of(core_positions(S.DSASM, 2), (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(ValueError):
        assemble_sign(y)


def test_core_vector_length_checked():
    with pytest.raises(ValueError):
        CoreVector.of(core_positions(S.DSASM, 2), (1, 0))


def test_reflected_member_has_same_core():
    m = SignMatrix.from_rows([[0, 1, 0], [1, -1, 1], [0, 1, 0]])
    from sympoly.asm import D4Element

    p = core_positions(S.VSASM, 3)
    assert project(apply_symmetry(m, D4Element.REFL_V), p) == project(m, p)
