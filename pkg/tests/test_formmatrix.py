import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import leibniz_det

from symdet.algebra_core import FieldSpec, Ideal, Polynomial, RingSpec, parse_polynomial
from symdet.algebra_core.modules import GradedFreeModule
from symdet.formmatrix import (
    FormMatrix, LayoutError, cofactor_adjoint, delete_first_row, determinant, determinant_bareiss,
    determinant_laplace, drop_first_row_and_column, graded_automorphism_random, inverse_upper_triangular,
    is_symmetric, layout_shift, minors, minors_ideal, random_symmetric_matrix, validate,
)

QQ = FieldSpec.rationals()
FP = FieldSpec.prime(31991)
R = RingSpec.standard(("y0", "y1", "y2", "y3"), FP)
RQ = RingSpec.standard(("y0", "y1", "y2", "y3"), QQ)


def _sym_layout(seed, n, ring=R, maxdeg=2):
    """Random symmetric matrix with entry degrees at most maxdeg."""
    rng = random.Random(seed)
    tw = [-rng.randint(0, maxdeg // 2) for _ in range(n)]
    return random_symmetric_matrix(ring, tw, rng, shift=-maxdeg, density=0.7)


@given(st.integers(0, 10_000), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_bareiss_matches_leibniz(seed, n):
    m = _sym_layout(seed, n)
    want = leibniz_det(m.entries, lambda a, b: a * b, lambda a, b: a + b, Polynomial.zero(R))
    assert determinant_bareiss(m) == want
    assert determinant_laplace(m) == want


@given(st.integers(0, 10_000), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_adjugate_identity(seed, n):
    m = _sym_layout(seed, n)
    d = determinant(m)
    adj = cofactor_adjoint(m)
    left = [[sum((m.entries[i][k] * adj.entries[k][j] for k in range(n)), Polynomial.zero(R))
             for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            assert left[i][j] == (d if i == j else Polynomial.zero(R))


def test_symmetric_layout_twists():
    P = lambda t: parse_polynomial(t, R)
    m = FormMatrix.symmetric_layout(R, (0, -2), [[P("y0^5"), P("y1^3")], [P("y1^3"), P("y2")]])
    assert m.source.twists == (-5, -3)
    assert is_symmetric(m)
    assert layout_shift(m) == -5
    assert validate(m) == []


def test_validate_reports_entry_indices():
    P = lambda t: parse_polynomial(t, R)
    m = FormMatrix.symmetric_layout(R, (0, -2), [[P("y0^4"), P("y1^3")], [P("y1^3"), P("y2 + y0^2")]])
    bad = validate(m)
    assert {(v.row, v.col) for v in bad} == {(0, 0), (1, 1)}
    assert "entry (1,1)" in str(bad[0])


def test_non_symmetric_detected():
    P = lambda t: parse_polynomial(t, R)
    m = FormMatrix.symmetric_layout(R, (0, -2), [[P("y0^5"), P("y1^3")], [P("y2^3"), P("y2")]])
    assert not is_symmetric(m)


def test_layout_error_on_wrong_shape():
    M = GradedFreeModule(R, (0, 0))
    with pytest.raises(LayoutError):
        FormMatrix(M, M, [[Polynomial.zero(R)]])


def test_minors_counts_and_ideal():
    P = lambda t: parse_polynomial(t, RQ)
    m = FormMatrix(GradedFreeModule(RQ, (-1, -1, -1)), GradedFreeModule(RQ, (0, 0)),
                   [[P("y0"), P("y1"), P("y2")], [P("y1"), P("y2"), P("y3")]])
    assert len([f for f in minors(m, 2) if f]) == 3
    I = minors_ideal(m, 2)
    h = I.hilbert()
    assert (h.dimension, h.degree) == (1, 3)
    assert minors_ideal(m, 1).equals(Ideal(RQ, [P(v) for v in ("y0", "y1", "y2", "y3")]))


def test_row_and_column_deletion():
    m = _sym_layout(5, 3)
    a1 = delete_first_row(m)
    a2 = drop_first_row_and_column(m)
    assert a1.shape == (2, 3)
    assert a2.shape == (2, 2)
    assert a2.entries == [row[1:] for row in m.entries[1:]]


@pytest.mark.parametrize("seed", range(5))
def test_graded_automorphism_inverse(seed):
    M = GradedFreeModule(R, (0, -2, -3))
    u = graded_automorphism_random(M, seed)
    assert (u @ inverse_upper_triangular(u)) == FormMatrix.identity(M)
    assert determinant(u).is_constant() and determinant(u)


def test_validate_with_changed_target_twists():
    P = lambda t: parse_polynomial(t, R)
    entries = [[P("y3^5 + y0^2*y3^3"), P("y0^3")], [P("y0^3"), P("y3")]]
    good = FormMatrix.symmetric_layout(R, (0, -2), entries)
    assert validate(good) == []
    # same entries and source, target twists (0, -1)
    moved = FormMatrix(good.source, GradedFreeModule(R, (0, -1)), entries)
    assert [(v.row, v.col) for v in validate(moved)] == [(1, 0), (1, 1)]
    assert validate(FormMatrix.zero(good.source, good.target)) == []
