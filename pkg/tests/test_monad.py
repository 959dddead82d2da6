import pytest
from hypothesis import given, settings, strategies as st

from symdet.algebra_core import FieldSpec, RingSpec, parse_polynomial
from symdet.formmatrix import FormMatrix, is_symmetric
from symdet.monad import (
    BlockMatrix, BundleSum, ShapeError, SummandKind, adjoint_pairing, beilinson_table, bott_h0,
    cokernel_dims, contraction, contraction_differential, expected_bundle_sum, hom_space_basis,
    hom_space_dim, hom_space_dim_oracle, hom_tag, monad_to_presentation, p3_ring,
    random_block_matrix, split_double_cover, validate_blocks,
)
from symdet.monad import koszul_differential, omega_section_dim

O = SummandKind.line
Om = SummandKind.cotangent


# ------------------------------------------------------------------ Bott numbers and Koszul models

def test_bott_small_values():
    assert bott_h0(1, 2) == 6
    assert bott_h0(2, 3) == 4
    assert bott_h0(0, -1) == 0
    assert bott_h0(3, 4) == 1


@pytest.mark.parametrize("p", [1, 2, 3])
def test_koszul_module_matches_bott(p):
    for t in range(-4, 5):
        for d in range(0, 7):
            assert omega_section_dim(p, t, d) == bott_h0(p, t + d), (p, t, d)


def test_koszul_complex_is_a_complex():
    R = p3_ring()
    for k in range(2, 5):
        prod = koszul_differential(R, k - 1, 0) @ koszul_differential(R, k, 0)
        assert all(not f for row in prod.entries for f in row)


def test_koszul_ranks_pattern():
    R = p3_ring()
    shapes = [koszul_differential(R, k, 0).shape for k in range(1, 5)]
    assert shapes == [(1, 4), (4, 6), (6, 4), (4, 1)]


def test_contractions_anticommute():
    for k in (2, 3, 4):
        for i in range(4):
            for j in range(4):
                A = [[sum(a * b for a, b in zip(r, c)) for c in zip(*contraction(k, j))]
                     for r in contraction(k - 1, i)]
                B = [[sum(a * b for a, b in zip(r, c)) for c in zip(*contraction(k, i))]
                     for r in contraction(k - 1, j)]
                assert all(x + y == 0 for ra, rb in zip(A, B) for x, y in zip(ra, rb))


# ------------------------------------------------------------------ Hom spaces

@pytest.mark.parametrize("src,tgt,dim", [
    (Om(2, 2), Om(1, 1), 4),
    (Om(2, 2), O(0), 6),
    (O(-3), O(2), 56),
    (Om(1, 1), O(2), 36),
    (Om(2, 2), O(2), 45),
    (Om(1, 1), Om(1, 1), 1),
    (Om(1, 1), Om(2, 2), 0),
])
def test_hom_space_dims(src, tgt, dim):
    assert hom_space_dim(src, tgt) == dim
    assert hom_space_dim_oracle(src, tgt) == dim


@given(st.integers(0, 3), st.integers(-2, 3), st.integers(0, 3), st.integers(-2, 3))
@settings(max_examples=40, deadline=None)
def test_bott_backend_agrees_with_linear_algebra(p, s, q, t):
    src = SummandKind(p, s)
    tgt = SummandKind(q, t)
    assert hom_space_dim(src, tgt) == hom_space_dim_oracle(src, tgt)


def test_hom_tags():
    assert hom_tag(Om(2, 2), Om(1, 1)) == "V"
    assert hom_tag(Om(2, 2), O(0)) == "Lambda^2V"
    assert hom_tag(O(-3), O(2)) == "S_5V*"
    assert hom_tag(Om(1, 1), Om(2, 2)) == "0"


def test_summand_text_round_trip():
    for s in (O(-2), Om(1, -1), Om(2, 0)):
        assert SummandKind.from_text(s.label()) == s
    with pytest.raises(ValueError):
        SummandKind.from_text("Q(3)")


def test_expected_bundle_sum():
    E = expected_bundle_sum(4, 1, 12)
    assert E.label() == "O(0) + 6O(-2) + Omega^1(-1)"
    assert E.rank == 1 + 6 + 3
    with pytest.raises(ValueError):
        expected_bundle_sum(4, 0, 3)


# ------------------------------------------------------------------ Beilinson tables

def test_table_4_1_12_m3():
    T = beilinson_table(4, 1, 12, 3)
    assert T.row(0) == (1, 4, 16, 40)
    assert T.row(1) == (1, 1, 0, 0)
    assert T.row(2) == (4, 1, 0, 0)
    assert T.row(3) == (0, 0, 0, 0)
    assert T.vanishing_ok()


@pytest.mark.parametrize("inv", [(4, 1, 12), (4, 0, 6), (5, 2, 20), (6, 0, 10)])
def test_m2_table_is_serre_symmetric(inv):
    assert beilinson_table(*inv, m=2).is_serre_symmetric()


def test_m3_table_is_not_serre_symmetric():
    assert not beilinson_table(4, 1, 12, 3).is_serre_symmetric()


def test_table_rejects_bad_input():
    with pytest.raises(ValueError):
        beilinson_table(4, 1, 12, m=4)
    with pytest.raises(ValueError):
        beilinson_table(3, 0, 6)


def test_differential_squares_to_zero():
    skel = contraction_differential(beilinson_table(4, 1, 12, 3), field=FieldSpec.prime(31991))
    assert skel.composition_vanishes()
    top = skel.block(2, 3)
    assert top.known and (top.source_dim, top.target_dim) == (4, 1)


# ------------------------------------------------------------------ block matrices

@pytest.mark.parametrize("inv,seed", [((4, 0, 6), 0), ((5, 1, 8), 1), ((5, 2, 10), 2)])
def test_random_block_matrix_validates(inv, seed):
    a = random_block_matrix(*inv, seed)
    rep = validate_blocks(a, *inv)
    assert rep.ok, rep.issues


def test_forced_zero_violation_is_reported():
    a = random_block_matrix(5, 1, 8, 3)
    i = next(k for k, s in enumerate(a.tgt) if s == Om(2, 0))
    j = next(k for k, s in enumerate(a.src) if s == Om(2, 0))
    a.set_block(i, j, hom_space_basis(a.src[j], a.tgt[i])[0])
    rep = validate_blocks(a, 5, 1, 8)
    assert not rep.ok
    assert any("must be zero" in msg for msg in rep.issues)


def test_block_shape_mismatch_raises():
    a = random_block_matrix(4, 0, 6, 0)
    with pytest.raises(ShapeError):
        validate_blocks(a, 5, 1, 8)


def test_all_line_monad_is_its_own_presentation():
    R = p3_ring()
    P = lambda t: parse_polynomial(t, R)
    alpha = FormMatrix.symmetric_layout(R, (0, -2), [[P("y0^5"), P("y1^3")], [P("y1^3"), P("y2")]])
    bm = BlockMatrix.from_form_matrix(alpha)
    assert monad_to_presentation(bm) == alpha


def test_presentation_of_line_monad_has_plurigenera():
    a = random_block_matrix(4, 0, 6, 2)
    P = monad_to_presentation(a)
    # chi = 5, K^2 = 6: h^0(mK) = 5 + 3 m (m - 1) for m >= 2
    assert cokernel_dims(P, range(0, 4)) == [1, 4, 11, 23]


def test_bundle_sum_dual_is_an_involution():
    E = expected_bundle_sum(5, 1, 8)
    assert E.dual(-5).dual(-5) == E
    assert E.dual(-5).rank == E.rank
    assert BundleSum.lines((0, -2)).is_split


# ------------------------------------------------------------------ double covers

def _sextic_like():
    R = RingSpec.standard(("y0", "y1", "y2", "y3"), FieldSpec.rationals())
    P = lambda t: parse_polynomial(t, R)
    return R, P


def test_split_case_a():
    R, P = _sextic_like()
    z = P("0")
    alpha = FormMatrix.symmetric_layout(R, (0, -2, -2), [[P("y0^5"), z, P("y1^3")],
                                                          [z, P("y2"), z],
                                                          [P("y1^3"), z, P("y3")]])
    sd = split_double_cover(alpha, "a", "-+")
    assert sd.plus_rows == [0, 2] and sd.minus_rows == [1]
    assert is_symmetric(sd.alpha_plus)
    assert sd.alpha_minus.entries == [[P("y2")]]


def test_split_case_b_requires_transpose():
    R, P = _sextic_like()
    z = P("0")
    alpha = FormMatrix.symmetric_layout(R, (0, -2), [[z, P("y1^3")], [P("y1^3"), z]])
    sd = split_double_cover(alpha, "b", "-")
    assert sd.alpha_plus.entries == [[P("y1^3")]]
    with pytest.raises(ShapeError):
        split_double_cover(alpha, "a", "-")
    with pytest.raises(ShapeError):
        split_double_cover(alpha, "b", "+-")


def test_adjoint_pairing():
    R, P = _sextic_like()
    am = FormMatrix.symmetric_layout(R, (-1, -1), [[P("y0"), P("y1")], [P("y1"), P("y2")]])
    ap = adjoint_pairing(am)
    assert ap.determinant == P("y0*y2 - y1^2")
    assert ap.matrix.entries == [[P("y2"), P("-y1")], [P("-y1"), P("y0")]]
