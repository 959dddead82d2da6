import random

import pytest
from hypothesis import given, settings, strategies as st

from symdet.algebra_core import FieldSpec, Ideal, Polynomial, RingSpec, parse_polynomial
from symdet.constructors import (
    ConstructionError, InvariantExpresser, NotExpressible, SexticInput, a_form_matrix,
    build_cover_presentation, build_sextic, compound2, elliptic_quartic_is_smooth, heisenberg_quadrics,
    quadratic_in_u,
)
from symdet.formmatrix import is_symmetric
from symdet.projection import ProjectionDatum, loci

QQ = FieldSpec.rationals()


@pytest.mark.parametrize("seed", range(5))
def test_sextic_determinant_identity(seed):
    out = build_sextic(SexticInput.random(seed))
    S = out.alpha_plus.ring
    v = Polynomial.var(S, 3)
    want = v ** 6 + out.A_form * v ** 4 + out.B_form * v ** 2 - out.C_form * out.C_form
    assert out.sextic == want
    assert is_symmetric(out.alpha_plus)
    assert out.alpha_plus.target.twists == (0, -2)
    assert out.C_form.is_homogeneous(3) and out.A_form.is_homogeneous(2)


def test_sextic_without_B():
    out = build_sextic(SexticInput.random(7, with_B=False))
    assert not out.B_form
    assert out.sextic.degree_in(3) == 6


def test_C_bilinear_substitutes_back():
    inp = SexticInput.random(2)
    out = build_sextic(inp)
    ex = InvariantExpresser(inp)
    assert ex.substitute(out.C_form) == ex.basis.normal_form(out.C_bilinear)


def test_express_simple_invariants():
    inp = SexticInput.random(4)
    ex = InvariantExpresser(inp)
    x0, x1, x2, y3, y4, w0, w1, w2, z3, z4 = Polynomial.gens(ex.R)
    S = ex.S
    u0 = x1 * w2 - x2 * w1
    v = y3 * z4 - y4 * z3
    assert ex.express(u0 * v) == parse_polynomial("u0*v", S)
    assert ex.express(u0 * u0 + v * v) == parse_polynomial("u0^2 + v^2", S)


def test_non_invariant_is_not_expressible():
    ex = InvariantExpresser(SexticInput.random(4))
    x0, x1, x2, y3, y4, w0, w1, w2, z3, z4 = Polynomial.gens(ex.R)
    with pytest.raises(NotExpressible):
        ex.express(x0 * w1 + x1 * w0)
    with pytest.raises(NotExpressible):
        ex.express(x0)


def test_degenerate_inputs_raise():
    a = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    b = [[0, 1, 0], [1, 0, 0], [0, 0, 2]]
    with pytest.raises(ConstructionError, match="C vanishes"):
        build_sextic(SexticInput(a, b, a, field=QQ))
    with pytest.raises(ConstructionError):
        SexticInput(a, [[0, 1, 0], [2, 0, 0], [0, 0, 1]], a)


def test_a_form_variants():
    inp = SexticInput.random(3)
    M = a_form_matrix(inp, "as_written")
    Ms = a_form_matrix(inp, "symmetrized")
    assert M != Ms
    out = build_sextic(inp, variant="symmetrized")
    assert out.A_form == quadratic_in_u(Ms, out.alpha_plus.ring)
    assert out.A_form_symmetrized == quadratic_in_u(M, out.alpha_plus.ring)
    with pytest.raises(ValueError):
        a_form_matrix(inp, "other")


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_compound_is_multiplicative(seed):
    rng = random.Random(seed)
    A = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
    B = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
    AB = [[sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    cA, cB, cAB = compound2(A, QQ), compound2(B, QQ), compound2(AB, QQ)
    prod = [[sum(cA[i][k] * cB[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    # Cauchy-Binet: indexing the 2-subsets by their complements is the same relabeling on both sides
    assert prod == cAB


@pytest.mark.parametrize("seed", range(2))
def test_sextic_gamma_is_cut_out_by_C_and_v(seed):
    out = build_sextic(SexticInput.random(seed))
    L = loci(ProjectionDatum(out.alpha_plus, 4, 0, 6))
    S = out.alpha_plus.ring
    assert L.gamma_ideal.equals(Ideal(S, [out.C_form, Polynomial.var(S, 3)]))


# ------------------------------------------------------------------ main stream pieces

def test_heisenberg_pencil_smoothness():
    F = FieldSpec.prime(10007)
    assert elliptic_quartic_is_smooth(2, F)
    assert not elliptic_quartic_is_smooth(0, F)


def test_heisenberg_quadrics_are_invariant_under_the_shift():
    R = RingSpec.standard(("x0", "x1", "x2", "x3"), FieldSpec.prime(10007))
    Q, Q2 = heisenberg_quadrics(R, 2)
    # x_i -> x_(i+1) swaps the two quadrics
    shift = [Polynomial.var(R, (i + 1) % 4) for i in range(4)]
    assert Q.substitute(shift, R) == Q2
    assert Q2.substitute(shift, R) == Q


# ------------------------------------------------------------------ bidouble cover

def test_cover_presentation():
    cov = build_cover_presentation()
    assert len(cov.relations) == 6
    assert all(r.is_homogeneous(2) for r in cov.relations)
    assert cov.eigenspace_dims == {"chi0": 9, "chi1": 4, "chi2": 4, "chi3": 4}
    assert sum(cov.eigenspace_dims.values()) == 21
    qc = cov.quadric_check
    assert qc["monomial_counts"] == {"chi0": 4, "chi1": 2, "chi2": 2, "chi3": 2}
    assert qc["no_forced_quadric"]
    assert cov.as_dict()["generators"][0] == {"name": "omega", "character": "chi0"}
