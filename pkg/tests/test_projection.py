import random
from fractions import Fraction
from importlib.resources import files

import pytest
from hypothesis import given, settings, strategies as st

from symdet.algebra_core import Budget, FieldSpec, RingSpec, parse_polynomial
from symdet.algebra_core.modules import GradedFreeModule
from symdet.cmf import parse_cmf
from symdet.constructors import SexticInput, build_sextic
from symdet.formmatrix import (FormMatrix, graded_automorphism_random, is_symmetric, minors_ideal,
                               random_symmetric_matrix)
from symdet.projection import (
    FAIL, PASS, SKIPPED, ProjectionDatum, SymmetrizeError, conductor, expected_line_twists,
    further_rank_condition, loci, loci_predictions, matrix_factorization_check, ring_condition,
    squarefree_probe, symmetrize, verify,
)

CHECK_ORDER = ["shape", "symmetric", "det_nonzero", "det_degree_equals_K2", "det_ideal", "ring_condition",
               "codim_gamma", "squarefree_probe", "further_rank_condition", "plurigenus", "rdp_singularities"]


def load(name):
    return parse_cmf(files("symdet.data").joinpath(name).read_text()).matrix


def sextic(seed):
    return build_sextic(SexticInput.random(seed)).alpha_plus


# ------------------------------------------------------------------ verify

@pytest.mark.parametrize("seed", range(3))
def test_sextic_passes_every_check(seed):
    rep = verify(ProjectionDatum(sextic(seed), 4, 0, 6, seed))
    assert list(rep.checks) == CHECK_ORDER
    assert rep.ok
    assert all(v.status == PASS for k, v in rep.checks.items() if k != "rdp_singularities")
    assert rep.checks["rdp_singularities"].status == SKIPPED


def test_bundled_rational_example_passes():
    rep = verify(ProjectionDatum(load("sextic_example.cmf"), 4, 0, 6))
    assert rep.ok


@pytest.mark.parametrize("seed", range(4))
def test_diagonal_counterexample_fails_ring_condition(seed):
    rep = verify(ProjectionDatum(load("diagonal_counterexample.cmf"), seed=seed))
    assert rep.checks["ring_condition"].status == FAIL
    assert rep.checks["squarefree_probe"].status == FAIL
    assert not rep.ok


def test_nonsymmetric_example_fails_symmetry_with_witness():
    rep = verify(ProjectionDatum(load("nonsymmetric_example.cmf")))
    c = rep.checks["symmetric"]
    assert c.status == FAIL
    assert "entry (1,2)" in c.witness


def test_wrong_invariants_fail_shape_and_degree():
    rep = verify(ProjectionDatum(sextic(0), 4, 0, 7))
    assert rep.checks["shape"].status == FAIL
    assert rep.checks["det_degree_equals_K2"].status == FAIL


def test_expected_line_twists():
    assert expected_line_twists(4, 0, 6) == (0, -2)
    assert expected_line_twists(4, 1, 12) is None
    with pytest.raises(ValueError):
        expected_line_twists(4, 0, 3)


def test_budget_hits_become_skipped():
    rep = verify(ProjectionDatum(sextic(0), 4, 0, 6), budget=Budget(max_basis=1))
    assert rep.budget_hits
    assert all(rep.checks[k].status == SKIPPED for k in rep.budget_hits)


def test_report_is_plain_data():
    d = verify(ProjectionDatum(sextic(1), 4, 0, 6)).as_dict()
    assert d["ok"] is True
    assert d["checks"]["det_degree_equals_K2"]["witness"] == {"degree": 6, "K2": 6}


# ------------------------------------------------------------------ individual conditions

def test_ring_condition_direct():
    assert ring_condition(sextic(2)).passed
    assert not ring_condition(load("diagonal_counterexample.cmf")).passed


def test_further_rank_condition_is_vacuous_for_r_one():
    c = further_rank_condition(sextic(0))
    assert c.passed and "vacuous" in c.witness


def test_squarefree_probe():
    R = RingSpec.standard(("y0", "y1", "y2", "y3"), FieldSpec.prime(31991))
    P = lambda t: parse_polynomial(t, R)
    assert squarefree_probe(P("y0*y1 + y2^2")).status == PASS
    assert squarefree_probe(P("y0^2*y1")).status == FAIL


# ------------------------------------------------------------------ loci

def test_loci_of_a_sextic():
    L = loci(ProjectionDatum(sextic(3), 4, 0, 6))
    assert (L.gamma_dim, L.gamma_degree) == (1, 3)
    assert L.t_is_empty
    assert L.adjoint_degree == 1
    # the closed formula predicts 4 here; the computed curve has degree 3
    assert L.gamma_predicted == 4 and L.t_predicted == 0
    assert L.as_dict()["gamma"]["matches_prediction"] is False


def test_loci_predictions():
    assert loci_predictions(12, 1, 4) == (43, 60)
    assert loci_predictions(6, 0, 4) == (4, 0)
    assert loci_predictions(7, 0, 4)[0] == 8
    assert isinstance(loci_predictions(5, 0, 4)[1], Fraction)


def test_conductor():
    c = conductor(ProjectionDatum(sextic(0), 4, 0, 6))
    assert c.reliable
    g = loci(ProjectionDatum(sextic(0), 4, 0, 6)).gamma_ideal
    assert c.ideal.equals(g)
    bad = conductor(ProjectionDatum(load("diagonal_counterexample.cmf")))
    assert not bad.reliable and bad.note


# ------------------------------------------------------------------ matrix factorization

@given(st.integers(0, 10_000), st.integers(1, 4))
@settings(max_examples=25, deadline=None)
def test_matrix_factorization_identity(seed, n):
    R = RingSpec.standard(("y0", "y1", "y2", "y3"), FieldSpec.prime(31991))
    rng = random.Random(seed)
    tw = [-rng.randint(0, 1) for _ in range(n)]
    m = random_symmetric_matrix(R, tw, rng, shift=-2, density=0.6)
    assert matrix_factorization_check(m).passed


def test_matrix_factorization_rejects_wrong_beta():
    a = sextic(0)
    assert matrix_factorization_check(a, beta=a).status == FAIL


# ------------------------------------------------------------------ symmetrization

@pytest.mark.parametrize("seed", range(3))
def test_symmetrize_recovers_fitting_ideals(seed):
    b0 = sextic(seed)
    alpha = graded_automorphism_random(b0.target, seed + 10) @ b0
    res = symmetrize(alpha, seed=seed)
    assert is_symmetric(res.beta)
    for k in (1, 2):
        assert minors_ideal(res.beta, k).equals(minors_ideal(b0, k))


def test_symmetrize_symmetric_input_is_returned():
    b0 = sextic(0)
    res = symmetrize(b0)
    assert res.beta == b0 and res.attempts == 0


def test_symmetrize_errors():
    b0 = sextic(0)
    R = b0.ring
    P = lambda t: parse_polynomial(t, R)
    generic = FormMatrix(b0.source, b0.target, [[P("u0^5"), P("u1^3")], [P("u2^3"), P("v")]])
    with pytest.raises(SymmetrizeError, match="no lift found"):
        symmetrize(generic)
    R2 = RingSpec.standard(("y0", "y1"), FieldSpec.prime(2))
    m2 = FormMatrix.identity(GradedFreeModule(R2, (0,)))
    with pytest.raises(SymmetrizeError, match="char 2"):
        symmetrize(m2)
