from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from oracles import bundle_types_brute_force

from symdet.algebra_core import parse_polynomial
from symdet.geography import (
    FAIL, NA, PASS, BeauvilleViolation, GeographyError, InvariantRecord, InvolutionQuotient, Polarization,
    Z2Z2Cover, chow_classes, chow_eval, chow_ring, direct_image_degrees, enumerate_bundle_types,
    fixed_point_count, forced_consequences, inequality_report, moduli_lower_bound, no_hyperelliptic_fibre,
    odd_characteristics, parse_family, slope, special_family_invariants, strata_table, sym_power_degree,
    u_dimension,
)


# ------------------------------------------------------------------ inequalities

def test_beauville_equality_gives_product():
    rep = inequality_report(InvariantRecord(4, 4))
    c = rep.check("castelnuovo_beauville")
    assert c.verdict == PASS
    assert c.forced and "product" in c.forced[0]
    assert "structure" in rep.forced


def test_beauville_violation():
    assert inequality_report(InvariantRecord(4, 5)).check("castelnuovo_beauville").verdict == FAIL


def test_q3_pencil_forces_K2_16():
    f = forced_consequences(InvariantRecord(4, 3, albanese="curve"))
    assert f["K2_range"] == [16, 18]
    assert f["fibre_genus"] == 2
    assert f["K2"] == 16


def test_q1_K2_12_bounds_fibre_genus():
    rec = InvariantRecord(4, 1, 12)
    assert rec.is_pencil and rec.base_genus == 1
    assert forced_consequences(rec)["fibre_genus_max"] == 4


def test_q2_pencil():
    f = forced_consequences(InvariantRecord(4, 2, albanese="curve"))
    assert f["fibre_genus_max"] == 4
    assert f["etale_bundle_at_genus"] == 4
    assert f["K2_if_etale"] == 24


def test_not_applicable_checks():
    rep = inequality_report(InvariantRecord(4, 0, 6))
    assert rep.check("debarre").verdict == NA
    assert rep.check("arakelov").verdict == NA
    assert rep.check("noether").verdict == PASS
    assert rep.ok


def test_noether_and_bmy_failures():
    assert inequality_report(InvariantRecord(6, 0, 7)).check("noether").verdict == FAIL
    assert inequality_report(InvariantRecord(4, 0, 46)).check("bmy").verdict == FAIL


def test_xiao_konno_equality_marks_hyperelliptic():
    # b = 1, g = 2, chi = 4: slope 2 = 4(g-1)/g
    rep = inequality_report(InvariantRecord(4, 1, 8, b=1, g=2))
    c = rep.check("xiao_konno")
    assert c.verdict == PASS and c.forced


def test_slope_guards():
    assert slope(12, 4, 1, 3) == 3
    with pytest.raises(BeauvilleViolation):
        slope(16, 2, 3, 2)
    with pytest.raises(BeauvilleViolation):
        slope(16, 2, 3, 3)


def test_record_validation():
    with pytest.raises(GeographyError):
        InvariantRecord(-1, 0)
    with pytest.raises(GeographyError):
        InvariantRecord(4, 1, albanese="plane")
    with pytest.raises(GeographyError):
        InvariantRecord(4, 1, g=1)


@given(st.integers(0, 8), st.integers(0, 6), st.integers(1, 80))
@settings(max_examples=100, deadline=None)
def test_lower_bounds_are_monotone_in_K2(pg, q, K2):
    # raising K^2 can only turn the lower-bound inequalities from fail into pass
    lower = ("noether", "debarre", "albanese_curve", "debarre_degree_two")
    a = inequality_report(InvariantRecord(pg, q, K2, canonical_degree=2))
    b = inequality_report(InvariantRecord(pg, q, K2 + 1, canonical_degree=2))
    for name in lower:
        if a.check(name).verdict == PASS:
            assert b.check(name).verdict == PASS


@given(st.integers(0, 8), st.integers(0, 6), st.integers(1, 80))
@settings(max_examples=100, deadline=None)
def test_K2_range_agrees_with_the_report(pg, q, K2):
    rec = InvariantRecord(pg, q, K2)
    lo, hi = forced_consequences(rec)["K2_range"]
    rep = inequality_report(rec)
    names = ("noether", "debarre", "bmy", "albanese_curve")
    in_range = lo <= K2 <= hi
    assert in_range == all(rep.check(n).verdict != FAIL for n in names)


# ------------------------------------------------------------------ bundle types

def test_bundle_types():
    types = enumerate_bundle_types()
    assert types == [[(3, 4)], [(2, 3), (1, 1)], [(1, 2), (2, 2)], [(1, 2), (1, 1), (1, 1)]]


@pytest.mark.parametrize("strict", [True, False])
def test_bundle_types_match_brute_force(strict):
    got = {tuple(sorted(t)) for t in enumerate_bundle_types(require_d_ge_r=strict)}
    assert got == bundle_types_brute_force(3, 4, strict)


def test_relaxed_enumeration_adds_one_type():
    assert len(enumerate_bundle_types(require_d_ge_r=False)) == 5


# ------------------------------------------------------------------ strata and moduli

def test_strata_dimensions():
    table = strata_table()
    assert len(table) == 10
    assert Counter(s.dimension for s in table) == {20: 1, 19: 5, 18: 4}
    assert table[1].substrata == ("ii,0", "ii,1")


def test_moduli_lower_bound():
    assert moduli_lower_bound(4, 12) == 20
    assert moduli_lower_bound(2, 6) == 12


# ------------------------------------------------------------------ Chow arithmetic

def test_chow_values():
    D, F = chow_classes()
    H = D + F
    assert chow_eval(H ** 3, 1) == 4
    assert chow_eval(H * H * D.scale(4), 1) == 12
    assert chow_eval(F ** 3, 1) == 0


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-2, 3))
@settings(max_examples=60, deadline=None)
def test_chow_eval_is_linear(a, b, c, d, e):
    D, F = chow_classes()
    x = (D ** 3).scale(a) + (D * D * F).scale(b)
    y = (D * F * F).scale(c) + (D ** 3).scale(d)
    assert chow_eval(x + y, e) == chow_eval(x, e) + chow_eval(y, e)


def test_chow_eval_rejects_wrong_degree():
    R = chow_ring()
    with pytest.raises(GeographyError):
        chow_eval(parse_polynomial("D^2", R), 1)


# ------------------------------------------------------------------ degrees

def test_direct_image_and_sym_degrees():
    assert direct_image_degrees(4, 12, 4) == 76
    assert sym_power_degree(3, 4, 4) == 80
    assert no_hyperelliptic_fibre(4, 12)
    assert u_dimension(4, 12) == 6


# ------------------------------------------------------------------ fixed points and families

def test_fixed_points():
    assert fixed_point_count() == (16, 32)
    assert odd_characteristics(0) == 12
    assert odd_characteristics() == 28


def test_special_families():
    assert special_family_invariants(Polarization(1, 1, 2)).triple == (4, 3, 12)
    assert special_family_invariants(Polarization(1, 1, 2)).family_dimension == 7
    assert special_family_invariants(Z2Z2Cover(2)).triple == (4, 2, 18)
    assert special_family_invariants(InvolutionQuotient(Polarization(1, 1, 2))).triple == (4, 0, 6)


def test_parse_family():
    assert parse_family("polarization:1,1,2") == Polarization(1, 1, 2)
    assert parse_family("z2z2:2") == Z2Z2Cover(2)
    assert parse_family("quotient:1,1,2") == InvolutionQuotient(Polarization(1, 1, 2))
    for bad in ("torus:1", "z2z2:a", "polarization:1,1"):
        with pytest.raises(GeographyError):
            parse_family(bad)
    with pytest.raises(GeographyError):
        special_family_invariants(Z2Z2Cover(3))
