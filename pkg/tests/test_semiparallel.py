import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from meridian4.curves import Circle, GreatCircle, PrintedSqrt, SphereArc
from meridian4.errors import RouteDisagreement
from meridian4.families import FAMILIES, MERIDIAN_FAMILIES
from meridian4.invariants import SecondFundamentalForm, gaussian_curvature, point_geometry
from meridian4.semiparallel import (rbar_h_direct, rbar_h_formula, route_gap, semiparallel_tensor,
                                    semiparallel_verdict, verdict_from_sff)
from meridian4.surface import MeridianSpec, make_meridian_surface

comp = st.floats(-3, 3)
sffs = st.builds(lambda *c: SecondFundamentalForm.from_components(c[0:2], c[2:4], c[4:6]),
                 *[comp] * 6)


def meridian(curve, profile, policy):
    return make_meridian_surface(MeridianSpec(curve, profile), policy)


def test_meridian_components(policy):
    # only the mixed component survives: K kappa / f on N1 and -K (kappa_alpha - g'/f) on N2
    h = MERIDIAN_FAMILIES["wavy_sphere"].handle(policy)
    for u, v in [(0.7, 0.2), (1.9, 2.5)]:
        p, c = h.meridian.profile(u), h.meridian.curve(v)
        K = p.kappa_alpha * p.dg / p.f
        S = rbar_h_formula(point_geometry(h, u, v, policy).sff, K)
        assert np.abs(S.component(0, 0)).max() < 1e-12
        assert np.abs(S.component(1, 1)).max() < 1e-12
        np.testing.assert_allclose(S.component(0, 1), [K * c.kappa / p.f, -K * (p.kappa_alpha - p.dg / p.f)],
                                   atol=1e-12)


def test_small_circle_on_unit_sphere_profile(policy):
    sff = point_geometry(meridian(Circle(1.0), SphereArc(1.0), policy), math.pi / 2, 0.3, policy).sff
    S = rbar_h_formula(sff, gaussian_curvature(sff))
    np.testing.assert_allclose(S.S, [[0, 0], [1, 0], [0, 0]], atol=1e-12)


@pytest.mark.parametrize("name", ["great_line", "circle05_line", "circle1_line", "circle2_line", "wavy_line"])
def test_line_profiles_are_semi_parallel(name, policy):
    fam = MERIDIAN_FAMILIES[name]
    h = fam.handle(policy)
    us, vs = fam.grid(4)
    for u in us:
        for v in vs:
            verdict = semiparallel_verdict(h, u, v, policy)
            assert verdict.semi_parallel and verdict.residual_norm < 1e-12


def test_round_sphere_is_semi_parallel(policy):
    v = semiparallel_verdict(FAMILIES["sphere"].handle(policy), 1.0, 1.0, policy)
    assert v.semi_parallel and v.tol_used == policy.residual_tol_analytic


def test_printed_profile_residual(policy):
    v = semiparallel_verdict(meridian(GreatCircle(), PrintedSqrt(0.0, 1.0), policy), 1.0, 0.0, policy)
    assert v.residual_norm == pytest.approx((2 / 9) * (2 * math.sqrt(2) / 3), rel=1e-12)
    assert not v.semi_parallel


def test_numeric_tolerance(policy):
    v = semiparallel_verdict(FAMILIES["sphere"].handle(policy, jets="numeric"), 1.0, 1.0, policy)
    assert v.tol_used == policy.residual_tol_numeric and v.semi_parallel


def test_totally_geodesic_is_zero():
    zero = SecondFundamentalForm(np.zeros((2, 2, 2)))
    assert rbar_h_direct(zero).residual_norm == 0 and rbar_h_formula(zero, 0.0).residual_norm == 0


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_routes_agree_on_families(name, policy):
    fam = FAMILIES[name]
    h = fam.handle(policy)
    us, vs = fam.grid(4)
    for u in us:
        for v in vs:
            assert route_gap(point_geometry(h, u, v, policy).sff) < 1e-10


@given(sffs)
def test_routes_agree_random(sff):
    K = gaussian_curvature(sff)
    assert np.abs(rbar_h_formula(sff, K).S - rbar_h_direct(sff).S).max() < 1e-10
    assert np.abs(rbar_h_formula(sff, K).S - rbar_h_direct(sff, K).S).max() < 1e-10


def test_corrupted_curvature_detected():
    sff = SecondFundamentalForm.from_components([0.3, -0.2], [0.5, 0.1], [-0.4, 0.7])
    K = gaussian_curvature(sff)
    assert np.abs(rbar_h_formula(sff, K + 1).S - rbar_h_direct(sff).S).max() > 0.1


def test_checked_tensor_raises_on_disagreement(monkeypatch):
    import meridian4.semiparallel as sp
    sff = SecondFundamentalForm.from_components([0.3, -0.2], [0.5, 0.1], [-0.4, 0.7])
    monkeypatch.setattr(sp, "gaussian_curvature", lambda s: gaussian_curvature(s) + 1)
    with pytest.raises(RouteDisagreement):
        semiparallel_tensor(sff)


@given(sffs, st.floats(0, 2 * math.pi))
def test_residual_gauge_invariant(sff, phi):
    a = semiparallel_tensor(sff).residual_norm
    b = semiparallel_tensor(sff.rotated(phi)).residual_norm
    assert b == pytest.approx(a, abs=1e-9)


@given(sffs, st.floats(1e-12, 1.0), st.floats(1.0, 100.0))
def test_verdict_monotone_in_tolerance(sff, tol, factor):
    assert verdict_from_sff(sff, tol).semi_parallel <= verdict_from_sff(sff, tol * factor).semi_parallel


@given(sffs, st.floats(1e-9, 10.0))
def test_verdict_definition(sff, tol):
    v = verdict_from_sff(sff, tol)
    assert v.semi_parallel == (v.residual_norm < tol) and v.residual_norm >= 0
