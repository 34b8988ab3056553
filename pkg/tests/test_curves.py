import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from meridian4.curves import (Circle, CustomCurve, CustomProfile, GreatCircle, Line, PrintedSqrt,
                              SphereArc, kappa_alpha_from_f, make_profile, make_spherical_curve,
                              profile_kappa_alpha, validate_arclength)
from meridian4.errors import IntegrationStepRejected, ProfileDomainError

from conftest import assert_close

SQRT2, SQRT3 = math.sqrt(2), math.sqrt(3)


class TestSphericalCurves:
    def test_great_circle_origin(self):
        s = make_spherical_curve(GreatCircle())(0.0)
        assert_close(s.r, [1, 0, 0], 1e-15)
        assert_close(s.t, [0, 1, 0], 1e-15)
        assert_close(s.n, [0, 0, 1], 1e-15)
        assert s.kappa == 0

    @pytest.mark.parametrize("v", [0.0, 0.4, 2.0, 7.5])
    def test_circle_kappa_one(self, v):
        c = 1 / SQRT2
        s = make_spherical_curve(Circle(1.0))(v)
        assert_close(s.r, [c * math.cos(v / c), c * math.sin(v / c), c], 1e-14)
        assert s.r[2] / c == pytest.approx(1.0)

    @pytest.mark.parametrize("kappa", [-1.5, 0.5, 2.0])
    def test_circle_satisfies_frenet_system(self, kappa):
        ev = make_spherical_curve(Circle(kappa))
        h = 1e-5
        for v in (0.1, 1.3):
            a, b, m = ev(v + h), ev(v - h), ev(v)
            assert_close((a.r - b.r) / (2 * h), m.t, 1e-8)
            assert_close((a.t - b.t) / (2 * h), kappa * m.n - m.r, 1e-8)
            assert_close((a.n - b.n) / (2 * h), -kappa * m.t, 1e-8)

    def test_custom_zero_matches_great_circle(self):
        rk, gc = make_spherical_curve(CustomCurve(lambda v: 0.0)), make_spherical_curve(GreatCircle())
        for v in np.linspace(0, 2 * math.pi, 50):
            a, b = rk(v), gc(v)
            for x, y in ((a.r, b.r), (a.t, b.t), (a.n, b.n)):
                assert_close(x, y, 1e-8)

    def test_custom_negative_parameter(self):
        rk, gc = make_spherical_curve(CustomCurve(lambda v: 0.0)), make_spherical_curve(GreatCircle())
        assert_close(rk(-1.3).r, gc(-1.3).r, 1e-8)

    def test_wavy_frame_orthonormal(self):
        ev = make_spherical_curve(CustomCurve(lambda v: 0.2 + 0.1 * math.sin(v)))
        assert max(ev(v).frame_residual() for v in np.linspace(0, 6, 30)) < 1e-10

    def test_step_bound_enforced(self):
        with pytest.raises(ValueError):
            CustomCurve(lambda v: 0.0, step=1e-2)

    def test_zero_kappa_circle_rejected(self):
        with pytest.raises(ValueError):
            Circle(0.0)

    def test_drift_rejected(self):
        ev = make_spherical_curve(CustomCurve(lambda v: 1e9))
        with pytest.raises(IntegrationStepRejected):
            ev(0.01)


class TestProfiles:
    def test_sphere_arc_equator(self):
        p = make_profile(SphereArc(1.0))(math.pi / 2)
        assert (p.f, p.g, p.df, p.dg) == pytest.approx((1, 0, 0, 1), abs=1e-15)
        assert p.kappa_alpha == pytest.approx(1.0, abs=1e-15)

    def test_line_vertical(self):
        p = make_profile(Line(math.pi / 2, 1.0))(0.7)
        assert p.kappa_alpha == 0 and p.dg == pytest.approx(0, abs=1e-15)

    def test_printed_sqrt_hand_values(self):
        p = make_profile(PrintedSqrt(0.0, 1.0))(1.0)
        assert p.f == pytest.approx(SQRT3, rel=1e-15)
        assert p.df == pytest.approx(1 / SQRT3, rel=1e-15)
        assert p.dg == pytest.approx(SQRT2 / SQRT3, rel=1e-15)
        assert p.kappa_alpha == pytest.approx(-SQRT2 / 3, rel=1e-14)
        assert kappa_alpha_from_f(p) == pytest.approx(-SQRT2 / 3, rel=1e-14)

    def test_printed_sqrt_matches_finite_differences(self):
        ev = make_profile(PrintedSqrt(1.0, 1.0))
        h = 1e-5
        for u in (2.0, 2.5, 3.0):
            a, b, m = ev(u + h), ev(u - h), ev(u)
            assert (a.f - b.f) / (2 * h) == pytest.approx(m.df, abs=1e-9)
            assert (a.g - b.g) / (2 * h) == pytest.approx(m.dg, abs=1e-9)
            assert (a.df - b.df) / (2 * h) == pytest.approx(m.d2f, abs=1e-8)
            assert (a.dg - b.dg) / (2 * h) == pytest.approx(m.d2g, abs=1e-8)

    @pytest.mark.parametrize("spec,u", [(SphereArc(1.0), 0.9), (SphereArc(2.0), 0.4), (Line(0.3), 1.0)])
    def test_kappa_alpha_routes_agree(self, spec, u):
        p = make_profile(spec)(u)
        assert profile_kappa_alpha(p) == pytest.approx(kappa_alpha_from_f(p), abs=1e-12)

    def test_sphere_arc_kappa_alpha_is_k(self):
        for u in (0.3, 1.1, 2.9):
            assert make_profile(SphereArc(1.0))(u).kappa_alpha == pytest.approx(1.0, abs=1e-14)

    def test_pole_guard(self):
        with pytest.raises(ProfileDomainError):
            make_profile(SphereArc(1.0))(0.0)
        with pytest.raises(ProfileDomainError):
            make_profile(Line(math.pi / 2))(-1.0)

    def test_printed_sqrt_parameter_check(self):
        with pytest.raises(ValueError):
            PrintedSqrt(2.0, 1.0)

    @pytest.mark.parametrize("spec,interval", [(Line(0.4, 1.0), (0, 2)), (SphereArc(1.0), (0.2, 3.0)),
                                               (SphereArc(3.0, 0.1), (0.2, 1.0)),
                                               (PrintedSqrt(0.0, 1.0), (-3, 3)),
                                               (PrintedSqrt(1.0, 1.0), (2, 3))])
    def test_arclength_builtin(self, spec, interval):
        assert validate_arclength(make_profile(spec), interval, 100) < 1e-12

    def test_arclength_violation_measured(self):
        # (f')^2 + (g')^2 = 0.9, a deficit of 0.1
        c = math.sqrt(0.45)
        prof = CustomProfile(lambda u: 1 + c * u, lambda u: c * u, lambda u: c, lambda u: c,
                             lambda u: 0.0, lambda u: 0.0)
        assert validate_arclength(make_profile(prof), (0, 1), 100) == pytest.approx(0.1, abs=1e-12)

    @given(st.floats(0.05, math.pi - 0.05), st.floats(0.3, 3.0))
    def test_sphere_arc_kappa_alpha_property(self, t, k):
        # sphere_arc(k) has constant curvature k on the part away from the poles
        u = t / k
        p = make_profile(SphereArc(k))(u)
        assert p.kappa_alpha == pytest.approx(k, rel=1e-10)
