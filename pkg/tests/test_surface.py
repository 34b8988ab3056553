import math

import numpy as np
import pytest

from meridian4.curves import Circle, GreatCircle, Line, SphereArc
from meridian4.errors import DegenerateTangentPlane, ProfileDomainError
from meridian4.families import FAMILIES, MERIDIAN_FAMILIES
from meridian4.numkit import richardson_partials
from meridian4.surface import (MeridianSpec, adapted_frame, eval_jet, make_immersion_surface,
                               make_meridian_surface)

from conftest import assert_close


def sphere(policy):
    return make_meridian_surface(MeridianSpec(GreatCircle(), SphereArc(1.0)), policy)


def test_sphere_point(policy):
    jet = eval_jet(sphere(policy), math.pi / 2, 0.0, policy)
    assert_close(jet.X, [1, 0, 0, 0], 1e-15)
    assert_close(jet.X_v, [0, 1, 0, 0], 1e-15)


def test_meridian_lies_on_rotational_hypersurface(policy):
    h = make_meridian_surface(MeridianSpec(Circle(0.7), SphereArc(1.0)), policy)
    p = h.meridian.profile(1.1)
    X = eval_jet(h, 1.1, 0.4, policy).X
    assert np.linalg.norm(X[:3]) == pytest.approx(p.f, abs=1e-14)
    assert X[3] == pytest.approx(p.g, abs=1e-14)


def test_line_on_great_circle_is_flat_sector(policy):
    h = make_meridian_surface(MeridianSpec(GreatCircle(), Line(0.6, 1.0)), policy)
    for u, v in [(0.2, 0.1), (1.0, 2.0)]:
        jet = eval_jet(h, u, v, policy)
        assert_close(jet.X_uu, np.zeros(4), 0)
        assert jet.X[2] == 0.0  # great circle stays in the (x, y) plane


@pytest.mark.parametrize("name", sorted(MERIDIAN_FAMILIES))
def test_cross_derivative_matches_numeric(name, policy):
    fam = MERIDIAN_FAMILIES[name]
    h = fam.handle(policy)
    us, vs = fam.grid(3)
    for u in us:
        for v in vs:
            num = richardson_partials(h.immersion, (u, v), policy)
            assert_close(eval_jet(h, u, v, policy).X_uv, num.X_uv, 1e-7)


@pytest.mark.parametrize("name", sorted(MERIDIAN_FAMILIES))
def test_analytic_and_numeric_jets_agree(name, policy):
    fam = MERIDIAN_FAMILIES[name]
    ha, hn = fam.handle(policy), fam.handle(policy, jets="numeric")
    assert ha.jet_kind == "analytic" and hn.jet_kind == "numeric"
    us, vs = fam.grid(4)
    for u in us:
        for v in vs:
            a, n = eval_jet(ha, u, v, policy), eval_jet(hn, u, v, policy)
            for key in ("X", "X_u", "X_v", "X_uu", "X_uv", "X_vv"):
                assert_close(getattr(n, key), getattr(a, key), 1e-6)


def test_polynomial_immersions(policy):
    h = make_immersion_surface(lambda u, v: np.array([u, v, u * v, 0.0]))
    assert h.jet_kind == "numeric" and not h.is_meridian
    assert_close(eval_jet(h, 1.0, 1.0, policy).X_uv, [0, 0, 1, 0], 1e-9)
    g = FAMILIES["graph_squares"].handle(policy)
    assert_close(eval_jet(g, 0.0, 0.0, policy).X_uu, [0, 0, 2, 0], 1e-9)


def test_graph_frame_at_origin(policy):
    fr = adapted_frame(FAMILIES["graph_squares"].handle(policy), 0.0, 0.0, policy)
    assert_close(fr.X1, [1, 0, 0, 0], 1e-10)
    assert_close(fr.X2, [0, 1, 0, 0], 1e-10)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_adapted_frames_are_orthonormal(name, policy):
    fam = FAMILIES[name]
    h = fam.handle(policy)
    us, vs = fam.grid(3)
    for u in us:
        for v in vs:
            fr = adapted_frame(h, u, v, policy)
            assert fr.orthonormality_residual() < 1e-12
            jet = eval_jet(h, u, v, policy)
            # normals really are normal to the surface
            assert abs(fr.N1 @ jet.X_u) + abs(fr.N2 @ jet.X_v) < 1e-9


def test_meridian_frame_orientation(policy):
    # X1 = X_u, X2 = t, N1 = n, N2 = -g' r + f' e4
    h = make_meridian_surface(MeridianSpec(Circle(1.0), SphereArc(1.0)), policy)
    u, v = 1.0, 0.5
    fr = adapted_frame(h, u, v, policy)
    p, c = h.meridian.profile(u), h.meridian.curve(v)
    assert_close(fr.X2, np.append(c.t, 0), 1e-15)
    assert_close(fr.N1, np.append(c.n, 0), 1e-15)
    assert_close(fr.N2, np.append(-p.dg * c.r, p.df), 1e-15)


def test_normal_rotation(policy):
    h = sphere(policy)
    fr0 = adapted_frame(h, 1.0, 0.3, policy)
    fr = adapted_frame(h.with_normal_rotation(0.4), 1.0, 0.3, policy)
    assert_close(fr.N1, math.cos(0.4) * fr0.N1 + math.sin(0.4) * fr0.N2, 1e-15)


def test_errors_propagate(policy):
    with pytest.raises(ProfileDomainError):
        eval_jet(sphere(policy), 0.0, 0.0, policy)
    flat = make_immersion_surface(lambda u, v: np.array([u, u, 0.0, 0.0]))
    with pytest.raises(DegenerateTangentPlane):
        adapted_frame(flat, 0.3, 0.3, policy)
