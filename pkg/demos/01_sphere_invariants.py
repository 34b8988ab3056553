"""Invariants of the round 2-sphere built as a meridian surface.

A great circle swept by the unit-circle profile (f, g) = (sin u, -cos u)
is the unit sphere sitting in a 3-space of E^4. We evaluate its invariants
from analytic jets and again from finite-difference jets, and compare.
"""
import math

from meridian4 import GreatCircle, MeridianSpec, SphereArc, TolerancePolicy, make_meridian_surface
from meridian4.invariants import curvature_report, point_geometry, structural_residuals

policy = TolerancePolicy()
sphere = make_meridian_surface(MeridianSpec(GreatCircle(), SphereArc(1.0)), policy)
numeric = sphere.with_numeric_jets()

print(f"{'u':>6} {'jets':>9} {'K':>18} {'|H|':>18} {'umb_dev':>9} {'gauss':>9} {'codazzi':>9}")
for u in (0.5, 1.0, math.pi / 2, 2.5):
    for handle in (sphere, numeric):
        geo = point_geometry(handle, u, 0.7, policy)
        rep = curvature_report(geo.sff)
        res = structural_residuals(handle, u, 0.7, policy)
        print(f"{u:6.3f} {handle.jet_kind:>9} {rep.K:18.15f} {rep.H_norm:18.15f} "
              f"{rep.umbilicity_deviation:9.1e} {res.gauss:9.1e} {res.codazzi:9.1e}")

rep = curvature_report(point_geometry(sphere, 1.0, 0.7, policy).sff)
print(f"\n|H|^2 - 3K = {rep.hH2_minus_3K:+.3f}: the sphere is umbilical but not one of the K = |H|^2/3 surfaces.")
