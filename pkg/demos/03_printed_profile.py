"""The closed-form profile f = sqrt(u^2 - 2au + 2b) and the profile ODE.

A meridian on a great circle is semi-parallel exactly when kappa_alpha = g'/f,
which for an arc-length profile is f f'' - f'^2 + 1 = 0. The closed-form
profile below instead satisfies f f'' + f'^2 - 1 = 0; the unit-circle
profile satisfies the first equation and gives the round sphere.
"""
import numpy as np

from meridian4 import GreatCircle, MeridianSpec, PrintedSqrt, SphereArc, make_meridian_surface, make_profile
from meridian4.classifier import alternative_ode_residual_at, ode_residual_at
from meridian4.semiparallel import semiparallel_verdict

for label, spec, us in [("sphere_arc(1)", SphereArc(1.0), np.linspace(0.5, 2.5, 5)),
                        ("printed_sqrt(0,1)", PrintedSqrt(0.0, 1.0), np.linspace(1.0, 3.0, 5))]:
    prof = make_profile(spec)
    surface = make_meridian_surface(MeridianSpec(GreatCircle(), spec))
    print(f"\n{label}")
    print(f"{'u':>6} {'ff-f^2+1':>12} {'ff+f^2-1':>12} {'k_a - g/f':>12} {'sp residual':>12}")
    for u in us:
        p = prof(u)
        verdict = semiparallel_verdict(surface, float(u), 0.0)
        print(f"{u:6.2f} {ode_residual_at(p):12.3e} {alternative_ode_residual_at(p):12.3e} "
              f"{p.kappa_alpha - p.dg / p.f:12.3e} {verdict.residual_norm:12.3e}")

p = make_profile(PrintedSqrt(0.0, 1.0))(1.0)
print(f"\nat u = 1: residual {ode_residual_at(p):.6f} = 4/f^2 = {4 / p.f**2:.6f}")
