"""Built-in surface families with parameter domains known to be regular."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .curves import Circle, CustomCurve, GreatCircle, Line, PrintedSqrt, SphereArc
from .numkit import DEFAULT_POLICY, TolerancePolicy
from .surface import MeridianSpec, SurfaceHandle, make_immersion_surface, make_meridian_surface


def wavy_kappa(v: float) -> float:
    return 0.2 + 0.1 * math.sin(v)


@dataclass(frozen=True)
class Family:
    name: str
    build: Callable[[TolerancePolicy], SurfaceHandle]
    u_range: Tuple[float, float]
    v_range: Tuple[float, float]
    expected_case: Optional[str] = None  # meridian families only
    semi_parallel: Optional[bool] = None

    def handle(self, policy: TolerancePolicy = DEFAULT_POLICY, jets: str = "analytic") -> SurfaceHandle:
        h = self.build(policy)
        return h.with_numeric_jets() if jets == "numeric" else h

    def grid(self, nu: int, nv: Optional[int] = None):
        nv = nu if nv is None else nv
        return np.linspace(*self.u_range, nu), np.linspace(*self.v_range, nv)

    @property
    def is_meridian(self) -> bool:
        return self.expected_case is not None


def _meridian(name, curve, profile, u_range, v_range, case, sp):
    def build(policy):
        return make_meridian_surface(MeridianSpec(curve, profile), policy, label=name)
    return Family(name, build, u_range, v_range, case, sp)


def _immersion(name, func, u_range, v_range, sp=None):
    return Family(name, lambda policy: make_immersion_surface(func, label=name), u_range, v_range,
                  None, sp)


MERIDIAN_FAMILIES: Dict[str, Family] = {f.name: f for f in [
    _meridian("sphere", GreatCircle(), SphereArc(1.0), (0.4, 2.7), (0.0, 6.0), "I", True),
    _meridian("great_line", GreatCircle(), Line(math.pi / 3, f0=0.2), (0.5, 2.0), (0.0, 3.0), "II", True),
    _meridian("circle05_line", Circle(0.5), Line(math.pi / 3, f0=0.2), (0.5, 2.0), (0.0, 3.0), "II", True),
    _meridian("circle1_line", Circle(1.0), Line(math.pi / 4), (0.5, 2.0), (0.0, 3.0), "II", True),
    _meridian("circle2_line", Circle(2.0), Line(math.pi / 2), (0.5, 2.0), (-1.0, 1.0), "II", True),
    _meridian("wavy_line", CustomCurve(wavy_kappa), Line(math.pi / 3, f0=0.2), (0.5, 2.0), (0.0, 3.0),
              "II", True),
    _meridian("circle1_sphere", Circle(1.0), SphereArc(1.0), (math.pi / 4, math.pi / 2), (0.0, 3.0),
              "III", False),
    _meridian("circle05_sphere2", Circle(0.5), SphereArc(2.0), (0.2, 1.4), (0.0, 3.0), "III", False),
    _meridian("wavy_sphere", CustomCurve(wavy_kappa), SphereArc(1.0), (0.5, 2.5), (0.0, 3.0),
              "III", False),
    _meridian("great_printed01", GreatCircle(), PrintedSqrt(0.0, 1.0), (0.5, 2.0), (0.0, 3.0), "I", False),
    _meridian("great_printed11", GreatCircle(), PrintedSqrt(1.0, 1.0), (2.0, 3.0), (0.0, 3.0), "I", False),
    _meridian("circle2_printed01", Circle(2.0), PrintedSqrt(0.0, 1.0), (0.5, 2.0), (-1.0, 1.0), "III", False),
]}


IMMERSION_FAMILIES: Dict[str, Family] = {f.name: f for f in [
    _immersion("graph_squares", lambda u, v: (u, v, u * u, v * v), (-0.3, 0.3), (-0.3, 0.3)),
    _immersion("graph_saddle", lambda u, v: (u, v, u * v, 0.5 * (u * u - v * v)), (-0.3, 0.3), (-0.3, 0.3)),
    _immersion("graph_generic",
               lambda u, v: (u, v, u * v + 0.3 * u**3, 0.5 * (u * u - v * v) + 0.2 * u * v * v),
               (-0.3, 0.3), (-0.3, 0.3)),
    _immersion("twisted", lambda u, v: (u * math.cos(v), u * math.sin(v), v, 0.5 * u * u),
               (0.8, 1.5), (0.0, 1.0)),
    _immersion("clifford_torus",
               lambda u, v: (math.cos(u), math.sin(u), math.cos(v), math.sin(v)), (0.1, 0.9), (0.1, 0.9), True),
]}


FAMILIES: Dict[str, Family] = {**MERIDIAN_FAMILIES, **IMMERSION_FAMILIES}
