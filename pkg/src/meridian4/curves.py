"""Spherical curves on S^2(1) with their Frenet frames, and arc-length
profile curves (f, g) with their signed curvature.

The spherical frame {t, n, r} obeys

    r' = t,   t' = kappa n - r,   n' = -kappa t.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, List, Tuple, Union

import numpy as np

from .errors import IntegrationStepRejected, ProfileDomainError
from .numkit import DEFAULT_POLICY


@dataclass(frozen=True)
class SphericalCurveSample:
    r: np.ndarray
    t: np.ndarray
    n: np.ndarray
    kappa: float

    def frame_residual(self) -> float:
        M = np.vstack([self.r, self.t, self.n])
        return float(np.max(np.abs(M @ M.T - np.eye(3))))


@dataclass(frozen=True)
class ProfileSample:
    f: float
    g: float
    df: float
    dg: float
    d2f: float
    d2g: float
    kappa_alpha: float


# -- curve specs ----------------------------------------------------------

@dataclass(frozen=True)
class GreatCircle:
    pass


@dataclass(frozen=True)
class Circle:
    kappa: float

    def __post_init__(self):
        if self.kappa == 0:
            raise ValueError("circle needs kappa != 0; use GreatCircle")


@dataclass(frozen=True)
class CustomCurve:
    """Curve given by its spherical curvature function and an initial frame."""

    kappa: Callable[[float], float]
    r0: Tuple[float, float, float] = (1.0, 0.0, 0.0)
    t0: Tuple[float, float, float] = (0.0, 1.0, 0.0)
    n0: Tuple[float, float, float] = (0.0, 0.0, 1.0)
    step: float = 1e-3

    def __post_init__(self):
        if not 0 < self.step <= 1e-3:
            raise ValueError("integration step must lie in (0, 1e-3]")
        M = np.array([self.r0, self.t0, self.n0], dtype=float)
        if np.max(np.abs(M @ M.T - np.eye(3))) > 1e-12:
            raise ValueError("initial frame (r0, t0, n0) must be orthonormal")


CurveSpec = Union[GreatCircle, Circle, CustomCurve]


class _CircleEvaluator:
    """Closed form circle of spherical curvature kappa (kappa = 0: great circle).

    The circle has Euclidean radius c = 1/sqrt(1 + kappa^2) and sits at
    height kappa*c; its spherical normal is n = r x t.
    """

    def __init__(self, kappa: float):
        self.kappa = float(kappa)
        self.c = 1.0 / math.sqrt(1.0 + self.kappa**2)

    def __call__(self, v: float) -> SphericalCurveSample:
        c, k = self.c, self.kappa
        phi = v / c
        cs, sn = math.cos(phi), math.sin(phi)
        r = np.array([c * cs, c * sn, k * c])
        t = np.array([-sn, cs, 0.0])
        n = np.array([-k * c * cs, -k * c * sn, c])
        return SphericalCurveSample(r, t, n, k)


class _FrenetIntegrator:
    """RK4 integration of the spherical Frenet system at a fixed step.

    Nodes at multiples of the step are integrated once from v = 0 and
    cached; a sample at v is one partial step from the node below |v|.
    The result depends only on v, never on the call order.
    """

    def __init__(self, spec: CustomCurve):
        self.kappa = spec.kappa
        self.h = spec.step
        start = np.array([spec.r0, spec.t0, spec.n0], dtype=float)
        self._nodes = {1: [start], -1: [start]}
        self._lock = threading.Lock()

    def _rhs(self, v: float, F: np.ndarray) -> np.ndarray:
        k = self.kappa(v)
        r, t, n = F
        return np.array([t, k * n - r, -k * t])

    def _step(self, v: float, F: np.ndarray, h: float) -> np.ndarray:
        k1 = self._rhs(v, F)
        k2 = self._rhs(v + h / 2, F + h / 2 * k1)
        k3 = self._rhs(v + h / 2, F + h / 2 * k2)
        k4 = self._rhs(v + h, F + h * k3)
        F = F + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        drift = np.max(np.abs(F @ F.T - np.eye(3)))
        if drift > 1e-6:
            raise IntegrationStepRejected(
                f"frame drift {drift:.2e} at v={v + h:.6g} exceeds 1e-6")
        U, _, Vt = np.linalg.svd(F)
        return U @ Vt

    def _node(self, sign: int, k: int) -> np.ndarray:
        with self._lock:
            nodes: List[np.ndarray] = self._nodes[sign]
            while len(nodes) <= k:
                j = len(nodes) - 1
                nodes.append(self._step(sign * j * self.h, nodes[j], sign * self.h))
            return nodes[k]

    def __call__(self, v: float) -> SphericalCurveSample:
        v = float(v)
        sign = 1 if v >= 0 else -1
        k = int(math.floor(abs(v) / self.h))
        F = self._node(sign, k)
        rest = v - sign * k * self.h
        if rest != 0.0:
            F = self._step(sign * k * self.h, F, rest)
        return SphericalCurveSample(F[0].copy(), F[1].copy(), F[2].copy(), float(self.kappa(v)))


def make_spherical_curve(spec: CurveSpec) -> Callable[[float], SphericalCurveSample]:
    """Evaluator ``v -> SphericalCurveSample`` for an arc-length spherical curve."""
    if isinstance(spec, GreatCircle):
        return _CircleEvaluator(0.0)
    if isinstance(spec, Circle):
        return _CircleEvaluator(spec.kappa)
    if isinstance(spec, CustomCurve):
        return _FrenetIntegrator(spec)
    raise TypeError(f"unknown curve spec {spec!r}")


# -- profile specs --------------------------------------------------------

@dataclass(frozen=True)
class Line:
    theta: float
    f0: float = 0.0
    g0: float = 0.0


@dataclass(frozen=True)
class SphereArc:
    k: float
    u0: float = 0.0

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("sphere_arc needs k > 0")


@dataclass(frozen=True)
class PrintedSqrt:
    """f = sqrt(u^2 - 2au + 2b), g = -sqrt(2b - a^2) ln|u - a - f|."""

    a: float
    b: float

    def __post_init__(self):
        if not 2 * self.b > self.a**2:
            raise ValueError("printed_sqrt needs 2b > a^2")


@dataclass(frozen=True)
class CustomProfile:
    """Profile from callables for f, g and their first two derivatives."""

    f: Callable[[float], float]
    g: Callable[[float], float]
    df: Callable[[float], float]
    dg: Callable[[float], float]
    d2f: Callable[[float], float]
    d2g: Callable[[float], float]
    label: str = field(default="custom", compare=False)


ProfileSpec = Union[Line, SphereArc, PrintedSqrt, CustomProfile]


def profile_kappa_alpha(sample: ProfileSample) -> float:
    """Signed curvature f'g'' - f''g' of the meridian curve (f, g)."""
    return sample.df * sample.d2g - sample.d2f * sample.dg


def kappa_alpha_from_f(sample: ProfileSample) -> float:
    """Same curvature written through f alone, -f''/sqrt(1 - f'^2); needs g' > 0."""
    return -sample.d2f / math.sqrt(1.0 - sample.df**2)


def _raw_profile(spec: ProfileSpec, u: float) -> Tuple[float, ...]:
    if isinstance(spec, Line):
        s, c = math.sin(spec.theta), math.cos(spec.theta)
        return u * s + spec.f0, u * c + spec.g0, s, c, 0.0, 0.0
    if isinstance(spec, SphereArc):
        k = spec.k
        x = k * (u - spec.u0)
        s, c = math.sin(x), math.cos(x)
        return s / k, -c / k, c, s, -k * s, k * c
    if isinstance(spec, PrintedSqrt):
        a, b = spec.a, spec.b
        d = 2 * b - a * a
        q = math.sqrt(d)
        s = math.sqrt(u * u - 2 * a * u + 2 * b)
        g = -q * math.log(abs(u - a - s))
        return s, g, (u - a) / s, q / s, d / s**3, -q * (u - a) / s**3
    if isinstance(spec, CustomProfile):
        return (float(spec.f(u)), float(spec.g(u)), float(spec.df(u)), float(spec.dg(u)),
                float(spec.d2f(u)), float(spec.d2g(u)))
    raise TypeError(f"unknown profile spec {spec!r}")


class _ProfileEvaluator:
    def __init__(self, spec: ProfileSpec, f_min: float):
        self.spec = spec
        self.f_min = f_min

    def __call__(self, u: float) -> ProfileSample:
        u = float(u)
        try:
            f, g, df, dg, d2f, d2g = _raw_profile(self.spec, u)
        except (ValueError, ZeroDivisionError) as exc:
            raise ProfileDomainError(f"profile undefined at u={u!r}: {exc}") from exc
        if not f > self.f_min:
            raise ProfileDomainError(f"f={f:.6g} <= f_min={self.f_min:g} at u={u!r}")
        if df * df > 1.0 + 1e-12:
            raise ProfileDomainError(f"(f')^2={df * df:.6g} > 1 at u={u!r}")
        sample = ProfileSample(f, g, df, dg, d2f, d2g, 0.0)
        return ProfileSample(f, g, df, dg, d2f, d2g, profile_kappa_alpha(sample))


def make_profile(spec: ProfileSpec, f_min: float = DEFAULT_POLICY.f_min) -> Callable[[float], ProfileSample]:
    """Evaluator ``u -> ProfileSample`` with analytic derivatives."""
    if not isinstance(spec, (Line, SphereArc, PrintedSqrt, CustomProfile)):
        raise TypeError(f"unknown profile spec {spec!r}")
    return _ProfileEvaluator(spec, f_min)


def validate_arclength(evaluator: Callable[[float], ProfileSample],
                       interval: Tuple[float, float], samples: int = 100) -> float:
    """Max of |f'^2 + g'^2 - 1| over ``samples`` uniform points of ``interval``."""
    worst = 0.0
    for u in np.linspace(interval[0], interval[1], samples):
        p = evaluator(u)
        worst = max(worst, abs(p.df**2 + p.dg**2 - 1.0))
    return worst
