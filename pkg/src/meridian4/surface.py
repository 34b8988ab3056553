"""Immersed surfaces in E^4 as jet evaluators.

Meridian surfaces X(u, v) = f(u) r(v) + g(u) e4 get analytic jets and the
frame

    X1 = X_u,  X2 = X_v / f,  N1 = n(v),  N2 = -g'(u) r(v) + f'(u) e4.

Any other immersion is differentiated numerically and framed by
Gram-Schmidt.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .curves import CurveSpec, ProfileSpec, make_profile, make_spherical_curve
from .numkit import (DEFAULT_POLICY, AdaptedFrame, Jet2, TolerancePolicy, orthonormalize_frame,
                     richardson_partials)

E4 = np.array([0.0, 0.0, 0.0, 1.0])


def _lift(w: np.ndarray) -> np.ndarray:
    return np.array([w[0], w[1], w[2], 0.0])


@dataclass(frozen=True)
class MeridianSpec:
    curve: CurveSpec
    profile: ProfileSpec


@dataclass(frozen=True)
class MeridianPayload:
    spec: MeridianSpec
    curve: Callable
    profile: Callable


@dataclass(frozen=True)
class SurfaceHandle:
    """An immersion plus how to differentiate and frame it.

    ``jet_kind`` is ``"analytic"`` when ``analytic_jet`` is used, otherwise
    ``"numeric"``. ``normal_rotation`` rotates the normal pair of every
    frame by a fixed angle; scalar outputs must not notice.
    """

    immersion: Callable[[float, float], np.ndarray]
    jet_kind: str = "numeric"
    analytic_jet: Optional[Callable[[float, float], Jet2]] = None
    meridian: Optional[MeridianPayload] = None
    normal_rotation: float = 0.0
    label: str = "surface"

    @property
    def is_meridian(self) -> bool:
        return self.meridian is not None

    def with_normal_rotation(self, phi: float) -> "SurfaceHandle":
        return dataclasses.replace(self, normal_rotation=self.normal_rotation + phi)

    def with_numeric_jets(self) -> "SurfaceHandle":
        return dataclasses.replace(self, jet_kind="numeric")


def make_meridian_surface(spec: MeridianSpec, policy: TolerancePolicy = DEFAULT_POLICY,
                          jets: str = "analytic", label: str = "meridian") -> SurfaceHandle:
    if jets not in ("analytic", "numeric"):
        raise ValueError(f"jets must be 'analytic' or 'numeric', got {jets!r}")
    curve = make_spherical_curve(spec.curve)
    profile = make_profile(spec.profile, f_min=policy.f_min)

    def immersion(u, v):
        p, c = profile(u), curve(v)
        return p.f * _lift(c.r) + p.g * E4

    def jet(u, v):
        p, c = profile(u), curve(v)
        r, t, n = _lift(c.r), _lift(c.t), _lift(c.n)
        return Jet2(
            X=p.f * r + p.g * E4,
            X_u=p.df * r + p.dg * E4,
            X_v=p.f * t,
            X_uu=p.d2f * r + p.d2g * E4,
            X_uv=p.df * t,
            X_vv=p.f * (c.kappa * n - r),
        )

    return SurfaceHandle(immersion=immersion, jet_kind=jets, analytic_jet=jet,
                         meridian=MeridianPayload(spec, curve, profile), label=label)


def make_immersion_surface(func: Callable[[float, float], np.ndarray],
                           label: str = "immersion") -> SurfaceHandle:
    """Wrap a raw map (u, v) -> E^4; its jets are always numeric."""
    return SurfaceHandle(immersion=lambda u, v: np.asarray(func(u, v), dtype=float), label=label)


def eval_jet(handle: SurfaceHandle, u: float, v: float,
             policy: TolerancePolicy = DEFAULT_POLICY) -> Jet2:
    if handle.jet_kind == "analytic" and handle.analytic_jet is not None:
        return handle.analytic_jet(u, v)
    return richardson_partials(handle.immersion, (u, v), policy)


def meridian_frame(payload: MeridianPayload, u: float, v: float) -> AdaptedFrame:
    p, c = payload.profile(u), payload.curve(v)
    r = _lift(c.r)
    return AdaptedFrame(
        X1=p.df * r + p.dg * E4,
        X2=_lift(c.t),
        N1=_lift(c.n),
        N2=-p.dg * r + p.df * E4,
    )


def adapted_frame(handle: SurfaceHandle, u: float, v: float,
                  policy: TolerancePolicy = DEFAULT_POLICY, jet: Optional[Jet2] = None) -> AdaptedFrame:
    if handle.meridian is not None:
        frame = meridian_frame(handle.meridian, u, v)
    else:
        jet = jet if jet is not None else eval_jet(handle, u, v, policy)
        frame = orthonormalize_frame(jet.X_u, jet.X_v, policy)
    if handle.normal_rotation:
        frame = frame.rotate_normals(handle.normal_rotation)
    return frame
