"""Case taxonomy of meridian surfaces and the semi-parallel classification.

Case II: the meridian is a straight line (kappa_alpha == 0).
Case I: C is a great circle (kappa == 0).
Case III: kappa * kappa_alpha is not identically zero.

Semi-parallel meridian surfaces are those with kappa_alpha == 0, or with
kappa == 0 and kappa_alpha == g'/f; everything is decided from sampled
values, never from the family labels used to build the surface.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Tuple

import numpy as np

from .curves import ProfileSample
from .errors import NotAMeridian, ProfileDomainError, StencilOutOfDomain
from .numkit import DEFAULT_POLICY, TolerancePolicy
from .invariants import SecondFundamentalForm, gaussian_curvature, point_geometry
from .semiparallel import verdict_from_sff
from .surface import SurfaceHandle

ZERO_TOL = 1e-9
CONSTANT_TOL = 1e-8


@dataclass(frozen=True)
class ClassificationResult:
    case: str  # "I" | "II" | "III" | "degenerate"
    kappa_is_zero: bool
    kappa_alpha_is_zero: bool
    kappa_constant: bool
    theorem2_branch: str  # case_i | case_ii | not_semi_parallel | inconsistent
    ode_residual_max: float
    semiparallel_residual_max: float
    semi_parallel: bool
    sphere_condition_max: float  # max |kappa_alpha - g'/f|
    K_min: float
    K_max: float
    affine_span_dim: int
    points: int
    skipped: int = 0
    notes: Tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "kappa_is_zero": self.kappa_is_zero,
            "kappa_alpha_is_zero": self.kappa_alpha_is_zero,
            "kappa_constant": self.kappa_constant,
            "theorem2_branch": self.theorem2_branch,
            "semi_parallel": self.semi_parallel,
            "ode_residual_max": self.ode_residual_max,
            "semiparallel_residual_max": self.semiparallel_residual_max,
            "sphere_condition_max": self.sphere_condition_max,
            "K_min": self.K_min,
            "K_max": self.K_max,
            "affine_span_dim": self.affine_span_dim,
            "hyperplanar": self.affine_span_dim <= 3,
            "points": self.points,
            "skipped": self.skipped,
            "notes": list(self.notes),
        }


def meridian_closed_form(handle: SurfaceHandle, u: float, v: float) -> SecondFundamentalForm:
    """h in the meridian frame from kappa, kappa_alpha, f and g' alone."""
    if handle.meridian is None:
        raise NotAMeridian(f"surface {handle.label!r} carries no meridian payload")
    p, c = handle.meridian.profile(u), handle.meridian.curve(v)
    sff = SecondFundamentalForm.from_components(
        h11=[0.0, p.kappa_alpha], h12=[0.0, 0.0], h22=[c.kappa / p.f, p.dg / p.f])
    if handle.normal_rotation:
        sff = sff.rotated(handle.normal_rotation)
    return sff


def ode_residual_at(p: ProfileSample) -> float:
    """f f'' - f'^2 + 1, the profile equation for kappa_alpha = g'/f."""
    return p.f * p.d2f - p.df**2 + 1.0


def alternative_ode_residual_at(p: ProfileSample) -> float:
    """f f'' + f'^2 - 1, which the printed closed-form profile does satisfy."""
    return p.f * p.d2f + p.df**2 - 1.0


def ode_residual(profile: Callable[[float], ProfileSample], interval: Tuple[float, float],
                 samples: int = 100) -> float:
    return max(abs(ode_residual_at(profile(u))) for u in np.linspace(interval[0], interval[1], samples))


def affine_span_dimension(points: np.ndarray, rel_tol: float = 1e-9) -> int:
    """Numerical dimension of the affine hull of a point cloud in E^4."""
    D = points - points[0]
    s = np.linalg.svd(D, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def classify_meridian(handle: SurfaceHandle, grid: Tuple[Sequence[float], Sequence[float]],
                      policy: TolerancePolicy = DEFAULT_POLICY) -> ClassificationResult:
    if handle.meridian is None:
        raise NotAMeridian(f"surface {handle.label!r} carries no meridian payload")
    curve, profile = handle.meridian.curve, handle.meridian.profile
    us = [float(u) for u in grid[0]]
    vs = [float(v) for v in grid[1]]

    kappas = np.array([curve(v).kappa for v in vs])
    profile_samples = []
    good_us = []
    for u in us:
        try:
            profile_samples.append(profile(u))
        except ProfileDomainError:
            continue
        good_us.append(u)
    skipped = len(us) - len(good_us)
    degenerate = skipped > 0

    kappa_alpha = np.array([p.kappa_alpha for p in profile_samples]) if profile_samples else np.zeros(0)
    sphere_cond = (np.array([p.kappa_alpha - p.dg / p.f for p in profile_samples])
                   if profile_samples else np.zeros(0))
    ode = np.array([abs(ode_residual_at(p)) for p in profile_samples]) if profile_samples else np.zeros(0)

    kappa_zero = bool(np.max(np.abs(kappas)) < ZERO_TOL)
    kappa_alpha_zero = bool(kappa_alpha.size > 0 and np.max(np.abs(kappa_alpha)) < ZERO_TOL)
    kappa_constant = bool(np.ptp(kappas) < CONSTANT_TOL)
    sphere_max = float(np.max(np.abs(sphere_cond))) if sphere_cond.size else float("nan")

    if degenerate:
        case = "degenerate"
    elif kappa_alpha_zero:
        case = "II"
    elif kappa_zero:
        case = "I"
    else:
        case = "III"

    if kappa_alpha_zero:
        predicted = "case_i"
    elif kappa_zero and sphere_max < ZERO_TOL:
        predicted = "case_ii"
    else:
        predicted = "not_semi_parallel"

    tol = (policy.residual_tol_analytic if handle.jet_kind == "analytic"
           else policy.residual_tol_numeric)
    stencil_skipped = 0
    sp_max = 0.0
    all_sp = True
    K_vals = []
    positions = []
    for u in good_us:
        for v in vs:
            try:
                geo = point_geometry(handle, u, v, policy)
            except StencilOutOfDomain:
                stencil_skipped += 1
                continue
            verdict = verdict_from_sff(geo.sff, tol)
            sp_max = max(sp_max, verdict.residual_norm)
            all_sp = all_sp and verdict.semi_parallel
            K_vals.append(gaussian_curvature(geo.sff))
            positions.append(geo.jet.X)

    branch = predicted
    if (predicted != "not_semi_parallel") != all_sp:
        branch = "inconsistent"

    notes = []
    if case == "II":
        notes.append("developable ruled surface in a 3-dimensional space" if kappa_constant
                     else "developable ruled surface in E^4")
    if case == "I":
        notes.append("lies in the 3-space spanned by X1, X2, N2 (N1 constant)")

    return ClassificationResult(
        case=case,
        kappa_is_zero=kappa_zero,
        kappa_alpha_is_zero=kappa_alpha_zero,
        kappa_constant=kappa_constant,
        theorem2_branch=branch,
        ode_residual_max=float(np.max(ode)) if ode.size else float("nan"),
        semiparallel_residual_max=sp_max,
        semi_parallel=all_sp,
        sphere_condition_max=sphere_max,
        K_min=float(min(K_vals)) if K_vals else float("nan"),
        K_max=float(max(K_vals)) if K_vals else float("nan"),
        affine_span_dim=affine_span_dimension(np.array(positions)) if positions else 0,
        points=len(us) * len(vs),
        skipped=skipped * len(vs) + stencil_skipped,
        notes=tuple(notes),
    )

