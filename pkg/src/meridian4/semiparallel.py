"""The tensor (R-bar(X1, X2) . h)(X_k, X_l), computed two independent ways.

``rbar_h_formula`` expands everything into sums over the normal index;
``rbar_h_direct`` applies the normal curvature operator and the tangent
curvature operator to h as linear maps. Agreement between the two is a
consistency guard on the code, not a property of the surface.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import RouteDisagreement
from .invariants import (SecondFundamentalForm, gaussian_curvature, normal_curvature_operator,
                         point_geometry, shape_operators)
from .numkit import DEFAULT_POLICY, TolerancePolicy
from .surface import SurfaceHandle

PAIRS = ((0, 0), (0, 1), (1, 1))
ROUTE_AGREEMENT = 1e-9
ROUTE_FAILURE = 1e-8


@dataclass(frozen=True)
class SemiParallelTensor:
    """S[m, alpha] for (k, l) = PAIRS[m]: component on N_alpha."""

    S: np.ndarray

    @property
    def residual_norm(self) -> float:
        return float(max(np.linalg.norm(self.S[m]) for m in range(3)))

    def component(self, k: int, l: int) -> np.ndarray:
        return self.S[PAIRS.index((min(k, l), max(k, l)))]


@dataclass(frozen=True)
class Verdict:
    semi_parallel: bool
    residual_norm: float
    tol_used: float
    route_gap: float


def rbar_h_formula(sff: SecondFundamentalForm, K: float) -> SemiParallelTensor:
    h = sff.h
    h11, h12, h22 = sff.h11, sff.h12, sff.h22
    diff = h11 - h22
    s11 = sum(h[a, 0, 0] * (h[a, 1, 1] - h[a, 0, 0]) for a in range(2))
    s12 = sum(h[a, 0, 1] * (h[a, 1, 1] - h[a, 0, 0]) for a in range(2))
    s22 = sum(h[a, 1, 1] * (h[a, 1, 1] - h[a, 0, 0]) for a in range(2))
    t11 = sum(h[a, 0, 0] * h[a, 0, 1] for a in range(2))
    t12 = sum(h[a, 0, 1] * h[a, 0, 1] for a in range(2))
    t22 = sum(h[a, 1, 1] * h[a, 0, 1] for a in range(2))
    S = np.array([
        (s11 + 2 * K) * h12 + t11 * diff,
        s12 * h12 + (t12 - K) * diff,
        (s22 - 2 * K) * h12 + t22 * diff,
    ])
    return SemiParallelTensor(S)


def tangent_curvature_operator(sff: SecondFundamentalForm, K: Optional[float] = None) -> np.ndarray:
    """Matrix of R(X1, X2) acting on tangent coordinates.

    With ``K`` given this is K (X1 ^ X2); otherwise it is assembled from the
    shape operators as sum_alpha (A_alpha X1) ^ (A_alpha X2).
    """
    if K is not None:
        return np.array([[0.0, K], [-K, 0.0]])
    R = np.zeros((2, 2))
    basis = np.eye(2)
    for A in shape_operators(sff):
        p, q = A @ basis[0], A @ basis[1]
        for k in range(2):
            # (p ^ q) x = <q, x> p - <p, x> q
            R[:, k] += q[k] * p - p[k] * q
    return R


def rbar_h_direct(sff: SecondFundamentalForm, K: Optional[float] = None) -> SemiParallelTensor:
    """R_perp h(X_k, X_l) - h(R X_k, X_l) - h(X_k, R X_l) by linear maps."""
    Rn = normal_curvature_operator(sff)
    Rt = tangent_curvature_operator(sff, K)
    basis = np.eye(2)

    def h(x, y):
        return np.einsum("i,aij,j->a", x, sff.h, y)

    S = np.empty((3, 2))
    for m, (k, l) in enumerate(PAIRS):
        xk, xl = basis[k], basis[l]
        S[m] = Rn @ h(xk, xl) - h(Rt @ xk, xl) - h(xk, Rt @ xl)
    return SemiParallelTensor(S)


def route_gap(sff: SecondFundamentalForm) -> float:
    a = rbar_h_formula(sff, gaussian_curvature(sff))
    b = rbar_h_direct(sff)
    return float(np.max(np.abs(a.S - b.S)))


def semiparallel_tensor(sff: SecondFundamentalForm) -> SemiParallelTensor:
    """Checked evaluation: both routes, raising if they disagree."""
    a = rbar_h_formula(sff, gaussian_curvature(sff))
    b = rbar_h_direct(sff)
    gap = float(np.max(np.abs(a.S - b.S)))
    scale = max(1.0, float(np.max(np.abs(sff.h))) ** 3)
    if gap > ROUTE_FAILURE * scale:
        raise RouteDisagreement(f"formula and direct routes differ by {gap:.3e}")
    return a


def verdict_from_sff(sff: SecondFundamentalForm, tol: float) -> Verdict:
    S = semiparallel_tensor(sff)
    gap = route_gap(sff)
    r = S.residual_norm
    return Verdict(semi_parallel=r < tol, residual_norm=r, tol_used=tol, route_gap=gap)


def semiparallel_verdict(handle: SurfaceHandle, u: float, v: float,
                         policy: TolerancePolicy = DEFAULT_POLICY,
                         tol: Optional[float] = None) -> Verdict:
    if tol is None:
        tol = (policy.residual_tol_analytic if handle.jet_kind == "analytic"
               else policy.residual_tol_numeric)
    return verdict_from_sff(point_geometry(handle, u, v, policy).sff, tol)
