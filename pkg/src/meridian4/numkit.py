"""Fixed-size linear algebra and Richardson-extrapolated finite differences.

Vectors are plain ``numpy`` arrays of shape (4,) or (3,); 2x2 matrices are
arrays of shape (2, 2). Everything here is a pure function of its inputs.
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import (DegenerateTangentPlane, IntegrationStepRejected, ProfileDomainError,
                     StencilOutOfDomain)

FD_STEP_ENV = "MERIDIAN_FD_STEP"

# second differences divide by h**2, so they need a coarser step than first
# differences to stay clear of roundoff: h2 = fd_step**0.4 (1e-2 at 1e-5)
SECOND_STEP_EXPONENT = 0.4


@dataclass(frozen=True)
class TolerancePolicy:
    fd_step: float = 1e-5
    richardson_levels: int = 2
    residual_tol_numeric: float = 1e-6
    residual_tol_analytic: float = 1e-9
    frame_parallel_threshold: float = 0.5
    f_min: float = 1e-6
    gram_min: float = 1e-12

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise ValueError(f"TolerancePolicy.{f.name} must be > 0, got {value!r}")
        if int(self.richardson_levels) != self.richardson_levels:
            raise ValueError("richardson_levels must be an integer")
        if self.residual_tol_analytic > self.residual_tol_numeric:
            raise ValueError("residual_tol_analytic must not exceed residual_tol_numeric")

    def first_step(self, x: float) -> float:
        return self.fd_step * max(1.0, abs(x))

    def second_step(self, x: float) -> float:
        return self.fd_step**SECOND_STEP_EXPONENT * max(1.0, abs(x))

    def replace(self, **changes) -> "TolerancePolicy":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_env(cls, base: Optional["TolerancePolicy"] = None) -> "TolerancePolicy":
        """Apply the ``MERIDIAN_FD_STEP`` override, if set, to ``base``."""
        base = base or cls()
        raw = os.environ.get(FD_STEP_ENV)
        if raw is None or raw.strip() == "":
            return base
        return base.replace(fd_step=float(raw))


DEFAULT_POLICY = TolerancePolicy()


@dataclass(frozen=True)
class Jet2:
    """Position and first/second partials of an immersion at one point."""

    X: np.ndarray
    X_u: np.ndarray
    X_v: np.ndarray
    X_uu: np.ndarray
    X_uv: np.ndarray
    X_vv: np.ndarray

    def second(self, p: int, q: int) -> np.ndarray:
        """Second partial by coordinate index (0 = u, 1 = v)."""
        if p == 0 and q == 0:
            return self.X_uu
        if p == 1 and q == 1:
            return self.X_vv
        return self.X_uv

    @property
    def tangents(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.X_u, self.X_v


@dataclass(frozen=True)
class AdaptedFrame:
    """Orthonormal tangent pair and orthonormal normal pair at a point.

    ``seeds`` records which standard basis vectors produced the normals when
    the frame came from Gram-Schmidt; it is ``None`` for analytic frames.
    """

    X1: np.ndarray
    X2: np.ndarray
    N1: np.ndarray
    N2: np.ndarray
    seeds: Optional[Tuple[int, int]] = field(default=None, compare=False)

    @property
    def tangent(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.X1, self.X2

    @property
    def normal(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.N1, self.N2

    def matrix(self) -> np.ndarray:
        return np.vstack([self.X1, self.X2, self.N1, self.N2])

    def orthonormality_residual(self) -> float:
        M = self.matrix()
        return float(np.max(np.abs(M @ M.T - np.eye(4))))

    def rotate_normals(self, phi: float) -> "AdaptedFrame":
        c, s = np.cos(phi), np.sin(phi)
        return AdaptedFrame(self.X1, self.X2, c * self.N1 + s * self.N2,
                            -s * self.N1 + c * self.N2, self.seeds)


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def richardson_extrapolate(estimate: Callable[[float], np.ndarray], h: float,
                           levels: int) -> np.ndarray:
    """Extrapolate an even-order estimator ``estimate(h)`` to h -> 0.

    ``levels`` step sizes h, h/2, ... are combined; the error of each
    central-difference estimate is a series in h**2, so column m of the
    tableau removes the h**(2m) term.
    """
    levels = int(levels)
    if levels < 1:
        raise ValueError("levels must be >= 1")
    row = [np.asarray(estimate(h / 2**k), dtype=float) for k in range(levels)]
    for m in range(1, levels):
        factor = 4.0**m
        row = [(factor * row[k + 1] - row[k]) / (factor - 1.0) for k in range(len(row) - 1)]
    return row[0]


def _guarded(func: Callable) -> Callable:
    def call(*args):
        try:
            value = np.asarray(func(*args), dtype=float)
        except (ProfileDomainError, DegenerateTangentPlane, IntegrationStepRejected,
                ValueError, ZeroDivisionError, FloatingPointError) as exc:
            raise StencilOutOfDomain(f"stencil point {args} rejected: {exc}") from exc
        if not np.all(np.isfinite(value)):
            raise StencilOutOfDomain(f"non-finite value at stencil point {args}")
        return value

    return call


def derivative(func: Callable[[float], np.ndarray], x: float, h: float,
               levels: int = 2) -> np.ndarray:
    """Central first derivative of a scalar- or array-valued ``func`` at x."""
    f = _guarded(func)
    return richardson_extrapolate(lambda s: (f(x + s) - f(x - s)) / (2.0 * s), h, levels)


def richardson_partials(func: Callable[[float, float], np.ndarray], at: Tuple[float, float],
                        policy: TolerancePolicy = DEFAULT_POLICY) -> Jet2:
    """Numerical 2-jet of ``func`` at ``at`` by extrapolated central differences."""
    u, v = float(at[0]), float(at[1])
    f = _guarded(func)
    L = policy.richardson_levels
    hu, hv = policy.first_step(u), policy.first_step(v)
    Hu, Hv = policy.second_step(u), policy.second_step(v)
    L2 = L + 1  # the coarse second-difference step needs one more level to reach 1e-8
    X = f(u, v)

    X_u = richardson_extrapolate(lambda s: (f(u + s, v) - f(u - s, v)) / (2 * s), hu, L)
    X_v = richardson_extrapolate(lambda s: (f(u, v + s) - f(u, v - s)) / (2 * s), hv, L)
    X_uu = richardson_extrapolate(
        lambda s: (f(u + s, v) - 2 * X + f(u - s, v)) / (s * s), Hu, L2)
    X_vv = richardson_extrapolate(
        lambda s: (f(u, v + s) - 2 * X + f(u, v - s)) / (s * s), Hv, L2)

    ratio = Hv / Hu

    def cross(s):
        t = s * ratio
        return (f(u + s, v + t) - f(u + s, v - t) - f(u - s, v + t) + f(u - s, v - t)) / (4 * s * t)

    X_uv = richardson_extrapolate(cross, Hu, L2)
    return Jet2(X, X_u, X_v, X_uu, X_uv, X_vv)


def orthonormalize_frame(t1: np.ndarray, t2: np.ndarray,
                         policy: TolerancePolicy = DEFAULT_POLICY) -> AdaptedFrame:
    """Gram-Schmidt frame adapted to span{t1, t2} in E^4.

    The normals come from the standard basis e1..e4 taken in index order;
    a seed is skipped when its rejection from the current span is shorter
    than ``policy.frame_parallel_threshold``.
    """
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    E, F, G = t1 @ t1, t1 @ t2, t2 @ t2
    W2 = E * G - F * F
    if not (E > 0 and G > 0) or W2 <= policy.gram_min * E * G:
        raise DegenerateTangentPlane(f"Gram determinant W2={W2:.3e} (E={E:.3e}, G={G:.3e})")

    X1 = t1 / np.sqrt(E)
    w = t2 - (t2 @ X1) * X1
    X2 = w / np.linalg.norm(w)

    basis = [X1, X2]
    seeds = []

    def reject(e):
        r = e.copy()
        for _ in range(2):  # second pass cleans up cancellation
            for b in basis:
                r = r - (r @ b) * b
        return r

    eye = np.eye(4)
    for i in range(4):
        if len(basis) == 4:
            break
        r = reject(eye[i])
        norm = np.linalg.norm(r)
        if norm >= policy.frame_parallel_threshold:
            basis.append(r / norm)
            seeds.append(i)
    while len(basis) < 4:
        # threshold set above 1/sqrt(2): fall back to the longest rejection
        rejections = [reject(eye[i]) for i in range(4)]
        norms = [np.linalg.norm(r) if i not in seeds else -1.0 for i, r in enumerate(rejections)]
        i = int(np.argmax(norms))
        basis.append(rejections[i] / norms[i])
        seeds.append(i)
    return AdaptedFrame(X1, X2, basis[2], basis[3], seeds=tuple(seeds))
