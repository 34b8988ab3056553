"""Second-order invariants of a surface in E^4 from its 2-jet and an adapted frame.

Everything downstream of :func:`second_form` works with the coefficients
h[alpha, i, j] = <h(X_i, X_j), N_alpha> in the orthonormal adapted frame,
so the shape operator matrices are just ``h[alpha]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DegenerateTangentPlane, GaugeDiscontinuity
from .numkit import DEFAULT_POLICY, AdaptedFrame, Jet2, TolerancePolicy, commutator, derivative
from .surface import SurfaceHandle, adapted_frame, eval_jet


@dataclass(frozen=True)
class FirstFundamentalForm:
    E: float
    F: float
    G: float
    W2: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.E, self.F], [self.F, self.G]])


@dataclass(frozen=True)
class SecondFundamentalForm:
    """h[alpha, i, j] with 0-based indices; symmetric in (i, j) exactly."""

    h: np.ndarray

    def vec(self, i: int, j: int) -> np.ndarray:
        """h(X_i, X_j) in normal coordinates (N1, N2)."""
        return self.h[:, i, j]

    @property
    def h11(self) -> np.ndarray:
        return self.h[:, 0, 0]

    @property
    def h12(self) -> np.ndarray:
        return self.h[:, 0, 1]

    @property
    def h22(self) -> np.ndarray:
        return self.h[:, 1, 1]

    @classmethod
    def from_components(cls, h11, h12, h22) -> "SecondFundamentalForm":
        h = np.empty((2, 2, 2))
        h[:, 0, 0] = h11
        h[:, 0, 1] = h12
        h[:, 1, 0] = h12
        h[:, 1, 1] = h22
        return cls(h)

    def rotated(self, phi: float) -> "SecondFundamentalForm":
        """Components after rotating the normal frame by ``phi``."""
        c, s = np.cos(phi), np.sin(phi)
        R = np.array([[c, s], [-s, c]])
        return SecondFundamentalForm(np.einsum("ab,bij->aij", R, self.h))


@dataclass(frozen=True)
class ShapeOperatorPair:
    A1: np.ndarray
    A2: np.ndarray

    def __iter__(self):
        return iter((self.A1, self.A2))


@dataclass(frozen=True)
class CurvatureReport:
    K: float
    K_det: float  # sum of det A_alpha, the second route to K
    K_N: float
    H: np.ndarray  # mean curvature vector in normal coordinates
    H_norm: float
    umbilicity_deviation: float
    isotropy_deviation: float
    hH2_minus_3K: float


def first_form(jet: Jet2, policy: TolerancePolicy = DEFAULT_POLICY) -> FirstFundamentalForm:
    E = float(jet.X_u @ jet.X_u)
    F = float(jet.X_u @ jet.X_v)
    G = float(jet.X_v @ jet.X_v)
    W2 = E * G - F * F
    if not (E > 0 and G > 0) or W2 <= policy.gram_min * E * G:
        raise DegenerateTangentPlane(f"W2={W2:.3e} with E={E:.3e}, G={G:.3e}")
    return FirstFundamentalForm(E, F, G, W2)


def metric_partials(jet: Jet2) -> np.ndarray:
    """dg[p, r, q] = d/dx^p of g_rq, exact from the 2-jet."""
    Xd = (jet.X_u, jet.X_v)
    dg = np.empty((2, 2, 2))
    for p in range(2):
        for r in range(2):
            for q in range(2):
                dg[p, r, q] = jet.second(p, r) @ Xd[q] + Xd[r] @ jet.second(p, q)
    return dg


def frame_coefficients(jet: Jet2, frame: AdaptedFrame) -> np.ndarray:
    """a with X_i = a[i, 0] X_u + a[i, 1] X_v."""
    g = np.array([[jet.X_u @ jet.X_u, jet.X_u @ jet.X_v],
                  [jet.X_v @ jet.X_u, jet.X_v @ jet.X_v]])
    rhs = np.array([[X @ jet.X_u, X @ jet.X_v] for X in frame.tangent])
    return np.linalg.solve(g, rhs.T).T


def second_form(jet: Jet2, frame: AdaptedFrame) -> SecondFundamentalForm:
    a = frame_coefficients(jet, frame)
    # coordinate-basis normal projections c[alpha, p, q] = <X_pq, N_alpha>
    c = np.empty((2, 2, 2))
    for alpha, N in enumerate(frame.normal):
        c[alpha, 0, 0] = jet.X_uu @ N
        c[alpha, 0, 1] = c[alpha, 1, 0] = jet.X_uv @ N
        c[alpha, 1, 1] = jet.X_vv @ N
    h = np.empty((2, 2, 2))
    for alpha in range(2):
        for i in range(2):
            for j in range(i, 2):
                h[alpha, i, j] = h[alpha, j, i] = a[i] @ c[alpha] @ a[j]
    return SecondFundamentalForm(h)


def shape_operators(sff: SecondFundamentalForm) -> ShapeOperatorPair:
    return ShapeOperatorPair(sff.h[0].copy(), sff.h[1].copy())


def normal_curvature_operator(sff: SecondFundamentalForm) -> np.ndarray:
    """M[beta, alpha] = <R_perp(X1, X2) N_alpha, N_beta>.

    Column alpha is R_perp(X1,X2)N_alpha = h^a_12 (h11 - h22) + (h^a_22 - h^a_11) h12.
    """
    h = sff.h
    M = np.empty((2, 2))
    for alpha in range(2):
        M[:, alpha] = (h[alpha, 0, 1] * (sff.h11 - sff.h22)
                       + (h[alpha, 1, 1] - h[alpha, 0, 0]) * sff.h12)
    return M


def ricci_commutator_form(A: ShapeOperatorPair) -> np.ndarray:
    """R[alpha, beta] = <[A_alpha, A_beta] X1, X2>."""
    ops = tuple(A)
    out = np.empty((2, 2))
    for alpha in range(2):
        for beta in range(2):
            out[alpha, beta] = commutator(ops[alpha], ops[beta])[1, 0]
    return out


def ricci_mismatch(sff: SecondFundamentalForm, A: Optional[ShapeOperatorPair] = None) -> float:
    M = normal_curvature_operator(sff)
    C = ricci_commutator_form(A if A is not None else shape_operators(sff))
    return float(np.max(np.abs(M - C.T)))


def gaussian_curvature(sff: SecondFundamentalForm) -> float:
    return float(sff.h11 @ sff.h22 - sff.h12 @ sff.h12)


def gaussian_curvature_from_shape_operators(A: ShapeOperatorPair) -> float:
    A1, A2 = A
    return float((A1[0, 0] * A1[1, 1] - A1[0, 1] * A1[1, 0])
                 + (A2[0, 0] * A2[1, 1] - A2[0, 1] * A2[1, 0]))


def isotropy_deviation(sff: SecondFundamentalForm) -> float:
    """max - min of ||h(X, X)|| over unit tangents X, without sampling.

    With X = cos(t) X1 + sin(t) X2 and phi = 2t,
    h(X, X) = H + cos(phi) P + sin(phi) Q, so ||h(X, X)||^2 is a degree-2
    trigonometric polynomial in phi. Its critical points are the unit
    roots of a quartic in z = exp(i phi).
    """
    size = float(np.max(np.abs(sff.h)))
    if size == 0.0:
        return 0.0
    # the deviation is homogeneous of degree one; normalizing keeps the quartic well scaled
    H = (sff.h11 + sff.h22) / (2 * size)
    P = (sff.h11 - sff.h22) / (2 * size)
    Q = sff.h12 / size
    A1, B1 = 2 * (H @ P), 2 * (H @ Q)
    A2, B2 = (P @ P - Q @ Q) / 2, P @ Q
    coeffs = np.array([B2 + 1j * A2, (B1 + 1j * A1) / 2, 0.0, (B1 - 1j * A1) / 2, B2 - 1j * A2])
    candidates = [0.0]
    scale = np.max(np.abs(coeffs))
    if scale > 0:
        coeffs = np.where(np.abs(coeffs) > 1e-14 * scale, coeffs / scale, 0.0)
        roots = np.roots(coeffs)
        candidates.extend(np.angle(roots[np.isfinite(roots)]))
    phi = np.asarray(candidates)
    vals = H[None, :] + np.cos(phi)[:, None] * P[None, :] + np.sin(phi)[:, None] * Q[None, :]
    norms = np.sqrt(np.einsum("ka,ka->k", vals, vals))
    return float(size * (norms.max() - norms.min()))


def umbilicity_deviation(A: ShapeOperatorPair) -> float:
    """Norm of the traceless part of h; zero iff totally umbilical."""
    total = 0.0
    for Aa in A:
        T = Aa - 0.5 * np.trace(Aa) * np.eye(2)
        total += float(np.sum(T * T))
    return float(np.sqrt(total))


def curvature_report(sff: SecondFundamentalForm) -> CurvatureReport:
    A = shape_operators(sff)
    K = gaussian_curvature(sff)
    H = (sff.h11 + sff.h22) / 2
    H_norm = float(np.sqrt(H @ H))
    return CurvatureReport(
        K=K,
        K_det=gaussian_curvature_from_shape_operators(A),
        K_N=float(abs(normal_curvature_operator(sff)[1, 0])),
        H=H,
        H_norm=H_norm,
        umbilicity_deviation=umbilicity_deviation(A),
        isotropy_deviation=isotropy_deviation(sff),
        hH2_minus_3K=H_norm**2 - 3 * K,
    )


# -- point evaluation and the derivative-based routes ----------------------

@dataclass(frozen=True)
class PointGeometry:
    u: float
    v: float
    jet: Jet2
    frame: AdaptedFrame
    a: np.ndarray
    sff: SecondFundamentalForm

    def packed(self) -> np.ndarray:
        f = self.frame
        return np.concatenate([f.X1, f.X2, f.N1, f.N2, self.a.ravel(), self.sff.h.ravel()])


def point_geometry(handle: SurfaceHandle, u: float, v: float,
                   policy: TolerancePolicy = DEFAULT_POLICY) -> PointGeometry:
    jet = eval_jet(handle, u, v, policy)
    first_form(jet, policy)
    frame = adapted_frame(handle, u, v, policy, jet=jet)
    return PointGeometry(u, v, jet, frame, frame_coefficients(jet, frame), second_form(jet, frame))


@dataclass(frozen=True)
class FrameDerivatives:
    """Center geometry plus derivatives of the frame field along X1 and X2.

    Arrays are indexed by the tangent direction i first.
    """

    center: PointGeometry
    dX: np.ndarray  # (2, 2, 4): d_{X_i} X_j
    dN: np.ndarray  # (2, 2, 4): d_{X_i} N_alpha
    da: np.ndarray  # (2, 2, 2): d_{X_i} a[j, q]
    dh: np.ndarray  # (2, 2, 2, 2): d_{X_i} h[alpha, j, k]


def _check_gauge(center: AdaptedFrame, other: AdaptedFrame, where) -> None:
    if center.seeds != other.seeds:
        raise GaugeDiscontinuity(
            f"normal seeds change from {center.seeds} to {other.seeds} near {where}")
    for Nc, No in zip(center.normal, other.normal):
        if Nc @ No < 0:
            raise GaugeDiscontinuity(f"normal frame flips sign near {where}")


def frame_derivatives(handle: SurfaceHandle, u: float, v: float,
                      policy: TolerancePolicy = DEFAULT_POLICY) -> FrameDerivatives:
    """Differentiate the adapted frame field numerically.

    Analytic jets with an analytic frame use the fine first-difference step.
    Anything built on numeric jets uses the coarser step, so jet noise is not
    amplified, plus one more extrapolation level to pay for the coarser step.
    """
    center = point_geometry(handle, u, v, policy)
    fine = handle.jet_kind == "analytic" and handle.meridian is not None
    step = policy.first_step if fine else policy.second_step
    levels = policy.richardson_levels + (0 if fine else 1)

    def field_u(s):
        g = point_geometry(handle, s, v, policy)
        _check_gauge(center.frame, g.frame, (s, v))
        return g.packed()

    def field_v(s):
        g = point_geometry(handle, u, s, policy)
        _check_gauge(center.frame, g.frame, (u, s))
        return g.packed()

    d_u = derivative(field_u, u, step(u), levels)
    d_v = derivative(field_v, v, step(v), levels)
    a = center.a
    d = np.array([a[i, 0] * d_u + a[i, 1] * d_v for i in range(2)])
    return FrameDerivatives(
        center=center,
        dX=d[:, 0:8].reshape(2, 2, 4),
        dN=d[:, 8:16].reshape(2, 2, 4),
        da=d[:, 16:20].reshape(2, 2, 2),
        dh=d[:, 20:28].reshape(2, 2, 2, 2),
    )


def weingarten_shape_operators(fd: FrameDerivatives) -> ShapeOperatorPair:
    """A_alpha[i, j] = -<D_{X_i} N_alpha, X_j>, from the normal-frame derivatives."""
    X = fd.center.frame.tangent
    ops = []
    for alpha in range(2):
        W = np.array([[-(fd.dN[i, alpha] @ X[j]) for j in range(2)] for i in range(2)])
        ops.append(W.T)
    return ShapeOperatorPair(*ops)


def normal_connection_forms(fd: FrameDerivatives) -> np.ndarray:
    """omega[i, alpha, beta] = <D_{X_i} N_alpha, N_beta>."""
    N = fd.center.frame.normal
    return np.array([[[fd.dN[i, a] @ N[b] for b in range(2)] for a in range(2)] for i in range(2)])


def christoffel_symbols(jet: Jet2) -> np.ndarray:
    """Coordinate symbols Gamma[m, p, q] of the induced metric (Koszul formula)."""
    g = np.array([[jet.X_u @ jet.X_u, jet.X_u @ jet.X_v],
                  [jet.X_v @ jet.X_u, jet.X_v @ jet.X_v]])
    ginv = np.linalg.inv(g)
    dg = metric_partials(jet)
    lower = np.empty((2, 2, 2))  # Gamma_{r, pq}
    for r in range(2):
        for p in range(2):
            for q in range(2):
                lower[r, p, q] = 0.5 * (dg[p, r, q] + dg[q, r, p] - dg[r, p, q])
    return np.einsum("mr,rpq->mpq", ginv, lower)


def levi_civita_frame_coefficients(fd: FrameDerivatives) -> np.ndarray:
    """Gamma_hat[i, j, m] = <nabla_{X_i} X_j, X_m> via coordinate Christoffel symbols."""
    c = fd.center
    Gam = christoffel_symbols(c.jet)
    g = np.array([[c.jet.X_u @ c.jet.X_u, c.jet.X_u @ c.jet.X_v],
                  [c.jet.X_v @ c.jet.X_u, c.jet.X_v @ c.jet.X_v]])
    a = c.a
    out = np.empty((2, 2, 2))
    for i in range(2):
        for j in range(2):
            # coordinate components of nabla_{X_i} X_j
            coords = fd.da[i, j] + np.einsum("p,q,mpq->m", a[i], a[j], Gam)
            for m in range(2):
                out[i, j, m] = coords @ g @ a[m]
    return out


def covariant_derivative_h(fd: FrameDerivatives) -> np.ndarray:
    """C[i, j, k, beta] = <(nabla-bar_{X_i} h)(X_j, X_k), N_beta>."""
    H = fd.center.sff.h
    omega = normal_connection_forms(fd)
    Gam = levi_civita_frame_coefficients(fd)
    C = np.empty((2, 2, 2, 2))
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for beta in range(2):
                    val = fd.dh[i, beta, j, k]
                    val += sum(H[alpha, j, k] * omega[i, alpha, beta] for alpha in range(2))
                    val -= sum(Gam[i, j, m] * H[beta, m, k] + Gam[i, k, m] * H[beta, j, m]
                               for m in range(2))
                    C[i, j, k, beta] = val
    return C


def codazzi_residual(fd: FrameDerivatives) -> float:
    C = covariant_derivative_h(fd)
    return float(np.linalg.norm(C[0, 1, 1] - C[1, 0, 1]) + np.linalg.norm(C[0, 1, 0] - C[1, 0, 0]))


@dataclass(frozen=True)
class StructuralResiduals:
    gauss: float
    ricci: float
    codazzi: float


def structural_residuals(handle: SurfaceHandle, u: float, v: float,
                         policy: TolerancePolicy = DEFAULT_POLICY,
                         sff: Optional[SecondFundamentalForm] = None) -> StructuralResiduals:
    """Gauss, Ricci and Codazzi mismatches at (u, v).

    The Gauss and Ricci residuals compare the jet-projected form ``sff``
    (default: computed here) against shape operators obtained from the
    derivative of the normal frame. Passing a perturbed ``sff`` leaves the
    derivative route untouched, so corruption shows up in the residuals.
    """
    fd = frame_derivatives(handle, u, v, policy)
    sff = sff if sff is not None else fd.center.sff
    W = weingarten_shape_operators(fd)
    gauss = abs(gaussian_curvature(sff) - gaussian_curvature_from_shape_operators(W))
    return StructuralResiduals(gauss=gauss, ricci=ricci_mismatch(sff, W), codazzi=codazzi_residual(fd))


def evaluate_sff(handle: SurfaceHandle, u: float, v: float,
                 policy: TolerancePolicy = DEFAULT_POLICY) -> SecondFundamentalForm:
    return point_geometry(handle, u, v, policy).sff


def grid_points(us, vs) -> Tuple[Tuple[float, float], ...]:
    return tuple((float(u), float(v)) for u in us for v in vs)
