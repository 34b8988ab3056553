"""Built-in verification suite run by ``meridian4 verify``.

Each group returns a list of checks; a group passes when every check does.
Informational findings (the printed-profile discrepancy) are reported as
INFO and never fail the run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, TextIO, Tuple

import numpy as np

from .classifier import (alternative_ode_residual_at, classify_meridian, meridian_closed_form,
                         ode_residual, ode_residual_at)
from .curves import (Circle, CustomCurve, GreatCircle, Line, PrintedSqrt, SphereArc, make_profile,
                     make_spherical_curve, validate_arclength)
from .families import FAMILIES, IMMERSION_FAMILIES, MERIDIAN_FAMILIES
from .invariants import (SecondFundamentalForm, curvature_report, point_geometry, structural_residuals)
from .numkit import TolerancePolicy, orthonormalize_frame, richardson_partials
from .semiparallel import rbar_h_direct, rbar_h_formula, route_gap
from .surface import eval_jet


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class GroupResult:
    name: str
    checks: List[Check] = field(default_factory=list)
    info: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, value: float, limit: float, *, above: bool = False) -> None:
        ok = value >= limit if above else value < limit
        op = ">=" if above else "<"
        self.checks.append(Check(name, bool(ok), f"{value:.3e} {op} {limit:.0e}"))


@dataclass(frozen=True)
class Group:
    name: str
    tags: Tuple[str, ...]
    run: Callable[[TolerancePolicy], GroupResult]

    def matches(self, pattern: Optional[str]) -> bool:
        return pattern is None or pattern in self.name or pattern in self.tags


def _grid(fam, n):
    us, vs = fam.grid(n)
    return [(float(u), float(v)) for u in us for v in vs]


def group_numkit(policy: TolerancePolicy) -> GroupResult:
    g = GroupResult("numkit")
    cubic = lambda u, v: np.array([u**3 - 2 * u * v, v**3 + u * u * v, u * v * v, 1.0 + u - v])
    jet = richardson_partials(cubic, (0.3, 0.7), policy)
    u, v = 0.3, 0.7
    exact = [3 * u * u - 2 * v, 2 * u * v, v * v, 1.0]
    g.check("cubic d/du exact", float(np.max(np.abs(jet.X_u - exact))), 1e-10)
    g.check("cubic d2/du2 exact", float(np.max(np.abs(jet.X_uu - [6 * u, 2 * v, 0, 0]))), 1e-10)
    g.check("cubic d2/dudv exact", float(np.max(np.abs(jet.X_uv - [-2, 2 * u, 2 * v, 0]))), 1e-10)
    sine = richardson_partials(lambda u, v: np.array([math.sin(u), 0, 0, 0]), (0.0, 0.0), policy)
    g.check("sine d/du at 0", abs(sine.X_u[0] - 1.0), 1e-10)
    g.check("sine d2/du2 at 0", abs(sine.X_uu[0]), 1e-8)
    rng = np.random.default_rng(20150325)
    worst = 0.0
    for _ in range(200):
        t1, t2 = rng.normal(size=4), rng.normal(size=4)
        worst = max(worst, orthonormalize_frame(t1, t2, policy).orthonormality_residual())
    g.check("Gram-Schmidt frame orthonormal", worst, 1e-12)
    return g


def group_curves(policy: TolerancePolicy) -> GroupResult:
    g = GroupResult("curves")
    vs = np.linspace(0.0, 10.0, 101)
    for label, spec in [("great_circle", GreatCircle()), ("circle(0.5)", Circle(0.5)),
                        ("circle(2)", Circle(2.0))]:
        ev = make_spherical_curve(spec)
        g.check(f"{label} frame orthonormal", max(ev(v).frame_residual() for v in vs), 1e-8)
    flat = make_spherical_curve(CustomCurve(lambda v: 0.0))
    great = make_spherical_curve(GreatCircle())
    worst = 0.0
    for v in np.linspace(0.0, 2 * math.pi, 41):
        a, b = flat(v), great(v)
        worst = max(worst, *(np.max(np.abs(x - y)) for x, y in ((a.r, b.r), (a.t, b.t), (a.n, b.n))))
    g.check("RK4 kappa=0 matches great circle", worst, 1e-8)
    c = 1 / math.sqrt(2)
    circ = make_spherical_curve(Circle(1.0))
    rk = make_spherical_curve(CustomCurve(lambda v: 1.0, r0=(c, 0, c), t0=(0, 1, 0), n0=(-c, 0, c)))
    worst = 0.0
    for v in np.linspace(0.0, 5.0, 26):
        a, b = circ(v), rk(v)
        worst = max(worst, *(np.max(np.abs(x - y)) for x, y in ((a.r, b.r), (a.t, b.t), (a.n, b.n))))
    g.check("RK4 kappa=1 matches closed-form circle", worst, 1e-7)
    for label, spec, interval in [("line", Line(math.pi / 3, 0.2), (0.5, 2.0)),
                                  ("sphere_arc", SphereArc(1.0), (0.4, 2.7)),
                                  ("printed_sqrt(1,1)", PrintedSqrt(1.0, 1.0), (2.0, 3.0))]:
        g.check(f"{label} arc length", validate_arclength(make_profile(spec, policy.f_min), interval, 100),
                1e-12)
    return g


def group_closed_form(policy: TolerancePolicy) -> GroupResult:
    g = GroupResult("meridian-closed-form")
    for name, fam in MERIDIAN_FAMILIES.items():
        h = fam.handle(policy)
        dh = dK = dKN = 0.0
        for u, v in _grid(fam, 5):
            sff = point_geometry(h, u, v, policy).sff
            ref = meridian_closed_form(h, u, v)
            dh = max(dh, float(np.max(np.abs(sff.h - ref.h))) / max(1.0, float(np.max(np.abs(ref.h)))))
            rep = curvature_report(sff)
            p = h.meridian.profile(u)
            dK = max(dK, abs(rep.K - p.kappa_alpha * p.dg / p.f), abs(rep.K - rep.K_det))
            dKN = max(dKN, rep.K_N)
        g.check(f"{name}: h matches closed form", dh, 1e-8)
        g.check(f"{name}: K = kappa_alpha g'/f", dK, 1e-8)
        g.check(f"{name}: K_N = 0", dKN, 1e-8)
    return g


def group_numeric_jets(policy: TolerancePolicy) -> GroupResult:
    g = GroupResult("numeric-jets")
    for name, fam in MERIDIAN_FAMILIES.items():
        ha, hn = fam.handle(policy), fam.handle(policy, jets="numeric")
        djet = dh = 0.0
        for u, v in _grid(fam, 4):
            a, n = eval_jet(ha, u, v, policy), eval_jet(hn, u, v, policy)
            for key in ("X_u", "X_v", "X_uu", "X_uv", "X_vv"):
                djet = max(djet, float(np.max(np.abs(getattr(a, key) - getattr(n, key)))))
            ref = meridian_closed_form(ha, u, v)
            sff = point_geometry(hn, u, v, policy).sff
            dh = max(dh, float(np.max(np.abs(sff.h - ref.h))) / max(1.0, float(np.max(np.abs(ref.h)))))
        g.check(f"{name}: numeric vs analytic jets", djet, 1e-6)
        g.check(f"{name}: numeric h vs closed form (relative)", dh, 1e-6)
    return g


def _structural(policy: TolerancePolicy, families: Iterable, label: str, n: int) -> GroupResult:
    g = GroupResult(label)
    for name, fam in families:
        kinds = ("analytic", "numeric") if fam.is_meridian else ("numeric",)
        for jets in kinds:
            h = fam.handle(policy, jets=jets)
            worst = np.zeros(3)
            for u, v in _grid(fam, n):
                r = structural_residuals(h, u, v, policy)
                worst = np.maximum(worst, [r.gauss, r.ricci, r.codazzi])
            tol = 1e-8 if h.jet_kind == "analytic" else 1e-6
            g.check(f"{name} [{jets}] gauss", worst[0], tol)
            g.check(f"{name} [{jets}] ricci", worst[1], tol)
            g.check(f"{name} [{jets}] codazzi", worst[2], 1e-4)
    return g


def group_structural_meridian(policy: TolerancePolicy) -> GroupResult:
    return _structural(policy, MERIDIAN_FAMILIES.items(), "structural-meridian", 4)


def group_structural_immersion(policy: TolerancePolicy) -> GroupResult:
    return _structural(policy, IMMERSION_FAMILIES.items(), "structural-immersion", 4)


def random_sff(rng: np.random.Generator) -> SecondFundamentalForm:
    return SecondFundamentalForm.from_components(rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2),
                                                 rng.uniform(-1, 1, 2))


def group_routes(policy: TolerancePolicy) -> GroupResult:
    g = GroupResult("semiparallel-routes")
    for name, fam in FAMILIES.items():
        h = fam.handle(policy)
        worst = max(route_gap(point_geometry(h, u, v, policy).sff) for u, v in _grid(fam, 4))
        g.check(f"{name}: formula vs direct", worst, 1e-10)
    rng = np.random.default_rng(7)
    worst = max(route_gap(random_sff(rng)) for _ in range(100))
    g.check("100 random sff: formula vs direct", worst, 1e-10)
    sff = random_sff(rng)
    K = float(sff.h11 @ sff.h22 - sff.h12 @ sff.h12)
    gap = float(np.max(np.abs(rbar_h_formula(sff, K + 1).S - rbar_h_direct(sff).S)))
    g.check("corrupted K is detected", gap, 1e-3, above=True)
    return g


def group_gauge(policy: TolerancePolicy) -> GroupResult:
    g = GroupResult("gauge")
    rng = np.random.default_rng(11)
    for name in ("sphere", "circle1_sphere", "great_printed01", "wavy_sphere", "graph_generic", "twisted"):
        fam = FAMILIES[name]
        h = fam.handle(policy)
        worst = 0.0
        for u, v in _grid(fam, 3):
            base = curvature_report(point_geometry(h, u, v, policy).sff)
            base_sp = rbar_h_formula(point_geometry(h, u, v, policy).sff, base.K).residual_norm
            for phi in rng.uniform(0, 2 * math.pi, 4):
                sff = point_geometry(h.with_normal_rotation(phi), u, v, policy).sff
                rep = curvature_report(sff)
                sp = rbar_h_formula(sff, rep.K).residual_norm
                worst = max(worst, abs(rep.K - base.K), abs(rep.K_N - base.K_N),
                            abs(rep.H_norm - base.H_norm), abs(sp - base_sp))
        g.check(f"{name}: scalars under normal rotation", worst, 1e-9)
    return g


def group_case_consistency(policy: TolerancePolicy) -> GroupResult:
    g = GroupResult("case-consistency")
    for name, fam in MERIDIAN_FAMILIES.items():
        res = classify_meridian(fam.handle(policy), fam.grid(5), policy)
        g.checks.append(Check(f"{name}: case {res.case}", res.case == fam.expected_case,
                              f"expected {fam.expected_case}"))
        g.checks.append(Check(f"{name}: branch {res.theorem2_branch}", res.theorem2_branch != "inconsistent",
                              "branch must agree with measured verdict"))
        g.checks.append(Check(f"{name}: semi_parallel={res.semi_parallel}",
                              res.semi_parallel == fam.semi_parallel, f"expected {fam.semi_parallel}"))
    return g


def group_ode_report(policy: TolerancePolicy) -> GroupResult:
    g = GroupResult("ode-report")
    g.check("sphere_arc satisfies f f'' - f'^2 + 1 = 0",
            ode_residual(make_profile(SphereArc(1.0), policy.f_min), (0.4, 2.7), 200), 1e-10)
    for a, b in ((0.0, 1.0), (1.0, 1.0), (0.0, 2.0)):
        prof = make_profile(PrintedSqrt(a, b), policy.f_min)
        us = np.linspace(a + 1.0, a + 3.0, 50)
        mismatch = max(abs(ode_residual_at(prof(u)) - 2 * (2 * b - a * a) / prof(u).f ** 2) for u in us)
        alt = max(abs(alternative_ode_residual_at(prof(u))) for u in us)
        disp = max(abs(ode_residual_at(prof(u))) for u in us)
        g.check(f"printed_sqrt({a:g},{b:g}) residual = 2(2b-a^2)/f^2", mismatch, 1e-8)
        g.info.append(
            f"printed_sqrt(a={a:g}, b={b:g}) on u in [{us[0]:g}, {us[-1]:g}]: "
            f"max|f f'' - f'^2 + 1| = {disp:.6g} (equals 2(2b-a^2)/f^2, not 0); "
            f"max|f f'' + f'^2 - 1| = {alt:.2e}, so this profile solves the sign-flipped "
            f"equation while sphere_arc solves f f'' - f'^2 + 1 = 0.")
    g.info.append("meridian surfaces have flat normal connection (K_N = 0) but are not totally "
                  "umbilical in general; umbilicity deviation is reported separately.")
    return g


GROUPS: Tuple[Group, ...] = (
    Group("numkit", ("core", "numeric"), group_numkit),
    Group("curves", ("meridian",), group_curves),
    Group("meridian-closed-form", ("meridian",), group_closed_form),
    Group("numeric-jets", ("meridian", "numeric"), group_numeric_jets),
    Group("structural-meridian", ("meridian", "structural"), group_structural_meridian),
    Group("structural-immersion", ("immersion", "structural", "numeric"), group_structural_immersion),
    Group("semiparallel-routes", ("core",), group_routes),
    Group("gauge", ("core",), group_gauge),
    Group("case-consistency", ("meridian",), group_case_consistency),
    Group("ode-report", ("meridian",), group_ode_report),
)


def run_verify(policy: TolerancePolicy, pattern: Optional[str], out: TextIO) -> int:
    selected = [grp for grp in GROUPS if grp.matches(pattern)]
    if not selected:
        out.write(f"no verification group matches {pattern!r}\n")
        return 1
    failed = 0
    for grp in selected:
        try:
            result = grp.run(policy)
        except Exception as exc:  # a crashing group is a failing group
            result = GroupResult(grp.name, [Check("group raised", False, f"{type(exc).__name__}: {exc}")])
        status = "PASS" if result.passed else "FAIL"
        failed += not result.passed
        out.write(f"{status} {grp.name} ({len(result.checks)} checks)\n")
        for c in result.checks:
            if not c.passed:
                out.write(f"    FAIL {c.name}: {c.detail}\n")
        for line in result.info:
            out.write(f"INFO {grp.name}: {line}\n")
    out.write(f"{len(selected) - failed}/{len(selected)} groups passed\n")
    return 0 if failed == 0 else 1
