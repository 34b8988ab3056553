"""JSON analysis configs: schema validation and construction of surfaces.

Example::

    {
      "surface": {"family": "meridian",
                  "curve": {"kind": "circle", "kappa": 1.0},
                  "profile": {"kind": "sphere_arc", "k": 1.0, "u0": 0.0}},
      "grid": {"u": [0.8, 1.5, 10], "v": [0.0, 3.0, 10]},
      "policy": {"fd_step": 1e-5}
    }

Custom curves take ``kappa`` as an expression in ``v``; custom profiles take
``f`` and ``g`` as expressions in ``u``; raw immersions take four
``components`` in ``u`` and ``v``.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
import sympy

from .curves import Circle, CustomCurve, CustomProfile, GreatCircle, Line, PrintedSqrt, SphereArc
from .errors import ConfigError
from .numkit import TolerancePolicy
from .surface import MeridianSpec, SurfaceHandle, make_immersion_surface, make_meridian_surface

COLUMNS = ("u", "v", "E", "F", "G", "K", "K_N", "H_norm", "umb_dev", "iso_dev", "hH2_minus_3K",
           "sp_residual", "gauss_res", "ricci_res", "codazzi_res")

_U, _V = sympy.symbols("u v", real=True)


@dataclass(frozen=True)
class AnalysisConfig:
    surface: Dict[str, Any]
    u_grid: Tuple[float, float, int]
    v_grid: Tuple[float, float, int]
    policy: TolerancePolicy
    outputs: Tuple[str, ...] = COLUMNS

    @property
    def is_meridian(self) -> bool:
        return self.surface["family"] == "meridian"

    def grid(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.linspace(*self.u_grid[:2], self.u_grid[2]), np.linspace(*self.v_grid[:2], self.v_grid[2])

    def build(self) -> SurfaceHandle:
        return build_surface(self.surface, self.policy)


def _require(d: Dict[str, Any], key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise ConfigError(f"missing '{key}' in {where}")
    return d[key]


def _number(d: Dict[str, Any], key: str, where: str, default: Optional[float] = None) -> float:
    if key not in d:
        if default is None:
            raise ConfigError(f"missing '{key}' in {where}")
        return default
    value = d[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{where}.{key}' must be a number, got {value!r}")
    return float(value)


def _expr(text: Any, symbols, where: str):
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return sympy.Float(text)
    if not isinstance(text, str):
        raise ConfigError(f"{where} must be an expression string")
    try:
        expr = sympy.sympify(text, locals={"u": _U, "v": _V})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ConfigError(f"cannot parse {where}={text!r}: {exc}") from exc
    stray = expr.free_symbols - set(symbols)
    if stray:
        raise ConfigError(f"{where} uses unknown symbols {sorted(map(str, stray))}")
    return expr


def _vec3(d, key, default):
    value = d.get(key, default)
    try:
        out = tuple(float(x) for x in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'{key}' must be three numbers") from exc
    if len(out) != 3:
        raise ConfigError(f"'{key}' must be three numbers")
    return out


def parse_curve(d: Dict[str, Any]):
    kind = _require(d, "kind", "surface.curve")
    if kind == "great_circle":
        return GreatCircle()
    if kind == "circle":
        kappa = _number(d, "kappa", "surface.curve")
        if kappa == 0:
            raise ConfigError("circle needs kappa != 0; use great_circle")
        return Circle(kappa)
    if kind == "custom":
        expr = _expr(_require(d, "kappa", "surface.curve"), (_V,), "surface.curve.kappa")
        fn = sympy.lambdify(_V, expr, "math")
        try:
            return CustomCurve(lambda v, fn=fn: float(fn(v)), r0=_vec3(d, "r0", (1, 0, 0)),
                               t0=_vec3(d, "t0", (0, 1, 0)), n0=_vec3(d, "n0", (0, 0, 1)),
                               step=_number(d, "step", "surface.curve", 1e-3))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown curve kind {kind!r}")


def parse_profile(d: Dict[str, Any]):
    kind = _require(d, "kind", "surface.profile")
    where = "surface.profile"
    try:
        if kind == "line":
            return Line(_number(d, "theta", where), _number(d, "f0", where, 0.0), _number(d, "g0", where, 0.0))
        if kind == "sphere_arc":
            return SphereArc(_number(d, "k", where), _number(d, "u0", where, 0.0))
        if kind == "printed_sqrt":
            return PrintedSqrt(_number(d, "a", where), _number(d, "b", where))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if kind == "custom":
        f = _expr(_require(d, "f", where), (_U,), "surface.profile.f")
        g = _expr(_require(d, "g", where), (_U,), "surface.profile.g")
        fns = [sympy.lambdify(_U, e, "math") for e in
               (f, g, sympy.diff(f, _U), sympy.diff(g, _U), sympy.diff(f, _U, 2), sympy.diff(g, _U, 2))]
        wrapped = [lambda u, fn=fn: float(fn(u)) for fn in fns]
        return CustomProfile(*wrapped, label=f"f={f}, g={g}")
    raise ConfigError(f"unknown profile kind {kind!r}")


def build_surface(surface: Dict[str, Any], policy: TolerancePolicy) -> SurfaceHandle:
    family = _require(surface, "family", "surface")
    if family == "meridian":
        spec = MeridianSpec(parse_curve(_require(surface, "curve", "surface")),
                            parse_profile(_require(surface, "profile", "surface")))
        jets = surface.get("jets", "analytic")
        if jets not in ("analytic", "numeric"):
            raise ConfigError(f"surface.jets must be 'analytic' or 'numeric', got {jets!r}")
        return make_meridian_surface(spec, policy, jets=jets)
    if family == "immersion":
        comps = _require(surface, "components", "surface")
        if not isinstance(comps, list) or len(comps) != 4:
            raise ConfigError("surface.components must list four expressions")
        exprs = [_expr(c, (_U, _V), f"surface.components[{i}]") for i, c in enumerate(comps)]
        fn = sympy.lambdify((_U, _V), exprs, "math")
        return make_immersion_surface(lambda u, v: np.array(fn(u, v), dtype=float), label="immersion")
    raise ConfigError(f"unknown surface family {family!r}")


def _axis(grid: Dict[str, Any], name: str) -> Tuple[float, float, int]:
    triple = _require(grid, name, "grid")
    if not isinstance(triple, list) or len(triple) != 3:
        raise ConfigError(f"grid.{name} must be [min, max, count]")
    lo, hi, n = triple
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in triple):
        raise ConfigError(f"grid.{name} entries must be numbers")
    if int(n) != n or n < 2:
        raise ConfigError(f"grid.{name} count must be an integer >= 2")
    if not lo < hi:
        raise ConfigError(f"grid.{name} needs min < max")
    return float(lo), float(hi), int(n)


def parse_config(doc: Dict[str, Any], base_policy: Optional[TolerancePolicy] = None) -> AnalysisConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    surface = _require(doc, "surface", "config")
    grid = _require(doc, "grid", "config")
    policy = base_policy or TolerancePolicy()
    overrides = doc.get("policy", {})
    known = {f.name for f in dataclasses.fields(TolerancePolicy)}
    if not isinstance(overrides, dict) or set(overrides) - known:
        raise ConfigError(f"policy overrides must be a subset of {sorted(known)}")
    try:
        policy = policy.replace(**overrides)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad policy: {exc}") from exc
    outputs = doc.get("outputs", list(COLUMNS))
    if not isinstance(outputs, list) or not outputs or set(outputs) - set(COLUMNS):
        raise ConfigError(f"outputs must be a non-empty subset of {list(COLUMNS)}")
    config = AnalysisConfig(surface, _axis(grid, "u"), _axis(grid, "v"), policy, tuple(outputs))
    config.build()  # surface errors surface now, before any output is written
    return config


def load_config(path: str, base_policy: Optional[TolerancePolicy] = None) -> AnalysisConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return parse_config(doc, base_policy)

