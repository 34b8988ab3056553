"""Grid analysis and deterministic CSV / JSON report emission."""
from __future__ import annotations

import io
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .classifier import classify_meridian
from .config import COLUMNS, AnalysisConfig
from .errors import GeometryError, ProfileDomainError, StencilOutOfDomain
from .invariants import (codazzi_residual, curvature_report, first_form, frame_derivatives,
                         gaussian_curvature, gaussian_curvature_from_shape_operators, ricci_mismatch,
                         weingarten_shape_operators)
from .numkit import TolerancePolicy
from .semiparallel import semiparallel_tensor
from .surface import SurfaceHandle

log = logging.getLogger(__name__)

RESIDUAL_COLUMNS = ("sp_residual", "gauss_res", "ricci_res", "codazzi_res")


class EvaluationError(GeometryError):
    def __init__(self, u: float, v: float, cause: Exception):
        super().__init__(f"evaluation failed at (u, v) = ({u!r}, {v!r}): {cause}")
        self.u, self.v = u, v


@dataclass
class AnalysisResult:
    columns: tuple
    rows: List[Dict[str, float]]
    rows_skipped: int
    grid_size: int
    summary: Dict[str, object] = field(default_factory=dict)


def analyze_point(handle: SurfaceHandle, u: float, v: float, policy: TolerancePolicy) -> Dict[str, float]:
    fd = frame_derivatives(handle, u, v, policy)
    geo = fd.center
    I = first_form(geo.jet, policy)
    rep = curvature_report(geo.sff)
    W = weingarten_shape_operators(fd)
    return {
        "u": u, "v": v, "E": I.E, "F": I.F, "G": I.G,
        "K": rep.K, "K_N": rep.K_N, "H_norm": rep.H_norm,
        "umb_dev": rep.umbilicity_deviation, "iso_dev": rep.isotropy_deviation,
        "hH2_minus_3K": rep.hH2_minus_3K,
        "sp_residual": semiparallel_tensor(geo.sff).residual_norm,
        "gauss_res": abs(gaussian_curvature(geo.sff) - gaussian_curvature_from_shape_operators(W)),
        "ricci_res": ricci_mismatch(geo.sff, W),
        "codazzi_res": codazzi_residual(fd),
    }


def run_analysis(config: AnalysisConfig, handle: Optional[SurfaceHandle] = None) -> AnalysisResult:
    handle = handle or config.build()
    policy = config.policy
    us, vs = config.grid()
    rows, skipped = [], 0
    for u in us:
        for v in vs:
            u_, v_ = float(u), float(v)
            try:
                rows.append(analyze_point(handle, u_, v_, policy))
            except (ProfileDomainError, StencilOutOfDomain) as exc:
                skipped += 1
                log.warning("skipping (u, v) = (%r, %r): %s", u_, v_, exc)
            except GeometryError as exc:
                raise EvaluationError(u_, v_, exc) from exc
    result = AnalysisResult(config.outputs, rows, skipped, len(us) * len(vs))
    tol = policy.residual_tol_analytic if handle.jet_kind == "analytic" else policy.residual_tol_numeric
    summary: Dict[str, object] = {
        "rows_emitted": len(rows),
        "rows_skipped": skipped,
        "grid_size": result.grid_size,
        "jet_kind": handle.jet_kind,
    }
    for col in RESIDUAL_COLUMNS:
        summary[f"max_{col}"] = max((r[col] for r in rows), default=float("nan"))
    summary["semi_parallel"] = bool(rows) and all(r["sp_residual"] < tol for r in rows)
    summary["semi_parallel_tol"] = tol
    if handle.is_meridian:
        cls = classify_meridian(handle, (us, vs), policy)
        summary["classification"] = cls.as_dict()
    result.summary = summary
    return result


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _flatten(prefix: str, value, out: List[tuple]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, (list, tuple)):
        out.append((prefix, "; ".join(map(str, value))))
    else:
        out.append((prefix, _fmt(value)))


def to_csv(result: AnalysisResult) -> str:
    buf = io.StringIO(newline="")
    buf.write(",".join(result.columns) + "\n")
    for row in result.rows:
        buf.write(",".join(_fmt(float(row[c])) for c in result.columns) + "\n")
    flat: List[tuple] = []
    _flatten("", result.summary, flat)
    buf.write("# summary\n")
    for key, value in flat:
        buf.write(f"# {key},{value}\n")
    return buf.getvalue()


def to_json(result: AnalysisResult) -> str:
    doc = {
        "columns": list(result.columns),
        "rows": [[float(row[c]) for c in result.columns] for row in result.rows],
        "summary": result.summary,
    }
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def format_result(result: AnalysisResult, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(result)
    if fmt == "json":
        return to_json(result)
    raise ValueError(f"unknown format {fmt!r}")


__all__ = ["COLUMNS", "AnalysisResult", "EvaluationError", "analyze_point", "run_analysis",
           "to_csv", "to_json", "format_result"]
