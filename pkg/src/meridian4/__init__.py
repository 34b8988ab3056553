"""Invariants, semi-parallelity tests and classification for surfaces in E^4,
with closed-form support for meridian surfaces on rotational hypersurfaces."""
from .classifier import ClassificationResult, classify_meridian, meridian_closed_form, ode_residual
from .curves import (Circle, CustomCurve, CustomProfile, GreatCircle, Line, PrintedSqrt, SphereArc,
                     make_profile, make_spherical_curve)
from .errors import (ConfigError, DegenerateTangentPlane, GaugeDiscontinuity, GeometryError,
                     IntegrationStepRejected, NotAMeridian, ProfileDomainError, RouteDisagreement,
                     StencilOutOfDomain)
from .invariants import (CurvatureReport, SecondFundamentalForm, curvature_report, point_geometry,
                         structural_residuals)
from .numkit import AdaptedFrame, Jet2, TolerancePolicy, richardson_partials
from .semiparallel import rbar_h_direct, rbar_h_formula, semiparallel_tensor, semiparallel_verdict
from .surface import MeridianSpec, SurfaceHandle, eval_jet, make_immersion_surface, make_meridian_surface

__version__ = "0.1.0"

__all__ = [
    "AdaptedFrame",
    "Circle",
    "ClassificationResult",
    "ConfigError",
    "CurvatureReport",
    "CustomCurve",
    "CustomProfile",
    "DegenerateTangentPlane",
    "GaugeDiscontinuity",
    "GeometryError",
    "GreatCircle",
    "IntegrationStepRejected",
    "Jet2",
    "Line",
    "MeridianSpec",
    "NotAMeridian",
    "PrintedSqrt",
    "ProfileDomainError",
    "RouteDisagreement",
    "SecondFundamentalForm",
    "SphereArc",
    "StencilOutOfDomain",
    "SurfaceHandle",
    "TolerancePolicy",
    "classify_meridian",
    "curvature_report",
    "eval_jet",
    "make_immersion_surface",
    "make_meridian_surface",
    "make_profile",
    "make_spherical_curve",
    "meridian_closed_form",
    "ode_residual",
    "point_geometry",
    "rbar_h_direct",
    "rbar_h_formula",
    "richardson_partials",
    "semiparallel_tensor",
    "semiparallel_verdict",
    "structural_residuals",
]
