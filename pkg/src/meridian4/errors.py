"""Exception types raised by meridian4."""


class GeometryError(Exception):
    """Base class for every error raised by this package."""


class StencilOutOfDomain(GeometryError):
    pass


class DegenerateTangentPlane(GeometryError):
    pass


class ProfileDomainError(GeometryError):
    pass


class IntegrationStepRejected(GeometryError):
    pass


class GaugeDiscontinuity(GeometryError):
    """The normal frame changed seed or flipped sign across a stencil."""


class RouteDisagreement(GeometryError):
    """Two independent evaluations of the same tensor disagree.

    This indicates a coding error, never a property of the surface.
    """


class NotAMeridian(GeometryError):
    pass


class ConfigError(GeometryError):
    pass
