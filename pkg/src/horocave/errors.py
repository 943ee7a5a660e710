"""Exception hierarchy.

Every error raised by the library derives from :class:`HorocaveError`; most
also derive from :class:`ValueError` so callers that only care about bad
input can catch that instead.
"""


class HorocaveError(Exception):
    pass


class DimensionError(HorocaveError, ValueError):
    pass


class ModelError(HorocaveError, ValueError):
    pass


class NearIdealError(ModelError):
    """Point too close to the ideal boundary to be carried accurately."""


class GeodesicError(HorocaveError, ValueError):
    pass


class TangentError(HorocaveError, ValueError):
    pass


class DomainError(HorocaveError, ValueError):
    pass


class StencilError(DomainError):
    """A finite-difference stencil could not be placed inside the domain."""


class BoundaryError(HorocaveError, ValueError):
    pass


class FieldError(HorocaveError, ValueError):
    pass


class RangeError(HorocaveError, ValueError):
    pass


class ConeViolation(HorocaveError, ValueError):
    pass


class HorosphericalConcavityViolated(HorocaveError, ValueError):
    def __init__(self, message, x=None, lam=None):
        super().__init__(message)
        self.x = x
        self.lam = lam


class OffSurfaceError(HorocaveError, ValueError):
    pass


class PlacementError(HorocaveError, ValueError):
    pass


class AssumptionError(HorocaveError, ValueError):
    pass


class NoContactError(HorocaveError, RuntimeError):
    pass


class CatalogError(HorocaveError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""
