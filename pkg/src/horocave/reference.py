"""Reference hypersurfaces used as barriers: horospheres, equidistants and geodesic spheres.

Each variant has a level function on the hyperboloid that vanishes exactly on
the hypersurface.  Horosphere and sphere levels are negative on the side that
contains the model origin.
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

from .conformal import boundary_mean_curvature, as_boundary
from .errors import AssumptionError, ModelError, OffSurfaceError, PlacementError, RangeError
from .immersion import immerse
from .minkowski import HyperbolicPoint, hyperbolic_distance, mink_inner
from .sphere import BoundarySphere, boundary_samples

ON_SURFACE_TOL = 1e-8
PLACEMENT_TOL = 1e-6


@dataclass(frozen=True)
class Horosphere:
    """Horosphere centred at the ideal point ``q`` at signed distance ``s`` from the origin.

    ``s`` grows toward ``q``.
    """

    q: np.ndarray
    s: float

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if abs(np.linalg.norm(q) - 1.0) > 1e-10:
            raise ModelError("horosphere centre must be a unit vector")
        object.__setattr__(self, "q", q)

    @property
    def null(self):
        return np.concatenate([[1.0], self.q])


@dataclass(frozen=True)
class Equidistant:
    """The set ``<<y, a>> = -c`` for a unit spacelike ``a``; ``c = 0`` is totally geodesic."""

    a: np.ndarray
    c: float

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if abs(mink_inner(a, a) - 1.0) > 1e-10:
            raise ModelError(f"<<a,a>> = {mink_inner(a, a)!r}, expected 1")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class UmbilicSphere:
    """Geodesic sphere of radius ``R`` about the hyperboloid point ``center``."""

    center: np.ndarray
    R: float

    def __post_init__(self):
        z = self.center.coords if isinstance(self.center, HyperbolicPoint) else self.center
        z = np.asarray(z, dtype=float)
        HyperbolicPoint("hyperboloid", z)
        if not self.R > 0:
            raise RangeError("sphere radius must be positive")
        object.__setattr__(self, "center", z)

    @property
    def kappa(self):
        return 1.0 / np.tanh(self.R)


ReferenceHypersurface = Union[Horosphere, Equidistant, UmbilicSphere]


def _coords(y):
    if isinstance(y, HyperbolicPoint):
        return y.hyperboloid()
    return np.asarray(y, dtype=float)


def _null_pairing(y, q):
    """``-<<y, (1, q)>> = y0 - <ybar, q>`` without cancellation for points far toward ``q``."""
    y0 = y[..., 0]
    yq = y[..., 1:] @ q
    perp = np.sum(y[..., 1:] ** 2, axis=-1) - yq * yq
    with np.errstate(divide="ignore", invalid="ignore"):
        # on the hyperboloid y0^2 - yq^2 = 1 + |y_perp|^2
        far = (1.0 + np.maximum(perp, 0.0)) / (y0 + yq)
    return np.where(yq > 0, far, y0 - yq)


def level_value(H, y):
    """Signed level of ``y`` relative to ``H`` (zero exactly on ``H``).

    Works on a single point or a stack of hyperboloid points.
    """
    y = _coords(y)
    if isinstance(H, Horosphere):
        return -np.log(_null_pairing(y, H.q)) - H.s
    if isinstance(H, Equidistant):
        return mink_inner(y, H.a) + H.c
    if isinstance(H, UmbilicSphere):
        return hyperbolic_distance(y, H.center) - H.R
    raise TypeError(f"not a reference hypersurface: {H!r}")


def equidistant_from_ball(r, p, c):
    """Equidistant ``{<<y, a>> = -c}`` with ``a = (cot r, csc(r) p)``.

    Radii above pi/2 describe a boundary sphere oriented away from its
    short side, as for the inner boundary of an annulus.
    """
    if not 0.0 < r < np.pi:
        raise RangeError(f"radius {r} outside (0, pi)")
    p = np.asarray(p, dtype=float)
    a = np.concatenate([[1.0 / np.tan(r)], p / np.sin(r)])
    return Equidistant(a, float(c))


def _normal(H, y):
    return (H.a - H.c * y) / np.sqrt(1.0 + H.c * H.c)


def reference_normal(H, y):
    """Unit normal ``(a - c y) / sqrt(1 + c^2)`` of an equidistant at ``y``."""
    if not isinstance(H, Equidistant):
        raise TypeError("normals are implemented for equidistants")
    y = _coords(y)
    if abs(level_value(H, y)) >= ON_SURFACE_TOL:
        raise OffSurfaceError(f"y is at level {level_value(H, y)!r}, not on the equidistant")
    return _normal(H, y)


def contact_angle(F, x, H, tol=PLACEMENT_TOL):
    """``<<N(phi(x)), eta(x)>>`` for a boundary point ``x`` whose image should lie on ``H``."""
    smp = immerse(F, x)
    y = smp.phi.coords
    lv = level_value(H, y)
    if abs(lv) >= tol:
        raise PlacementError(f"boundary image is at level {lv!r} off the equidistant")
    return float(mink_inner(_normal(H, y), smp.eta))


@dataclass
class PlacementReport:
    boundary: BoundarySphere
    c: float
    h_spread: float
    max_error: float
    worst_point: np.ndarray
    surface: Equidistant
    n: int
    tol: float = PLACEMENT_TOL
    label: str = "sampled evidence"

    @property
    def passed(self):
        return self.max_error < self.tol


def boundary_placement(F, boundary, n=64, rng=0, h_tol=1e-6, method="auto"):
    """Check that the image of a constant-mean-curvature boundary lies on its equidistant.

    Raises
    ------
    AssumptionError
        If the measured boundary mean curvature varies by more than ``h_tol``.
    """
    bs = as_boundary(boundary)
    pts = boundary_samples(bs, n, F.m, rng)
    hs = np.array([boundary_mean_curvature(F, bs, x, method) for x in pts])
    spread = float(hs.max() - hs.min())
    if spread > h_tol:
        raise AssumptionError(f"boundary mean curvature varies by {spread:.3g}")
    c = float(np.mean(hs))
    H = equidistant_from_ball(bs.r, bs.p, c)
    errs = np.array([abs(level_value(H, immerse(F, x, method=method).phi.coords)) for x in pts])
    i = int(np.argmax(errs))
    return PlacementReport(bs, c, spread, float(errs[i]), pts[i], H, n)
