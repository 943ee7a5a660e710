"""Lorentz-Minkowski space and the three ball models of hyperbolic space.

Vectors of L^{m+2} are plain numpy arrays ``(x0, x1, ..., x_{m+1})`` whose
first entry is the timelike coordinate.  Hyperbolic space is the upper sheet
of the hyperboloid ``<<y, y>> = -1, y0 > 0``; the Poincare and Klein balls are
treated as views of it.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionError, GeodesicError, ModelError, NearIdealError

HYPERBOLOID_TOL = 1e-10
NEAR_IDEAL_Y0 = 1e8


class Model(str, Enum):
    HYPERBOLOID = "hyperboloid"
    POINCARE = "poincare"
    KLEIN = "klein"


def mink_inner(u, v):
    """Lorentzian inner product ``-u0 v0 + <ubar, vbar>``.

    Works on stacks of vectors along the last axis.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != v.shape[-1]:
        raise DimensionError(f"dimension mismatch: {u.shape[-1]} vs {v.shape[-1]}")
    return -u[..., 0] * v[..., 0] + np.sum(u[..., 1:] * v[..., 1:], axis=-1)


def mink_norm_sq(u):
    return mink_inner(u, u)


def _check_hyperboloid(y):
    y0 = y[0]
    if y0 > NEAR_IDEAL_Y0:
        raise NearIdealError(f"y0 = {y0:.3g} exceeds {NEAR_IDEAL_Y0:.0e}")
    if not y0 > 0:
        raise ModelError("hyperboloid point must have y0 > 0")
    # absolute error of <<y,y>> grows like y0^2
    if abs(mink_inner(y, y) + 1.0) > HYPERBOLOID_TOL * max(1.0, y0 * y0):
        raise ModelError(f"<<y,y>> = {mink_inner(y, y):.15g}, expected -1")


def _check_ball(b):
    nb = float(np.dot(b, b))
    if not nb < 1.0:
        raise ModelError(f"ball point has |b|^2 = {nb:.15g} >= 1")


@dataclass(frozen=True)
class HyperbolicPoint:
    """A point of H^{m+1} in one of the three models.

    ``coords`` has length m+2 for the hyperboloid and m+1 for the balls.
    """

    model: Model
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        c = np.array(self.coords, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        if self.model is Model.HYPERBOLOID:
            _check_hyperboloid(c)
        else:
            _check_ball(c)

    @property
    def dim(self):
        """Dimension of the hyperbolic space (m+1)."""
        n = len(self.coords)
        return n - 1 if self.model is Model.HYPERBOLOID else n

    def to(self, target):
        return convert_model(self, target)

    def hyperboloid(self):
        return convert_model(self, Model.HYPERBOLOID).coords


def _to_hyperboloid(p):
    c = p.coords
    if p.model is Model.HYPERBOLOID:
        return np.array(c)
    nb = float(np.dot(c, c))
    if p.model is Model.POINCARE:
        denom = 1.0 - nb
        y = np.concatenate([[(1.0 + nb) / denom], 2.0 * c / denom])
    else:
        y0 = 1.0 / np.sqrt(1.0 - nb)
        y = np.concatenate([[y0], y0 * c])
    if y[0] > NEAR_IDEAL_Y0:
        raise NearIdealError(f"y0 = {y[0]:.3g} exceeds {NEAR_IDEAL_Y0:.0e}")
    return y


def hyperboloid_to_poincare(y):
    y = np.asarray(y, dtype=float)
    return y[..., 1:] / (1.0 + y[..., :1])


def hyperboloid_to_klein(y):
    y = np.asarray(y, dtype=float)
    return y[..., 1:] / y[..., :1]


def convert_model(p, target):
    """Re-express ``p`` in ``target`` model."""
    target = Model(target)
    if p.model is target:
        return p
    y = _to_hyperboloid(p)
    if target is Model.HYPERBOLOID:
        # renormalize: one rounding step can leave <<y,y>> slightly off -1
        y = y / np.sqrt(-mink_inner(y, y))
        return HyperbolicPoint(target, y)
    if target is Model.POINCARE:
        return HyperbolicPoint(target, hyperboloid_to_poincare(y))
    return HyperbolicPoint(target, hyperboloid_to_klein(y))


def origin(dim):
    """Model origin of H^{dim} on the hyperboloid."""
    y = np.zeros(dim + 1)
    y[0] = 1.0
    return y


def geodesic_point(p, v, t, tol=1e-9):
    """Point at arc length ``t`` along the geodesic from ``p`` with unit velocity ``v``."""
    p = np.asarray(p.hyperboloid() if isinstance(p, HyperbolicPoint) else p, dtype=float)
    v = np.asarray(v, dtype=float)
    if p.shape != v.shape:
        raise DimensionError("point and velocity dimensions differ")
    scale = max(1.0, abs(p[0]))
    if abs(mink_inner(p, p) + 1.0) > tol * scale * scale:
        raise GeodesicError("base point is not on the hyperboloid")
    if abs(mink_inner(v, v) - 1.0) > tol * scale * scale:
        raise GeodesicError("velocity is not a unit spacelike vector")
    if abs(mink_inner(p, v)) > tol * scale * scale:
        raise GeodesicError("velocity is not tangent at the base point")
    return np.cosh(t) * p + np.sinh(t) * v


def hyperbolic_distance(p, q):
    """Distance on the hyperboloid, via ``2 asinh(|p - q|_L / 2)``.

    The half-chord form keeps full relative precision for nearby points
    where ``arccosh(-<<p,q>>)`` would lose half the digits.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = p - q
    chord_sq = np.maximum(mink_inner(d, d), 0.0)
    return 2.0 * np.arcsinh(0.5 * np.sqrt(chord_sq))


def pairwise_distances(Y, chunk=256):
    """Hyperbolic distance matrix for rows of ``Y`` (hyperboloid coordinates).

    Differences are formed explicitly, in row blocks, so close pairs keep the
    precision of :func:`hyperbolic_distance`.
    """
    Y = np.asarray(Y, dtype=float)
    n = len(Y)
    D = np.empty((n, n))
    for i in range(0, n, chunk):
        d = Y[i:i + chunk, None, :] - Y[None, :, :]
        D[i:i + chunk] = 2.0 * np.arcsinh(0.5 * np.sqrt(np.maximum(mink_inner(d, d), 0.0)))
    return D
