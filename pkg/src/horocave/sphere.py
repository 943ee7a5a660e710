"""Calculus on the round unit sphere S^m in R^{m+1}.

Points are unit vectors (plain arrays).  Domains are rotationally described
around an axis ``p``: a polar-angle interval ``[lo, hi]`` measured from ``p``
with each end either a pole, a closed boundary sphere (kept, one-sided jets
allowed) or an open end (removed; fields may degenerate there).
"""
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import (
    BoundaryError,
    DomainError,
    FieldError,
    StencilError,
    TangentError,
)

FD_STEP = 1e-4
UNIT_TOL = 1e-12
JET_VALIDATION_TOL = 1e-6

# end status of a polar interval
POLE = "pole"
CLOSED = "closed"
OPEN = "open"

DOMAIN_KINDS = (
    "sphere",
    "sphere_minus_point",
    "sphere_minus_poles",
    "hemisphere",
    "punctured_hemisphere",
    "ball",
    "annulus",
    "annulus_half_open",
    "band",
    "open_band",
)


def north(m):
    """North pole ``e_{m+1}`` of S^m."""
    n = np.zeros(m + 1)
    n[-1] = 1.0
    return n


def as_sphere_point(x, tol=UNIT_TOL):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DomainError("a sphere point is a 1-d vector")
    if abs(np.linalg.norm(x) - 1.0) > tol:
        raise DomainError(f"|x| = {np.linalg.norm(x):.15g} is not 1")
    return x


def sphere_distance(x, y):
    """Great-circle distance in ``[0, pi]``.

    Uses ``atan2(|x ^ y|, <x, y>)`` which stays accurate near 0 and pi,
    where ``arccos`` loses half its digits.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    c = np.asarray(np.sum(x * y, axis=-1))
    s = np.linalg.norm(y - c[..., None] * x, axis=-1)
    return np.arctan2(s, c)


def exp_map(x, v, t):
    """Point at arc length ``t`` along the great circle from ``x`` with unit velocity ``v``."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if abs(np.dot(x, v)) > 1e-10 or abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise TangentError("v must be a unit tangent vector at x")
    return np.cos(t) * x + np.sin(t) * v


def _exp(x, v, t):
    # unchecked variant for stencils
    return np.cos(t) * x + np.sin(t) * v


def tangent_frame(x):
    """Orthonormal basis of the tangent space at ``x`` as the columns of a matrix.

    Gram-Schmidt of the standard basis after dropping the axis where ``|x_k|``
    is largest (lowest index on ties), so the frame is reproducible.
    """
    x = np.asarray(x, dtype=float)
    drop = int(np.argmax(np.abs(x)))
    cols = []
    for k in range(len(x)):
        if k == drop:
            continue
        v = -x[k] * x
        v[k] += 1.0
        for u in cols:
            v -= np.dot(u, v) * u
        # second pass keeps the frame orthonormal to machine precision
        v -= np.dot(x, v) * x
        for u in cols:
            v -= np.dot(u, v) * u
        cols.append(v / np.linalg.norm(v))
    return np.stack(cols, axis=1)


def ball_inward_normal(r, p, x, tol=1e-8):
    """Inward unit normal of the geodesic sphere ``dB_r(p)`` at ``x``."""
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    if abs(sphere_distance(x, p) - r) > tol:
        raise BoundaryError(f"x is at distance {sphere_distance(x, p):.12g} from p, not r = {r:.12g}")
    return p / np.sin(r) - x / np.tan(r)


@dataclass(frozen=True)
class BoundarySphere:
    """A boundary component ``dB_r(p)`` oriented by the normal pointing into ``B_r(p)``.

    ``r`` may exceed pi/2; the normal then points away from the short side.
    """

    r: float
    p: np.ndarray

    def contains(self, x, tol=1e-8):
        return abs(sphere_distance(x, self.p) - self.r) <= tol

    def normal(self, x):
        return ball_inward_normal(self.r, self.p, x)

    @property
    def h0(self):
        """Mean curvature for the round metric with this orientation."""
        return 1.0 / np.tan(self.r)


@dataclass(frozen=True)
class DomainSpec:
    """Rotationally described subdomain of S^m.

    Parameters
    ----------
    kind : str
        One of :data:`DOMAIN_KINDS`.
    m : int
        Sphere dimension.
    r : float, optional
        Radius for ``ball`` and inner radius for annuli/bands.
    p : array, optional
        Axis; defaults to the north pole.
    """

    kind: str
    m: int
    r: Optional[float] = None
    p: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            raise DomainError(f"unknown domain kind {self.kind!r}")
        if self.m < 1:
            raise DomainError("m must be positive")
        p = north(self.m) if self.p is None else as_sphere_point(self.p, 1e-10)
        if len(p) != self.m + 1:
            raise DomainError("axis has the wrong dimension")
        p = np.array(p / np.linalg.norm(p))
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        needs_r = self.kind in ("ball", "annulus", "annulus_half_open", "band", "open_band")
        if needs_r:
            if self.r is None:
                raise DomainError(f"{self.kind} needs a radius")
            upper = np.pi if self.kind == "ball" else np.pi / 2
            if not 0.0 < self.r < upper:
                raise DomainError(f"radius {self.r} out of range for {self.kind}")
            object.__setattr__(self, "r", float(self.r))

    # polar description ------------------------------------------------
    @property
    def interval(self):
        """``(lo, hi, lo_status, hi_status)`` of the polar angle from ``p``."""
        h = np.pi / 2
        r = self.r if self.r is not None else 0.0
        return {
            "sphere": (0.0, np.pi, POLE, POLE),
            "sphere_minus_point": (0.0, np.pi, OPEN, POLE),
            "sphere_minus_poles": (0.0, np.pi, OPEN, OPEN),
            "hemisphere": (0.0, h, POLE, CLOSED),
            "punctured_hemisphere": (0.0, h, OPEN, CLOSED),
            "ball": (0.0, r, POLE, CLOSED),
            "annulus": (r, h, CLOSED, CLOSED),
            "annulus_half_open": (r, h, OPEN, CLOSED),
            "band": (r, np.pi - r, CLOSED, CLOSED),
            "open_band": (r, np.pi - r, OPEN, OPEN),
        }[self.kind]

    def polar(self, x):
        return sphere_distance(x, self.p)

    def contains(self, x, closed=True, tol=1e-12):
        """Membership; ``closed`` keeps the V1 boundary."""
        th = self.polar(x)
        lo, hi, ls, hs = self.interval
        ok_lo = th >= lo - tol if (ls == POLE or (ls == CLOSED and closed)) else th > lo + tol
        ok_hi = th <= hi + tol if (hs == POLE or (hs == CLOSED and closed)) else th < hi - tol
        return bool(ok_lo and ok_hi)

    @property
    def V1(self):
        """Closed boundary components as :class:`BoundarySphere` with inward orientation."""
        lo, hi, ls, hs = self.interval
        out = []
        if ls == CLOSED:
            out.append(BoundarySphere(np.pi - lo, -self.p))
        if hs == CLOSED:
            out.append(BoundarySphere(hi, self.p))
        return out

    @property
    def V2(self):
        """Removed ends: points (arrays) or geodesic spheres given as ``(radius, center)``."""
        lo, hi, ls, hs = self.interval
        out = []
        if ls == OPEN:
            out.append(np.array(self.p) if lo == 0.0 else (lo, np.array(self.p)))
        if hs == OPEN:
            out.append(-np.array(self.p) if hi == np.pi else (hi, np.array(self.p)))
        return out

    def boundary_distance(self, x):
        """Distance from ``x`` to the nearest V1 or V2 piece (inf if none)."""
        th = self.polar(x)
        lo, hi, ls, hs = self.interval
        d = np.inf
        if ls != POLE:
            d = min(d, th - lo)
        if hs != POLE:
            d = min(d, hi - th)
        return d

    @property
    def symmetric(self):
        """True when the domain is invariant under reflection through the equator of ``p``."""
        lo, hi, ls, hs = self.interval
        return np.isclose(lo + hi, np.pi) and ls == hs


# ---------------------------------------------------------------------------
# fields

@dataclass(frozen=True)
class ConformalFactorField:
    """Positive function ``sigma = exp(-rho)`` on a spherical domain.

    ``grad`` and ``hess`` are optional evaluators of the Euclidean gradient and
    Hessian of an extension of ``sigma`` to a neighbourhood of the sphere in
    R^{m+1}; the intrinsic jet is obtained from them by projection.  When they
    are given, they are compared against finite differences on a few domain
    points at construction.
    """

    domain: DomainSpec
    sigma: Callable[[np.ndarray], float]
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess: Optional[Callable[[np.ndarray], np.ndarray]] = None
    smoothness: int = 2
    name: str = "field"
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if (self.grad is None) != (self.hess is None):
            raise FieldError("give both grad and hess, or neither")
        if self.validate:
            _validate_field(self)

    @property
    def m(self):
        return self.domain.m

    @property
    def analytic(self):
        return self.grad is not None

    def __call__(self, x):
        return float(self.sigma(np.asarray(x, dtype=float)))

    def rho(self, x):
        return -np.log(self(x))


def _validate_field(F, n=8, seed=0):
    rng = np.random.default_rng(seed)
    lo, hi, _, _ = F.domain.interval
    pts = sample_domain(F.domain, n, rng, margin=min(0.05, (hi - lo) / 4))
    for x in pts:
        s = F(x)
        if not s > 0 or not np.isfinite(s):
            raise FieldError(f"sigma = {s} is not positive at {x}")
    if not F.analytic:
        return
    for x in pts:
        a = field_jet(F, x, method="analytic")
        b = field_jet(F, x, method="fd")
        err = max(np.max(np.abs(a.grad_sigma - b.grad_sigma)),
                  np.max(np.abs(a.hess_sigma - b.hess_sigma)))
        if err > JET_VALIDATION_TOL:
            raise FieldError(f"analytic derivatives disagree with finite differences by {err:.3g} at {x}")


def rotational_field(domain, profile, dprofile, d2profile, name="rotational", smoothness=2,
                     validate=True):
    """Field depending only on ``z = <x, p>`` with ``p`` the domain axis.

    ``profile`` and its first two derivatives are functions of the scalar z;
    the ambient jets follow from the chain rule along ``p``.
    """
    p = np.array(domain.p)

    def sigma(x):
        return profile(float(np.dot(x, p)))

    def grad(x):
        return dprofile(float(np.dot(x, p))) * p

    def hess(x):
        return d2profile(float(np.dot(x, p))) * np.outer(p, p)

    return ConformalFactorField(domain, sigma, grad, hess, smoothness, name, validate)


@dataclass(frozen=True)
class Jet:
    """Second-order jet of a field at ``x`` in the frame ``E`` (columns).

    Gradients and Hessians are frame components; ``ambient_grad_*`` give the
    gradients as vectors in R^{m+1}.
    """

    x: np.ndarray
    E: np.ndarray
    sigma: float
    rho: float
    grad_sigma: np.ndarray
    hess_sigma: np.ndarray
    grad_rho: np.ndarray
    hess_rho: np.ndarray
    method: str

    @property
    def ambient_grad_sigma(self):
        return self.E @ self.grad_sigma

    @property
    def ambient_grad_rho(self):
        return self.E @ self.grad_rho


def _stencil_kind(F, x, w, h):
    inside = F.domain.contains
    if inside(_exp(x, w, 2 * h)) and inside(_exp(x, w, -2 * h)):
        return "central"
    if all(inside(_exp(x, w, k * h)) for k in (1, 2, 3)):
        return "forward"
    if all(inside(_exp(x, w, -k * h)) for k in (1, 2, 3)):
        return "backward"
    raise StencilError(f"no stencil fits inside the domain at {x}")


def _directional(F, x, w, h, f0):
    """First and second derivatives of ``F`` along the geodesic through ``x`` with unit velocity ``w``."""
    kind = _stencil_kind(F, x, w, h)
    if kind == "central":
        fp, fm = F(_exp(x, w, h)), F(_exp(x, w, -h))
        return (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h)
    sgn = 1.0 if kind == "forward" else -1.0
    f1, f2, f3 = (F(_exp(x, w, sgn * k * h)) for k in (1, 2, 3))
    d1 = sgn * (-3 * f0 + 4 * f1 - f2) / (2 * h)
    d2 = (2 * f0 - 5 * f1 + 4 * f2 - f3) / (h * h)
    return d1, d2


def _fd_sigma_jet(F, x, E, h):
    m = E.shape[1]
    f0 = F(x)
    grad = np.empty(m)
    hess = np.empty((m, m))
    for i in range(m):
        grad[i], hess[i, i] = _directional(F, x, E[:, i], h, f0)
    for i in range(m):
        for j in range(i + 1, m):
            s = (E[:, i] + E[:, j]) / np.sqrt(2.0)
            d = (E[:, i] - E[:, j]) / np.sqrt(2.0)
            # q(w) = |w|^2 g''(0) with |e_i +- e_j|^2 = 2
            qs = 2.0 * _directional(F, x, s, h, f0)[1]
            qd = 2.0 * _directional(F, x, d, h, f0)[1]
            hess[i, j] = hess[j, i] = 0.25 * (qs - qd)
    return f0, grad, hess


def field_jet(F, x, method="auto", h=FD_STEP):
    """Value, gradient and Hessian of ``sigma`` and ``rho = -log sigma`` at ``x``.

    Parameters
    ----------
    F : ConformalFactorField
    x : array
        Point of the closed domain (V1 allowed, V2 excluded).
    method : {"auto", "analytic", "fd"}
        ``auto`` uses analytic jets when the field has them.
    h : float
        Geodesic step for finite differences.

    Returns
    -------
    Jet
    """
    x = as_sphere_point(x, 1e-10)
    if len(x) != F.m + 1:
        raise DomainError("point dimension does not match the field")
    if not F.domain.contains(x, closed=True, tol=1e-10):
        raise DomainError(f"{x} is outside the domain")
    E = tangent_frame(x)
    if method == "auto":
        method = "analytic" if F.analytic else "fd"
    if method == "analytic":
        if not F.analytic:
            raise FieldError("field has no analytic derivatives")
        s = F(x)
        G = np.asarray(F.grad(x), dtype=float)
        H = np.asarray(F.hess(x), dtype=float)
        gs = E.T @ G
        hs = E.T @ H @ E - np.dot(G, x) * np.eye(E.shape[1])
    elif method == "fd":
        s, gs, hs = _fd_sigma_jet(F, x, E, h)
    else:
        raise ValueError(f"unknown jet method {method!r}")
    if not s > 0:
        raise FieldError(f"sigma = {s} is not positive at {x}")
    gr = -gs / s
    hr = -hs / s + np.outer(gs, gs) / (s * s)
    return Jet(x, E, s, -np.log(s), gs, hs, gr, hr, method)


def directional_derivative(F, x, v, method="auto"):
    """Derivative of ``sigma`` at ``x`` along the tangent vector ``v``."""
    j = field_jet(F, x, method)
    return float(np.dot(j.ambient_grad_sigma, v))


# ---------------------------------------------------------------------------
# reflection across the equator of the axis

_DOUBLED = {
    "hemisphere": "sphere",
    "punctured_hemisphere": "sphere_minus_poles",
    "annulus": "band",
    "annulus_half_open": "open_band",
}


def _reflector(p):
    return np.eye(len(p)) - 2.0 * np.outer(p, p)


def equatorial_double(F):
    """Extend a field on a hemisphere-type domain by reflection across the equator.

    The lower half takes the values of the mirror point.  On an already
    symmetric domain the same rule applies, so doubling is idempotent.
    """
    dom = F.domain
    if dom.kind in _DOUBLED:
        new_dom = replace(dom, kind=_DOUBLED[dom.kind])
    elif dom.kind == "ball" and np.isclose(dom.r, np.pi / 2):
        new_dom = replace(dom, kind="sphere", r=None)
    elif dom.symmetric:
        new_dom = dom
    else:
        raise DomainError(f"cannot double a {dom.kind} domain across its equator")
    p = np.array(dom.p)
    R = _reflector(p)

    def up(x):
        return x if np.dot(x, p) >= 0 else R @ x

    def sigma(x):
        return F.sigma(up(np.asarray(x, dtype=float)))

    grad = hess = None
    if F.analytic:
        def grad(x):
            x = np.asarray(x, dtype=float)
            if np.dot(x, p) >= 0:
                return np.asarray(F.grad(x), dtype=float)
            return R @ np.asarray(F.grad(R @ x), dtype=float)

        def hess(x):
            x = np.asarray(x, dtype=float)
            if np.dot(x, p) >= 0:
                return np.asarray(F.hess(x), dtype=float)
            return R @ np.asarray(F.hess(R @ x), dtype=float) @ R

    smooth = 1 if _normal_derivative_vanishes(F, p) else 0
    if smooth and F.smoothness >= 2:
        # odd derivatives of an even extension vanish; second order matches
        smooth = 2 if dom.symmetric else 1
    return ConformalFactorField(new_dom, sigma, grad, hess, smooth,
                                f"double({F.name})", validate=False)


def _normal_derivative_vanishes(F, p, n=16, tol=1e-8):
    E = tangent_frame(p)
    for k in range(n):
        a = 2 * np.pi * k / n
        x = np.cos(a) * E[:, 0] + np.sin(a) * E[:, min(1, E.shape[1] - 1)]
        x = x / np.linalg.norm(x)
        try:
            j = field_jet(F, x)
        except (DomainError, FieldError):
            return False
        if abs(np.dot(j.ambient_grad_sigma, p)) > tol:
            return False
    return True


def gradient_jump(F, x, h=FD_STEP):
    """Value and normal-derivative jumps of ``F`` across the equator at ``x``.

    Each side is probed with one-sided stencils that stay on that side, so the
    two limits are estimated independently.
    """
    p = np.array(F.domain.p)
    x = np.asarray(x, dtype=float)
    if abs(np.dot(x, p)) > 1e-10:
        raise BoundaryError("x is not on the equator")

    def side(sgn):
        f1, f2, f3 = (F(_exp(x, p, sgn * k * h)) for k in (1, 2, 3))
        # quadratic extrapolation to the equator and one-sided slope along p
        f0 = 3 * f1 - 3 * f2 + f3
        d1 = sgn * (-3 * f0 + 4 * f1 - f2) / (2 * h)
        return f0, d1

    v_up, d_up = side(1.0)
    v_dn, d_dn = side(-1.0)
    return abs(v_up - v_dn), abs(d_up - d_dn)


# ---------------------------------------------------------------------------
# sampling

def _random_directions(rng, p, n):
    m1 = len(p)
    u = rng.standard_normal((n, m1))
    u -= np.outer(u @ p, p)
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def sample_domain(domain, n, rng=None, margin=1e-3):
    """``n`` area-uniform random points at distance ``>= margin`` from every boundary piece."""
    rng = np.random.default_rng(rng)
    lo, hi, ls, hs = domain.interval
    a = lo + (margin if ls != POLE else 0.0)
    b = hi - (margin if hs != POLE else 0.0)
    if not a < b:
        raise DomainError("margin leaves no room inside the domain")
    m = domain.m
    thetas = []
    # rejection sampling of the polar density sin^{m-1}
    smax = 1.0 if a <= np.pi / 2 <= b else max(np.sin(a), np.sin(b))
    while len(thetas) < n:
        th = rng.uniform(a, b, size=4 * n)
        keep = rng.uniform(0, smax ** (m - 1), size=th.size) <= np.sin(th) ** (m - 1)
        thetas.extend(th[keep].tolist())
    th = np.array(thetas[:n])
    u = _random_directions(rng, np.array(domain.p), n)
    return np.cos(th)[:, None] * domain.p + np.sin(th)[:, None] * u


def meridian_point(domain, theta, direction=None):
    """Point at polar angle ``theta`` on the meridian through ``direction``."""
    p = np.array(domain.p)
    if direction is None:
        direction = tangent_frame(p)[:, 0]
    return np.cos(theta) * p + np.sin(theta) * direction


def boundary_samples(bs, n, m, rng=None):
    """``n`` points on the boundary sphere ``bs`` (equally spaced when m = 2)."""
    E = tangent_frame(bs.p)
    if m == 2:
        a = 2 * np.pi * np.arange(n) / n
        u = np.cos(a)[:, None] * E[:, 0] + np.sin(a)[:, None] * E[:, 1]
    else:
        u = _random_directions(np.random.default_rng(rng), np.array(bs.p), n)
    return np.cos(bs.r) * bs.p + np.sin(bs.r) * u


def latlong_grid(domain, n_theta, n_phi, include_poles=True):
    """Latitude-longitude grid about the domain axis (m = 2 only).

    Returns polar angles, azimuths, and the point array of shape
    ``(n_theta, n_phi, 3)``.  Closed ends are included; open ends are
    excluded by one step.
    """
    if domain.m != 2:
        raise DomainError("lat-long grids are for m = 2")
    lo, hi, ls, hs = domain.interval
    th = np.linspace(lo, hi, n_theta)
    if ls == OPEN:
        th = np.linspace(lo, hi, n_theta + 1)[1:] if hs != OPEN else np.linspace(lo, hi, n_theta + 2)[1:-1]
    elif hs == OPEN:
        th = np.linspace(lo, hi, n_theta + 1)[:-1]
    ph = 2 * np.pi * np.arange(n_phi) / n_phi
    E = tangent_frame(domain.p)
    u = np.cos(ph)[:, None] * E[:, 0] + np.sin(ph)[:, None] * E[:, 1]
    X = np.cos(th)[:, None, None] * domain.p + np.sin(th)[:, None, None] * u[None, :, :]
    return th, ph, X
