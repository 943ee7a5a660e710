"""Curvature of conformal metrics ``g = exp(2 rho) g0`` on the round sphere."""
from dataclasses import dataclass, replace

import numpy as np

from .errors import BoundaryError, DimensionError, FieldError
from .sphere import (
    BoundarySphere,
    ball_inward_normal,
    field_jet,
)


@dataclass(frozen=True)
class SchoutenData:
    """Schouten endomorphism ``g^{-1} Sch(g)`` at a point.

    Attributes
    ----------
    endo : ndarray, shape (m, m)
        Matrix in the orthonormal ``g0`` frame of :func:`~horocave.sphere.field_jet`.
    lam : ndarray, shape (m,)
        Eigenvalues in ascending order.
    """

    x: np.ndarray
    endo: np.ndarray
    lam: np.ndarray
    rho: float
    sigma: float

    @property
    def trace(self):
        return float(np.trace(self.endo))


def schouten_from_jet(jet):
    """Schouten endomorphism from a field jet, in the exponent form.

    ``exp(-2 rho) [ (1/2 - |grad rho|^2 / 2) I + grad rho grad rho^T - Hess rho ]``
    """
    gr, hr = jet.grad_rho, jet.hess_rho
    m = len(gr)
    endo = np.exp(-2.0 * jet.rho) * (
        (0.5 - 0.5 * np.dot(gr, gr)) * np.eye(m) + np.outer(gr, gr) - hr
    )
    endo = 0.5 * (endo + endo.T)
    lam = np.linalg.eigvalsh(endo)
    return SchoutenData(jet.x, endo, np.sort(lam), jet.rho, jet.sigma)


def schouten_sigma_form(jet):
    """Same endomorphism written with ``sigma``: ``sigma Hess sigma + (sigma^2 - |grad sigma|^2) I / 2``."""
    s, gs, hs = jet.sigma, jet.grad_sigma, jet.hess_sigma
    endo = s * hs + 0.5 * (s * s - np.dot(gs, gs)) * np.eye(len(gs))
    return 0.5 * (endo + endo.T)


def schouten(F, x, method="auto"):
    """Schouten data of ``F`` at ``x``.

    Examples
    --------
    >>> from horocave.catalog import catalog_field
    >>> F = catalog_field("constant", t=0.0, m=3).field
    >>> schouten(F, [0, 0, 0, 1.0]).lam
    array([0.5, 0.5, 0.5])
    """
    return schouten_from_jet(field_jet(F, x, method))


def scalar_curvature(F, x, m=None, method="auto"):
    """Scalar curvature ``R(g) = 2 (m - 1) tr(g^{-1} Sch)``; needs ``m >= 3``."""
    m = F.m if m is None else m
    if m < 3:
        raise DimensionError("scalar curvature through the Schouten trace needs m >= 3; "
                             "use gauss_curvature_2d")
    if m != F.m:
        raise DimensionError(f"field lives on S^{F.m}, not S^{m}")
    return 2.0 * (m - 1) * schouten(F, x, method).trace


def gauss_curvature_2d(F, x, method="auto"):
    """Gaussian curvature ``exp(-2 rho) (1 - Laplacian rho)`` of a metric on a domain of S^2."""
    if F.m != 2:
        raise DimensionError("gauss_curvature_2d is for m = 2")
    j = field_jet(F, x, method)
    return float(np.exp(-2.0 * j.rho) * (1.0 - np.trace(j.hess_rho)))


def as_boundary(boundary):
    if isinstance(boundary, BoundarySphere):
        return boundary
    r, p = boundary
    return BoundarySphere(float(r), np.asarray(p, dtype=float))


def boundary_mean_curvature(F, boundary, x, method="auto", check_tol=1e-9):
    """Mean curvature of the geodesic sphere ``boundary = (r, p)`` in the metric of ``F``.

    Uses ``d sigma / d nu + cot(r) sigma`` with the inward normal ``nu``, and
    checks it against the exponent form ``(h0 - d rho / d nu) exp(-rho)``.
    """
    bs = as_boundary(boundary)
    x = np.asarray(x, dtype=float)
    nu = ball_inward_normal(bs.r, bs.p, x)
    j = field_jet(F, x, method)
    h0 = bs.h0
    h = float(np.dot(j.ambient_grad_sigma, nu) + h0 * j.sigma)
    h_alt = float((h0 - np.dot(j.ambient_grad_rho, nu)) * np.exp(-j.rho))
    if abs(h - h_alt) > check_tol * max(1.0, abs(h)):
        raise BoundaryError(f"boundary mean curvature forms disagree: {h!r} vs {h_alt!r}")
    return h


def dilate(F, t):
    """Field of the dilated metric ``exp(2t) g``, i.e. ``sigma -> exp(-t) sigma``."""
    if t == 0:
        return F
    k = float(np.exp(-t))
    sig = F.sigma

    def sigma(x):
        return k * sig(x)

    grad = hess = None
    if F.analytic:
        g0, h0 = F.grad, F.hess

        def grad(x):
            return k * np.asarray(g0(x), dtype=float)

        def hess(x):
            return k * np.asarray(h0(x), dtype=float)

    return replace(F, sigma=sigma, grad=grad, hess=hess,
                   name=f"dilate({F.name}, {t!r})", validate=False)


# ---------------------------------------------------------------------------
# flat chart cross-check

def _flat_jet(u, y, h):
    m = len(y)
    u0 = u(y)
    g = np.empty(m)
    H = np.empty((m, m))
    I = np.eye(m)
    for i in range(m):
        up, um = u(y + h * I[i]), u(y - h * I[i])
        g[i] = (up - um) / (2 * h)
        H[i, i] = (up - 2 * u0 + um) / (h * h)
    for i in range(m):
        for j in range(i + 1, m):
            a = u(y + h * (I[i] + I[j])) - u(y + h * (I[i] - I[j]))
            b = u(y - h * (I[i] - I[j])) - u(y - h * (I[i] + I[j]))
            H[i, j] = H[j, i] = (a - b) / (4 * h * h)
    return u0, g, H


def euclidean_schouten_Au(u, y, grad=None, hess=None, h=1e-4):
    """Conformally invariant matrix of ``g = u^{4/(m-2)} |dy|^2`` in a flat chart.

    Parameters
    ----------
    u : callable
        Positive function on (a region of) R^m.
    y : array_like, shape (m,)
    grad, hess : callable, optional
        Flat gradient and Hessian of ``u``; central differences otherwise.

    Returns
    -------
    ndarray, shape (m, m)
        Its eigenvalues are those of the Schouten endomorphism of ``g``.
    """
    y = np.asarray(y, dtype=float)
    m = len(y)
    if m < 3:
        raise DimensionError("the flat-chart matrix needs m >= 3")
    if grad is not None and hess is not None:
        u0, g, H = u(y), np.asarray(grad(y), float), np.asarray(hess(y), float)
    else:
        u0, g, H = _flat_jet(u, y, h)
    if not u0 > 0:
        raise FieldError(f"u = {u0} is not positive")
    a = 2.0 / (m - 2)
    e1 = -(m + 2) / (m - 2)
    e2 = -2.0 * m / (m - 2)
    A = (-a * u0 ** e1 * H
         + (2.0 * m / (m - 2) ** 2) * u0 ** e2 * np.outer(g, g)
         - (2.0 / (m - 2) ** 2) * u0 ** e2 * np.dot(g, g) * np.eye(m))
    return 0.5 * (A + A.T)


def stereographic_inverse(y):
    """Point of S^m for chart point ``y``; the chart origin goes to the north pole."""
    y = np.asarray(y, dtype=float)
    q = np.dot(y, y)
    return np.concatenate([2.0 * y, [1.0 - q]]) / (1.0 + q)


def chart_density(F):
    """``u`` on the stereographic chart with ``u^{4/(m-2)} |dy|^2`` equal to the metric of ``F``."""
    m = F.m
    if m < 3:
        raise DimensionError("needs m >= 3")

    def u(y):
        y = np.asarray(y, dtype=float)
        conf = 4.0 / (1.0 + np.dot(y, y)) ** 2
        return (conf / F(stereographic_inverse(y)) ** 2) ** ((m - 2) / 4.0)

    return u


# ---------------------------------------------------------------------------
# Yamabe equation

def power_field(F, a):
    """Field ``sigma^a`` with analytic jets when ``F`` has them."""
    sig = F.sigma

    def sigma(x):
        return sig(x) ** a

    grad = hess = None
    if F.analytic:
        g0, h0 = F.grad, F.hess

        def grad(x):
            s = sig(x)
            return a * s ** (a - 1) * np.asarray(g0(x), float)

        def hess(x):
            s = sig(x)
            G = np.asarray(g0(x), float)
            return a * s ** (a - 1) * np.asarray(h0(x), float) + a * (a - 1) * s ** (a - 2) * np.outer(G, G)

    return replace(F, sigma=sigma, grad=grad, hess=hess, name=f"({F.name})^{a!r}", validate=False)


def yamabe_factor(F):
    """``u = sigma^{-(m-2)/2}`` so that ``u^{4/(m-2)} g0`` is the metric of ``F``."""
    if F.m < 3:
        raise DimensionError("needs m >= 3")
    return power_field(F, -(F.m - 2) / 2.0)


def yamabe_residual(U, x, targetR, boundary=None, method="auto"):
    """Residuals of the prescribed scalar and boundary mean curvature equations.

    Parameters
    ----------
    U : ConformalFactorField
        Positive function ``u`` on S^m; the metric is ``u^{4/(m-2)} g0``.
    x : array
    targetR : float
    boundary : (h0, target_h), optional
        Evaluated on the closed boundary component of ``U.domain`` through
        ``x``; the normal derivative uses the outward direction.

    Returns
    -------
    (float, float or None)
    """
    m = U.m
    if m < 3:
        raise DimensionError("needs m >= 3")
    j = field_jet(U, x, method)
    u = j.sigma
    if not u > 0:
        raise FieldError("u must be positive")
    c = (m - 2) / (4.0 * (m - 1))
    interior = (np.trace(j.hess_sigma) - c * m * (m - 1) * u
                + c * targetR * u ** ((m + 2) / (m - 2)))
    bres = None
    if boundary is not None:
        h0, target_h = boundary
        comps = [b for b in U.domain.V1 if b.contains(x)]
        if not comps:
            raise BoundaryError("x is not on a closed boundary component")
        outward = -comps[0].normal(x)
        du = float(np.dot(j.ambient_grad_sigma, outward))
        k = (m - 2) / 2.0
        bres = du + k * h0 * u - k * target_h * u ** (m / (m - 2))
    return float(interior), bres
