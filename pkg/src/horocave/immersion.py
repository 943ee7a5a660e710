"""Horospherically concave hypersurfaces of H^{m+1} built from conformal factor fields.

For a field ``sigma`` on a domain of S^m the surface point over ``x`` is

    phi = (1 + sigma^2 + |grad sigma|^2) / (2 sigma) (1, x) - (0, sigma x + grad sigma),

with normal ``eta = phi - (1, x) / sigma`` and light-cone map ``psi = (1, x) / sigma``.
"""
from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np

from .conformal import schouten_from_jet
from .errors import HorosphericalConcavityViolated, FieldError
from .minkowski import HyperbolicPoint, Model, convert_model, mink_inner
from .sphere import field_jet, tangent_frame, _exp

CONCAVITY_MARGIN = 1e-8


def kappa_from_lambda(lam):
    """Principal curvatures from Schouten eigenvalues, ``(1 + 2 lam) / (1 - 2 lam)``."""
    lam = np.asarray(lam, dtype=float)
    with np.errstate(divide="ignore"):
        return (1.0 + 2.0 * lam) / (1.0 - 2.0 * lam)


def lambda_from_kappa(kappa):
    """Inverse correspondence ``1/2 - 1 / (1 + kappa)``."""
    kappa = np.asarray(kappa, dtype=float)
    return 0.5 - 1.0 / (1.0 + kappa)


@dataclass(frozen=True)
class ImmersionSample:
    """Surface data over one point of the sphere.

    ``phi`` is the hyperboloid point; ``model_point`` repeats it in the model
    that was asked for (computed from that model's own closed form).
    """

    x: np.ndarray
    phi: HyperbolicPoint
    eta: np.ndarray
    psi: np.ndarray
    kappa: np.ndarray
    lam: np.ndarray
    sigma: float
    rho: float
    model_point: HyperbolicPoint

    @property
    def y(self):
        return self.phi.coords


def _frame_pieces(jet):
    s = jet.sigma
    gs = jet.ambient_grad_sigma
    return s, gs, float(np.dot(gs, gs))


def hyperboloid_from_jet(jet):
    """``(phi, eta, psi)`` on the hyperboloid from a sigma jet."""
    s, gs, g2 = _frame_pieces(jet)
    x = jet.x
    lift = np.concatenate([[1.0], x])
    phi = (1.0 + s * s + g2) / (2.0 * s) * lift
    phi[1:] -= s * x + gs
    psi = lift / s
    eta = phi - psi
    return phi, eta, psi


def poincare_from_jet(jet):
    """Poincare-ball point written directly in sigma; finite even where sigma = 0."""
    s, gs, g2 = _frame_pieces(jet)
    return ((1.0 - s * s + g2) * jet.x - 2.0 * s * gs) / ((1.0 + s) ** 2 + g2)


def klein_from_jet(jet):
    """Klein-ball point written directly in sigma; finite even where sigma = 0."""
    s, gs, g2 = _frame_pieces(jet)
    return ((1.0 - s * s + g2) * jet.x - 2.0 * s * gs) / (1.0 + s * s + g2)


_MODEL_FORMULA = {Model.POINCARE: poincare_from_jet, Model.KLEIN: klein_from_jet}


def _sample(jet, lam, model):
    phi, eta, psi = hyperboloid_from_jet(jet)
    phi_pt = HyperbolicPoint(Model.HYPERBOLOID, phi)
    model = Model(model)
    mp = phi_pt if model is Model.HYPERBOLOID else HyperbolicPoint(model, _MODEL_FORMULA[model](jet))
    return ImmersionSample(jet.x, phi_pt, eta, psi, kappa_from_lambda(lam), lam,
                           jet.sigma, jet.rho, mp)


def _check_concavity(lam, x):
    if lam[-1] > 0.5 - CONCAVITY_MARGIN:
        raise HorosphericalConcavityViolated(
            f"max Schouten eigenvalue {lam[-1]:.12g} is not below 1/2 at {x}", x=x, lam=lam)


def immerse(F, x, model="hyperboloid", method="auto"):
    """Surface point, normal, light-cone map and curvatures over ``x``.

    Raises
    ------
    HorosphericalConcavityViolated
        When the largest Schouten eigenvalue is within 1e-8 of 1/2 or above.
    """
    jet = field_jet(F, x, method)
    lam = schouten_from_jet(jet).lam
    _check_concavity(lam, jet.x)
    return _sample(jet, lam, model)


def model_point(F, x, model, allow_ideal=False):
    """Model coordinates of the surface point, optionally on the closure of the domain.

    With ``allow_ideal`` the analytic jet is evaluated even where ``sigma``
    vanishes; the ball formulas then return the ideal point ``x``.
    """
    model = Model(model)
    if model is Model.HYPERBOLOID:
        return immerse(F, x).phi.coords
    if not allow_ideal:
        return immerse(F, x, model).model_point.coords
    if not F.analytic:
        raise FieldError("ideal points need analytic derivatives")
    x = np.asarray(x, dtype=float)
    E = tangent_frame(x)
    G = np.asarray(F.grad(x), float)
    s = max(F(x), 0.0)

    j = SimpleNamespace(x=x, sigma=s, ambient_grad_sigma=E @ (E.T @ G))
    return _MODEL_FORMULA[model](j)


def parallel_flow(F, t, x, model="hyperboloid", method="auto"):
    """Point of the parallel surface at distance ``t`` along ``-eta``.

    Only the flowed surface has to be horospherically concave, so a field
    with ``max lambda = 1/2`` can still be flowed by ``t > 0``.
    """
    jet = field_jet(F, x, method)
    lam = schouten_from_jet(jet).lam
    lam_t = np.exp(-2.0 * t) * lam
    _check_concavity(lam_t, jet.x)
    phi, eta, _ = hyperboloid_from_jet(jet)
    phi_t = np.cosh(t) * phi - np.sinh(t) * eta
    psi_t = np.exp(t) * np.concatenate([[1.0], jet.x]) / jet.sigma
    eta_t = phi_t - psi_t
    phi_pt = HyperbolicPoint(Model.HYPERBOLOID, phi_t)
    mp = convert_model(phi_pt, model)
    return ImmersionSample(jet.x, phi_pt, eta_t, psi_t, kappa_from_lambda(lam_t), lam_t,
                           jet.sigma * np.exp(-t), jet.rho + t, mp)


def properness_indicator(F, x, method="auto"):
    """``rho^2 + |grad rho|^2``; diverges exactly toward ends where the surface escapes."""
    j = field_jet(F, x, method)
    return float(j.rho ** 2 + np.dot(j.grad_rho, j.grad_rho))


# ---------------------------------------------------------------------------
# identity checks

@dataclass
class IdentityReport:
    """Worst residuals of the pointwise identities over a sample set."""

    klein_norm: float
    gauss_map: float
    gauss_map_geodesic: float
    first_form: float
    kappa_blowup: bool
    worst_point: dict
    n: int
    tol_klein: float = 1e-12
    tol_gauss: float = 1e-10
    tol_first_form: float = 1e-5

    @property
    def passed(self):
        return (self.klein_norm < self.tol_klein and self.gauss_map < self.tol_gauss
                and self.gauss_map_geodesic < 1e-8 and self.first_form < self.tol_first_form)


def klein_norm_residual(jet):
    """``|phi_K|^2 - (1 - (2 sigma / (1 + sigma^2 + |grad sigma|^2))^2)``."""
    s, _, g2 = _frame_pieces(jet)
    k = klein_from_jet(jet)
    return float(np.dot(k, k) - (1.0 - (2.0 * s / (1.0 + s * s + g2)) ** 2))


def _psi_at(F, x, method):
    jet = field_jet(F, x, method)
    phi, eta, _ = hyperboloid_from_jet(jet)
    return phi - eta


def first_form_residual(F, x, method="auto", h=1e-4):
    """Relative deviation of the light-cone map's first fundamental form from ``exp(2 rho) g0``."""
    x = np.asarray(x, dtype=float)
    E = tangent_frame(x)
    m = E.shape[1]
    d = np.empty((m, len(x) + 1))
    for i in range(m):
        d[i] = (_psi_at(F, _exp(x, E[:, i], h), method)
                - _psi_at(F, _exp(x, E[:, i], -h), method)) / (2 * h)
    G = np.array([[mink_inner(d[i], d[j]) for j in range(m)] for i in range(m)])
    target = np.eye(m) / F(x) ** 2
    return float(np.max(np.abs(G - target)) / np.max(np.abs(target)))


def verify_identities(F, samples, method="auto", geodesic_T=20.0):
    """Check the Klein-norm identity, Gauss-map recovery and light-cone first form.

    Fields whose largest eigenvalue reaches 1/2 are still processed; the report
    then sets ``kappa_blowup``.
    """
    worst = {"klein_norm": 0.0, "gauss_map": 0.0, "gauss_map_geodesic": 0.0, "first_form": 0.0}
    where = {}
    blowup = False
    samples = np.atleast_2d(samples)
    for x in samples:
        jet = field_jet(F, x, method)
        lam = schouten_from_jet(jet).lam
        if lam[-1] > 0.5 - 1e-6:
            blowup = True
        phi, eta, _ = hyperboloid_from_jet(jet)
        psi = phi - eta
        T = geodesic_T
        gam = np.cosh(T) * phi - np.sinh(T) * eta
        vals = {
            "klein_norm": abs(klein_norm_residual(jet)),
            "gauss_map": float(np.max(np.abs(psi[1:] / psi[0] - jet.x))),
            "gauss_map_geodesic": float(np.max(np.abs(gam[1:] / gam[0] - jet.x))),
            "first_form": first_form_residual(F, x, method),
        }
        for k, v in vals.items():
            if v >= worst[k]:
                worst[k] = v
                where[k] = np.array(x)
    return IdentityReport(n=len(samples), kappa_blowup=blowup, worst_point=where, **worst)

