"""Closed-form conformal factor fields with machine-checkable expectations.

Each entry bundles a field, its parameters and a list of :class:`Claim`
records.  ``check_entry`` evaluates every claim on sample points and returns
one :class:`ClaimResult` per claim.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .conformal import boundary_mean_curvature, gauss_curvature_2d, scalar_curvature, schouten
from .elliptic import sigma_k
from .errors import CatalogError, RangeError
from .immersion import immerse
from .minkowski import mink_inner
from .sphere import (
    ConformalFactorField,
    DomainSpec,
    boundary_samples,
    north,
    rotational_field,
    sample_domain,
)

ROTATIONAL_SCALE = 2.0 / (2.0 + np.sqrt(2.0))


@dataclass(frozen=True)
class Claim:
    """Expected value of a named quantity, with tolerance and where it comes from.

    ``quantity`` is one of the keys of :data:`QUANTITIES`; ``value`` is a
    scalar or a sorted vector.
    """

    quantity: str
    value: object
    tol: float
    provenance: str
    fd_tol: Optional[float] = None


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: dict
    field: ConformalFactorField
    expected: list
    representable: str = "yes"

    @property
    def m(self):
        return self.field.m


# ---------------------------------------------------------------------------
# entries

def _constant(t=0.0, m=2, domain="sphere", r=None):
    dom = DomainSpec(domain, m, r)
    s = float(np.exp(-t))
    F = ConformalFactorField(dom, lambda x: s, lambda x: np.zeros(m + 1),
                             lambda x: np.zeros((m + 1, m + 1)), name=f"constant(t={t!r})")
    lam = np.full(m, np.exp(-2 * t) / 2)
    exp = [Claim("lambda", lam, 1e-12, "round metric scaled by exp(2t)")]
    if m >= 3:
        exp.append(Claim("R", m * (m - 1) * np.exp(-2 * t), 1e-10, "trace of the constant eigenvalues"))
    else:
        exp.append(Claim("K", np.exp(-2 * t), 1e-10, "scaled round sphere"))
    if t > 0:
        exp.append(Claim("kappa", np.full(m, 1 / np.tanh(t)), 1e-9, "geodesic sphere of radius t"))
    return F, exp, "yes" if t > 0 else "only after dilation t > 0"


def _horosphere(s=0.0, m=3, q=None):
    q = north(m) if q is None else np.asarray(q, dtype=float)
    dom = DomainSpec("sphere_minus_point", m, p=q)
    k = float(np.exp(-s))
    F = ConformalFactorField(dom, lambda x: k * (1.0 - np.dot(x, q)), lambda x: -k * q,
                             lambda x: np.zeros((m + 1, m + 1)), name=f"horosphere(s={s!r})")
    exp = [Claim("max_abs_lambda", 0.0, 1e-10, "flat metric", fd_tol=1e-6),
           Claim("horosphere_level", -np.exp(s) / 2, 1e-10,
                 "image on one horosphere about q", fd_tol=1e-8),
           Claim(f"sigma_{m // 2}", 0.0, 1e-10, "degenerate solution", fd_tol=1e-6)]
    if m >= 3:
        exp.append(Claim("R", 0.0, 1e-10, "flat metric", fd_tol=1e-5))
    else:
        exp.append(Claim("K", 0.0, 1e-10, "flat metric", fd_tol=1e-5))
    return F, exp, "yes"


def _punctured(m=4, k=1):
    m, k = int(m), int(k)
    if not 1 <= k or not 2 * k < m:
        raise RangeError(f"punctured solutions need 1 <= k < m/2, got m={m}, k={k}")
    b = 1.0 - m / (2.0 * k)
    dom = DomainSpec("punctured_hemisphere", m)

    def S(z):
        return (1 + z) ** b + (1 - z) ** b

    def dS(z):
        return b * ((1 + z) ** (b - 1) - (1 - z) ** (b - 1))

    def d2S(z):
        return b * (b - 1) * ((1 + z) ** (b - 2) + (1 - z) ** (b - 2))

    def prof(z):
        return S(z) ** (1 / b)

    def dprof(z):
        return S(z) ** (1 / b - 1) * dS(z) / b

    def d2prof(z):
        return ((1 / b) * (1 / b - 1) * S(z) ** (1 / b - 2) * dS(z) ** 2
                + S(z) ** (1 / b - 1) * d2S(z) / b)

    F = rotational_field(dom, prof, dprof, d2prof, name=f"punctured(m={m}, k={k})")
    exp = [Claim(f"sigma_{k}", 0.0, 1e-10, "degenerate sigma_k solution", fd_tol=1e-6),
           Claim("h_equator", 0.0, 1e-10, "even in the last coordinate")]
    return F, exp, "yes"


def _annulus(m=3, r=np.pi / 4):
    dom = DomainSpec("annulus", m, r)

    def prof(z):
        return np.sqrt(1 - z * z)

    def dprof(z):
        return -z / np.sqrt(1 - z * z)

    def d2prof(z):
        return -(1 - z * z) ** -1.5

    F = rotational_field(dom, prof, dprof, d2prof, name=f"annulus(m={m})")
    lam = np.array([-0.5] + [0.5] * (m - 1))
    exp = [Claim("lambda", lam, 1e-10, "cylinder metric", fd_tol=1e-6)]
    if m >= 3:
        exp.append(Claim("R", (m - 1) * (m - 2), 1e-10, "constant scalar curvature", fd_tol=1e-5))
    else:
        exp.append(Claim("K", 0.0, 1e-10, "flat cylinder", fd_tol=1e-6))
    if m % 2 == 0:
        exp.append(Claim(f"sigma_{m // 2}", 0.0, 1e-10, "degenerate sigma_(m/2) solution", fd_tol=1e-6))
    exp.append(Claim("h_equator", 0.0, 1e-10, "minimal outer boundary"))
    exp.append(Claim("h_inner", 0.0, 1e-10, "minimal inner boundary"))
    return F, exp, "only after dilation t > 0"


def _rotational_example():
    dom = DomainSpec("open_band", 2, np.pi / 4)
    C = ROTATIONAL_SCALE
    c0 = np.cos(np.pi / 4)
    F = rotational_field(
        dom,
        lambda z: C * (np.sqrt(1 - z * z) - c0),
        lambda z: -C * z / np.sqrt(1 - z * z),
        lambda z: -C * (1 - z * z) ** -1.5,
        name="rotational_example",
    )
    return F, [], "yes"


def _offcenter_sphere(a=1.0, b=0.5, m=3):
    if not a > abs(b):
        raise RangeError("need a > |b| for a positive field")
    bv = np.zeros(m + 1)
    bv[0] = b
    dom = DomainSpec("sphere", m)
    F = ConformalFactorField(dom, lambda x: a + np.dot(bv, x), lambda x: bv,
                             lambda x: np.zeros((m + 1, m + 1)), name=f"offcenter_sphere(a={a!r}, b={b!r})")
    lam = np.full(m, (a * a - b * b) / 2)
    return F, [Claim("lambda", lam, 1e-10, "image of the round metric under a conformal map",
                     fd_tol=1e-6)], "yes" if (a * a - b * b) < 1 else "only after dilation t > 0"


_ENTRIES = {
    "constant": _constant,
    "horosphere": _horosphere,
    "punctured": _punctured,
    "annulus": _annulus,
    "rotational_example": _rotational_example,
    "offcenter_sphere": _offcenter_sphere,
}

CATALOG_NAMES = tuple(_ENTRIES)

_INT_PARAMS = {"m", "k"}
_STR_PARAMS = {"domain"}


def coerce_params(params):
    """Convert string parameter values (from the command line) to numbers."""
    out = {}
    for k, v in params.items():
        if isinstance(v, str) and k not in _STR_PARAMS:
            v = int(v) if k in _INT_PARAMS else float(v)
        out[k] = v
    return out


def catalog_field(name, **params):
    """Build the catalog entry ``name``.

    Raises
    ------
    CatalogError
        Unknown name or parameter.
    RangeError
        Parameters outside the entry's range.
    """
    if name not in _ENTRIES:
        raise CatalogError(f"unknown catalog field {name!r}; known: {', '.join(CATALOG_NAMES)}")
    params = coerce_params(params)
    try:
        F, exp, rep = _ENTRIES[name](**params)
    except TypeError as e:
        raise CatalogError(f"bad parameters for {name!r}: {e}") from None
    return CatalogEntry(name, dict(params), F, exp, rep)


# ---------------------------------------------------------------------------
# claim evaluation

def _lambda(F, x, method):
    return schouten(F, x, method).lam


def _horo_level(F, x, method):
    q = np.array(F.domain.p)
    y = immerse(F, x, method=method).phi.coords
    return mink_inner(y, np.concatenate([[1.0], q]))


def _sigma_j(j):
    def f(F, x, method):
        return sigma_k(_lambda(F, x, method), j)
    return f


def _equator_h(F, x, method):
    return boundary_mean_curvature(F, (np.pi / 2, F.domain.p), x, method)


def _inner_h(F, x, method):
    bs = F.domain.V1[0]
    return boundary_mean_curvature(F, bs, x, method)


QUANTITIES = {
    "lambda": _lambda,
    "max_abs_lambda": lambda F, x, method: float(np.max(np.abs(_lambda(F, x, method)))),
    "R": lambda F, x, method: scalar_curvature(F, x, method=method),
    "K": lambda F, x, method: gauss_curvature_2d(F, x, method),
    "kappa": lambda F, x, method: immerse(F, x, method=method).kappa,
    "horosphere_level": _horo_level,
    "h_equator": _equator_h,
    "h_inner": _inner_h,
}


def _quantity(name):
    if name in QUANTITIES:
        return QUANTITIES[name]
    if name.startswith("sigma_"):
        return _sigma_j(int(name.split("_")[1]))
    raise CatalogError(f"unknown quantity {name!r}")


def claim_points(entry, claim, n=8, rng=0):
    """Sample points suited to ``claim``: boundary circles for boundary claims."""
    F = entry.field
    if claim.quantity == "h_equator":
        return boundary_samples(F.domain.V1[-1], n, F.m, rng)
    if claim.quantity == "h_inner":
        return boundary_samples(F.domain.V1[0], n, F.m, rng)
    if entry.name == "punctured":
        # stay on the part of the hemisphere where the jets are well conditioned
        dom = DomainSpec("annulus", F.m, np.arccos(0.9))
        return sample_domain(dom, n, rng, margin=0.0)
    return sample_domain(F.domain, n, rng, margin=0.05)


@dataclass
class ClaimResult:
    entry: str
    claim: Claim
    method: str
    worst_point: np.ndarray
    actual: object
    error: float
    tol: float

    @property
    def passed(self):
        return bool(self.error <= self.tol)


def check_claim(entry, claim, method="analytic", n=8, rng=0):
    f = _quantity(claim.quantity)
    tol = claim.tol if method == "analytic" else (claim.fd_tol or max(claim.tol, 1e-5))
    pts = claim_points(entry, claim, n, rng)
    if claim.quantity == "horosphere_level":
        vals = [f(entry.field, x, method) for x in pts]
        errs = [abs(v - claim.value) for v in vals]
    else:
        vals = [np.asarray(f(entry.field, x, method), dtype=float) for x in pts]
        errs = [float(np.max(np.abs(v - np.asarray(claim.value, dtype=float)))) for v in vals]
    i = int(np.argmax(errs))
    return ClaimResult(entry.name, claim, method, pts[i], vals[i], float(errs[i]), tol)


def check_entry(entry, method="analytic", n=8, rng=0):
    return [check_claim(entry, c, method, n, rng) for c in entry.expected]


DEFAULT_INSTANCES = (
    ("constant", {"t": 0.7, "m": 3}),
    ("constant", {"t": 0.4, "m": 2}),
    ("horosphere", {"s": 0.3, "m": 3}),
    ("punctured", {"m": 4, "k": 1}),
    ("punctured", {"m": 5, "k": 2}),
    ("annulus", {"m": 2}),
    ("annulus", {"m": 3}),
    ("annulus", {"m": 4}),
    ("rotational_example", {}),
    ("offcenter_sphere", {"a": 1.0, "b": 0.5, "m": 3}),
)


def default_entries():
    return [catalog_field(n, **p) for n, p in DEFAULT_INSTANCES]
