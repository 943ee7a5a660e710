"""Cones of eigenvalue vectors, elliptic functionals on them, and problem residuals."""
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Optional

import numpy as np

from .conformal import schouten
from .errors import ConeViolation, RangeError

CONE_KINDS = ("gamma1", "gammam", "garding")


def elementary_symmetric(lam):
    """All elementary symmetric polynomials ``[e_0, ..., e_m]`` of ``lam``."""
    lam = np.asarray(lam, dtype=float)
    e = np.zeros(len(lam) + 1)
    e[0] = 1.0
    for i, v in enumerate(lam):
        # right side is built before assignment, so it reads the previous row
        e[1:i + 2] = e[1:i + 2] + v * e[0:i + 1]
    return e


def sigma_k(lam, k):
    """``k``-th elementary symmetric polynomial, ``1 <= k <= m``."""
    lam = np.asarray(lam, dtype=float)
    if not 1 <= k <= len(lam):
        raise RangeError(f"k = {k} outside 1..{len(lam)}")
    return float(elementary_symmetric(lam)[k])


@dataclass(frozen=True)
class ConeSpec:
    """Open symmetric cone of R^m.

    ``gamma1`` is the half-space of positive trace, ``gammam`` the positive
    orthant, and ``garding`` with order ``k`` the set where ``sigma_1..sigma_k``
    are all positive.
    """

    kind: str
    m: int
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in CONE_KINDS:
            raise ValueError(f"unknown cone kind {self.kind!r}")
        if self.kind == "garding" and (self.k is None or not 1 <= self.k <= self.m):
            raise RangeError("Garding cone needs 1 <= k <= m")

    @property
    def order(self):
        return {"gamma1": 1, "gammam": self.m, "garding": self.k}[self.kind]


def cone_contains(cone, lam, closed=False, tol=0.0):
    """Membership in ``cone`` (or its closure, with slack ``tol``)."""
    lam = np.asarray(lam, dtype=float)
    if cone.kind == "gammam":
        vals = lam
    else:
        vals = elementary_symmetric(lam)[1:cone.order + 1]
    if closed:
        return bool(np.all(vals >= -tol))
    return bool(np.all(vals > 0))


@dataclass(frozen=True)
class EllipticData:
    """Functional ``f`` on a cone with the target value of the problem.

    ``target`` 0 is the degenerate problem and 1 the non-degenerate one.
    """

    f: Callable[[np.ndarray], float]
    cone: ConeSpec
    target: float = 0.0
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "f"

    def __call__(self, lam):
        return float(self.f(np.asarray(lam, dtype=float)))

    def gradient(self, lam, h=1e-6):
        if self.grad is not None:
            return np.asarray(self.grad(np.asarray(lam, float)), float)
        lam = np.asarray(lam, dtype=float)
        g = np.empty(len(lam))
        for i in range(len(lam)):
            d = np.zeros(len(lam))
            d[i] = h
            g[i] = (self(lam + d) - self(lam - d)) / (2 * h)
        return g


def sigma1_data(m, target=0.0):
    cone = ConeSpec("gamma1", m)
    return EllipticData(lambda lam: float(np.sum(np.sort(lam))), cone, target,
                        grad=lambda lam: np.ones(len(lam)), name="sigma_1")


def sigma_k_root_data(m, k, target=0.0, normalize=True):
    """``(sigma_k / C(m,k))^{1/k}`` on the Garding cone, extended by 0 outside it."""
    cone = ConeSpec("garding", m, k)
    scale = comb(m, k) if normalize else 1

    def f(lam):
        lam = np.sort(lam)
        if not cone_contains(cone, lam):
            return 0.0
        return float((sigma_k(lam, k) / scale) ** (1.0 / k))

    return EllipticData(f, cone, target, name=f"sigma_{k}^(1/{k})")


def sigma_k_raw_data(m, k, target=0.0):
    """Unnormalized ``sigma_k`` (homogeneous of degree ``k``)."""
    cone = ConeSpec("garding", m, k)
    return EllipticData(lambda lam: sigma_k(np.sort(lam), k), cone, target, name=f"sigma_{k}")


def dilated_data(data, t0):
    """Data solved by the dilation ``exp(2 t0) g`` of every solution ``g``."""
    if t0 == 0:
        return data
    s = float(np.exp(2.0 * t0))
    f0 = data.f
    g0 = data.grad
    grad = None if g0 is None else (lambda lam: s * np.asarray(g0(s * np.asarray(lam)), float))
    return EllipticData(lambda lam: f0(s * np.asarray(lam)), data.cone, data.target, grad,
                        name=f"{data.name}[t0={t0!r}]")


def problem_residual(F, data, x, tol=1e-6, method="auto"):
    """``f(lambda(g)(x)) - target``; raises outside the closed cone."""
    lam = schouten(F, x, method).lam
    if not cone_contains(data.cone, lam, closed=True, tol=tol):
        raise ConeViolation(f"lambda = {lam} leaves the closure of {data.cone.kind}")
    return data(lam) - data.target


# ---------------------------------------------------------------------------
# axiom checks

@dataclass
class AxiomResult:
    name: str
    passed: bool
    worst: float
    witness: Optional[np.ndarray] = None


@dataclass
class AxiomReport:
    data_name: str
    results: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.results.values())

    def __getitem__(self, key):
        return self.results[key]


def sample_cone(cone, n, rng=None, spread=3.0):
    """``n`` random points of the open cone (shifted Gaussians, rejection)."""
    rng = np.random.default_rng(rng)
    out = []
    while len(out) < n:
        lam = rng.standard_normal(cone.m) + rng.uniform(0.0, spread)
        if cone_contains(cone, lam):
            out.append(lam)
    return np.array(out)


def _boundary_point(cone, lam):
    # slide along -1 until the cone is left
    one = np.ones(cone.m)
    lo, hi = 0.0, 1.0
    while cone_contains(cone, lam - hi * one):
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cone_contains(cone, lam - mid * one):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return lam - hi * one


def check_axioms(data, sample_count=200, rng=0):
    """Sample-based check of symmetry, homogeneity, positivity, boundary decay and monotonicity."""
    if sample_count < 100:
        raise ValueError("sample_count must be at least 100")
    rng = np.random.default_rng(rng)
    cone = data.cone
    pts = sample_cone(cone, sample_count, rng)
    rep = AxiomReport(data.name)

    def record(name, errs, ok):
        i = int(np.argmax(errs))
        rep.results[name] = AxiomResult(name, bool(ok), float(errs[i]), pts[i])

    vals = np.array([data(l) for l in pts])

    errs = np.array([abs(data(rng.permutation(l)) - v) for l, v in zip(pts, vals)])
    record("symmetry", errs, np.all(errs <= 1e-12 * np.maximum(1.0, np.abs(vals))))

    s = rng.uniform(0.0, 10.0, sample_count)
    s[s == 0.0] = 1.0
    errs = np.array([abs(data(si * l) - si * v) for si, l, v in zip(s, pts, vals)])
    record("homogeneity", errs, np.all(errs < 1e-10))

    record("positivity", -vals, np.all(vals > 0))

    decay = []
    ok = True
    for l, v in zip(pts, vals):
        b = _boundary_point(cone, l)
        seq = np.array([data(b + eps * np.ones(cone.m)) for eps in (1e-2, 1e-4, 1e-6, 1e-8)])
        ok &= bool(np.all(np.diff(seq) <= 1e-14) and seq[-1] < 1e-3 * max(1.0, v))
        decay.append(seq[-1])
    record("boundary_decay", np.array(decay), ok)

    gmin = np.array([np.min(data.gradient(l)) for l in pts])
    record("gradient_in_gammam", -gmin, np.all(gmin > 0))
    return rep
