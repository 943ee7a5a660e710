"""Sweeps of reference families against sampled surfaces, and sampled certificates.

Everything here works on finite point samples; reports say "sampled evidence"
and never claim more than the samples show.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .conformal import boundary_mean_curvature
from .errors import AssumptionError, DomainError, HorosphericalConcavityViolated, NoContactError
from .immersion import immerse, parallel_flow, properness_indicator
from .minkowski import geodesic_point, mink_inner, origin, pairwise_distances
from .reference import Equidistant, Horosphere, UmbilicSphere, level_value
from .sphere import OPEN, boundary_samples, sphere_distance, tangent_frame

EVIDENCE = "sampled evidence"


@dataclass(frozen=True)
class SweepFamily:
    """One-parameter family of reference hypersurfaces swept from one end of ``s_range``.

    ``direction`` is ``"decreasing"`` when the sweep starts at ``s_hi``.
    """

    generator: Callable[[float], object]
    s_range: tuple
    direction: str = "decreasing"
    name: str = "family"
    check_monotone: bool = True
    convention: str = ""

    def __post_init__(self):
        if self.direction not in ("decreasing", "increasing"):
            raise ValueError("direction must be 'decreasing' or 'increasing'")
        lo, hi = self.s_range
        if not lo < hi:
            raise ValueError("empty sweep range")

    def levels(self, s, Y):
        return np.asarray(level_value(self.generator(s), Y), dtype=float)


def horosphere_family(q, s_range=(-3.0, 3.0), direction="decreasing"):
    """Horospheres about ``q``; swept in from ``q`` by default."""
    q = np.asarray(q, dtype=float)
    return SweepFamily(lambda s: Horosphere(q, s), tuple(s_range), direction, "horosphere",
                       convention="signed distance s of the horosphere about q from the origin")


def equidistant_family(n, s_range=(-3.0, 3.0), direction="decreasing"):
    """Level sets ``<<y, (0, n)>> = s`` of the totally geodesic plane orthogonal to ``n``."""
    a = np.concatenate([[0.0], np.asarray(n, dtype=float)])
    return SweepFamily(lambda s: Equidistant(a, -s), tuple(s_range), direction, "equidistant",
                       convention="level set <<y,(0,n)>> = s; s > 0 on the side of n")


def umbilic_radius(lambda0):
    """Radius of the geodesic spheres whose curvature matches Schouten eigenvalue ``lambda0``."""
    if not 0.0 < lambda0 < 0.5:
        raise ValueError("lambda0 must lie in (0, 1/2)")
    return 0.5 * np.log(1.0 / (2.0 * lambda0))


def umbilic_family(n, R, s_range=(-3.0, 6.0), direction="decreasing"):
    """Spheres of radius ``R`` whose centres slide along the geodesic toward ``n``.

    The level is not monotone in ``s`` for points behind the centre, so the
    monotonicity check is off for this family.
    """
    n = np.asarray(n, dtype=float)
    o = origin(len(n))
    v = np.concatenate([[0.0], n])
    return SweepFamily(lambda s: UmbilicSphere(geodesic_point(o, v, s), R), tuple(s_range),
                       direction, "umbilic", check_monotone=False,
                       convention=f"sphere of radius {R!r} centred at distance s along the geodesic toward n")


# ---------------------------------------------------------------------------
# sample grids

def probe_grid(domain, n=1000, rng=0):
    """Deterministic grid of at least ``n`` domain points arranged in rings about the axis.

    Pole and closed ends are included; open ends are kept out by half a ring
    spacing.  Ring populations follow the area element.
    """
    rng = np.random.default_rng(rng)
    lo, hi, ls, hs = domain.interval
    m = domain.m
    nr = max(3, int(np.ceil(np.sqrt(n))))
    step = (hi - lo) / (nr - 1)
    th = np.linspace(lo, hi, nr)
    if ls == OPEN:
        th[0] = lo + 0.5 * step
    if hs == OPEN:
        th[-1] = hi - 0.5 * step
    w = np.sin(th) ** (m - 1)
    counts = np.maximum(1, np.ceil(n * w / w.sum()).astype(int))
    p = np.array(domain.p)
    E = tangent_frame(p)
    pts = []
    for t, c in zip(th, counts):
        if np.isclose(np.sin(t), 0.0, atol=1e-15):
            pts.append(np.cos(t) * p)
            continue
        if m == 2:
            a = 2 * np.pi * (np.arange(c) + 0.5 * (len(pts) % 2)) / c
            u = np.cos(a)[:, None] * E[:, 0] + np.sin(a)[:, None] * E[:, 1]
        else:
            u = rng.standard_normal((c, m)) @ E.T
            u /= np.linalg.norm(u, axis=1, keepdims=True)
        pts.extend(np.cos(t) * p + np.sin(t) * u)
    return np.array(pts)


def on_closed_boundary(domain, x, tol=1e-9):
    return any(b.contains(x, tol) for b in domain.V1)


def surface_points(F, grid, t=0.0, mapper=map, method="auto"):
    """Hyperboloid points of the surface (flowed by ``t``) over ``grid``, in grid order."""
    if t == 0.0:
        f = lambda x: immerse(F, x, method=method).phi.coords
    else:
        f = lambda x: parallel_flow(F, t, x, method=method).phi.coords
    return np.array(list(mapper(f, list(grid))))


# ---------------------------------------------------------------------------
# first contact

@dataclass
class ContactResult:
    s1: float
    witness: np.ndarray
    location: str
    touching: int
    degenerate: bool
    iterations: int
    family: str
    label: str = EVIDENCE


def _check_monotone(S, L):
    d = np.diff(L, axis=0)
    inc = np.all(d >= -1e-12, axis=0)
    dec = np.all(d <= 1e-12, axis=0)
    bad = ~(inc | dec)
    if np.any(bad):
        raise AssumptionError(f"family level is not monotone in s for {int(bad.sum())} sample points")


def first_contact(F, family, grid=None, tol=1e-6, n_grid=1000, scan=64, max_iter=200,
                  mapper=map, method="auto", Y=None):
    """First sweep parameter at which the family touches the sampled surface.

    The extremal signed level over the grid is scanned from the start of the
    sweep until it changes sign, then bisected to ``tol``.

    Raises
    ------
    NoContactError
        When no sign change occurs inside ``s_range``.
    """
    if grid is None:
        grid = probe_grid(F.domain, n_grid)
    grid = np.asarray(grid, dtype=float)
    if Y is None:
        Y = surface_points(F, grid, mapper=mapper, method=method)
    lo, hi = family.s_range
    S = np.linspace(hi, lo, scan + 1) if family.direction == "decreasing" else np.linspace(lo, hi, scan + 1)
    L = np.array([family.levels(s, Y) for s in S])
    if family.check_monotone:
        _check_monotone(S, L)
    start = L[0]
    if np.all(start > 0):
        sgn = 1.0
    elif np.all(start < 0):
        sgn = -1.0
    else:
        raise NoContactError("the surface already meets the first member of the family")

    def g(s):
        return float(np.min(sgn * family.levels(s, Y)))

    G = np.min(sgn * L, axis=1)
    hits = np.nonzero(G <= 0)[0]
    if len(hits) == 0:
        raise NoContactError(f"no contact for s in {family.s_range}")
    k = int(hits[0])
    a, b = S[k - 1], S[k]
    it = 0
    while abs(b - a) > tol and it < max_iter:
        mid = 0.5 * (a + b)
        if g(mid) > 0:
            a = mid
        else:
            b = mid
        it += 1
    s1 = 0.5 * (a + b)
    lv = sgn * family.levels(s1, Y)
    i = int(np.argmin(lv))
    touching = int(np.sum(np.abs(lv) <= 10 * tol))
    loc = "boundary" if on_closed_boundary(F.domain, grid[i]) else "interior"
    return ContactResult(float(s1), grid[i], loc, touching, touching > len(grid) // 2, it, family.name)


# ---------------------------------------------------------------------------
# half-space certificate

@dataclass
class HalfSpaceReport:
    t: float
    c: float
    margins: dict
    worst_point: np.ndarray
    min_passing_t: Optional[float]
    tol: float
    label: str = EVIDENCE

    @property
    def margin(self):
        return self.margins[self.t]

    @property
    def passed(self):
        return self.margin is not None and self.margin >= -self.tol


def _equator_component(domain):
    for b in domain.V1:
        if np.isclose(b.r, np.pi / 2) and np.allclose(b.p, domain.p):
            return b
    raise DomainError("the domain has no closed equator boundary")


def _check_v2_properness(F):
    lo, hi, ls, hs = F.domain.interval
    p = np.array(F.domain.p)
    u = tangent_frame(p)[:, 0]
    for end, status in ((lo, ls), (hi, hs)):
        if status != OPEN:
            continue
        sgn = 1.0 if end == lo else -1.0
        vals = [properness_indicator(F, np.cos(end + sgn * d) * p + np.sin(end + sgn * d) * u)
                for d in (1e-1, 1e-2, 1e-3)]
        if not (vals[0] < vals[1] < vals[2]):
            raise AssumptionError("properness indicator does not grow toward a removed end")


def half_space_certificate(F, t, grid=None, tol=1e-9, t_samples=(), n_grid=1000, h_tol=1e-6,
                           mapper=map, method="auto"):
    """Sampled check that the flowed surface lies on the ``n`` side of its boundary plane.

    The margin at ``x`` is ``<<phi_t(x), (0, n)>> + exp(-t) c`` where ``c`` is
    the constant boundary mean curvature along the equator.
    """
    eq = _equator_component(F.domain)
    m = F.m
    hs = np.array([boundary_mean_curvature(F, eq, x, method)
                   for x in boundary_samples(eq, 64, m, 0)])
    if hs.max() - hs.min() > h_tol:
        raise AssumptionError(f"boundary mean curvature varies by {hs.max() - hs.min():.3g}")
    c = float(hs.mean())
    _check_v2_properness(F)
    if grid is None:
        grid = probe_grid(F.domain, n_grid)
    a = np.concatenate([[0.0], np.array(F.domain.p)])
    margins = {}
    worst = None
    for tt in sorted(set([float(t)] + [float(s) for s in t_samples])):
        try:
            Y = surface_points(F, grid, tt, mapper, method)
        except HorosphericalConcavityViolated:
            margins[tt] = None
            continue
        mg = mink_inner(Y, a) + np.exp(-tt) * c
        margins[tt] = float(mg.min())
        if tt == float(t):
            worst = grid[int(np.argmin(mg))]
    passing = [s for s, v in margins.items() if v is not None and v >= -tol]
    return HalfSpaceReport(float(t), c, margins, worst, min(passing) if passing else None, tol)


# ---------------------------------------------------------------------------
# embedding certificate

@dataclass
class EmbeddingReport:
    t: float
    ratios: dict
    worst_pair: tuple
    min_passing_t: Optional[float]
    threshold: float
    label: str = EVIDENCE

    @property
    def ratio(self):
        return self.ratios[self.t]

    @property
    def passed(self):
        return self.ratio is not None and self.ratio > self.threshold


def embedding_certificate(F, t, grid, threshold=1e-3, t_samples=(), mapper=map, method="auto"):
    """Smallest ratio of surface distance to sphere distance over all grid pairs."""
    grid = np.asarray(grid, dtype=float)
    n = len(grid)
    iu = np.triu_indices(n, 1)
    dS = sphere_distance(grid[iu[0]], grid[iu[1]])
    if np.any(dS <= 0):
        raise ValueError("grid points must be pairwise distinct")
    ratios = {}
    worst = None
    for tt in sorted(set([float(t)] + [float(s) for s in t_samples])):
        try:
            Y = surface_points(F, grid, tt, mapper, method)
        except HorosphericalConcavityViolated:
            ratios[tt] = None
            continue
        r = pairwise_distances(Y)[iu] / dS
        k = int(np.argmin(r))
        ratios[tt] = float(r[k])
        if tt == float(t):
            worst = (grid[iu[0][k]], grid[iu[1][k]])
    passing = [s for s, v in ratios.items() if v is not None and v > threshold]
    return EmbeddingReport(float(t), ratios, worst, min(passing) if passing else None, threshold)
