import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from horocave.catalog import catalog_field, default_entries
from horocave.conformal import (
    boundary_mean_curvature,
    chart_density,
    dilate,
    euclidean_schouten_Au,
    gauss_curvature_2d,
    scalar_curvature,
    schouten,
    schouten_sigma_form,
    stereographic_inverse,
    yamabe_factor,
    yamabe_residual,
)
from horocave.errors import DimensionError, FieldError
from horocave.sphere import BoundarySphere, ConformalFactorField, DomainSpec, boundary_samples, field_jet, north, sample_domain

from conftest import random_unit


def pts(F, n=10, seed=0, margin=0.05):
    return sample_domain(F.domain, n, seed, margin=margin)


@pytest.mark.parametrize("t,m", [(0.0, 2), (0.7, 3), (-0.3, 4)])
def test_constant_field_eigenvalues(t, m):
    F = catalog_field("constant", t=t, m=m).field
    for x in pts(F, 3):
        np.testing.assert_allclose(schouten(F, x).lam, np.exp(-2 * t) / 2, atol=1e-14)


def test_horosphere_field_is_flat():
    F = catalog_field("horosphere", s=0.3, m=3).field
    for x in pts(F):
        assert np.max(np.abs(schouten(F, x, "fd").lam)) < 1e-6
        assert np.max(np.abs(schouten(F, x, "analytic").lam)) < 1e-12
        assert abs(scalar_curvature(F, x, method="fd")) < 1e-5


def test_annulus_m3_cylinder_eigenvalues():
    F = catalog_field("annulus", m=3).field
    for x in pts(F):
        np.testing.assert_allclose(schouten(F, x, "fd").lam, [-0.5, 0.5, 0.5], atol=1e-6)
        assert scalar_curvature(F, x, method="fd") == pytest.approx(2.0, abs=1e-5)


def test_round_s3_scalar_curvature():
    F = catalog_field("constant", t=0.0, m=3).field
    assert scalar_curvature(F, north(3)) == pytest.approx(6.0, abs=1e-14)


def test_scalar_curvature_needs_m3():
    F = catalog_field("constant", t=0.0, m=2).field
    with pytest.raises(DimensionError):
        scalar_curvature(F, north(2))


def test_gauss_curvature_examples():
    F = catalog_field("constant", t=0.4, m=2).field
    assert gauss_curvature_2d(F, north(2)) == pytest.approx(np.exp(-0.8), abs=1e-14)
    A = catalog_field("annulus", m=2).field
    for x in pts(A):
        assert abs(gauss_curvature_2d(A, x, "fd")) < 1e-6
        assert abs(gauss_curvature_2d(A, x, "analytic")) < 1e-12


def test_gauss_curvature_equals_trace():
    for F in [catalog_field("annulus", m=2).field, catalog_field("rotational_example").field,
              catalog_field("constant", t=0.2, m=2).field]:
        for x in pts(F):
            assert gauss_curvature_2d(F, x) == pytest.approx(schouten(F, x).trace, abs=1e-8)


def test_trace_identity_for_scalar_curvature():
    for e in default_entries():
        F = e.field
        if F.m < 3:
            continue
        for x in pts(F, 5):
            S = schouten(F, x)
            assert scalar_curvature(F, x) == pytest.approx(2 * (F.m - 1) * S.lam.sum(), abs=1e-8)
            np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(S.endo)), S.lam, atol=1e-9)


def test_boundary_mean_curvature_examples():
    F = catalog_field("constant", t=0.6, m=3, domain="hemisphere").field
    eq = BoundarySphere(np.pi / 2, north(3))
    for x in boundary_samples(eq, 5, 3, 0):
        assert abs(boundary_mean_curvature(F, eq, x)) < 1e-15
    r = 1.1
    G = catalog_field("constant", t=0.6, m=3, domain="ball", r=r).field
    for x in boundary_samples(BoundarySphere(r, north(3)), 5, 3, 1):
        assert boundary_mean_curvature(G, (r, north(3)), x) == pytest.approx(np.exp(-0.6) / np.tan(r), abs=1e-14)
    A = catalog_field("annulus", m=3).field
    for x in boundary_samples(eq, 5, 3, 2):
        assert abs(boundary_mean_curvature(A, eq, x, "fd")) < 1e-10


def test_dilate_identity_and_constant_rule():
    F = catalog_field("constant", t=0.3, m=3).field
    assert dilate(F, 0) is F
    np.testing.assert_allclose(schouten(dilate(F, 0.4), north(3)).lam, np.exp(-1.4) / 2, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.floats(-1.0, 2.0), st.integers(0, 9))
def test_boundary_curvature_scales_under_dilation(t, seed):
    F = catalog_field("offcenter_sphere", a=1.0, b=0.3, m=3).field
    bs = BoundarySphere(0.9, north(3))
    x = boundary_samples(bs, 1, 3, seed)[0]
    h = boundary_mean_curvature(F, bs, x)
    assert boundary_mean_curvature(dilate(F, t), bs, x) == pytest.approx(np.exp(-t) * h, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.0, 2.0), st.sampled_from(range(10)))
def test_eigenvalue_dilation_covariance(t, i):
    e = default_entries()[i]
    x = pts(e.field, 1, i)[0]
    a = schouten(e.field, x).lam
    b = schouten(dilate(e.field, t), x).lam
    np.testing.assert_allclose(b, np.exp(-2 * t) * a, atol=1e-10 * max(1.0, np.exp(-2 * t)))


def test_sigma_form_needs_half_hessian_of_square(rng):
    # exponent form and sigma form agree only with the factor 1/2 on Hess(sigma^2)
    F = catalog_field("offcenter_sphere", a=1.0, b=0.5, m=3).field
    for x in pts(F, 5):
        j = field_jet(F, x)
        endo = schouten(F, x).endo
        np.testing.assert_allclose(schouten_sigma_form(j), endo, atol=1e-12)
        s, g, H = j.sigma, j.grad_sigma, j.hess_sigma
        hess_sq = 2 * s * H + 2 * np.outer(g, g)
        lhs_half = endo + 0.5 * (g @ g) * np.eye(3) + np.outer(g, g)
        np.testing.assert_allclose(lhs_half, 0.5 * s * s * np.eye(3) + 0.5 * hess_sq, atol=1e-12)
        assert np.max(np.abs(lhs_half - (0.5 * s * s * np.eye(3) + hess_sq))) > 1e-3


def test_Au_flat_and_conjugation_invariant(rng):
    y = rng.standard_normal(3)
    assert np.all(euclidean_schouten_Au(lambda v: 1.0, y) == 0.0)
    u = lambda v: 1.0 + 0.3 * v[0] ** 2 + 0.1 * v[1] * v[2] + 0.2 * v[2]
    A = euclidean_schouten_Au(u, y)
    Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    np.testing.assert_allclose(np.linalg.eigvalsh(Q @ A @ Q.T), np.linalg.eigvalsh(A), atol=1e-12)
    with pytest.raises(FieldError):
        euclidean_schouten_Au(lambda v: -1.0, y)
    with pytest.raises(DimensionError):
        euclidean_schouten_Au(u, y[:2])


@pytest.mark.parametrize("name,params", [
    ("constant", {"t": 0.0, "m": 3}),
    ("constant", {"t": 0.5, "m": 4}),
    ("offcenter_sphere", {"a": 1.0, "b": 0.5, "m": 3}),
    ("punctured", {"m": 5, "k": 2}),
])
def test_stereographic_transfer(name, params, rng):
    F = catalog_field(name, **params).field
    u = chart_density(F)
    for _ in range(5):
        y = 0.4 * rng.standard_normal(F.m)
        x = stereographic_inverse(y)
        if not F.domain.contains(x, closed=False) or F.domain.boundary_distance(x) < 0.1:
            continue
        lam_chart = np.linalg.eigvalsh(euclidean_schouten_Au(u, y, h=1e-4))
        np.testing.assert_allclose(lam_chart, schouten(F, x).lam, atol=1e-5)


def test_yamabe_round_sphere():
    U = ConformalFactorField(DomainSpec("sphere", 3), lambda x: 1.0, lambda x: np.zeros(4),
                             lambda x: np.zeros((4, 4)))
    x = random_unit(np.random.default_rng(1), 4)
    assert yamabe_residual(U, x, 6.0)[0] == pytest.approx(0.0, abs=1e-14)


def test_yamabe_annulus_and_scalar_curvature_consistency():
    F = catalog_field("annulus", m=3).field
    U = yamabe_factor(F)
    for x in pts(F):
        assert abs(yamabe_residual(U, x, 2.0)[0]) < 1e-5
        assert abs(yamabe_residual(U, x, 2.0, method="fd")[0]) < 1e-5
    G = catalog_field("offcenter_sphere", a=1.0, b=0.5, m=4).field
    V = yamabe_factor(G)
    for x in pts(G, 5):
        assert abs(yamabe_residual(V, x, scalar_curvature(G, x))[0]) < 1e-5


def test_yamabe_boundary_terms():
    U = ConformalFactorField(DomainSpec("hemisphere", 3), lambda x: 1.0, lambda x: np.zeros(4),
                             lambda x: np.zeros((4, 4)))
    x = np.array([1.0, 0.0, 0.0, 0.0])
    assert yamabe_residual(U, x, 6.0, boundary=(0.0, 0.0)) == (0.0, 0.0)
    t, r = 0.4, 0.8
    F = catalog_field("constant", t=t, m=3, domain="ball", r=r).field
    U = yamabe_factor(F)
    x = boundary_samples(BoundarySphere(r, north(3)), 1, 3, 0)[0]
    _, b = yamabe_residual(U, x, 6.0 * np.exp(-2 * t), boundary=(1 / np.tan(r), np.exp(-t) / np.tan(r)))
    assert abs(b) < 1e-12
