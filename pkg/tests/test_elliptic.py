import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from horocave.catalog import catalog_field
from horocave.conformal import dilate
from horocave.elliptic import (
    ConeSpec,
    EllipticData,
    check_axioms,
    cone_contains,
    dilated_data,
    elementary_symmetric,
    problem_residual,
    sigma1_data,
    sigma_k,
    sigma_k_raw_data,
    sigma_k_root_data,
)
from horocave.errors import ConeViolation, RangeError
from horocave.sphere import north, sample_domain

vec = arrays(float, st.integers(1, 6), elements=st.floats(-3, 3))


def brute_sigma(lam, k):
    return sum(np.prod(c) for c in itertools.combinations(lam, k))


def test_sigma_k_examples():
    assert sigma_k([-0.5, 0.5, 0.5], 1) == 0.5
    assert sigma_k([-0.5, 0.5, 0.5, 0.5], 2) == 0.0
    assert sigma_k(np.ones(5), 5) == 1.0


def test_sigma_k_range():
    with pytest.raises(RangeError):
        sigma_k([1.0, 2.0], 3)
    with pytest.raises(RangeError):
        sigma_k([1.0, 2.0], 0)


@given(vec)
def test_recurrence_matches_expansion(lam):
    e = elementary_symmetric(lam)
    for k in range(1, len(lam) + 1):
        assert e[k] == pytest.approx(brute_sigma(lam, k), abs=1e-9)


def test_cone_examples():
    assert cone_contains(ConeSpec("gammam", 3), [1, 1, 1])
    assert cone_contains(ConeSpec("gamma1", 3), [-0.5, 0.5, 0.5])
    assert not cone_contains(ConeSpec("garding", 4, 2), [-0.5, 0.5, 0.5, 0.5])
    assert cone_contains(ConeSpec("garding", 4, 2), [-0.5, 0.5, 0.5, 0.5], closed=True, tol=1e-12)


def test_cone_nesting(rng):
    m = 4
    G1, Gm = ConeSpec("gamma1", m), ConeSpec("gammam", m)
    gk = [ConeSpec("garding", m, k) for k in range(1, m + 1)]
    for _ in range(10_000):
        lam = rng.standard_normal(m) + rng.uniform(-1, 2)
        inside = [cone_contains(c, lam) for c in [Gm] + gk[::-1] + [G1]]
        # once a vector is in a smaller cone it is in every larger one
        assert inside == sorted(inside)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_axioms_pass_for_standard_data(m):
    for d in (sigma1_data(m), sigma_k_root_data(m, 1), sigma_k_root_data(m, 2)):
        rep = check_axioms(d, 200)
        assert rep.passed, {k: (r.passed, r.worst) for k, r in rep.results.items()}


def test_raw_sigma2_fails_homogeneity_only():
    rep = check_axioms(sigma_k_raw_data(4, 2), 200)
    assert not rep["homogeneity"].passed
    assert rep["symmetry"].passed and rep["positivity"].passed


def test_non_symmetric_functional_detected():
    d = EllipticData(lambda lam: float(lam[0] + 2 * lam[1] + 3 * lam[2]), ConeSpec("gammam", 3))
    assert not check_axioms(d, 100)["symmetry"].passed


def test_check_axioms_needs_samples():
    with pytest.raises(ValueError):
        check_axioms(sigma1_data(3), 10)


def test_normalized_root_is_one_on_identity():
    for m, k in [(3, 2), (5, 3)]:
        assert sigma_k_root_data(m, k)(np.ones(m)) == pytest.approx(1.0)
        assert sigma_k_root_data(m, k, normalize=False)(np.ones(m)) == pytest.approx(comb(m, k) ** (1 / k))


@pytest.mark.parametrize("t,m", [(0.1, 3), (0.5, 4)])
def test_constant_field_sigma1_residual(t, m):
    F = catalog_field("constant", t=t, m=m).field
    r = problem_residual(F, sigma1_data(m, 1.0), north(m))
    assert r == pytest.approx(m * np.exp(-2 * t) / 2 - 1, abs=1e-14)
    t0 = 0.5 * np.log(m / 2)
    G = catalog_field("constant", t=t0, m=m).field
    assert problem_residual(G, sigma1_data(m, 1.0), north(m)) == pytest.approx(0.0, abs=1e-14)


def test_degenerate_residuals():
    H = catalog_field("horosphere", s=0.3, m=3).field
    for x in sample_domain(H.domain, 10, 0, margin=0.05):
        for k in (1, 2, 3):
            assert abs(problem_residual(H, sigma_k_root_data(3, k), x, method="fd")) < 1e-6
    A = catalog_field("annulus", m=4).field
    for x in sample_domain(A.domain, 10, 0, margin=0.05):
        assert abs(problem_residual(A, sigma_k_raw_data(4, 2), x, method="fd")) < 1e-6


def test_cone_violation():
    A = catalog_field("annulus", m=3).field
    x = sample_domain(A.domain, 1, 0, margin=0.05)[0]
    with pytest.raises(ConeViolation):
        problem_residual(A, sigma_k_root_data(3, 3), x)


def test_dilated_data():
    d = sigma1_data(3, 1.0)
    assert dilated_data(d, 0) is d
    lam = np.array([0.1, 0.2, 0.3])
    assert dilated_data(d, 0.4)(lam) == pytest.approx(np.exp(0.8) * d(lam))


@pytest.mark.parametrize("t0", [-0.5, 0.3, 1.0])
def test_solution_transport(t0):
    m = 3
    data = sigma1_data(m, 1.0)
    F = catalog_field("constant", t=0.5 * np.log(m / 2), m=m).field
    for x in sample_domain(F.domain, 5, 0):
        assert problem_residual(dilate(F, t0), dilated_data(data, t0), x) == pytest.approx(0.0, abs=1e-9)
    G = catalog_field("offcenter_sphere", a=1.0, b=0.3, m=m).field
    d2 = sigma_k_root_data(m, 2, 1.0)
    for x in sample_domain(G.domain, 5, 1):
        a = problem_residual(G, d2, x)
        b = problem_residual(dilate(G, t0), dilated_data(d2, t0), x)
        assert b == pytest.approx(a, abs=1e-9)
