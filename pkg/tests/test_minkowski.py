import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from horocave.errors import DimensionError, GeodesicError, ModelError, NearIdealError
from horocave.minkowski import (
    HyperbolicPoint,
    Model,
    geodesic_point,
    hyperbolic_distance,
    mink_inner,
    origin,
    pairwise_distances,
)

finite = st.floats(-50, 50, allow_nan=False)


def hyperboloid_point(v):
    # lift of a spatial vector onto the upper sheet
    v = np.asarray(v, dtype=float)
    return np.concatenate([[np.sqrt(1.0 + v @ v)], v])


def test_inner_product_examples():
    assert mink_inner([1, 0, 0, 0], [1, 0, 0, 0]) == -1.0
    assert mink_inner([0, 1, 0, 0], [0, 1, 0, 0]) == 1.0
    y = [np.cosh(1), np.sinh(1), 0, 0]
    assert mink_inner(y, [0, 1, 0, 0]) == pytest.approx(1.1752012, abs=1e-7)


def test_inner_product_dimension_mismatch():
    with pytest.raises(DimensionError):
        mink_inner([1, 0, 0], [1, 0, 0, 0])


@given(arrays(float, 4, elements=finite), arrays(float, 4, elements=finite),
       arrays(float, 4, elements=finite), finite)
def test_inner_product_bilinear_symmetric(u, v, w, a):
    assert mink_inner(u, v) == mink_inner(v, u)
    lhs = mink_inner(a * u + w, v)
    rhs = a * mink_inner(u, v) + mink_inner(w, v)
    assert lhs == pytest.approx(rhs, abs=1e-9 * (1 + abs(a)) * 1e4)


def test_origin_goes_to_ball_origin():
    p = HyperbolicPoint("hyperboloid", origin(3))
    assert np.all(p.to("poincare").coords == 0.0)
    assert np.all(p.to("klein").coords == 0.0)


def test_geodesic_point_to_poincare():
    t = 0.6
    p = HyperbolicPoint("hyperboloid", [np.cosh(t), np.sinh(t), 0.0, 0.0])
    np.testing.assert_allclose(p.to("poincare").coords, [np.tanh(0.3), 0, 0], atol=1e-15)


def test_poincare_to_klein():
    # a ball point at radius r sits at Klein radius 2r / (1 + r^2)
    p = HyperbolicPoint("poincare", [0.5, 0.0, 0.0])
    np.testing.assert_allclose(p.to("klein").coords, [0.8, 0, 0], atol=1e-15)


def test_invalid_points_rejected():
    with pytest.raises(ModelError):
        HyperbolicPoint("hyperboloid", [1.0, 0.5, 0.0])
    with pytest.raises(ModelError):
        HyperbolicPoint("hyperboloid", [-1.0, 0.0, 0.0])
    with pytest.raises(ModelError):
        HyperbolicPoint("poincare", [1.0, 0.0])
    with pytest.raises(NearIdealError):
        HyperbolicPoint("poincare", [1 - 1e-12, 0.0]).to("hyperboloid")


def test_roundtrips_on_random_points(rng):
    worst = 0.0
    for _ in range(1000):
        y0 = rng.uniform(1.0, 10.0)
        d = rng.standard_normal(3)
        y = np.concatenate([[y0], np.sqrt(y0 * y0 - 1) * d / np.linalg.norm(d)])
        p = HyperbolicPoint("hyperboloid", y)
        for m in (Model.POINCARE, Model.KLEIN):
            back = p.to(m).to("hyperboloid").coords
            worst = max(worst, np.max(np.abs(back - y)) / y0)
        b = p.to("poincare")
        worst = max(worst, np.max(np.abs(b.to("klein").to("poincare").coords - b.coords)))
    assert worst < 1e-12


def test_dim_property():
    assert HyperbolicPoint("hyperboloid", origin(3)).dim == 3
    assert HyperbolicPoint("klein", [0.1, 0.2, 0.3]).dim == 3


def test_geodesic_point_examples():
    o = origin(3)
    e1 = np.array([0.0, 1.0, 0.0, 0.0])
    np.testing.assert_array_equal(geodesic_point(o, e1, 0.0), o)
    np.testing.assert_allclose(geodesic_point(o, e1, 1.0), [np.cosh(1), np.sinh(1), 0, 0])


def test_geodesic_point_rejects_bad_velocity():
    o = origin(2)
    with pytest.raises(GeodesicError):
        geodesic_point(o, [0.0, 2.0, 0.0], 1.0)
    with pytest.raises(GeodesicError):
        geodesic_point(o, [1.0, 1.0, 0.0], 1.0)


@settings(max_examples=200)
@given(arrays(float, 3, elements=st.floats(-3, 3)), arrays(float, 3, elements=st.floats(-1, 1)),
       st.floats(-10, 10))
def test_geodesic_stays_on_hyperboloid(v, w, t):
    p = hyperboloid_point(v)
    # project w to the tangent space at p and normalize
    a = np.concatenate([[0.0], w])
    a = a + mink_inner(a, p) * p
    n2 = mink_inner(a, a)
    if n2 < 1e-6:
        return
    a /= np.sqrt(n2)
    g = geodesic_point(p, a, t)
    assert abs(mink_inner(g, g) + 1) < 1e-10 * max(1.0, g[0] ** 2)
    assert g[0] > 0
    assert hyperbolic_distance(p, g) == pytest.approx(abs(t), rel=1e-9, abs=1e-9)


@given(arrays(float, 3, elements=st.floats(-5, 5)), arrays(float, 3, elements=st.floats(-5, 5)))
def test_distance_symmetric_and_definite(u, v):
    p, q = hyperboloid_point(u), hyperboloid_point(v)
    assert hyperbolic_distance(p, q) == hyperbolic_distance(q, p)
    assert hyperbolic_distance(p, p) == 0.0
    ref = np.arccosh(max(1.0, -mink_inner(p, q)))
    assert hyperbolic_distance(p, q) == pytest.approx(ref, abs=1e-6)


def test_pairwise_matches_pointwise(rng):
    Y = np.array([hyperboloid_point(rng.standard_normal(3)) for _ in range(6)])
    D = pairwise_distances(Y)
    for i in range(6):
        for j in range(6):
            assert D[i, j] == pytest.approx(hyperbolic_distance(Y[i], Y[j]), abs=1e-12)
