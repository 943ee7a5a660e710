import numpy as np
import pytest

from horocave.catalog import catalog_field
from horocave.conformal import dilate
from horocave.errors import AssumptionError, DomainError, NoContactError
from horocave.probe import (
    SweepFamily,
    embedding_certificate,
    equidistant_family,
    first_contact,
    half_space_certificate,
    horosphere_family,
    probe_grid,
    umbilic_family,
    umbilic_radius,
)
from horocave.reference import Horosphere
from horocave.sphere import ConformalFactorField, DomainSpec, north


def test_probe_grid_size_and_poles():
    d = DomainSpec("hemisphere", 2)
    g = probe_grid(d, 1000)
    assert len(g) >= 1000
    assert np.any(np.all(np.isclose(g, north(2)), axis=1))
    assert np.all([d.contains(x) for x in g])
    assert np.any(np.isclose(g[:, 2], 0.0, atol=1e-15))


@pytest.mark.parametrize("t", [0.3, 0.8, 1.5])
def test_constant_sphere_vs_horospheres(t):
    F = catalog_field("constant", t=t, m=2).field
    r = first_contact(F, horosphere_family(north(2)))
    assert r.s1 == pytest.approx(t, abs=1e-6)
    np.testing.assert_allclose(r.witness, north(2))
    assert r.label == "sampled evidence" and not r.degenerate


def test_grid_refinement_stability():
    F = catalog_field("constant", t=0.8, m=3).field
    fam = horosphere_family(north(3))
    a = first_contact(F, fam, n_grid=1000)
    b = first_contact(F, fam, n_grid=2000)
    assert abs(a.s1 - b.s1) < 1e-5


def test_hemisphere_vs_equidistants():
    t = 0.6
    F = catalog_field("constant", t=t, m=2, domain="hemisphere").field
    r = first_contact(F, equidistant_family(north(2)))
    assert r.s1 == pytest.approx(np.sinh(t), abs=1e-6)
    np.testing.assert_allclose(r.witness, north(2))
    assert r.location == "interior"


def test_horosphere_surface_vs_own_family_is_degenerate():
    s = 0.3
    F = catalog_field("horosphere", s=s, m=2).field
    r = first_contact(F, horosphere_family(north(2)))
    # every surface point sits on the horosphere at level log 2 - s
    assert r.s1 == pytest.approx(np.log(2) - s, abs=1e-6)
    assert r.degenerate


def test_umbilic_family_contact():
    t, lam0 = 0.8, 0.25
    F = catalog_field("constant", t=t, m=2).field
    R = umbilic_radius(lam0)
    assert R == pytest.approx(0.5 * np.log(2))
    r = first_contact(F, umbilic_family(north(2), R))
    assert r.s1 == pytest.approx(t + R, abs=1e-6)
    with pytest.raises(ValueError):
        umbilic_radius(0.5)


def test_no_contact():
    F = catalog_field("constant", t=0.8, m=2).field
    with pytest.raises(NoContactError):
        first_contact(F, horosphere_family(north(2), s_range=(1.0, 3.0)))
    with pytest.raises(NoContactError):
        first_contact(F, horosphere_family(north(2), s_range=(-3.0, 0.5)))


def test_non_monotone_family_rejected():
    F = catalog_field("constant", t=0.8, m=2).field
    fam = SweepFamily(lambda s: Horosphere(north(2), s * s), (-2.0, 2.0))
    with pytest.raises(AssumptionError):
        first_contact(F, fam)


@pytest.mark.parametrize("t", [0.0, 1.0, 2.0])
def test_half_space_constant_hemisphere(t):
    F = catalog_field("constant", t=0.5, m=2, domain="hemisphere").field
    rep = half_space_certificate(F, t)
    assert rep.passed and rep.margin >= -1e-9 and rep.c == pytest.approx(0.0, abs=1e-15)
    assert rep.label == "sampled evidence"


def test_half_space_dilated_annulus():
    A = dilate(catalog_field("annulus", m=2).field, 1.0)
    rep = half_space_certificate(A, 0.0)
    assert rep.passed and abs(rep.margin) < 1e-9


def test_half_space_shifted_field_reports():
    d = DomainSpec("hemisphere", 2)
    F = ConformalFactorField(d, lambda x: 1 + 0.5 * x[0], lambda x: np.array([0.5, 0, 0]),
                             lambda x: np.zeros((3, 3)))
    rep = half_space_certificate(F, 0.0, t_samples=(0.5, 1.0, 2.0), n_grid=400)
    assert set(rep.margins) == {0.0, 0.5, 1.0, 2.0}
    assert rep.min_passing_t is None or rep.min_passing_t in rep.margins


def test_half_space_assumptions():
    d = DomainSpec("hemisphere", 2)
    F = ConformalFactorField(
        d, lambda x: 1 + 0.1 * x[0] * x[2],
        lambda x: 0.1 * np.array([x[2], 0.0, x[0]]),
        lambda x: 0.1 * np.array([[0, 0, 1.0], [0, 0, 0], [1.0, 0, 0]]))
    with pytest.raises(AssumptionError):
        half_space_certificate(F, 0.0)
    with pytest.raises(DomainError):
        half_space_certificate(catalog_field("constant", t=0.5, m=2).field, 0.0)


def test_embedding_certificates():
    F = catalog_field("constant", t=0.6, m=2).field
    rep = embedding_certificate(F, 0.0, probe_grid(F.domain, 300), t_samples=(1.0, 2.0))
    assert rep.passed and all(v > 1e-3 for v in rep.ratios.values())
    H = catalog_field("horosphere", s=0.0, m=2).field
    assert embedding_certificate(H, 0.0, probe_grid(H.domain, 300)).passed


def test_embedding_monotone_in_t():
    A = catalog_field("annulus", m=2).field
    rep = embedding_certificate(A, 0.5, probe_grid(A.domain, 200), t_samples=(0.0, 0.25, 1.0, 2.0))
    assert rep.ratios[0.0] is None
    seen = False
    for t in sorted(rep.ratios):
        ok = rep.ratios[t] is not None and rep.ratios[t] > rep.threshold
        assert ok or not seen
        seen |= ok
    assert rep.min_passing_t == 0.25
