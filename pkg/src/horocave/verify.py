"""Self-check suites that emit one record per check.

A record is a dict with the fixed keys ``check, field, point, expected,
actual, tol, pass``.  :func:`run_suite` returns the records in a
deterministic order.
"""
import json
import tempfile
from pathlib import Path

import numpy as np

from .catalog import catalog_field, check_entry, default_entries
from .conformal import as_boundary, boundary_mean_curvature, dilate, schouten
from .elliptic import check_axioms, sigma1_data, sigma_k_raw_data, sigma_k_root_data
from .immersion import immerse, kappa_from_lambda, lambda_from_kappa, parallel_flow, verify_identities
from .mesh import build_mesh, euler_characteristic, read_obj, ring_orbit_error, write_obj
from .minkowski import mink_inner
from .probe import first_contact, half_space_certificate, horosphere_family
from .reference import boundary_placement, contact_angle, equidistant_from_ball
from .sphere import (BoundarySphere, boundary_samples, equatorial_double, field_jet, gradient_jump, north,
                     sample_domain)

RECORD_KEYS = ("check", "field", "point", "expected", "actual", "tol", "pass")


def _plain(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, (np.bool_,)):
        return bool(v)
    a = np.asarray(v)
    if a.ndim == 0:
        return a.item()
    return a.tolist()


def record(check, field, point, expected, actual, tol, ok):
    return {"check": check, "field": field, "point": _plain(point), "expected": _plain(expected),
            "actual": _plain(actual), "tol": _plain(tol), "pass": bool(ok)}


def format_record(rec):
    """One JSON object per line; floats use the shortest repr that round-trips."""
    return json.dumps({k: rec[k] for k in RECORD_KEYS}, allow_nan=True)


def _close(check, field, point, expected, actual, tol):
    err = float(np.max(np.abs(np.asarray(actual, float) - np.asarray(expected, float))))
    return record(check, field, point, expected, actual, tol, err <= tol)


# ---------------------------------------------------------------------------
# suites

def _flow_fields():
    ann = catalog_field("annulus", m=3)
    return [
        catalog_field("constant", t=0.3, m=3).field,
        catalog_field("horosphere", s=0.3, m=3).field,
        dilate(ann.field, 0.5),
    ]


def suite_identities(inject_error=False, mapper=map):
    out = []
    rng = np.random.default_rng(1)
    lam = rng.uniform(-5.0, 0.49, 1000)
    kap = kappa_from_lambda(lam)
    if inject_error:
        # test hook: break the curvature correspondence on purpose
        kap = kap * (1.0 + 1e-6)
    err = np.abs(lam - lambda_from_kappa(kap))
    i = int(np.argmax(err))
    out.append(record("lambda_kappa_roundtrip", "-", None, lam[i], lambda_from_kappa(kap[i]), 1e-12,
                      err[i] < 1e-12))
    out.append(record("kappa_at_zero", "-", None, 1.0, kappa_from_lambda(0.0), 0.0,
                      kappa_from_lambda(0.0) == 1.0))
    mono = bool(np.all(np.diff(kappa_from_lambda(np.sort(lam))) > 0))
    out.append(record("kappa_increasing", "-", None, True, mono, None, mono))
    for F in [catalog_field("constant", t=0.7, m=3).field,
              catalog_field("horosphere", s=0.3, m=3).field,
              catalog_field("rotational_example").field,
              dilate(catalog_field("annulus", m=3).field, 0.5)]:
        pts = sample_domain(F.domain, 20, 3, margin=0.05)
        rep = verify_identities(F, pts)
        out.append(record("klein_norm", F.name, rep.worst_point.get("klein_norm"), 0.0, rep.klein_norm,
                          1e-12, rep.klein_norm < 1e-12))
        out.append(record("gauss_map", F.name, rep.worst_point.get("gauss_map"), 0.0, rep.gauss_map,
                          1e-10, rep.gauss_map < 1e-10))
        out.append(record("first_form", F.name, rep.worst_point.get("first_form"), 0.0, rep.first_form,
                          1e-5, rep.first_form < 1e-5))
        worst, wp = 0.0, None
        for x in pts:
            s = immerse(F, x)
            y, e, p = s.phi.coords, s.eta, s.psi
            sc = max(1.0, y[0] ** 2)
            r = max(abs(mink_inner(y, y) + 1) / sc, abs(mink_inner(e, e) - 1) / sc,
                    abs(mink_inner(y, e)) / sc, abs(mink_inner(p, p)) / sc,
                    float(np.max(np.abs(p - (y - e)))) / sc)
            if r >= worst:
                worst, wp = r, x
        out.append(record("sample_invariants", F.name, wp, 0.0, worst, 1e-9, worst < 1e-9))
    return out


def suite_catalog(mapper=map):
    out = []
    for e in default_entries():
        for method in ("analytic", "fd"):
            for r in check_entry(e, method):
                out.append(record(f"{r.claim.quantity}[{method}]", e.field.name, r.worst_point,
                                  r.claim.value, r.actual, r.tol, r.passed))
    return out


def suite_flow(mapper=map):
    out = []
    for F in _flow_fields():
        pts = sample_domain(F.domain, 5, 7, margin=0.05)
        for t in (0.1, 0.5, 1.0, 2.0):
            G = dilate(F, t)
            for x in pts:
                a = schouten(F, x).lam
                b = schouten(G, x).lam
                out.append(_close(f"eigen_dilation[t={t}]", F.name, x, np.exp(-2 * t) * a, b, 1e-10))
                pf = parallel_flow(F, t, x).phi.coords
                im = immerse(G, x).phi.coords
                out.append(_close(f"flow_equals_dilation[t={t}]", F.name, x, im, pf,
                                  1e-9 * max(1.0, abs(im[0]))))
    F = catalog_field("constant", t=0.3, m=3).field
    bs = (np.pi / 3, north(3))
    x = boundary_samples(as_boundary(bs), 1, 3, 0)[0]
    h = boundary_mean_curvature(F, bs, x)
    for t in (0.1, 0.5, 1.0, 2.0):
        out.append(_close(f"h_dilation[t={t}]", F.name, x, np.exp(-t) * h,
                          boundary_mean_curvature(dilate(F, t), bs, x), 1e-10))
    return out


def suite_boundary(mapper=map):
    out = []
    t = 0.5
    F = dilate(catalog_field("constant", t=0.0, m=3, domain="ball", r=np.pi / 4).field, t)
    rep = boundary_placement(F, (np.pi / 4, north(3)))
    c = np.exp(-t)
    out.append(_close("placement_c", F.name, None, c, rep.c, 1e-10))
    out.append(record("placement_error", F.name, rep.worst_point, 0.0, rep.max_error, 1e-6, rep.passed))
    H = equidistant_from_ball(np.pi / 4, north(3), rep.c)
    for x in boundary_samples(rep.boundary, 4, 3, 1):
        out.append(_close("contact_angle", F.name, x, -c / np.sqrt(1 + c * c), contact_angle(F, x, H), 1e-6))
    D = equatorial_double(catalog_field("annulus", m=3).field)
    eq = BoundarySphere(np.pi / 2, north(3))
    for x in boundary_samples(eq, 50, 3, 3):
        jv, jg = gradient_jump(D, x)
        out.append(record("reflection_jump", D.name, x, 0.0, max(jv, jg), 1e-8, max(jv, jg) < 1e-8))
    A = dilate(catalog_field("annulus", m=3).field, 1.0)
    H0 = equidistant_from_ball(np.pi / 2, north(3), 0.0)
    for x in boundary_samples(A.domain.V1[-1], 4, 3, 2):
        out.append(_close("contact_angle", A.name, x, 0.0, contact_angle(A, x, H0), 1e-6))
    return out


def suite_probe(mapper=map):
    out = []
    F = catalog_field("constant", t=0.8, m=2).field
    fam = horosphere_family(north(2))
    r1 = first_contact(F, fam, n_grid=1000, mapper=mapper)
    r2 = first_contact(F, fam, n_grid=2000, mapper=mapper)
    out.append(_close("first_contact", F.name, r1.witness, 0.8, r1.s1, 1e-6))
    out.append(_close("first_contact_refinement", F.name, r2.witness, r1.s1, r2.s1, 1e-5))
    G = catalog_field("constant", t=0.5, m=2, domain="hemisphere").field
    for t in (0.0, 1.0, 2.0):
        rep = half_space_certificate(G, t, mapper=mapper)
        out.append(record(f"half_space[t={t}]", G.name, rep.worst_point, 0.0, rep.margin, 1e-9,
                          rep.passed))
    return out


def suite_elliptic(mapper=map):
    out = []
    for m in (3, 4, 5):
        for d in (sigma1_data(m), sigma_k_root_data(m, 1), sigma_k_root_data(m, 2)):
            rep = check_axioms(d, 200, rng=m)
            out.append(record("axioms", f"{d.name}(m={m})", None, True, rep.passed, None, rep.passed))
    rep = check_axioms(sigma_k_raw_data(4, 2), 200)
    ok = not rep["homogeneity"].passed
    out.append(record("homogeneity_fails", "sigma_2(m=4)", None, False, rep["homogeneity"].passed, None, ok))
    return out


def suite_mesh(mapper=map):
    out = []
    F = catalog_field("constant", t=0.5, m=2).field
    M = build_mesh(F, "poincare", (64, 128))
    out.append(record("euler_sphere", F.name, None, 2, euler_characteristic(M), 0, euler_characteristic(M) == 2))
    out.append(_close("orbit_symmetry", F.name, None, 0.0, ring_orbit_error(M), 1e-9))
    A = dilate(catalog_field("annulus", m=2).field, np.log(3.0))
    MA = build_mesh(A, "poincare", (24, 48))
    out.append(record("euler_annulus", A.name, None, 0, euler_characteristic(MA), 0, euler_characteristic(MA) == 0))
    out.append(_close("orbit_symmetry", A.name, None, 0.0, ring_orbit_error(MA), 1e-9))
    with tempfile.TemporaryDirectory() as d:
        p1, p2 = Path(d, "a.obj"), Path(d, "b.obj")
        write_obj(MA, p1)
        write_obj(read_obj(p1), p2)
        same = p1.read_bytes() == p2.read_bytes()
    out.append(record("obj_roundtrip", A.name, None, True, same, None, same))
    return out


def suite_derivatives(mapper=map, n=50):
    out = []
    for e in default_entries():
        F = e.field
        pts = sample_domain(F.domain, n, 11, margin=0.05)
        worst, wp, sym = 0.0, None, 0.0
        for x in pts:
            a = field_jet(F, x, "analytic")
            b = field_jet(F, x, "fd")
            err = max(np.max(np.abs(a.grad_sigma - b.grad_sigma)), np.max(np.abs(a.hess_sigma - b.hess_sigma)))
            sym = max(sym, float(np.max(np.abs(b.hess_sigma - b.hess_sigma.T))))
            if err >= worst:
                worst, wp = err, x
        out.append(record("jet_agreement", F.name, wp, 0.0, worst, 1e-6, worst < 1e-6))
        out.append(record("hessian_symmetry", F.name, None, 0.0, sym, 1e-9, sym < 1e-9))
    return out


SUITES = {
    "identities": suite_identities,
    "catalog": suite_catalog,
    "flow": suite_flow,
    "boundary": suite_boundary,
    "probe": suite_probe,
    "elliptic": suite_elliptic,
    "mesh": suite_mesh,
    "derivatives": suite_derivatives,
}


def run_suite(name, inject_error=False, mapper=map):
    """Records of suite ``name`` (or of every suite for ``"all"``)."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(name)
    out = []
    for n in names:
        if n == "identities":
            out.extend(suite_identities(inject_error=inject_error, mapper=mapper))
        else:
            out.extend(SUITES[n](mapper=mapper))
    return out
