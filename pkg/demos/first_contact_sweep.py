"""Sweep horospheres toward the north pole until they touch a geodesic sphere.

The sphere of radius 0.8 about the origin first meets the horosphere family
at parameter 0.8.  Run with ``python demos/first_contact_sweep.py``.
"""
import numpy as np

import horocave as hc
from horocave.sphere import north

F = hc.catalog_field("constant", t=0.8, m=2).field
for n in (250, 1000, 4000):
    r = hc.first_contact(F, hc.horosphere_family(north(2)), n_grid=n)
    print(f"grid {n:5d}: s1 = {r.s1:.8f}  witness = {np.round(r.witness, 4)}  ({r.label})")

H = hc.catalog_field("constant", t=0.5, m=2, domain="hemisphere").field
rep = hc.half_space_certificate(H, 1.0, t_samples=(0.0, 2.0))
print("half-space margins        ", rep.margins)
