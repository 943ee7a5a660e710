"""A constant conformal factor gives a geodesic sphere.

Run with ``python demos/geodesic_sphere.py``.
"""
import numpy as np

import horocave as hc
from horocave.sphere import sample_domain

t = 0.7
F = hc.catalog_field("constant", t=t, m=2).field
x = sample_domain(F.domain, 1, rng=0)[0]

s = hc.immerse(F, x, model="poincare")
print("point on the sphere       ", np.round(x, 6))
print("Schouten eigenvalues      ", s.lam, "(exp(-2t)/2 =", np.exp(-2 * t) / 2, ")")
print("principal curvatures      ", s.kappa, "(coth t =", 1 / np.tanh(t), ")")
print("Poincare radius           ", np.linalg.norm(s.model_point.coords), "(tanh(t/2) =", np.tanh(t / 2), ")")

# flowing by t' is the same as dilating the metric by exp(2t')
a = hc.parallel_flow(F, 0.3, x).phi.coords
b = hc.immerse(hc.dilate(F, 0.3), x).phi.coords
print("flow vs dilation          ", np.max(np.abs(a - b)))
