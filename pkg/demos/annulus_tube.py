"""The dilated annulus field becomes a tube around a geodesic; export it as OBJ.

Run with ``python demos/annulus_tube.py [out.obj]``.
"""
import sys

import numpy as np

import horocave as hc
from horocave.mesh import ring_orbit_error

A = hc.catalog_field("annulus", m=2).field
# at t = 0 the largest eigenvalue sits at 1/2; dilation moves it inside the range
T = hc.dilate(A, np.log(3.0))
mesh = hc.build_mesh(T, "poincare", (24, 48))
print("vertices, faces           ", len(mesh.vertices), len(mesh.faces))
print("Euler characteristic      ", hc.euler_characteristic(mesh))
print("ring orbit error          ", ring_orbit_error(mesh))

Y = np.array([hc.convert_model(hc.HyperbolicPoint(hc.Model.POINCARE, v), "hyperboloid").coords
              for v in mesh.vertices])
# distance to the vertical geodesic: asinh of the horizontal norm on the hyperboloid
d = np.arcsinh(np.linalg.norm(Y[:, 1:3], axis=1))
print("distance to axis          ", d.min(), d.max())

out = sys.argv[1] if len(sys.argv) > 1 else "annulus_tube.obj"
hc.write_obj(mesh, out)
print("wrote", out)
