"""Triangle meshes of surfaces in the Poincare or Klein ball (m = 2) and OBJ I/O."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FieldError, HorosphericalConcavityViolated, ModelError
from .immersion import immerse, model_point
from .minkowski import Model
from .sphere import latlong_grid, tangent_frame


@dataclass
class Mesh:
    """Vertices (N, 3), 0-based triangle faces (F, 3) and per-vertex attributes.

    ``rings`` lists the vertex indices of each latitude ring, for symmetry checks.
    """

    vertices: np.ndarray
    faces: np.ndarray
    attributes: dict = field(default_factory=dict)
    rings: list = field(default_factory=list)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if len(self.faces) and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("face index out of range")

    @property
    def edges(self):
        e = np.concatenate([self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)


def euler_characteristic(mesh):
    return len(mesh.vertices) - len(mesh.edges) + len(mesh.faces)


def _is_pole(th):
    return np.isclose(np.sin(th), 0.0, atol=1e-15)


def build_mesh(F, model="poincare", resolution=(32, 64), allow_ideal=False):
    """Mesh of the surface over a latitude-longitude grid about the domain axis.

    Pole rings collapse to one vertex.  With ``allow_ideal`` the grid reaches
    the open ends of the domain and the ball formulas are evaluated there,
    which may put vertices on the unit sphere.
    """
    if F.m != 2:
        raise DomainError("meshes are built for m = 2 only")
    model = Model(model)
    if model is Model.HYPERBOLOID:
        raise ModelError("meshes live in the Poincare or Klein ball")
    n_theta, n_phi = resolution
    dom = F.domain
    th, ph, X = latlong_grid(dom, n_theta, n_phi)
    if allow_ideal:
        # reach the open ends as well
        lo, hi, _, _ = dom.interval
        th = np.linspace(lo, hi, n_theta)
        E = tangent_frame(dom.p)
        u = np.cos(ph)[:, None] * E[:, 0] + np.sin(ph)[:, None] * E[:, 1]
        X = np.cos(th)[:, None, None] * dom.p + np.sin(th)[:, None, None] * u[None]

    verts, kmax, lmin, rings = [], [], [], []
    for i, t in enumerate(th):
        row = [X[i, 0]] if _is_pole(t) else list(X[i])
        idx = []
        for x in row:
            try:
                if allow_ideal:
                    v = model_point(F, x, model, allow_ideal=True)
                    try:
                        s = immerse(F, x)
                        kmax.append(s.kappa[-1])
                        lmin.append(s.lam[0])
                    except (DomainError, FieldError):
                        # ideal points carry no curvature data
                        kmax.append(np.nan)
                        lmin.append(np.nan)
                else:
                    s = immerse(F, x, model)
                    v = s.model_point.coords
                    kmax.append(s.kappa[-1])
                    lmin.append(s.lam[0])
            except HorosphericalConcavityViolated as e:
                raise HorosphericalConcavityViolated(f"{e} (grid ring {i})", x=e.x, lam=e.lam) from None
            idx.append(len(verts))
            verts.append(v)
        rings.append(np.array(idx))

    faces = []
    for a, b in zip(rings[:-1], rings[1:]):
        if len(a) == 1 and len(b) == 1:
            continue
        if len(a) == 1:
            for j in range(len(b)):
                faces.append((a[0], b[j], b[(j + 1) % len(b)]))
        elif len(b) == 1:
            for j in range(len(a)):
                faces.append((a[j], b[0], a[(j + 1) % len(a)]))
        else:
            n = len(a)
            for j in range(n):
                k = (j + 1) % n
                faces.append((a[j], b[j], b[k]))
                faces.append((a[j], b[k], a[k]))
    V = np.array(verts)
    if not allow_ideal and len(V) and np.max(np.linalg.norm(V, axis=1)) >= 1.0:
        raise ModelError("a vertex left the open ball")
    attrs = {"kappa_max": np.array(kmax), "lambda_min": np.array(lmin)}
    return Mesh(V, np.array(faces, dtype=np.int64), attrs, rings)


def ring_orbit_error(mesh, axis=(0.0, 0.0, 1.0)):
    """Largest spread, over latitude rings, of the axial height and axial distance of vertices."""
    axis = np.asarray(axis, dtype=float)
    worst = 0.0
    for r in mesh.rings:
        V = mesh.vertices[r]
        h = V @ axis
        d = np.linalg.norm(V - np.outer(h, axis), axis=1)
        worst = max(worst, float(np.ptp(h)), float(np.ptp(d)))
    return worst


def format_obj(mesh):
    lines = ["v %.9g %.9g %.9g" % tuple(v) for v in mesh.vertices]
    lines += ["f %d %d %d" % tuple(f + 1) for f in mesh.faces]
    return "".join(l + "\n" for l in lines)


def write_obj(mesh, path):
    """Write ``v`` then ``f`` lines (1-based), LF endings, nothing else."""
    with open(path, "w", newline="\n") as fh:
        fh.write(format_obj(mesh))


def read_obj(path):
    verts, faces = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(p) for p in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return Mesh(np.array(verts).reshape(-1, 3), np.array(faces, dtype=np.int64).reshape(-1, 3))
