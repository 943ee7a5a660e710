"""Conformal metrics on spheres and their horospherically concave hypersurfaces in hyperbolic space.

A conformal factor field on a domain of the round sphere determines a
hypersurface of hyperbolic space whose hyperbolic Gauss map is the identity.
The package evaluates curvature of the metric, builds the hypersurface in the
hyperboloid, Poincare and Klein models, and checks geometric statements on
sampled points.
"""
from .catalog import CATALOG_NAMES, catalog_field, check_entry, default_entries
from .conformal import (
    boundary_mean_curvature,
    dilate,
    gauss_curvature_2d,
    scalar_curvature,
    schouten,
    yamabe_factor,
    yamabe_residual,
)
from .elliptic import (
    ConeSpec,
    EllipticData,
    check_axioms,
    cone_contains,
    elementary_symmetric,
    problem_residual,
    sigma1_data,
    sigma_k,
    sigma_k_raw_data,
    sigma_k_root_data,
)
from .errors import *  # noqa: F401,F403
from .immersion import (
    immerse,
    kappa_from_lambda,
    lambda_from_kappa,
    model_point,
    parallel_flow,
    properness_indicator,
    verify_identities,
)
from .mesh import Mesh, build_mesh, euler_characteristic, read_obj, write_obj
from .minkowski import (
    HyperbolicPoint,
    Model,
    convert_model,
    geodesic_point,
    hyperbolic_distance,
    mink_inner,
    origin,
)
from .probe import (
    embedding_certificate,
    equidistant_family,
    first_contact,
    half_space_certificate,
    horosphere_family,
    umbilic_family,
    umbilic_radius,
)
from .reference import (
    Equidistant,
    Horosphere,
    UmbilicSphere,
    boundary_placement,
    contact_angle,
    equidistant_from_ball,
    level_value,
    reference_normal,
)
from .sphere import (
    BoundarySphere,
    ConformalFactorField,
    DomainSpec,
    equatorial_double,
    field_jet,
    gradient_jump,
    north,
    rotational_field,
    sample_domain,
)
from .verify import run_suite

__version__ = "0.1.0"
