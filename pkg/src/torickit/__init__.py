"""Toric Kähler geometry on Delzant polytopes.

Exact halfspace combinatorics, symplectic potentials and their metric
jets, scalar curvature with an independent finite-difference route,
soliton vectors on anticanonical models, and the numerical replay of
the extremal-soliton-implies-Einstein argument.
"""

from .errors import (
    BadParams,
    DegenerateSampleSet,
    Empty,
    LowerDimensional,
    MaxIterations,
    NotDelzantVertex,
    NotFano,
    NotPositiveDefinite,
    OutsideDomain,
    ParseError,
    QuadratureNotConverged,
    RedundantForm,
    ToricError,
    Unbounded,
    UnknownName,
)
from .polytope import (
    AffineForm,
    DelzantPolytope,
    DelzantReport,
    UnimodularMap,
    VertexData,
    VertexReport,
    affine_span_rank,
    catalog,
    CATALOG_DEFAULTS,
    check_delzant,
    enumerate_vertices,
    normalize_at_vertex,
    polytope_from_json,
    polytope_to_json,
    vertices_affinely_span,
)
from .polynomial import Polynomial, polynomial_from_json
from .potential import (
    MetricJet,
    PotentialJet,
    SymplecticPotential,
    cofactor_growth_check,
    det_factorization_check,
    metric_jet,
    potential_from_json,
    potential_jet,
    potential_to_json,
    vertex_vanishing_probe,
)
from .sampling import (
    geometric_ts,
    interior_distance,
    interior_grid,
    interior_rays,
    random_interior_points,
    ray_points,
)
from .curvature import (
    AffineFit,
    ScalarField,
    affine_fit,
    extremality_check,
    fd_cross_validate,
    grad_length_squared,
    scalar_curvature,
    scalar_curvature_fd,
    soliton_identity_residual,
)
from .soliton import (
    Conclusion,
    FanoPolytope,
    SolitonData,
    EinsteinVerdict,
    einstein_verdict_from_samples,
    exact_volume,
    fano_normalize,
    polytope_integral,
    soliton_vector,
    triangulate,
    verify_einstein,
)

__version__ = "0.1.0"

__all__ = [
    "AffineForm",
    "AffineFit",
    "BadParams",
    "CATALOG_DEFAULTS",
    "Conclusion",
    "DegenerateSampleSet",
    "DelzantPolytope",
    "DelzantReport",
    "Empty",
    "FanoPolytope",
    "LowerDimensional",
    "MaxIterations",
    "MetricJet",
    "NotDelzantVertex",
    "NotFano",
    "NotPositiveDefinite",
    "OutsideDomain",
    "ParseError",
    "Polynomial",
    "PotentialJet",
    "QuadratureNotConverged",
    "RedundantForm",
    "ScalarField",
    "SolitonData",
    "SymplecticPotential",
    "EinsteinVerdict",
    "ToricError",
    "Unbounded",
    "UnimodularMap",
    "UnknownName",
    "VertexData",
    "VertexReport",
    "affine_fit",
    "affine_span_rank",
    "catalog",
    "check_delzant",
    "cofactor_growth_check",
    "det_factorization_check",
    "einstein_verdict_from_samples",
    "enumerate_vertices",
    "exact_volume",
    "extremality_check",
    "fano_normalize",
    "fd_cross_validate",
    "geometric_ts",
    "grad_length_squared",
    "interior_distance",
    "interior_grid",
    "interior_rays",
    "metric_jet",
    "normalize_at_vertex",
    "polynomial_from_json",
    "polytope_from_json",
    "polytope_integral",
    "polytope_to_json",
    "potential_from_json",
    "potential_jet",
    "potential_to_json",
    "random_interior_points",
    "ray_points",
    "scalar_curvature",
    "scalar_curvature_fd",
    "soliton_identity_residual",
    "soliton_vector",
    "triangulate",
    "verify_einstein",
    "vertex_vanishing_probe",
    "vertices_affinely_span",
]
