"""Exact-arithmetic tools for shadiness constants of polytopal norms."""

from .farkas import (BoundFails, FarkasCertificate, build_grid, generate_certificate,
                     global_lower_bound, relative_projection_lp, verify_certificate)
from .mpoly import MPoly
from .polytope import Polytope, builtin, enclosing_constants, facets_from_vertices
from .projections import ProjectionMatrix, ShadinessWitness, is_projection, operator_norm
from .rational import format_rational, parse_rational, round_to_rational
from .shadiness import norm_one_projection, simple_shady_test, triangulate_symmetric
from .sos import (ConstraintSystem, WeightedSosCertificate, build_constraint_system, delta_bound,
                  verify_sos_certificate)

__version__ = "0.1.0"

__all__ = [
    "BoundFails",
    "FarkasCertificate",
    "build_grid",
    "generate_certificate",
    "global_lower_bound",
    "relative_projection_lp",
    "verify_certificate",
    "MPoly",
    "Polytope",
    "builtin",
    "enclosing_constants",
    "facets_from_vertices",
    "ProjectionMatrix",
    "ShadinessWitness",
    "is_projection",
    "operator_norm",
    "format_rational",
    "parse_rational",
    "round_to_rational",
    "norm_one_projection",
    "simple_shady_test",
    "triangulate_symmetric",
    "ConstraintSystem",
    "WeightedSosCertificate",
    "build_constraint_system",
    "delta_bound",
    "verify_sos_certificate",
]
