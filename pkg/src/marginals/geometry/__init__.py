"""Exact rational polytope engine."""
from .lp import LPResult, lexmin, lp_feasible, lp_optimize
from .ops import (
    affine_image,
    contains,
    extreme_subset,
    in_hull,
    is_extreme_point,
    polytope_equal,
    polytope_subset,
    project_polytope,
    vertex_enumeration,
)
from .rational import fmt_q, fmt_vec, parse_q, parse_vec
from .types import AffineMap, FeasibilityCertificate, HPolytope, VPolytope

__all__ = [
    "AffineMap",
    "FeasibilityCertificate",
    "HPolytope",
    "LPResult",
    "VPolytope",
    "affine_image",
    "contains",
    "extreme_subset",
    "fmt_q",
    "fmt_vec",
    "in_hull",
    "is_extreme_point",
    "lexmin",
    "lp_feasible",
    "lp_optimize",
    "parse_q",
    "parse_vec",
    "polytope_equal",
    "polytope_subset",
    "project_polytope",
    "vertex_enumeration",
]
