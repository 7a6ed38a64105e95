"""Exact Pfaffian evaluation, Pfaffian and determinant identities, and plane matchings."""

from .matrix import Matrix, MatrixError, PairSet, SkewMatrix, det_exact, new_skew, parse_matrix
from .pfaffian import pf, pf_definition, pf_delete, pf_eliminate, pf_minor, s_sign
from .graph import GraphError, PlaneGraph, aztec, cycle, grid, parse_graph, triangular_patch
from .matching import condense_count, count_via_pfaffian, kasteleyn_orient, matching_sum

__all__ = [
    "Matrix", "MatrixError", "PairSet", "SkewMatrix", "det_exact", "new_skew", "parse_matrix",
    "pf", "pf_definition", "pf_delete", "pf_eliminate", "pf_minor", "s_sign",
    "GraphError", "PlaneGraph", "aztec", "cycle", "grid", "parse_graph", "triangular_patch",
    "condense_count", "count_via_pfaffian", "kasteleyn_orient", "matching_sum",
]

__version__ = "0.1.0"
