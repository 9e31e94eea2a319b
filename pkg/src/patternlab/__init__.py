"""Finite-field pattern avoidance: full-rank r-point patterns in (F_q^n)^k,
slice-rank avoidance bounds, and maximum avoiding-set search."""

from .bounds import BoundReport, avoidance_bound, minimize_objective, monomial_count, objective
from .geometry import builtin_pattern, is_equilateral, spread, sq_dist
from .gf import FieldElement, FieldSpec, field_of_order, make_field
from .linalg import Matrix, Point, apply_block, det, inverse
from .pattern import (PatternSpec, PointSet, count_instances, find_violation, instantiate,
                      is_instance, validate_full_rank)
from .search import SearchResult, certify, exact_max, greedy
from .tensor import TensorContext, check_diagonal, slice_example_check

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "FieldElement", "FieldSpec", "Matrix", "PatternSpec", "Point", "PointSet",
    "SearchResult", "TensorContext", "apply_block", "avoidance_bound", "builtin_pattern",
    "certify", "check_diagonal", "count_instances", "det", "exact_max", "field_of_order",
    "find_violation", "greedy", "instantiate", "inverse", "is_equilateral", "is_instance",
    "make_field", "minimize_objective", "monomial_count", "objective", "slice_example_check",
    "spread", "sq_dist", "validate_full_rank",
]
