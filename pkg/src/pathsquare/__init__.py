"""Turan-type problems for P6^2 and related patterns: formulas, constructions, search and proof checks."""

from .canon import canonical_form, canonical_graph, canonical_graph6, is_isomorphic
from .formulas import Objective, extremal_family, formula_row
from .graph import Graph, Graph6Error, graph6_decode, graph6_encode, triangle_count
from .patterns import PatternError, PatternId, build, contains, is_free, parse_pattern
from .search import SearchReport, SearchSpec, exhaustive_max, random_free_graph, verify_theorem

__all__ = [
    "Graph",
    "Graph6Error",
    "Objective",
    "PatternError",
    "PatternId",
    "SearchReport",
    "SearchSpec",
    "build",
    "canonical_form",
    "canonical_graph",
    "canonical_graph6",
    "contains",
    "exhaustive_max",
    "extremal_family",
    "formula_row",
    "graph6_decode",
    "graph6_encode",
    "is_free",
    "is_isomorphic",
    "parse_pattern",
    "random_free_graph",
    "triangle_count",
    "verify_theorem",
]
