"""Pretzel monoids: birooted labelled graphs under glue, idempath identification and retraction."""
from .cancellative import FiniteMonoid, FreeMonoid, bundled_monoid, load_monoid
from .graphs import BirootedGraph, canonical_code, isomorphic, make_graph
from .monoidlab import enumerate_monoid
from .pretzel import (Pretzel, equal_in_presentation, multiply, plus,
                      pretzel_of_term, pretzel_of_tree)
from .terms import parse_term, term_to_tree

__all__ = [
    "BirootedGraph", "FiniteMonoid", "FreeMonoid", "Pretzel",
    "bundled_monoid", "canonical_code", "enumerate_monoid",
    "equal_in_presentation", "isomorphic", "load_monoid", "make_graph",
    "multiply", "parse_term", "plus", "pretzel_of_term", "pretzel_of_tree",
    "term_to_tree",
]
