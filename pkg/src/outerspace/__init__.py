"""Exact computations in the outer space of a free group."""

from .automorphisms import Automorphism, compose, is_inner, is_primitive, whitehead_minimize
from .candidates import candidate_set, distortion, distortion_bruteforce, theorem_c_witness
from .graphs import MarkedMetricGraph, act, equal_in_cv, random_marked_graph, translation_length, validate
from .words import canonical_conjugacy, format_word, parse_word

__all__ = [
    "Automorphism",
    "MarkedMetricGraph",
    "act",
    "candidate_set",
    "canonical_conjugacy",
    "compose",
    "distortion",
    "distortion_bruteforce",
    "equal_in_cv",
    "format_word",
    "is_inner",
    "is_primitive",
    "parse_word",
    "random_marked_graph",
    "theorem_c_witness",
    "translation_length",
    "validate",
    "whitehead_minimize",
]
