"""Exact and randomised counting of k-vertex induced subgraphs with monotone properties."""
from __future__ import annotations

from .brute import brute_count, brute_count_labelled, brute_count_motif
from .colorful import ColoredPattern, ColorfulDP, count_colorful, sample_colorful
from .fptras import (
    PatternSetSystem, approx_count_labelled, approx_count_motif, approx_count_unlabelled, build_set_system,
)
from .graph import Coloring, ColorMultiset, Graph, load_coloring, load_graph, parse_motif
from .hashing import HashFamily, build_family, is_k_perfect
from .karp_luby import Estimate, ExplicitSetSystem, estimate_union, exact_union
from .properties import CONNECTED, HAMILTONIAN, NON_BIPARTITE, LabelledPattern, Property, minimal_patterns
from .treewidth import nice_decomposition, tree_decomposition, treewidth

__all__ = [
    "CONNECTED", "HAMILTONIAN", "NON_BIPARTITE", "ColorMultiset", "ColoredPattern", "ColorfulDP", "Coloring",
    "Estimate", "ExplicitSetSystem", "Graph", "HashFamily", "LabelledPattern", "PatternSetSystem", "Property",
    "approx_count_labelled", "approx_count_motif", "approx_count_unlabelled", "brute_count",
    "brute_count_labelled", "brute_count_motif", "build_family", "build_set_system", "count_colorful",
    "estimate_union", "exact_union", "is_k_perfect", "load_coloring", "load_graph", "minimal_patterns",
    "nice_decomposition", "parse_motif", "sample_colorful", "tree_decomposition", "treewidth",
]
