"""Exact homomorphism counting, weighted densities and crossing witnesses for graph triples."""

from quasiforce.graphs import (
    GraphError,
    GraphParams,
    LabeledGraph,
    TripleFamily,
    build_graph,
    construct_triple,
    double,
    graph_params,
    pendant,
    standard_graph,
)
from quasiforce.homs import CapabilityError, density, hom_count, rooted_profile, verify_identities
from quasiforce.weighted import WeightedGraph, crossing_search, two_vertex, weighted_density

__all__ = [
    "CapabilityError",
    "GraphError",
    "GraphParams",
    "LabeledGraph",
    "TripleFamily",
    "WeightedGraph",
    "build_graph",
    "construct_triple",
    "crossing_search",
    "density",
    "double",
    "graph_params",
    "hom_count",
    "pendant",
    "rooted_profile",
    "standard_graph",
    "two_vertex",
    "verify_identities",
    "weighted_density",
]
