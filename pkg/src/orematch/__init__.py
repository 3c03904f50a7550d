"""Degree-sum perfect-matching laboratory for 3-uniform hypergraphs."""

from .constructions import (
    ConstructionParams,
    crossover_k,
    crossover_s,
    dirac_m1,
    full_star,
    h_nkls,
    h_star,
    sigma2_prime_closed,
)
from .hypergraph import Hypergraph, HypergraphError, LinkGraph, Matching, VertexPartition, build, edge_type
from .solver import SolveResult, has_perfect_matching, max_matching, max_uuw_matching, max_w_covering_matching

__all__ = [
    "ConstructionParams",
    "Hypergraph",
    "HypergraphError",
    "LinkGraph",
    "Matching",
    "SolveResult",
    "VertexPartition",
    "build",
    "crossover_k",
    "crossover_s",
    "dirac_m1",
    "edge_type",
    "full_star",
    "h_nkls",
    "h_star",
    "has_perfect_matching",
    "max_matching",
    "max_uuw_matching",
    "max_w_covering_matching",
    "sigma2_prime_closed",
]

__version__ = "0.1.0"
