"""Combinatorial primitives shared by the cut separators."""

from .cliques import CliqueEnumeration, UndirectedGraph, maximal_cliques
from .knapsack import knapsack_max
from .maxflow import CapacitatedDigraph, MaxFlowResult, max_flow

__all__ = [
    "CapacitatedDigraph", "CliqueEnumeration", "MaxFlowResult", "UndirectedGraph",
    "knapsack_max", "max_flow", "maximal_cliques",
]
