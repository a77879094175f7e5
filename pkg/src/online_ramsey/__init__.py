"""Exact thresholds and simulations for online avoidance games on random graphs."""

from .graphs import Graph, OrderedGraph, builtin_graph, canonical_form, parse_graph

__version__ = "0.1.0"

__all__ = ["Graph", "OrderedGraph", "builtin_graph", "canonical_form", "parse_graph", "__version__"]
