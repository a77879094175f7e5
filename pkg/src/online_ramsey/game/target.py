"""Precomputed strategy data for a target graph F at a fixed theta."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..graphs import (
    Graph,
    GraphError,
    format_key,
    key_adjacency,
    key_edge_count,
    key_is_connected,
    ordered_subgraph_keys,
    ordering_classes,
)
from ..vertex import Lambda_root, lambda_envelope_key


@dataclass(frozen=True)
class SearchPlan:
    """Order in which the positions of an ordered class are embedded.

    ``steps[i] = (position, anchor, neighbours, younger, older)``: ``anchor``
    is an already placed neighbour used to generate candidates (or -1),
    ``neighbours`` all placed neighbours, ``younger``/``older`` the placed
    positions whose reveal step must be larger/smaller.
    """

    key: tuple
    steps: tuple


def search_plan(key):
    h = key[0]
    adj = key_adjacency(key)
    placed = [0]
    steps = []
    while len(placed) < h:
        remaining = [p for p in range(h) if p not in placed]
        position = max(remaining, key=lambda p: (sum(1 for q in placed if adj[p] >> q & 1), -p))
        neighbours = tuple(q for q in placed if adj[position] >> q & 1)
        younger = tuple(q for q in placed if q < position)
        older = tuple(q for q in placed if q > position)
        steps.append((position, neighbours[0] if neighbours else -1, neighbours, younger, older))
        placed.append(position)
    return SearchPlan(key, tuple(steps))


def tie_break_order(keys):
    """Strict total order, highest first: more vertices, then more edges, then key."""
    return sorted(keys, key=lambda key: (-key[0], -key_edge_count(key), key))


@dataclass
class GameTarget:
    graph: Graph
    r: int
    theta: Fraction
    full_candidates: bool = False
    classes: list = field(init=False)
    lam: dict = field(init=False)
    rank: dict = field(init=False)
    scan: list = field(init=False)
    full_keys: list = field(init=False)
    plans: dict = field(init=False)

    def __post_init__(self):
        if self.graph.e == 0:
            raise GraphError("the target graph must have at least one edge")
        self.theta = Fraction(self.theta)
        all_keys = ordered_subgraph_keys(self.graph)
        self.full_keys = sorted(ordering_classes(self.graph))
        chosen = [k for k in all_keys if self.full_candidates or key_is_connected(k)]
        chosen = sorted(set(chosen) | set(self.full_keys))
        self.classes = chosen
        self.lam = {k: lambda_envelope_key(k, self.r).at(self.theta) for k in all_keys}
        order = tie_break_order(all_keys)
        self.rank = {k: i for i, k in enumerate(order)}
        single = (1, 0)
        # K1 closes under every assignment, so only classes strictly below it can matter
        below = [k for k in chosen if self.lam[k] < self.lam[single]]
        self.scan = sorted(below, key=lambda k: (self.lam[k], -self.rank[k])) + [single]
        self.plans = {k: search_plan(k) for k in chosen}

    @classmethod
    def at_threshold(cls, graph, r, full_candidates=False):
        return cls(graph, r, Lambda_root(graph, r).theta_star, full_candidates)

    def describe(self, key):
        return f"{format_key(key)} lambda={self.lam[key]}"
