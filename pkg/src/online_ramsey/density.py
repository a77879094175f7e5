"""Exact maximum-ratio subset selection.

Problems of the form

    maximize (sum of item weights fully inside S + a) / (sum of node costs in S + b)

over node sets ``S`` (optionally forced to contain some nodes) are solved by
Dinkelbach iteration; each parametric step is a maximum-weight closure,
computed as a minimum cut with scipy's max-flow.  An item is "inside" S when
all of its nodes are.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

INT32_LIMIT = 2**31 - 1


@dataclass(frozen=True)
class RatioProblem:
    node_costs: tuple
    items: tuple  # (weight, nodes)
    offset_numerator: int = 0
    offset_denominator: int = 0

    def numerator(self, chosen):
        total = sum(w for w, nodes in self.items if all(x in chosen for x in nodes))
        return total + self.offset_numerator

    def denominator(self, chosen):
        return sum(self.node_costs[x] for x in chosen) + self.offset_denominator


def best_closure(problem, theta, forced=()):
    """Node set maximizing q*numerator - p*denominator for theta = p/q.

    Returns the set and the attained value (offsets included).
    """
    theta = Fraction(theta)
    p, q = theta.numerator, theta.denominator
    nodes = len(problem.node_costs)
    items = problem.items
    source, sink = 0, 1
    node_base = 2
    item_base = 2 + nodes
    size = item_base + len(items)
    finite = sum(q * w for w, _ in items) + sum(p * c for c in problem.node_costs)
    infinite = finite + 1
    if infinite > INT32_LIMIT:
        raise OverflowError("capacities exceed the int32 range of the flow solver")
    rows, cols, caps = [], [], []
    for index, (weight, members) in enumerate(items):
        rows.append(source)
        cols.append(item_base + index)
        caps.append(q * weight)
        for x in members:
            rows.append(item_base + index)
            cols.append(node_base + x)
            caps.append(infinite)
    for x, cost in enumerate(problem.node_costs):
        rows.append(node_base + x)
        cols.append(sink)
        caps.append(p * cost)
    for x in forced:
        rows.append(source)
        cols.append(node_base + x)
        caps.append(infinite)
    capacity = sp.csr_matrix(
        (np.array(caps, dtype=np.int64), (np.array(rows), np.array(cols))), shape=(size, size)
    )
    capacity.sum_duplicates()
    capacity = capacity.astype(np.int32)
    flow = maximum_flow(capacity, source, sink, method="dinic").flow
    residual = (capacity - flow).tocsr()
    residual.data[residual.data < 0] = 0
    residual.eliminate_zeros()
    reached = breadth_first_order(residual, source, directed=True, return_predecessors=False)
    chosen = frozenset(int(v) - node_base for v in reached if node_base <= v < item_base)
    value = q * problem.numerator(chosen) - p * problem.denominator(chosen)
    return chosen, value


def max_ratio(problem, start, forced=()):
    """Dinkelbach iteration from the feasible node set ``start``."""
    chosen = frozenset(start)
    ratio = Fraction(problem.numerator(chosen), problem.denominator(chosen))
    while True:
        candidate, value = best_closure(problem, ratio, forced)
        if value <= 0:
            return ratio, chosen
        chosen = candidate
        ratio = Fraction(problem.numerator(chosen), problem.denominator(chosen))


def max_density(graph):
    """max e(S)/|S| over nonempty vertex sets, with an attaining set."""
    if graph.vertex_count == 0:
        raise ValueError("empty graph has no density")
    problem = RatioProblem(tuple([1] * graph.vertex_count), tuple((1, edge) for edge in graph.sorted_edges()))
    return max_ratio(problem, range(graph.vertex_count))


def max_density_exhaustive(graph):
    best = None
    adj = graph.adjacency
    for subset in range(1, 1 << graph.vertex_count):
        members = [x for x in range(graph.vertex_count) if subset >> x & 1]
        edges = sum((adj[x] & subset).bit_count() for x in members) // 2
        value = Fraction(edges, len(members))
        if best is None or value > best:
            best = value
    return best
