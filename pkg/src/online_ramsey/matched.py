"""r-matched graphs, the recursive grey-black witness graph and its density audit."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .density import RatioProblem, best_closure, max_ratio
from .graphs import (
    CapExceeded,
    Graph,
    GraphError,
    check_cap,
    key_adjacency,
    key_without_youngest,
    ordered_key,
    ordered_subgraph_keys,
    ordering_classes,
)
from .vertex import Lambda_root, lambda_envelope_key, min_lambda_envelope_key

WITNESS_KAPPA_CAP = 31
EXHAUSTIVE_BLOCK_CAP = 20
CONNECTED_AUDIT_CAP = 16
EDGE_SUBSET_AUDIT_CAP = 4
V_MAX_EXPONENT_CAP = 100_000


@dataclass(frozen=True)
class RMatchedGraph:
    vertex_count: int
    edges: frozenset
    r_sets: tuple

    def __post_init__(self):
        object.__setattr__(self, "r_sets", tuple(tuple(block) for block in self.r_sets))
        object.__setattr__(self, "edges", frozenset((min(a, b), max(a, b)) for a, b in self.edges))
        sizes = {len(block) for block in self.r_sets}
        if len(sizes) > 1:
            raise GraphError("all r-sets must have the same size")
        covered = sorted(x for block in self.r_sets for x in block)
        if covered != list(range(self.vertex_count)):
            raise GraphError("r-sets must partition the vertex set")
        for a, b in self.edges:
            if a == b or not (0 <= a < self.vertex_count and 0 <= b < self.vertex_count):
                raise GraphError(f"invalid edge ({a}, {b})")

    @property
    def r(self):
        return len(self.r_sets[0]) if self.r_sets else 0

    @property
    def kappa(self):
        return len(self.r_sets)

    @property
    def e(self):
        return len(self.edges)

    def block_of(self):
        owner = [0] * self.vertex_count
        for index, block in enumerate(self.r_sets):
            for x in block:
                owner[x] = index
        return owner

    def block_edges(self):
        """Edges as pairs of block ids (a single id for an edge inside one block)."""
        owner = self.block_of()
        return [tuple(sorted({owner[a], owner[b]})) for a, b in sorted(self.edges)]

    def block_subgraph_counts(self, blocks):
        """(kappa, edges) of the sub-r-matched graph induced on a set of blocks."""
        owner = self.block_of()
        inside = sum(1 for a, b in self.edges if owner[a] in blocks and owner[b] in blocks)
        return len(blocks), inside

    def to_json(self):
        return {
            "kappa": self.kappa,
            "edges": [list(edge) for edge in sorted(self.edges)],
            "r_sets": [list(block) for block in self.r_sets],
        }


@dataclass(frozen=True)
class GreyBlackRMatchedGraph:
    base: RMatchedGraph
    black: frozenset

    def __post_init__(self):
        for block in self.base.r_sets:
            if sum(1 for x in block if x in self.black) != 1:
                raise GraphError("every r-set needs exactly one black vertex")


@dataclass(frozen=True)
class WitnessGraph:
    base: GreyBlackRMatchedGraph
    central_copy: tuple
    central_r_set: int
    recursion_children: tuple
    graph: Graph
    pi: tuple

    @property
    def matched(self):
        return self.base.base

    def central_edges(self):
        key = ordered_key(self.graph, self.pi)
        adj = key_adjacency(key)
        pairs = []
        for i in range(key[0]):
            for j in range(i + 1, key[0]):
                if adj[i] >> j & 1:
                    a, b = self.central_copy[i], self.central_copy[j]
                    pairs.append((min(a, b), max(a, b)))
        return sorted(pairs)

    def to_json(self):
        data = self.matched.to_json()
        data["black"] = sorted(self.base.black)
        data["central_r_set"] = self.central_r_set
        data["central_copy"] = list(self.central_copy)
        return data


def mu(G: RMatchedGraph, theta):
    return G.kappa - Fraction(theta) * G.e


def expected_copy_exponent(G: RMatchedGraph, theta):
    """Exponent of n in the expected number of copies of G at p = n^-theta."""
    return mu(G, theta)


def _matched_problem(G):
    return RatioProblem(tuple([1] * G.kappa), tuple((1, blocks) for blocks in G.block_edges()))


def m_r_matched(G: RMatchedGraph, method="flow"):
    """max e(H)/kappa(H) over nonempty unions of r-sets with induced edges."""
    if G.e == 0:
        raise GraphError("m^r needs at least one edge")
    if method == "flow":
        ratio, _ = max_ratio(_matched_problem(G), range(G.kappa))
        return ratio
    if method != "exhaustive":
        raise GraphError(f"unknown method {method!r}")
    check_cap(G.kappa, EXHAUSTIVE_BLOCK_CAP, "number of r-sets for exhaustive density")
    pairs = G.block_edges()
    best = Fraction(0)
    for subset in range(1, 1 << G.kappa):
        edges = sum(1 for blocks in pairs if all(subset >> b & 1 for b in blocks))
        best = max(best, Fraction(edges, subset.bit_count()))
    return best


def _build(key, r):
    """Recursive witness: returns (vertex count, edges, r-sets, black, central copy, children)."""
    if key[0] == 1:
        return r, [], [tuple(range(r))], {0}, [0], ()
    child = _build(key_without_youngest(key), r)
    child_vertices, child_edges, child_sets, child_black, child_central, _ = child
    neighbours = [q for q in range(1, key[0]) if key_adjacency(key)[0] >> q & 1]
    edges, sets, black, children = [], [], set(), []
    for i in range(r):
        shift = i * child_vertices
        block_shift = i * len(child_sets)
        edges += [(a + shift, b + shift) for a, b in child_edges]
        sets += [tuple(x + shift for x in block) for block in child_sets]
        black |= {x + shift for x in child_black}
        children.append(frozenset(range(block_shift, block_shift + len(child_sets))))
    centre = tuple(range(r * child_vertices, r * child_vertices + r))
    for i, v in enumerate(centre):
        copy = [x + i * child_vertices for x in child_central]
        edges += [(v, copy[q - 1]) for q in neighbours]
    sets.append(centre)
    black.add(centre[0])
    central = [centre[0]] + list(child_central)
    return r * child_vertices + r, edges, sets, black, central, tuple(children)


def build_witness(F: Graph, pi, r, kappa_cap=WITNESS_KAPPA_CAP):
    if r < 2:
        raise GraphError("r must be >= 2")
    if F.vertex_count == 0:
        raise GraphError("the witness needs a nonempty graph")
    kappa = (r ** F.vertex_count - 1) // (r - 1)
    if kappa > kappa_cap:
        raise CapExceeded(f"witness would have {kappa} r-sets, above the cap of {kappa_cap}")
    pi = tuple(pi)
    vertices, edges, sets, black, central, children = _build(ordered_key(F, pi), r)
    matched = RMatchedGraph(vertices, frozenset(edges), tuple(sets))
    return WitnessGraph(
        GreyBlackRMatchedGraph(matched, frozenset(black)),
        tuple(central),
        len(sets) - 1,
        children,
        F,
        pi,
    )


def _connected_block_sets(G):
    """All nonempty block sets that are connected through edges between blocks."""
    neighbours = [0] * G.kappa
    for blocks in G.block_edges():
        if len(blocks) == 2:
            a, b = blocks
            neighbours[a] |= 1 << b
            neighbours[b] |= 1 << a
    for subset in range(1, 1 << G.kappa):
        start = subset & -subset
        seen = start
        frontier = start
        while frontier:
            reach = 0
            low = frontier
            while low:
                bit = low & -low
                reach |= neighbours[bit.bit_length() - 1]
                low ^= bit
            frontier = reach & subset & ~seen
            seen |= frontier
        if seen == subset:
            yield subset


@dataclass
class WitnessAudit:
    pi: tuple
    r: int
    theta_prime: Fraction
    kappa: int
    edges: int
    m_r: Fraction
    min_mu_connected: Fraction | None
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())


def audit_witness_density(F: Graph, pi, r, kappa_cap=WITNESS_KAPPA_CAP):
    pi = tuple(pi)
    W = build_witness(F, pi, r, kappa_cap)
    G = W.matched
    key = ordered_key(F, pi)
    theta = min_lambda_envelope_key(key, r).root()
    checks = {}
    checks["kappa formula"] = G.kappa == (r ** F.vertex_count - 1) // (r - 1)
    checks["edge recursion"] = G.e == _expected_edges(key, r)
    checks["one black per r-set"] = all(sum(x in W.base.black for x in b) == 1 for b in G.r_sets)
    checks["central copy black"] = all(x in W.base.black for x in W.central_copy)
    pairs = G.block_edges()
    min_mu = None
    if G.kappa <= CONNECTED_AUDIT_CAP:
        for subset in _connected_block_sets(G):
            edges = sum(1 for blocks in pairs if all(subset >> b & 1 for b in blocks))
            value = subset.bit_count() - theta * edges
            if min_mu is None or value < min_mu:
                min_mu = value
        checks["connected subgraphs have mu >= 0"] = min_mu >= 0
    _, worst = best_closure(_matched_problem(G), 1 / theta)
    checks["every block union has mu >= 0"] = worst <= 0
    if G.kappa <= EDGE_SUBSET_AUDIT_CAP:
        checks["edge subsets have mu >= 0"] = _edge_subsets_nonnegative(G, theta)
    m_r = m_r_matched(G)
    checks["m^r equals 1/theta'"] = m_r * theta == 1
    if G.kappa <= EXHAUSTIVE_BLOCK_CAP:
        checks["flow and exhaustive densities agree"] = m_r == m_r_matched(G, "exhaustive")
    return WitnessAudit(pi, r, theta, G.kappa, G.e, m_r, min_mu, checks)


def _expected_edges(key, r):
    if key[0] == 1:
        return 0
    return r * _expected_edges(key_without_youngest(key), r) + r * key_adjacency(key)[0].bit_count()


def _edge_subsets_nonnegative(G, theta):
    owner = G.block_of()
    edges = sorted(G.edges)
    for subset in range(1, 1 << G.kappa):
        inside = [e for e in edges if subset >> owner[e[0]] & 1 and subset >> owner[e[1]] & 1]
        for pick in range(1 << len(inside)):
            if subset.bit_count() - theta * pick.bit_count() < 0:
                return False
    return True


@dataclass
class OrderingAudit:
    graph: Graph
    r: int
    theta_star: Fraction
    audits: list

    @property
    def lowest_threshold_matches(self):
        """The lowest appearance threshold n^(-1/m^r) over orderings is n^(-theta*)."""
        return max(1 / a.m_r for a in self.audits) == self.theta_star

    @property
    def passed(self):
        return self.lowest_threshold_matches and all(a.passed for a in self.audits)


def audit_all_orderings(F: Graph, r, kappa_cap=WITNESS_KAPPA_CAP):
    theta_star = Lambda_root(F, r).theta_star
    audits = [audit_witness_density(F, pi, r, kappa_cap) for _, pi in sorted(ordering_classes(F).items())]
    return OrderingAudit(F, r, theta_star, audits)


@dataclass
class ProofConstants:
    epsilon: Fraction
    exponent: int
    v_max: int | None

    @property
    def overflow(self):
        return self.v_max is None


def proof_constants(F: Graph, r, theta, exponent_cap=V_MAX_EXPONENT_CAP):
    """Smallest positive gap between lambda values over S(F) and the derived size bound.

    The bound is r**E * v(F) + r with E = (v(F) r / epsilon + 1) |S(F)| + 2,
    rounded up to an integer exponent.  When E exceeds ``exponent_cap`` the
    integer is not materialised and ``v_max`` is None.
    """
    theta = Fraction(theta)
    keys = ordered_subgraph_keys(F)
    values = sorted({lambda_envelope_key(key, r).at(theta) for key in keys})
    if len(values) < 2:
        raise GraphError("all lambda values coincide; the gap is undefined")
    epsilon = min(b - a for a, b in zip(values, values[1:]))
    exponent = math.ceil((Fraction(F.vertex_count * r) / epsilon + 1) * len(keys) + 2)
    if exponent > exponent_cap:
        return ProofConstants(epsilon, exponent, None)
    return ProofConstants(epsilon, exponent, r**exponent * F.vertex_count + r)


def export_witness_dot(W: WitnessGraph):
    G = W.matched
    central = set(W.central_edges())
    lines = ["graph witness {", "  node [shape=circle, label=\"\"];"]
    for index, block in enumerate(G.r_sets):
        lines.append(f"  subgraph cluster_{index} {{")
        lines.append(f'    label="{index}";')
        if index == W.central_r_set:
            lines.append("    penwidth=2;")
        for x in block:
            fill = ' [style=filled, fillcolor=black]' if x in W.base.black else ""
            lines.append(f"    v{x}{fill};")
        lines.append("  }")
    for a, b in sorted(G.edges):
        bold = " [penwidth=3]" if (a, b) in central else ""
        lines.append(f"  v{a} -- v{b}{bold};")
    lines.append("}")
    return "\n".join(lines) + "\n"
