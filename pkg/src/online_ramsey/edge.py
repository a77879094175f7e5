"""Edge-game quantities: the edge min-max density, the 2-density and the
closed-form bounds for clusters of cycles.

Edge-ordered graphs are handled through canonical keys: a tuple of edges in
order (youngest first) with vertices relabelled by first appearance, taking
the lexicographically smallest relabelling when an edge brings two new
vertices.  Equal keys means equal up to an order-preserving isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .density import RatioProblem, best_closure, max_density
from .graphs import CapExceeded, Graph, GraphError, bits, check_cap, petal_cluster

EDGE_ORDER_CAP = 7
EXHAUSTIVE_EDGE_SEQUENCE_CAP = 200_000
M2_EXHAUSTIVE_CAP = 22


def edge_order_key(sequence):
    """Canonical key of an edge sequence (pairs of arbitrary hashable labels)."""
    best = None

    def walk(i, labels, out):
        nonlocal best
        if i == len(sequence):
            candidate = tuple(out)
            if best is None or candidate < best:
                best = candidate
            return
        a, b = sequence[i]
        fresh = [x for x in (a, b) if x not in labels]
        orders = [fresh] if len(fresh) < 2 else [fresh, fresh[::-1]]
        for order in orders:
            local = dict(labels)
            for x in order:
                local[x] = len(local)
            la, lb = local[a], local[b]
            walk(i + 1, local, out + [(min(la, lb), max(la, lb))])

    walk(0, {}, [])
    return best


@dataclass(frozen=True)
class EdgeOrderedGraph:
    graph: Graph
    pi_edges: tuple

    def __post_init__(self):
        pi = tuple((min(a, b), max(a, b)) for a, b in self.pi_edges)
        object.__setattr__(self, "pi_edges", pi)
        if sorted(pi) != self.graph.sorted_edges():
            raise GraphError("pi_edges must be a permutation of the edge set")

    @property
    def key(self):
        return edge_order_key(self.pi_edges)


def edge_ordering_classes(F: Graph, cap=EDGE_ORDER_CAP):
    """Map from canonical key to a representative edge ordering, one per orbit."""
    check_cap(F.e, cap, "edge count for edge-ordering enumeration")
    classes = {}
    for perm in itertools.permutations(F.sorted_edges()):
        classes.setdefault(edge_order_key(perm), perm)
    return classes


def _vertex_count(edges):
    return len({x for edge in edges for x in edge})


def _edge_options(key):
    """Per position j >= 1: (position mask, vertex count, edge count) choices for H_j."""
    h = len(key)
    options = []
    for j in range(1, h):
        later = [t for t in range(j + 1, h)]
        per = []
        for pick in range(1 << len(later)):
            members = [j] + [t for s, t in enumerate(later) if pick >> s & 1]
            mask = sum(1 << t for t in members)
            per.append((mask, _vertex_count([key[t] for t in members]), len(members)))
        options.append(per)
    return options


def edge_sequence_pairs(key, r):
    """All (v*, e*) pairs, v* = 2 + sum c_i (v_i - 2), e* = 1 + sum c_i (e_i - 1)."""
    h = len(key)
    options = _edge_options(key)
    size = 1
    for per in options:
        size *= len(per)
    check_cap(size, EXHAUSTIVE_EDGE_SEQUENCE_CAP, "number of edge coefficient sequences")
    full = (1 << h) - 1
    whole = (full, _vertex_count(key), h)
    pairs = set()
    for picks in itertools.product(*options):
        chosen = (whole,) + picks
        c = [r]
        for i in range(1, h):
            c.append((r - 1) * sum(c[j] for j in range(i) if chosen[j][0] >> i & 1))
        v_star = 2 + sum(ci * (v - 2) for ci, (_, v, _) in zip(c, chosen))
        e_star = 1 + sum(ci * (e - 1) for ci, (_, _, e) in zip(c, chosen))
        pairs.add((v_star, e_star))
    return pairs


def _best_edge_sequence_at(key, r, theta, options):
    h = len(key)
    best = [None] * h
    for j in range(h - 1, 0, -1):
        top = None
        for mask, v, e in options[j - 1]:
            v_part, e_part = v - 2, e - 1
            for t in bits(mask & ~(1 << j)):
                v_part += (r - 1) * best[t][0]
                e_part += (r - 1) * best[t][1]
            value = v_part - theta * e_part
            if top is None or value < top[0]:
                top = (value, v_part, e_part)
        best[j] = top[1:]
    v_part, e_part = _vertex_count(key) - 2, h - 1
    for t in range(1, h):
        v_part += (r - 1) * best[t][0]
        e_part += (r - 1) * best[t][1]
    return 2 + r * v_part, 1 + r * e_part


@lru_cache(maxsize=None)
def d_star_edge_key(key, r, method="parametric"):
    h = len(key)
    if h == 0:
        raise GraphError("edge d* needs at least one edge")
    if method == "exhaustive":
        return max(Fraction(e, v) for v, e in edge_sequence_pairs(key, r))
    if method != "parametric":
        raise GraphError(f"unknown method {method!r}")
    options = _edge_options(key)
    v_star = 2 + r * (_vertex_count(key) - 2)
    e_star = 1 + r * (h - 1)
    while True:
        theta = Fraction(v_star, e_star)
        v_new, e_new = _best_edge_sequence_at(key, r, theta, options)
        if v_new - theta * e_new >= 0:
            return Fraction(e_star, v_star)
        v_star, e_star = v_new, e_new


def d_r_star_edge(H1: EdgeOrderedGraph, r, method="parametric"):
    if r < 2:
        raise GraphError("r must be >= 2")
    if H1.graph.e == 0:
        raise GraphError("edge d* needs at least one edge")
    check_cap(H1.graph.e, 12, "edge count for edge d*")
    return d_star_edge_key(H1.key, r, method)


@dataclass
class EdgeMinMax:
    value: Fraction
    ordering: tuple
    subgraph: tuple


def edge_minmax(F: Graph, r, method="parametric", cap=EDGE_ORDER_CAP):
    if r < 2:
        raise GraphError("r must be >= 2")
    if F.e == 0:
        raise GraphError("F must have at least one edge")
    best = None
    h = F.e
    subsets = sorted(range(1, 1 << h), key=lambda s: (-s.bit_count(), s))
    for key, order in sorted(edge_ordering_classes(F, cap).items()):
        top = None
        for subset in subsets:
            sub = edge_order_key([key[t] for t in bits(subset)])
            value = d_star_edge_key(sub, r, method)
            if top is None or value > top[0]:
                top = (value, subset)
                if best is not None and value >= best.value:
                    break
        if best is None or top[0] < best.value:
            best = EdgeMinMax(top[0], order, tuple(order[t] for t in bits(top[1])))
    return best


def m_r_star_edge(F: Graph, r, method="parametric", cap=EDGE_ORDER_CAP):
    return edge_minmax(F, r, method, cap).value


def edge_exponent(m):
    """Step-count exponent 2 - 1/m of the threshold n^(2 - 1/m)."""
    return 2 - 1 / Fraction(m)


@dataclass
class EdgeThreshold:
    m_star: Fraction
    exact: bool
    exponent: Fraction
    note: str = ""


def edge_threshold(F: Graph, r, cap=EDGE_ORDER_CAP):
    """Exact value when the enumeration fits the cap, otherwise a lower bound.

    The fallback bound takes H_1 = F with every later subgraph a single edge,
    which is available under every ordering.
    """
    if F.e == 0:
        raise GraphError("F must have at least one edge")
    try:
        value = m_r_star_edge(F, r, cap=cap)
        return EdgeThreshold(value, True, edge_exponent(value))
    except CapExceeded:
        bound = Fraction(1 + r * (F.e - 1), 2 + r * (F.vertex_count - _isolated(F) - 2))
        return EdgeThreshold(bound, False, edge_exponent(bound), "lower bound only")


def _isolated(F):
    return sum(1 for x in range(F.vertex_count) if F.adjacency[x] == 0)


# ---------------------------------------------------------------------------
# 2-density


def m2(F: Graph, method="auto"):
    """max over subgraphs H with an edge of (e(H)-1)/(v(H)-2), where K_2 counts 1/2."""
    if F.e == 0:
        raise GraphError("m2 needs at least one edge")
    if method == "auto":
        method = "exhaustive" if F.vertex_count <= M2_EXHAUSTIVE_CAP else "flow"
    if method == "exhaustive":
        return _m2_exhaustive(F)
    if method == "flow":
        return _m2_flow(F)
    raise GraphError(f"unknown method {method!r}")


def _m2_exhaustive(F):
    n = F.vertex_count
    check_cap(n, M2_EXHAUSTIVE_CAP, "vertex count for exhaustive m2")
    best = Fraction(1, 2)
    if n < 3:
        return best
    edges = np.zeros(1 << n, dtype=np.int32)
    for k in range(n):
        low = np.arange(1 << k, dtype=np.int64)
        edges[(1 << k) : (1 << (k + 1))] = edges[: 1 << k] + np.bitwise_count(low & F.adjacency[k])
    sizes = np.bitwise_count(np.arange(1 << n, dtype=np.int64))
    for size in range(3, n + 1):
        top = int(edges[sizes == size].max())
        best = max(best, Fraction(top - 1, size - 2))
    return best


def _m2_flow(F):
    problem = RatioProblem(tuple([1] * F.vertex_count), tuple((1, e) for e in F.sorted_edges()), -1, -2)
    ratio = Fraction(1, 2)
    improved = True
    while improved:
        improved = False
        for edge in F.sorted_edges():
            chosen, value = best_closure(problem, ratio, forced=edge)
            if value > 0:
                ratio = Fraction(problem.numerator(chosen), problem.denominator(chosen))
                improved = True
    return ratio


# ---------------------------------------------------------------------------
# clusters of cycles


@dataclass(frozen=True)
class ClkParams:
    ell: int
    k: int
    r: int

    def validate(self, min_k=3):
        if self.ell < 3 or self.k < min_k or self.r < 2:
            raise GraphError(f"need l >= 3, k >= {min_k}, r >= 2; got {self}")
        return self

    @property
    def petals(self):
        return self.r * (self.k - 1) + 1


def clk_star_counts(p: ClkParams):
    """(vertices, edges) of the petal cluster with its center star."""
    return (p.r * (p.ell - 2) + 1) * p.petals + 1, (p.r * (p.ell - 1) + 1) * p.petals


def clk_bal_ub_exponent(p: ClkParams):
    p.validate()
    v, e = clk_star_counts(p)
    return 2 - Fraction(v, e)


def clk_achl_lb_ratio(p: ClkParams):
    q = p.r**p.k - 1
    return Fraction((p.r * (p.ell - 1) + 1) * q, (p.r * (p.ell - 2) + 1) * q + p.r - 1)


def clk_achl_lb_exponent(p: ClkParams):
    p.validate()
    return 2 - 1 / clk_achl_lb_ratio(p)


def clk_plus_m2(p: ClkParams):
    """2-density of the petal cluster, attained by one petal."""
    return Fraction(p.r * (p.ell - 1) - 1, p.r * (p.ell - 2))


def star_pigeonhole_rays(k, r):
    if k < 2 or r < 2:
        raise GraphError("need k >= 2 and r >= 2")
    return r * (k - 1) + 1


def star_pigeonhole_exponent(k, r):
    """Exponent 2 - (m+1)/m for the first star with m = r(k-1)+1 rays."""
    m = star_pigeonhole_rays(k, r)
    return 2 - Fraction(m + 1, m)


@dataclass
class SeparationRow:
    ell: int
    k: int
    r: int
    ub_bal: Fraction
    lb_achl: Fraction

    @property
    def separated(self):
        return self.ub_bal < self.lb_achl


def separation_table(ells, ks, rs):
    rows = []
    for ell in ells:
        for k in ks:
            for r in rs:
                p = ClkParams(ell, k, r)
                if not (3 <= ell <= 8 and 3 <= k <= 8 and 2 <= r <= 5):
                    raise GraphError(f"grid point {p} outside l,k in [3,8], r in [2,5]")
                rows.append(SeparationRow(ell, k, r, clk_bal_ub_exponent(p), clk_achl_lb_exponent(p)))
    return rows


def clk_star_is_balanced(p: ClkParams, cap=400):
    """True iff no subgraph of the cluster with its center star is denser than the whole."""
    p.validate(min_k=1)
    g = petal_cluster(p.ell, p.k, p.r, with_center_star=True)
    check_cap(g.vertex_count, cap, "vertex count for the balance check")
    density, _ = max_density(g)
    return density == Fraction(g.e, g.vertex_count)


def cycle_cluster_with_cycles(ell, k):
    """Edges of k cycles of length ell through vertex 0, each tagged with its cycle."""
    edges, owner = [], []
    nxt = 1
    for cycle in range(k):
        chain = list(range(nxt, nxt + ell - 1))
        nxt += ell - 1
        ring = [0] + chain + [0]
        for a, b in zip(ring, ring[1:]):
            edges.append((min(a, b), max(a, b)))
            owner.append(cycle)
    return edges, owner


def edge_sequence_ratio(order, chosen, r):
    """Ratio (1 + sum c_i (e_i - 1)) / (2 + sum c_i (v_i - 2)) of a sequence.

    ``order`` lists the edges youngest first; ``chosen[i]`` is the edge set of
    H_{i+1} and must contain ``order[i]``.
    """
    position = {edge: i for i, edge in enumerate(order)}
    c = []
    for i, edge in enumerate(order):
        if edge not in chosen[i]:
            raise GraphError(f"subgraph {i + 1} does not contain its edge")
        if any(position[f] < i for f in chosen[i]):
            raise GraphError(f"subgraph {i + 1} uses an older edge")
        if i == 0:
            c.append(r)
        else:
            c.append((r - 1) * sum(c[j] for j in range(i) if edge in chosen[j]))
    numerator = 1 + sum(ci * (len(h) - 1) for ci, h in zip(c, chosen))
    denominator = 2 + sum(ci * (_vertex_count(h) - 2) for ci, h in zip(c, chosen))
    return Fraction(numerator, denominator), c


@dataclass
class SequenceCheck:
    ok: bool
    ratio: Fraction
    closed_form: Fraction
    orderings: int

    def __bool__(self):
        return self.ok


def verify_clk_sequence(p: ClkParams, orderings=20, seed=0):
    """Evaluate the cycle-by-cycle sequence on random edge orderings."""
    p.validate()
    if p.ell * p.k > 30:
        raise CapExceeded(f"l*k = {p.ell * p.k} exceeds the cap of 30")
    edges, owner = cycle_cluster_with_cycles(p.ell, p.k)
    cycle_of = dict(zip(edges, owner))
    expected = clk_achl_lb_ratio(p)
    rng = np.random.default_rng(seed)
    ok = True
    ratio = None
    for trial in range(orderings):
        order = list(edges) if trial == 0 else [edges[i] for i in rng.permutation(len(edges))]
        appearance = []
        for edge in order:
            if cycle_of[edge] not in appearance:
                appearance.append(cycle_of[edge])
        firsts = {}
        for i, edge in enumerate(order):
            firsts.setdefault(cycle_of[edge], i)
        chosen = [frozenset([edge]) for edge in order]
        for j, cycle in enumerate(appearance):
            tail = set(appearance[j:])
            chosen[firsts[cycle]] = frozenset(e for e in edges if cycle_of[e] in tail)
        ratio, c = edge_sequence_ratio(order, chosen, p.r)
        lead = [c[firsts[cycle]] for cycle in appearance]
        wanted = [p.r] + [(p.r - 1) * p.r**j for j in range(1, p.k)]
        ok = ok and ratio == expected and lead == wanted
    return SequenceCheck(ok, ratio, expected, orderings)
