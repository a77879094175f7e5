"""Threshold exponents of the vertex Achlioptas and balanced Ramsey games.

Two independent routes are implemented:

* the potential ``lambda`` on ordered graphs, built as an exact concave
  envelope in theta, whose max-min root gives ``theta_star``;
* the min-max density ``m_star`` over orderings and coefficient sequences.

The routes must satisfy ``theta_star * m_star == 1``, which
:func:`check_equivalence` verifies together with brute-force oracles.

Most functions work on positional ordered keys ``(h, mask)`` from
:mod:`online_ramsey.graphs`; the public wrappers accept graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .envelope import LineEnvelope, Line, NoRootError
from .graphs import (
    CapExceeded,
    Graph,
    GraphError,
    OrderedGraph,
    bits,
    check_cap,
    format_key,
    key_adjacency,
    key_induced,
    key_sub_edge_masks,
    key_without_youngest,
    nonisomorphic_graphs,
    ordered_key_of_subset,
    ordered_subgraph_keys,
    ordering_classes,
)

MODES = ("induced", "all-edge-subsets")
VERTEX_CAP = 12
EXHAUSTIVE_SEQUENCE_CAP = 200_000


def _check_r(r):
    if int(r) != r or r < 2:
        raise GraphError("r must be an integer >= 2")


def _check_mode(mode):
    if mode not in MODES:
        raise GraphError(f"unknown mode {mode!r}")


def _edges_within(adj, subset):
    return sum((adj[x] & subset).bit_count() for x in bits(subset)) // 2


# ---------------------------------------------------------------------------
# the lambda potential


@lru_cache(maxsize=None)
def lambda_envelope_key(key, r, mode="induced"):
    """Envelope of theta -> lambda(key) on [0, 2]."""
    h = key[0]
    if h == 0:
        return LineEnvelope.constant(0)
    adj = key_adjacency(key)
    rest = key_without_youngest(key)
    base = lambda_envelope_key(rest, r, mode).shift(1, -adj[0].bit_count())
    lines = []
    others = ((1 << h) - 1) & ~1
    for subset in _submasks(others):
        inner = key_induced(key, subset)
        youngest_edges = adj[0] & subset
        if mode == "induced":
            env = lambda_envelope_key(inner, r, mode)
            lines.extend(Line(l.intercept, l.slope - youngest_edges.bit_count()) for l in env.lines)
            continue
        for sub_inner in key_sub_edge_masks(inner):
            env = lambda_envelope_key(sub_inner, r, mode)
            for chosen in _submasks(youngest_edges):
                lines.extend(Line(l.intercept, l.slope - chosen.bit_count()) for l in env.lines)
    inner_min = LineEnvelope(tuple(lines))
    result = base + inner_min.scale(r - 1)
    assert result.is_nonincreasing()
    return result


@lru_cache(maxsize=None)
def lambda_value_key(key, r, theta, mode="induced"):
    """Direct recursive evaluation of lambda at a fixed rational theta."""
    h = key[0]
    if h == 0:
        return Fraction(0)
    adj = key_adjacency(key)
    base = lambda_value_key(key_without_youngest(key), r, theta, mode) - theta * adj[0].bit_count()
    others = ((1 << h) - 1) & ~1
    best = None
    for subset in _submasks(others):
        inner = key_induced(key, subset)
        youngest = adj[0] & subset
        if mode == "induced":
            candidates = [(inner, youngest.bit_count())]
        else:
            candidates = [
                (sub, chosen.bit_count()) for sub in key_sub_edge_masks(inner) for chosen in _submasks(youngest)
            ]
        for sub, degree in candidates:
            value = lambda_value_key(sub, r, theta, mode) - theta * degree
            if best is None or value < best:
                best = value
    return 1 + base + (r - 1) * best


def _submasks(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def lambda_envelope(H: OrderedGraph, r, mode="induced"):
    _check_r(r)
    _check_mode(mode)
    check_cap(H.h, VERTEX_CAP, "vertex count for lambda")
    return lambda_envelope_key(H.key, r, mode)


def lambda_at(H: OrderedGraph, r, theta, mode="induced"):
    return lambda_envelope(H, r, mode).at(Fraction(theta))


def min_lambda_envelope_key(key, r, mode="induced"):
    """Envelope of the minimum of lambda over all nonempty induced ordered subgraphs."""
    h = key[0]
    lines = []
    for subset in range(1, 1 << h):
        lines.extend(lambda_envelope_key(key_induced(key, subset), r, mode).lines)
    return LineEnvelope(tuple(lines))


@dataclass
class ThresholdResult:
    graph: Graph
    r: int
    theta_star: Fraction
    ordering: tuple
    minimizing_subgraph: tuple
    envelope: LineEnvelope
    per_ordering: dict = field(default_factory=dict)

    @property
    def m_star(self):
        return 1 / self.theta_star


def Lambda_root(F: Graph, r, mode="induced"):
    """theta_star = max over orderings of the root of min over H of lambda(H).

    Returns the attaining ordering and the induced subgraph (as vertices of
    ``F``) whose lambda vanishes there.
    """
    _check_r(r)
    if F.e == 0:
        raise GraphError("F must have at least one edge")
    check_cap(F.vertex_count, VERTEX_CAP, "vertex count for theta_star")
    best = None
    per_ordering = {}
    for key, pi in sorted(ordering_classes(F).items()):
        env = min_lambda_envelope_key(key, r, mode)
        root = env.root()
        per_ordering[pi] = root
        if best is None or root > best[0]:
            best = (root, pi, key, env)
    root, pi, key, env = best
    h = key[0]
    attaining = [
        subset
        for subset in range(1, 1 << h)
        if lambda_envelope_key(key_induced(key, subset), r, mode).at(root) == 0
    ]
    subset = max(attaining, key=lambda s: (s.bit_count(), -s))
    vertices = tuple(pi[p] for p in bits(subset))
    return ThresholdResult(F, r, root, pi, vertices, env, per_ordering)


# ---------------------------------------------------------------------------
# the min-max density


@dataclass(frozen=True)
class SequenceChoice:
    """A base ordered graph plus the chosen subgraphs for positions 2..h.

    ``vertex_sets[i - 2]`` holds the vertices (labels of ``base.graph``) of the
    subgraph chosen for the i-th youngest vertex.  ``edge_sets`` may pin the
    edge sets explicitly; by default each chosen subgraph is induced.
    """

    base: OrderedGraph
    vertex_sets: tuple
    edge_sets: tuple | None = None

    def __post_init__(self):
        pi = self.base.pi
        if len(self.vertex_sets) != len(pi) - 1:
            raise GraphError("need one chosen subgraph for every vertex after the youngest")
        for i, chosen in enumerate(self.vertex_sets, start=1):
            if pi[i] not in chosen:
                raise GraphError(f"chosen subgraph {i + 1} must contain vertex {pi[i]}")
            if not set(chosen) <= set(pi[i:]):
                raise GraphError(f"chosen subgraph {i + 1} may only use vertices from position {i + 1} on")
        if self.edge_sets is not None:
            for chosen, edges in zip(self.vertex_sets, self.edge_sets):
                for a, b in edges:
                    if a not in chosen or b not in chosen or not self.base.graph.has_edge(a, b):
                        raise GraphError(f"edge ({a}, {b}) is not available in its chosen subgraph")

    def parts(self):
        """(vertex set, edge count) for every member of the sequence, H_1 first."""
        g = self.base.graph
        result = [(frozenset(self.base.pi), g.e)]
        for i, chosen in enumerate(self.vertex_sets):
            if self.edge_sets is None:
                count = sum(1 for a, b in g.edges if a in chosen and b in chosen)
            else:
                count = len(self.edge_sets[i])
            result.append((frozenset(chosen), count))
        return result


def coefficients_c(choice: SequenceChoice, r):
    _check_r(r)
    parts = choice.parts()
    pi = choice.base.pi
    coefficients = [r]
    for i in range(1, len(pi)):
        total = sum(coefficients[j] for j in range(i) if pi[i] in parts[j][0])
        coefficients.append((r - 1) * total)
    return coefficients


def sequence_counts(choice: SequenceChoice, r):
    """(v*, e*) of a sequence: 1 + sum c_i (v_i - 1) and sum c_i e_i."""
    c = coefficients_c(choice, r)
    parts = choice.parts()
    v_star = 1 + sum(ci * (len(vs) - 1) for ci, (vs, _) in zip(c, parts))
    e_star = sum(ci * e for ci, (_, e) in zip(c, parts))
    return v_star, e_star


def sequence_ratio(choice: SequenceChoice, r):
    v_star, e_star = sequence_counts(choice, r)
    return Fraction(e_star, v_star)


def _sequence_options(key, mode):
    """Per position j >= 1: list of (subset mask, edge count) choices for H_j."""
    h = key[0]
    adj = key_adjacency(key)
    options = []
    for j in range(1, h):
        later = ((1 << h) - 1) & ~((1 << (j + 1)) - 1)
        per = []
        for rest in _submasks(later):
            subset = rest | (1 << j)
            full = _edges_within(adj, subset)
            if mode == "induced":
                per.append((subset, full))
            else:
                per.extend((subset, count) for count in _edge_subset_sizes(full))
        options.append(per)
    return options


def _edge_subset_sizes(count):
    """Sizes of all 2**count edge subsets, with multiplicity (honest enumeration)."""
    return [pick.bit_count() for pick in range(1 << count)]


def sequence_pairs(key, r, mode="induced"):
    """All (v*, e*) over every sequence choice for H_1 = ``key`` (brute force)."""
    h = key[0]
    options = _sequence_options(key, mode)
    size = 1
    for per in options:
        size *= len(per)
    check_cap(size, EXHAUSTIVE_SEQUENCE_CAP, "number of coefficient sequences")
    adj = key_adjacency(key)
    full = (1 << h) - 1
    base_edges = _edges_within(adj, full)
    pairs = set()
    for picks in itertools.product(*options):
        subsets = [full] + [s for s, _ in picks]
        edge_counts = [base_edges] + [e for _, e in picks]
        c = [r]
        for i in range(1, h):
            c.append((r - 1) * sum(c[j] for j in range(i) if subsets[j] >> i & 1))
        v_star = 1 + sum(ci * (s.bit_count() - 1) for ci, s in zip(c, subsets))
        e_star = sum(ci * e for ci, e in zip(c, edge_counts))
        pairs.add((v_star, e_star))
    return pairs


def _best_sequence_at(key, r, theta, options):
    """Minimum of v* - theta e* over sequences, via backward dynamic programming.

    Returns (v*, e*) of a minimizing sequence.
    """
    h = key[0]
    best = [None] * h
    for j in range(h - 1, 0, -1):
        top = None
        for subset, edges in options[j - 1]:
            v_part = subset.bit_count() - 1
            e_part = edges
            for t in bits(subset & ~(1 << j)):
                v_part += (r - 1) * best[t][0]
                e_part += (r - 1) * best[t][1]
            value = v_part - theta * e_part
            if top is None or value < top[0]:
                top = (value, v_part, e_part)
        best[j] = (top[1], top[2])
    adj = key_adjacency(key)
    v_part = h - 1
    e_part = _edges_within(adj, (1 << h) - 1)
    for t in range(1, h):
        v_part += (r - 1) * best[t][0]
        e_part += (r - 1) * best[t][1]
    return 1 + r * v_part, r * e_part


@lru_cache(maxsize=None)
def d_star_key(key, r, method="parametric", mode="induced"):
    """Maximum of e*/v* over all sequence choices with H_1 = ``key``."""
    h = key[0]
    if h == 0:
        raise GraphError("d* needs a nonempty ordered graph")
    if key[1] == 0:
        return Fraction(0)
    if method == "exhaustive":
        return max(Fraction(e, v) for v, e in sequence_pairs(key, r, mode))
    if method != "parametric":
        raise GraphError(f"unknown method {method!r}")
    options = _sequence_options(key, mode)
    adj = key_adjacency(key)
    v_star = 1 + r * (h - 1)
    e_star = r * _edges_within(adj, (1 << h) - 1)
    while True:
        theta = Fraction(v_star, e_star)
        v_new, e_new = _best_sequence_at(key, r, theta, options)
        if v_new - theta * e_new >= 0:
            return Fraction(e_star, v_star)
        v_star, e_star = v_new, e_new


def d_r_star(H1: OrderedGraph, r, method="parametric", mode="induced"):
    _check_r(r)
    _check_mode(mode)
    if H1.h == 0:
        raise GraphError("d* needs a nonempty ordered graph")
    check_cap(H1.h, VERTEX_CAP, "vertex count for d*")
    return d_star_key(H1.key, r, method, mode)


@dataclass
class MinMaxResult:
    value: Fraction
    ordering: tuple
    subgraph: tuple


def vertex_minmax(F: Graph, r, method="parametric"):
    """min over orderings of max over induced H_1 of d*, with the attaining pair."""
    _check_r(r)
    if F.e == 0:
        raise GraphError("F must have at least one edge")
    check_cap(F.vertex_count, VERTEX_CAP, "vertex count for m*")
    best = None
    subsets = sorted(range(1, 1 << F.vertex_count), key=lambda s: (-s.bit_count(), s))
    for key, pi in sorted(ordering_classes(F).items()):
        top = None
        for subset in subsets:
            value = d_star_key(key_induced(key, subset), r, method)
            if top is None or value > top[0]:
                top = (value, subset)
                if best is not None and value >= best.value:
                    break
        if best is None or top[0] < best.value:
            best = MinMaxResult(top[0], pi, tuple(pi[p] for p in bits(top[1])))
    return best


def m_r_star_vertex(F: Graph, r, method="parametric"):
    return vertex_minmax(F, r, method).value


# ---------------------------------------------------------------------------
# oracles and consistency checks


def mu_star_pairs(F: Graph, pi, r):
    """(v*, e*) for every H_1 subset of F (any edge subset) and every sequence."""
    check_cap(F.vertex_count, 5, "vertex count for the sequence oracle")
    pairs = set()
    keys = set()
    for subset in range(1, 1 << F.vertex_count):
        order = [x for x in pi if subset >> x & 1]
        keys.update(key_sub_edge_masks(ordered_key_of_subset(F, order)))
    for key in keys:
        pairs.update(sequence_pairs(key, r, "all-edge-subsets"))
    return pairs


def mu_star_oracle(F: Graph, pi, r, theta):
    """Brute-force min over all sequence choices of v* - theta e*."""
    _check_r(r)
    theta = Fraction(theta)
    return min(v - theta * e for v, e in mu_star_pairs(F, tuple(pi), r))


def default_theta_grid():
    return [Fraction(i, 10) for i in range(1, 21)]


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    checks: int = 0
    counterexample: str | None = None

    def record(self, ok, describe):
        self.checks += 1
        if not ok and self.passed:
            self.passed = False
            self.counterexample = describe()
        return ok

    def merge(self, other):
        self.checks += other.checks
        if not other.passed and self.passed:
            self.passed = False
            self.counterexample = other.counterexample


def check_equivalence(F: Graph, r, thetas=None, with_oracle=True):
    """Cross-check the two threshold routes and the enumeration reductions."""
    report = CheckReport(f"equivalence v={F.vertex_count} e={F.e} r={r}")
    thetas = list(thetas or default_theta_grid())
    result = Lambda_root(F, r)
    m_star = m_r_star_vertex(F, r)
    report.record(
        result.theta_star * m_star == 1,
        lambda: f"theta*={result.theta_star} m*={m_star} for {F!r}",
    )
    for key in ordered_subgraph_keys(F):
        induced_env = lambda_envelope_key(key, r, "induced")
        full_env = lambda_envelope_key(key, r, "all-edge-subsets")
        report.record(
            induced_env == full_env,
            lambda: f"lambda envelopes differ on {format_key(key)}: {induced_env} vs {full_env}",
        )
        if key[1]:
            values = {
                "parametric": d_star_key(key, r, "parametric"),
                "exhaustive": d_star_key(key, r, "exhaustive"),
                "all-edge": d_star_key(key, r, "exhaustive", "all-edge-subsets"),
            }
            report.record(
                len(set(values.values())) == 1,
                lambda: f"d* disagrees on {format_key(key)}: {values}",
            )
    if with_oracle and F.vertex_count <= 5:
        for key, pi in sorted(ordering_classes(F).items()):
            pairs = mu_star_pairs(F, pi, r)
            env = min_lambda_envelope_key(key, r)
            for theta in thetas + [result.theta_star]:
                oracle = min(v - theta * e for v, e in pairs)
                report.record(
                    oracle == env.at(theta),
                    lambda: f"oracle {oracle} != min lambda {env.at(theta)} at theta={theta}, pi={pi}",
                )
    return report


def youngest_vertex_minimizer_check(F: Graph, r, thetas=None):
    """Minimizers of lambda over subgraphs through the youngest vertex.

    For every ordered subgraph (H, pi) of F and every theta, the subgraphs J
    containing the youngest vertex that minimize lambda(J) must be exactly the
    ones minimizing lambda(J - u1) - theta deg_J(u1), and each minimizer must
    satisfy lambda(J) = 1 + r (lambda(J - u1) - theta deg_J(u1)).
    """
    _check_r(r)
    thetas = [Fraction(t) for t in (thetas or [Fraction(i, 10) for i in range(21)])]
    report = CheckReport(f"youngest-vertex minimizers v={F.vertex_count} e={F.e} r={r}")
    mode = "all-edge-subsets"
    for key in ordered_subgraph_keys(F):
        h = key[0]
        family = []
        for rest in _submasks(((1 << h) - 1) & ~1):
            for sub in key_sub_edge_masks(key_induced(key, rest | 1)):
                family.append(sub)
        for theta in thetas:
            whole = {}
            reduced = {}
            for sub in family:
                whole[sub] = lambda_envelope_key(sub, r, mode).at(theta)
                reduced[sub] = (
                    lambda_envelope_key(key_without_youngest(sub), r, mode).at(theta)
                    - theta * key_adjacency(sub)[0].bit_count()
                )
            low_whole = min(whole.values())
            low_reduced = min(reduced.values())
            arg_whole = {s for s, v in whole.items() if v == low_whole}
            arg_reduced = {s for s, v in reduced.items() if v == low_reduced}
            report.record(
                arg_whole == arg_reduced,
                lambda: f"minimizer sets differ for {format_key(key)} at theta={theta}",
            )
            for sub in arg_whole:
                report.record(
                    whole[sub] == 1 + r * reduced[sub],
                    lambda: f"identity fails for {format_key(sub)} at theta={theta}",
                )
    return report


def small_graphs_with_edges(max_vertices):
    """All graphs (up to isomorphism) on 1..max_vertices vertices with an edge."""
    return [g for n in range(1, max_vertices + 1) for g in nonisomorphic_graphs(n) if g.e >= 1]


def verify_equivalence_suite(max_vertices=4, rs=(2, 3), with_oracle=True):
    report = CheckReport(f"equivalence suite v<={max_vertices} r in {list(rs)}")
    for r in rs:
        for F in small_graphs_with_edges(max_vertices):
            report.merge(check_equivalence(F, r, with_oracle=with_oracle))
    return report


__all__ = [
    "CapExceeded",
    "CheckReport",
    "Lambda_root",
    "MinMaxResult",
    "SequenceChoice",
    "ThresholdResult",
    "check_equivalence",
    "coefficients_c",
    "d_r_star",
    "lambda_at",
    "lambda_envelope",
    "youngest_vertex_minimizer_check",
    "m_r_star_vertex",
    "mu_star_oracle",
    "sequence_ratio",
    "vertex_minmax",
]
