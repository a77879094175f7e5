"""Small labeled graphs, ordered graphs and the enumerations built on them.

Ordered graphs are stored positionally: vertex ``pi[i]`` becomes position ``i``
(position 0 is the youngest vertex).  Two ordered graphs are ordered-isomorphic
exactly when their positional edge sets coincide, so the pair ``(h, mask)``
returned by :func:`ordered_key` is a complete invariant.  Bit
``pair_index(i, j)`` of ``mask`` is set when positions ``i < j`` are adjacent.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

CANONICAL_CAP = 12
ALL_EDGE_SUBSET_CAP = 8
ORDERING_CAP = 9
ORDERED_SUBGRAPH_CAP = 6
INDUCED_SUBGRAPH_CAP = 16


class GraphError(ValueError):
    """Malformed graph input or invalid parameters."""


class CapExceeded(GraphError):
    """An exact enumeration would exceed its configured size cap."""


def check_cap(value, cap, what):
    if value > cap:
        raise CapExceeded(f"{what} = {value} exceeds the cap of {cap}")


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex count must be non-negative")
        normalized = set()
        for edge in self.edges:
            u, v = edge
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{self.vertex_count - 1}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, vertex_count, edges):
        edges = list(edges)
        normalized = {(min(u, v), max(u, v)) for u, v in edges}
        if len(normalized) != len(edges):
            raise GraphError("duplicate edge")
        return cls(vertex_count, frozenset(normalized))

    @property
    def v(self):
        return self.vertex_count

    @property
    def e(self):
        return len(self.edges)

    @cached_property
    def adjacency(self):
        """Neighbourhoods as integer bitmasks."""
        adj = [0] * self.vertex_count
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    def sorted_edges(self):
        return sorted(self.edges)

    def degree(self, vertex):
        return self.adjacency[vertex].bit_count()

    def neighbors(self, vertex):
        return [u for u in range(self.vertex_count) if self.adjacency[vertex] >> u & 1]

    def has_edge(self, u, v):
        return bool(self.adjacency[u] >> v & 1)

    def induced(self, vertices):
        """Induced subgraph relabelled 0..k-1 in the order given."""
        vertices = tuple(vertices)
        index = {x: i for i, x in enumerate(vertices)}
        edges = [(index[a], index[b]) for a, b in self.edges if a in index and b in index]
        return Graph.from_edges(len(vertices), edges)

    def spanned(self, edges):
        """Subgraph spanned by an edge set; vertices relabelled by sorted order."""
        vertices = sorted({x for edge in edges for x in edge})
        index = {x: i for i, x in enumerate(vertices)}
        return Graph.from_edges(len(vertices), [(index[a], index[b]) for a, b in edges]), tuple(vertices)

    def relabel(self, mapping):
        """Apply ``vertex -> mapping[vertex]`` (a permutation of range(v))."""
        return Graph.from_edges(self.vertex_count, [(mapping[a], mapping[b]) for a, b in self.edges])

    def disjoint_union(self, other):
        shift = self.vertex_count
        edges = list(self.edges) + [(a + shift, b + shift) for a, b in other.edges]
        return Graph.from_edges(self.vertex_count + other.vertex_count, edges)

    def is_connected(self):
        if self.vertex_count <= 1:
            return True
        seen = 1
        frontier = 1
        while frontier:
            reach = 0
            for x in _bits(frontier):
                reach |= self.adjacency[x]
            frontier = reach & ~seen
            seen |= frontier
        return seen == (1 << self.vertex_count) - 1

    def to_text(self):
        lines = [f"vertices {self.vertex_count}"]
        lines += [f"{u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"Graph(v={self.vertex_count}, edges={self.sorted_edges()})"


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask):
    """Indices of the set bits of ``mask`` in increasing order."""
    return list(_bits(mask))


# ---------------------------------------------------------------------------
# ordered graphs


def pair_index(i, j):
    """Bit position of the pair ``i < j`` in a positional edge mask."""
    return j * (j - 1) // 2 + i


def ordered_key(graph, pi):
    """Positional invariant ``(h, mask)`` of ``graph`` ordered youngest-first by ``pi``."""
    position = {vertex: i for i, vertex in enumerate(pi)}
    mask = 0
    for a, b in graph.edges:
        i, j = sorted((position[a], position[b]))
        mask |= 1 << pair_index(i, j)
    return (len(pi), mask)


@lru_cache(maxsize=None)
def key_adjacency(key):
    h, mask = key
    adj = [0] * h
    for j in range(1, h):
        base = j * (j - 1) // 2
        for i in range(j):
            if mask >> (base + i) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return tuple(adj)


def key_edge_count(key):
    return key[1].bit_count()


def key_from_adjacency(adj):
    h = len(adj)
    mask = 0
    for j in range(1, h):
        row = adj[j]
        base = j * (j - 1) // 2
        for i in range(j):
            if row >> i & 1:
                mask |= 1 << (base + i)
    return (h, mask)


@lru_cache(maxsize=None)
def key_induced(key, subset):
    """Key of the ordered subgraph induced on the positions in bitmask ``subset``."""
    adj = key_adjacency(key)
    kept = bits(subset)
    index = {p: i for i, p in enumerate(kept)}
    new_adj = []
    for p in kept:
        row = 0
        for q in _bits(adj[p] & subset):
            row |= 1 << index[q]
        new_adj.append(row)
    return key_from_adjacency(new_adj)


def key_without_youngest(key):
    h = key[0]
    if h == 0:
        raise GraphError("the empty ordered graph has no youngest vertex")
    return key_induced(key, ((1 << h) - 1) & ~1)


def key_youngest_degree(key):
    if key[0] == 0:
        return 0
    return key_adjacency(key)[0].bit_count()


def key_graph(key):
    h = key[0]
    adj = key_adjacency(key)
    return Graph.from_edges(h, [(i, j) for j in range(h) for i in range(j) if adj[i] >> j & 1])


@lru_cache(maxsize=None)
def key_is_connected(key):
    return key_graph(key).is_connected()


def key_sub_edge_masks(key):
    """All edge submasks of ``key`` (spanning subgraphs on the same positions)."""
    mask = key[1]
    sub = mask
    while True:
        yield (key[0], sub)
        if sub == 0:
            return
        sub = (sub - 1) & mask


def format_key(key):
    h = key[0]
    adj = key_adjacency(key)
    edges = [f"{i}-{j}" for j in range(h) for i in range(j) if adj[i] >> j & 1]
    return f"h={h}[{','.join(edges)}]"


@dataclass(frozen=True)
class OrderedGraph:
    graph: Graph
    pi: tuple

    def __post_init__(self):
        pi = tuple(self.pi)
        object.__setattr__(self, "pi", pi)
        if sorted(pi) != list(range(self.graph.vertex_count)):
            raise GraphError("pi must be a permutation of the vertex set")

    @classmethod
    def from_key(cls, key):
        return cls(key_graph(key), tuple(range(key[0])))

    @cached_property
    def key(self):
        return ordered_key(self.graph, self.pi)

    @property
    def h(self):
        return len(self.pi)

    def restrict(self, vertices):
        """Induced ordered subgraph on ``vertices`` (labels kept in pi order)."""
        chosen = set(vertices)
        order = [x for x in self.pi if x in chosen]
        return OrderedGraph(self.graph.induced(order), tuple(range(len(order))))

    def __repr__(self):
        return f"OrderedGraph(pi={list(self.pi)}, edges={self.graph.sorted_edges()})"


# ---------------------------------------------------------------------------
# canonical labelling


def _refine(adj, colors):
    n = len(adj)
    count = len(set(colors))
    while True:
        signatures = [
            (colors[v], tuple(sorted(colors[u] for u in _bits(adj[v])))) for v in range(n)
        ]
        ranking = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
        colors = [ranking[sig] for sig in signatures]
        if len(ranking) == count:
            return colors
        count = len(ranking)


def _encode(adj, order):
    n = len(order)
    position = [0] * n
    for i, v in enumerate(order):
        position[v] = i
    code = 0
    for j in range(1, n):
        row = adj[order[j]]
        for i in range(j):
            if row >> order[i] & 1:
                code |= 1 << (n * (n - 1) // 2 - 1 - pair_index(i, j))
    return code


def canonical_form(g, cap=CANONICAL_CAP):
    """Isomorphism-invariant byte label of ``g``.

    Individualisation-refinement search over equitable colourings; among the
    discrete leaves the smallest adjacency code wins.  Interchangeable twin
    vertices are branched on only once.
    """
    n = g.vertex_count
    check_cap(n, cap, "vertex count for canonical form")
    if n == 0:
        return b"\x00"
    adj = g.adjacency
    best = None

    def search(colors):
        nonlocal best
        cells = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        if len(cells) == n:
            order = sorted(range(n), key=colors.__getitem__)
            code = _encode(adj, order)
            if best is None or code < best:
                best = code
            return
        target = min(c for c, members in cells.items() if len(members) > 1)
        representatives = []
        for v in cells[target]:
            if any((adj[u] & ~(1 << v)) == (adj[v] & ~(1 << u)) for u in representatives):
                continue
            representatives.append(v)
            split = [2 * c + (1 if c == target and w != v else 0) for w, c in enumerate(colors)]
            search(_refine(adj, split))

    search(_refine(adj, [0] * n))
    width = n * (n - 1) // 2
    return bytes([n]) + best.to_bytes((width + 7) // 8 or 1, "big")


def is_isomorphic(a, b):
    return a.vertex_count == b.vertex_count and a.e == b.e and canonical_form(a) == canonical_form(b)


def automorphism_count(g):
    """Brute-force |Aut(g)|; intended for tests on small graphs."""
    check_cap(g.vertex_count, ORDERING_CAP, "vertex count for automorphism count")
    return sum(1 for perm in itertools.permutations(range(g.vertex_count)) if g.relabel(perm) == g)


# ---------------------------------------------------------------------------
# enumerations


@dataclass(frozen=True)
class Subgraph:
    """A subgraph together with its embedding: local vertex ``i`` is ``vertices[i]``."""

    graph: Graph
    vertices: tuple
    edges: frozenset


def enumerate_subgraphs(g, mode="induced", cap=None):
    if mode not in ("induced", "all-edge-subsets"):
        raise GraphError(f"unknown enumeration mode {mode!r}")
    if mode == "induced":
        check_cap(g.vertex_count, cap or INDUCED_SUBGRAPH_CAP, "vertex count for induced enumeration")
    else:
        check_cap(g.vertex_count, cap or ALL_EDGE_SUBSET_CAP, "vertex count for edge-subset enumeration")
    result = []
    for subset in range(1 << g.vertex_count):
        vertices = tuple(bits(subset))
        inner = [(a, b) for a, b in g.sorted_edges() if subset >> a & 1 and subset >> b & 1]
        index = {x: i for i, x in enumerate(vertices)}
        if mode == "induced":
            choices = [inner]
        else:
            choices = (
                [edge for t, edge in enumerate(inner) if pick >> t & 1] for pick in range(1 << len(inner))
            )
        for chosen in choices:
            local = Graph.from_edges(len(vertices), [(index[a], index[b]) for a, b in chosen])
            result.append(Subgraph(local, vertices, frozenset(chosen)))
    return result


def enumerate_orderings(g, cap=ORDERING_CAP):
    """One vertex ordering per automorphism orbit (the lexicographically first)."""
    check_cap(g.vertex_count, cap, "vertex count for ordering enumeration")
    seen = {}
    for perm in itertools.permutations(range(g.vertex_count)):
        seen.setdefault(ordered_key(g, perm), perm)
    return list(seen.values())


def ordering_classes(g, cap=ORDERING_CAP):
    """Mapping from ordered key to a representative ordering, for every orbit."""
    check_cap(g.vertex_count, cap, "vertex count for ordering enumeration")
    seen = {}
    for perm in itertools.permutations(range(g.vertex_count)):
        seen.setdefault(ordered_key(g, perm), perm)
    return seen


def induced_ordered_keys(g, cap=ORDERING_CAP):
    """Keys of every nonempty induced subgraph under every ordering."""
    check_cap(g.vertex_count, cap, "vertex count for ordered enumeration")
    keys = set()
    for subset in range(1, 1 << g.vertex_count):
        vertices = bits(subset)
        for perm in itertools.permutations(vertices):
            keys.add(ordered_key_of_subset(g, perm))
    return keys


def ordered_key_of_subset(g, order):
    """Key of the subgraph of ``g`` induced on the vertices in ``order``."""
    position = {x: i for i, x in enumerate(order)}
    mask = 0
    for a, b in g.edges:
        if a in position and b in position:
            i, j = sorted((position[a], position[b]))
            mask |= 1 << pair_index(i, j)
    return (len(order), mask)


def ordered_subgraph_keys(g, cap=ORDERED_SUBGRAPH_CAP):
    """Keys of S(g): all nonempty ordered subgraphs up to ordered isomorphism."""
    check_cap(g.vertex_count, cap, "vertex count for ordered subgraph enumeration")
    keys = set()
    for key in induced_ordered_keys(g):
        keys.update(key_sub_edge_masks(key))
    return sorted(keys)


def enumerate_ordered_subgraphs(g, cap=ORDERED_SUBGRAPH_CAP):
    return [OrderedGraph.from_key(key) for key in ordered_subgraph_keys(g, cap)]


def full_ordered_keys(g):
    """Keys of all orderings of ``g`` itself."""
    return set(ordering_classes(g))


def nonisomorphic_graphs(n, connected=None):
    """All graphs on ``n`` vertices up to isomorphism (small ``n`` only)."""
    check_cap(n, 6, "vertex count for graph generation")
    pairs = list(itertools.combinations(range(n), 2))
    found = {}
    for pick in range(1 << len(pairs)):
        g = Graph.from_edges(n, [pair for t, pair in enumerate(pairs) if pick >> t & 1])
        if connected is not None and g.is_connected() != connected:
            continue
        found.setdefault(canonical_form(g), g)
    return sorted(found.values(), key=lambda g: (g.e, g.sorted_edges()))


# ---------------------------------------------------------------------------
# constructors and parsing

FAMILIES = ("K", "C", "P", "S", "CLK", "PETAL", "CLK_PLUS", "CLK_STAR")


def complete_graph(n):
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def cycle_graph(n):
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n):
    if n < 1:
        raise GraphError("a path needs at least 1 vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(k):
    if k < 1:
        raise GraphError("a star needs at least 1 ray")
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def _add_path(edges, start, end, interior, next_vertex):
    """Append a path start - new interior vertices - end; return the next free label."""
    previous = start
    for _ in range(interior):
        edges.append((previous, next_vertex))
        previous = next_vertex
        next_vertex += 1
    edges.append((previous, end))
    return next_vertex


def cycle_cluster(ell, k):
    """``k`` cycles of length ``ell`` sharing vertex 0."""
    if ell < 3 or k < 1:
        raise GraphError("CLK needs l >= 3 and k >= 1")
    edges = []
    nxt = 1
    for _ in range(k):
        chain = list(range(nxt, nxt + ell - 1))
        nxt += ell - 1
        edges.append((0, chain[0]))
        edges.extend(zip(chain, chain[1:]))
        edges.append((chain[-1], 0))
    return Graph.from_edges(nxt, edges)


def _petal_edges(edges, center, tip, ell, r, nxt):
    for _ in range(r):
        nxt = _add_path(edges, center, tip, ell - 2, nxt)
    return nxt


def petal(ell, r):
    """``r`` internally disjoint paths with ``ell - 1`` edges between vertices 0 and 1."""
    if ell < 3 or r < 2:
        raise GraphError("PETAL needs l >= 3 and r >= 2")
    edges = []
    nxt = _petal_edges(edges, 0, 1, ell, r, 2)
    return Graph.from_edges(nxt, edges)


def petal_cluster(ell, k, r, with_center_star=False):
    """``r(k-1)+1`` petals sharing vertex 0, optionally joined by their missing edges."""
    if ell < 3 or k < 1 or r < 2:
        raise GraphError("CLK_PLUS/CLK_STAR need l >= 3, k >= 1 and r >= 2")
    petals = r * (k - 1) + 1
    edges = []
    nxt = 1
    for _ in range(petals):
        tip = nxt
        nxt = _petal_edges(edges, 0, tip, ell, r, nxt + 1)
        if with_center_star:
            edges.append((0, tip))
    return Graph.from_edges(nxt, edges)


def builtin_graph(name, params):
    name = name.upper()
    params = [int(p) for p in params]
    arity = {"K": 1, "C": 1, "P": 1, "S": 1, "CLK": 2, "PETAL": 2, "CLK_PLUS": 3, "CLK_STAR": 3}
    if name not in arity:
        raise GraphError(f"unknown graph family {name!r}; expected one of {', '.join(FAMILIES)}")
    if len(params) != arity[name]:
        raise GraphError(f"{name} takes {arity[name]} parameter(s), got {len(params)}")
    if name == "K":
        if params[0] < 1:
            raise GraphError("K n needs n >= 1")
        return complete_graph(params[0])
    if name == "C":
        return cycle_graph(params[0])
    if name == "P":
        return path_graph(params[0])
    if name == "S":
        return star_graph(params[0])
    if name == "CLK":
        return cycle_cluster(*params)
    if name == "PETAL":
        return petal(*params)
    return petal_cluster(*params, with_center_star=(name == "CLK_STAR"))


_COMPACT = re.compile(r"^([A-Za-z]+?)_?(\d+)$")


def parse_graph(text):
    """Parse a builtin name such as ``"K4"``, ``"S 3"``, ``"CLK 3 3"`` or an edge list."""
    lines = []
    for raw in text.splitlines() or [text]:
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GraphError("empty graph specification")
    tokens = lines[0].replace(",", " ").split()
    if len(lines) == 1 and tokens[0][0].isalpha() and tokens[0].lower() != "vertices":
        if len(tokens) == 1:
            match = _COMPACT.match(tokens[0])
            if match:
                return builtin_graph(match.group(1), [match.group(2)])
        try:
            return builtin_graph(tokens[0], tokens[1:])
        except ValueError as exc:
            raise GraphError(str(exc)) from exc
    declared = None
    edges = []
    for number, line in enumerate(lines, 1):
        parts = line.split()
        if parts[0].lower() == "vertices":
            if len(parts) != 2 or not parts[1].isdigit() or declared is not None or edges:
                raise GraphError(f"line {number}: malformed vertices header {line!r}")
            declared = int(parts[1])
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphError(f"line {number}: expected 'u v', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphError(f"line {number}: self-loop at vertex {u}")
        edges.append((u, v))
    top = 1 + max((max(edge) for edge in edges), default=-1)
    if declared is not None and top > declared:
        raise GraphError(f"vertex index {top - 1} overflows the declared {declared} vertices")
    return Graph.from_edges(declared if declared is not None else top, edges)


def graph_label(g):
    """Short human-readable description used in reports."""
    return f"v={g.vertex_count},e={g.e}:" + ";".join(f"{a}-{b}" for a, b in g.sorted_edges())
