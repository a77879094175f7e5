import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from online_ramsey.graphs import (
    CapExceeded,
    Graph,
    GraphError,
    OrderedGraph,
    automorphism_count,
    canonical_form,
    complete_graph,
    cycle_cluster,
    cycle_graph,
    enumerate_subgraphs,
    is_isomorphic,
    key_induced,
    key_is_connected,
    key_without_youngest,
    nonisomorphic_graphs,
    ordered_key,
    ordered_subgraph_keys,
    ordering_classes,
    parse_graph,
    path_graph,
    petal_cluster,
    star_graph,
)

from oracles import brute_automorphisms, brute_isomorphic


@st.composite
def small_graphs(draw, max_vertices=6):
    n = draw(st.integers(1, max_vertices))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@given(small_graphs(), st.randoms())
@settings(max_examples=150, deadline=None)
def test_canonical_form_ignores_labels(g, rnd):
    perm = list(range(g.vertex_count))
    rnd.shuffle(perm)
    assert canonical_form(g.relabel(perm)) == canonical_form(g)


@given(small_graphs(5), small_graphs(5))
@settings(max_examples=200, deadline=None)
def test_isomorphism_matches_brute_force(a, b):
    expected = brute_isomorphic(a.vertex_count, a.edges, b.vertex_count, b.edges)
    assert is_isomorphic(a, b) == expected


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34)])
def test_number_of_graphs_up_to_isomorphism(n, count):
    assert len(nonisomorphic_graphs(n)) == count


def test_connected_graphs_on_four_vertices():
    assert len(nonisomorphic_graphs(4, connected=True)) == 6


@pytest.mark.parametrize(
    "g, expected",
    [(complete_graph(4), 24), (cycle_graph(5), 10), (path_graph(4), 2), (star_graph(3), 6)],
)
def test_automorphism_counts(g, expected):
    assert automorphism_count(g) == expected == brute_automorphisms(g.vertex_count, g.edges)


@given(small_graphs(5))
@settings(max_examples=60, deadline=None)
def test_ordering_classes_are_orbits(g):
    classes = ordering_classes(g)
    assert len(classes) == math.factorial(g.vertex_count) // automorphism_count(g)
    for key, pi in classes.items():
        assert ordered_key(g, pi) == key


def test_ordered_subgraphs_of_an_edge():
    # K1, two isolated vertices, and the edge
    assert ordered_subgraph_keys(complete_graph(2)) == [(1, 0), (2, 0), (2, 1)]


def test_ordered_subgraphs_of_path_distinguish_orders():
    keys = ordered_subgraph_keys(path_graph(3))
    three = [k for k in keys if k[0] == 3]
    # on three ordered vertices: every subset of the edges of the three orderings of P3
    assert (3, 0b011) in three and (3, 0b101) in three and (3, 0b110) in three
    assert (3, 0b111) not in three


def test_key_helpers():
    key = ordered_key(complete_graph(3), (0, 1, 2))
    assert key == (3, 0b111)
    assert key_without_youngest(key) == (2, 1)
    assert key_induced(key, 0b101) == (2, 1)
    assert key_is_connected((3, 0b001)) is False


def test_ordered_graph_restrict_keeps_order():
    h = OrderedGraph(path_graph(3), (2, 0, 1))
    sub = h.restrict([1, 2])
    assert sub.h == 2 and sub.graph.e == 1


def test_enumerate_subgraphs_counts():
    k3 = complete_graph(3)
    assert len(enumerate_subgraphs(k3, "induced")) == 8
    # sum over vertex subsets of 2^(edges inside)
    assert len(enumerate_subgraphs(k3, "all-edge-subsets")) == 1 + 3 + 3 * 2 + 8


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 2)])


@pytest.mark.parametrize(
    "text, v, e",
    [
        ("K4", 4, 6),
        ("S 3", 4, 3),
        ("S_3", 4, 3),
        ("C5", 5, 5),
        ("P3", 3, 2),
        ("CLK 3 3", 7, 9),
        ("CLK_STAR 3 3 2", 16, 25),
        ("vertices 4\n0 1\n1 2  # comment\n", 4, 2),
        ("0 1\n1 2\n2 0", 3, 3),
    ],
)
def test_parse_graph(text, v, e):
    g = parse_graph(text)
    assert (g.vertex_count, g.e) == (v, e)


@pytest.mark.parametrize("text", ["", "Q3", "K", "vertices 2\n0 5", "0 0", "K 2 3", "0 1 2"])
def test_parse_graph_rejects(text):
    with pytest.raises(GraphError):
        parse_graph(text)


def test_cycle_cluster_shape():
    g = cycle_cluster(4, 3)
    assert g.vertex_count == 1 + 3 * 3 and g.e == 12 and g.degree(0) == 6


def test_petal_cluster_with_star():
    g = petal_cluster(3, 3, 2, with_center_star=True)
    assert (g.vertex_count, g.e) == (16, 25)
    assert g.is_connected()


def test_caps_raise():
    with pytest.raises(CapExceeded):
        canonical_form(complete_graph(13))
    with pytest.raises(CapExceeded):
        ordering_classes(complete_graph(10))
