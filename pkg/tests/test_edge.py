import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from online_ramsey.density import RatioProblem, best_closure, max_density, max_density_exhaustive, max_ratio
from online_ramsey.edge import (
    ClkParams,
    clk_achl_lb_exponent,
    clk_bal_ub_exponent,
    clk_plus_m2,
    clk_star_counts,
    clk_star_is_balanced,
    d_star_edge_key,
    edge_order_key,
    edge_ordering_classes,
    edge_threshold,
    m2,
    m_r_star_edge,
    separation_table,
    star_pigeonhole_exponent,
    verify_clk_sequence,
)
from online_ramsey.graphs import (
    CapExceeded,
    Graph,
    GraphError,
    complete_graph,
    cycle_graph,
    parse_graph,
    path_graph,
    petal_cluster,
    star_graph,
)

from oracles import brute_m2, brute_max_density


@st.composite
def graphs(draw, max_vertices=7):
    n = draw(st.integers(2, max_vertices))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1))
    return Graph.from_edges(n, chosen)


def test_star_threshold_golden():
    result = edge_threshold(star_graph(3), 2)
    assert result.exact and result.m_star == Fraction(7, 8) and result.exponent == Fraction(6, 7)


@pytest.mark.parametrize(
    "g, value",
    [(complete_graph(2), Fraction(1, 2)), (star_graph(3), Fraction(7, 8)), (cycle_graph(3), Fraction(5, 4))],
)
def test_edge_minmax_values(g, value):
    assert m_r_star_edge(g, 2) == value
    assert m_r_star_edge(g, 2, "exhaustive") == value


@given(graphs(5), st.integers(2, 3))
@settings(max_examples=40, deadline=None)
def test_edge_parametric_equals_exhaustive(g, r):
    if g.e > 4:
        return
    for key in edge_ordering_classes(g):
        assert d_star_edge_key(key, r) == d_star_edge_key(key, r, "exhaustive")


def test_edge_order_key_is_label_free():
    a = edge_order_key([(0, 1), (1, 2)])
    b = edge_order_key([(7, 3), (3, 9)])
    assert a == b
    assert edge_order_key([(0, 1), (2, 3)]) != a


def test_edge_threshold_falls_back_to_lower_bound():
    result = edge_threshold(complete_graph(4), 2, cap=5)
    assert not result.exact and result.note == "lower bound only"
    exact = edge_threshold(complete_graph(4), 2)
    assert result.m_star <= exact.m_star


def test_edge_ordering_cap():
    with pytest.raises(CapExceeded):
        edge_ordering_classes(complete_graph(5))


def test_clk_golden_values():
    p = ClkParams(3, 3, 2)
    assert clk_bal_ub_exponent(p) == Fraction(34, 25)
    assert clk_achl_lb_exponent(p) == 2 - Fraction(22, 35)
    assert clk_star_counts(p) == (16, 25)
    g = parse_graph("CLK_STAR 3 3 2")
    assert (g.vertex_count, g.e) == (16, 25)


def test_clk_more_values():
    assert clk_achl_lb_exponent(ClkParams(3, 3, 3)) == Fraction(129, 91)
    assert clk_bal_ub_exponent(ClkParams(4, 3, 2)) == Fraction(44, 35)


@pytest.mark.parametrize("ell, k, r", [(3, 3, 2), (4, 3, 2), (3, 4, 3), (5, 3, 2)])
def test_closed_form_counts_match_construction(ell, k, r):
    g = petal_cluster(ell, k, r, with_center_star=True)
    assert (g.vertex_count, g.e) == clk_star_counts(ClkParams(ell, k, r))


@pytest.mark.parametrize("ell, k, r", [(3, 3, 2), (4, 3, 2), (3, 4, 2)])
def test_clk_plus_two_density(ell, k, r):
    g = petal_cluster(ell, k, r)
    value = clk_plus_m2(ClkParams(ell, k, r))
    assert m2(g, "flow") == value
    if g.vertex_count <= 22:
        assert m2(g, "exhaustive") == value


def test_clk_star_is_balanced():
    assert clk_star_is_balanced(ClkParams(3, 3, 2))
    assert clk_star_is_balanced(ClkParams(4, 3, 3))


def test_separation_grid():
    rows = separation_table(range(3, 7), range(3, 7), range(2, 5))
    assert len(rows) == 48 and all(row.separated for row in rows)


def test_clk_validation():
    with pytest.raises(GraphError):
        ClkParams(3, 2, 2).validate()
    with pytest.raises(GraphError):
        separation_table([9], [3], [2])


@pytest.mark.parametrize("ell, k, r", list(itertools.product([3, 4], [3, 4], [2, 3])))
def test_clk_sequence(ell, k, r):
    check = verify_clk_sequence(ClkParams(ell, k, r))
    assert check and check.ratio == check.closed_form


def test_clk_sequence_example_ratio():
    assert verify_clk_sequence(ClkParams(3, 3, 2)).ratio == Fraction(35, 22)


def test_star_pigeonhole_exponent():
    assert star_pigeonhole_exponent(3, 2) == Fraction(4, 5)
    assert star_pigeonhole_exponent(2, 2) == Fraction(2, 3)
    assert star_pigeonhole_exponent(2, 3) == Fraction(3, 4)


@given(graphs(8))
@settings(max_examples=80, deadline=None)
def test_density_flow_matches_brute_force(g):
    value, chosen = max_density(g)
    assert value == brute_max_density(g.vertex_count, g.edges) == max_density_exhaustive(g)
    inside = sum(1 for a, b in g.edges if a in chosen and b in chosen)
    assert Fraction(inside, len(chosen)) == value


@given(graphs(8))
@settings(max_examples=80, deadline=None)
def test_m2_methods_match_brute_force(g):
    expected = brute_m2(g.vertex_count, g.edges)
    assert m2(g, "exhaustive") == expected
    assert m2(g, "flow") == expected


def test_m2_examples():
    assert m2(complete_graph(3)) == 2
    assert m2(complete_graph(2)) == Fraction(1, 2)
    assert m2(path_graph(3)) == 1
    with pytest.raises(GraphError):
        m2(Graph.from_edges(3, []))


def test_ratio_problem_with_forced_nodes():
    # nodes 0,1,2; one heavy item on {1,2}; forcing node 0 lowers the best ratio
    problem = RatioProblem((1, 1, 1), ((3, (1, 2)), (1, (0, 1))))
    assert max_ratio(problem, [0, 1, 2])[0] == Fraction(3, 2)
    ratio, chosen = max_ratio(problem, [0, 1, 2], forced=(0,))
    assert 0 in chosen and ratio == Fraction(4, 3)
    chosen, value = best_closure(problem, Fraction(2), forced=(0,))
    assert value < 0
