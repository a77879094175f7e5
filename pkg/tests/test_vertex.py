import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from online_ramsey.graphs import (
    Graph,
    GraphError,
    OrderedGraph,
    complete_graph,
    nonisomorphic_graphs,
    ordering_classes,
    path_graph,
    star_graph,
)
from online_ramsey.vertex import (
    Lambda_root,
    SequenceChoice,
    check_equivalence,
    coefficients_c,
    d_r_star,
    lambda_at,
    lambda_envelope,
    youngest_vertex_minimizer_check,
    m_r_star_vertex,
    mu_star_oracle,
    sequence_ratio,
    vertex_minmax,
)

from oracles import brute_lambda, brute_min_lambda, brute_theta_star

K2, K3, K4, P3 = complete_graph(2), complete_graph(3), complete_graph(4), path_graph(3)


@pytest.mark.parametrize(
    "g, r, theta",
    [
        (K2, 2, Fraction(3, 2)),
        (K3, 2, Fraction(5, 6)),
        (P3, 2, Fraction(5, 4)),
        (K4, 2, Fraction(7, 12)),
        (complete_graph(5), 2, Fraction(9, 20)),
    ],
)
def test_theta_star_golden(g, r, theta):
    assert Lambda_root(g, r).theta_star == theta
    assert m_r_star_vertex(g, r) == 1 / theta


@pytest.mark.parametrize("g", [K2, P3, K3, star_graph(3)])
@pytest.mark.parametrize("r", [2, 3])
def test_theta_star_matches_brute_force_scan(g, r):
    expected = brute_theta_star(g.vertex_count, g.edges, r)
    assert Lambda_root(g, r).theta_star == expected


@given(st.sampled_from([g for n in (1, 2, 3, 4) for g in nonisomorphic_graphs(n)]),
       st.integers(2, 3), st.fractions(0, 2, max_denominator=12), st.data())
@settings(max_examples=80, deadline=None)
def test_lambda_matches_direct_definition(g, r, theta, data):
    pi = data.draw(st.permutations(range(g.vertex_count)))
    ordered = OrderedGraph(g, tuple(pi))
    edges = frozenset(g.edges)
    assert lambda_at(ordered, r, theta) == brute_lambda(tuple(pi), edges, r, theta)
    assert lambda_at(ordered, r, theta, "all-edge-subsets") == lambda_at(ordered, r, theta)


def test_lambda_small_values():
    k1 = OrderedGraph(Graph.from_edges(1, []), (0,))
    k2 = OrderedGraph(K2, (0, 1))
    assert lambda_at(k1, 2, 1) == 1
    assert lambda_at(k2, 2, 0) == 2
    assert brute_min_lambda(2, K2.edges, (0, 1), 2, 0) == 1
    assert lambda_at(k2, 2, Fraction(3, 2)) == 0
    assert lambda_envelope(k2, 2).is_nonincreasing()


def test_coefficient_sequence_example():
    base = OrderedGraph(K3, (0, 1, 2))
    choice = SequenceChoice(base, ((1, 2), (2,)))
    assert coefficients_c(choice, 2) == [2, 2, 4]
    assert sequence_ratio(choice, 2) == Fraction(8, 7)
    assert d_r_star(base, 2) == Fraction(6, 5)
    assert d_r_star(base, 2, "exhaustive") == Fraction(6, 5)


def test_sequence_choice_validation():
    base = OrderedGraph(K3, (0, 1, 2))
    with pytest.raises(GraphError):
        SequenceChoice(base, ((0, 1), (2,)))
    with pytest.raises(GraphError):
        SequenceChoice(base, ((1,),))


def test_minmax_values():
    assert vertex_minmax(K2, 2).value == Fraction(2, 3)
    assert vertex_minmax(K3, 2).value == Fraction(6, 5)
    assert vertex_minmax(P3, 2).value == Fraction(4, 5)


def test_p3_orderings_differ():
    result = Lambda_root(P3, 2)
    assert sorted(result.per_ordering.values()) == [Fraction(7, 6), Fraction(7, 6), Fraction(5, 4)]
    assert result.ordering in [pi for pi, v in result.per_ordering.items() if v == Fraction(5, 4)]


def test_oracle_values():
    assert mu_star_oracle(K2, (0, 1), 2, 0) == 1
    assert mu_star_oracle(K2, (0, 1), 2, Fraction(3, 2)) == 0
    assert mu_star_oracle(K3, (0, 1, 2), 2, Fraction(5, 6)) == 0


@pytest.mark.parametrize("g", [K2, P3, K3, star_graph(3)])
def test_oracle_equals_min_lambda(g):
    for pi in ordering_classes(g).values():
        for i in range(1, 21):
            theta = Fraction(i, 10)
            assert mu_star_oracle(g, pi, 2, theta) == brute_min_lambda(g.vertex_count, g.edges, pi, 2, theta)


@pytest.mark.parametrize("g", [K2, P3, K3, K4, star_graph(3), Graph.from_edges(4, [(0, 1), (2, 3)])])
@pytest.mark.parametrize("r", [2, 3])
def test_equivalence_per_graph(g, r):
    report = check_equivalence(g, r)
    assert report.passed, report.counterexample


@pytest.mark.parametrize("g, r", [(K3, 2), (P3, 2), (K4, 3), (star_graph(3), 2)])
def test_youngest_vertex_minimizers_reduce(g, r):
    report = youngest_vertex_minimizer_check(g, r)
    assert report.passed and report.checks > 0, report.counterexample


def test_errors():
    with pytest.raises(GraphError):
        Lambda_root(Graph.from_edges(1, []), 2)
    with pytest.raises(GraphError):
        Lambda_root(K2, 1)


def test_threshold_only_depends_on_isomorphism_class():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    relabelled = g.relabel([2, 0, 3, 1])
    assert Lambda_root(g, 2).theta_star == Lambda_root(relabelled, 2).theta_star


def test_disjoint_union_threshold_is_at_most_each_component():
    # the harder component dictates the threshold: the lower exponent
    union = K3.disjoint_union(K2)
    assert Lambda_root(union, 2).theta_star <= min(Lambda_root(K3, 2).theta_star, Lambda_root(K2, 2).theta_star)
    assert all(isinstance(v, Fraction) for v in Lambda_root(union, 2).per_ordering.values())
    assert len(list(itertools.islice(ordering_classes(union).values(), 3))) == 3
