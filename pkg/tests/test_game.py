import dataclasses
from fractions import Fraction

import numpy as np
import pytest

from online_ramsey.game import GameConfig, GameState, GameTarget, WitnessLedger, new_game, run_trial
from online_ramsey.game.board import edge_probability, sample_older_neighbours
from online_ramsey.game.engine import GENERIC_N_CAP, uses_single_edge_kernel
from online_ramsey.game.sweep import censored_median, crossing, run_sweep, star_trial, trial_seed
from online_ramsey.game.target import tie_break_order
from online_ramsey.graphs import CapExceeded, Graph, GraphError, complete_graph, path_graph, star_graph

K2, K3, P3 = complete_graph(2), complete_graph(3), path_graph(3)
SINGLE = (1, 0)
RED, BLUE = 0, 1


def board(n, edges):
    """CSR arrays of older neighbours for a fixed edge list."""
    older = [[] for _ in range(n)]
    for a, b in edges:
        older[max(a, b)].append(min(a, b))
    ptr = np.zeros(n + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(x) for x in older])
    idx = np.array([u for row in older for u in sorted(row)], dtype=np.int64)
    return ptr, idx


def path_fixture():
    """Red a (step 1), red b (step 2) joined by an edge, then x adjacent to b."""
    target = GameTarget.at_threshold(P3, 2)
    state = GameState(target, 6, *board(6, [(0, 2), (2, 4)]))
    for colours in ((RED, BLUE), (RED, BLUE)):
        block, _ = state.reveal()
        for v, c in zip(block, colours):
            state.set_colour(v, c)
    block, _ = state.reveal()
    return state, block


def test_fixture_red_x_closes_red_path():
    state, block = path_fixture()
    x, other = block
    key, vertex, embedding = state.minimizer([(x, RED), (other, BLUE)])
    assert key == (3, 0b101) and vertex == x and embedding == (4, 2, 0)
    assert key in state.target.full_keys


def test_fixture_blue_x_closes_only_single_vertex():
    state, block = path_fixture()
    x, other = block
    key, _, _ = state.minimizer([(x, BLUE), (other, RED)])
    assert key == SINGLE


def test_fixture_painter_avoids_the_path():
    state, block = path_fixture()
    decision = state.painter_decide(block)
    assert decision.index == 1
    assert decision.scores[1] == 1 and decision.scores[0] < 1
    assignment = state.apply(block, decision)
    assert not state.lost(assignment)


def test_first_step_picks_first_matching():
    target = GameTarget.at_threshold(K3, 2)
    state = GameState(target, 4, *board(4, []))
    block, _ = state.reveal()
    decision = state.painter_decide(block)
    assert decision.index == 0 and decision.scores == [1, 1]
    state = GameState(target, 4, *board(4, []), variant="vertex-achlioptas")
    block, _ = state.reveal()
    assert state.achlioptas_decide(block).index == 0


def test_achlioptas_avoids_completing_target():
    target = GameTarget.at_threshold(K2, 2)
    state = GameState(target, 4, *board(4, [(0, 2)]), variant="vertex-achlioptas")
    block, _ = state.reveal()
    state.apply(block, state.achlioptas_decide(block))
    assert state.colour[0] == 0
    block, _ = state.reveal()
    decision = state.achlioptas_decide(block)
    assert block[decision.index] == 3


def _brute_scores(state, block):
    """min lambda over every candidate class closed by each matching."""
    scores = []
    for k in range(state.r):
        closed = [
            state.target.lam[key]
            for key in state.target.classes
            for vertex, colour in state.matching(block, k)
            if state.first_embedding(key, vertex, colour) is not None
        ]
        scores.append(min(closed + [state.target.lam[SINGLE]]))
    return scores


@pytest.mark.parametrize("graph, theta", [(K3, Fraction(5, 6)), (P3, Fraction(5, 4)), (K3, Fraction(3, 4))])
@pytest.mark.parametrize("seed", range(4))
def test_painter_never_picks_a_worse_matching(graph, theta, seed):
    config = GameConfig(graph, 2, 120, theta, seed=seed)
    state = new_game(config)
    while state.revealed_steps < state.total_steps:
        block, _ = state.reveal()
        decision = state.painter_decide(block)
        assert decision.scores == _brute_scores(state, block)
        assert decision.scores[decision.index] == max(decision.scores)
        assignment = state.apply(block, decision)
        if state.lost(assignment):
            break


@pytest.mark.parametrize("graph", [K3, P3, star_graph(3)])
@pytest.mark.parametrize("variant", ["vertex-balanced", "vertex-achlioptas"])
def test_connected_candidates_match_full_candidates(graph, variant):
    theta = GameTarget.at_threshold(graph, 2).theta
    for seed in range(5):
        base = GameConfig(graph, 2, 60, theta, variant, seed)
        full = dataclasses.replace(base, full_candidates=True)
        assert run_trial(base).loss_step == run_trial(full).loss_step


def test_tie_break_order_is_total_and_full_graph_highest():
    target = GameTarget.at_threshold(K3, 2)
    order = tie_break_order(target.lam.keys())
    assert order[0] == (3, 0b111)
    assert order.index(SINGLE) > order.index((2, 1))
    assert order == tie_break_order(reversed(list(target.lam.keys())))


def test_dense_board_loses_and_empty_board_survives():
    assert run_trial(GameConfig(K3, 2, 100, Fraction(2), seed=1)).survived
    lost = run_trial(GameConfig(K3, 2, 100, Fraction(0), seed=1))
    assert lost.status == "lost" and lost.loss_step is not None


@pytest.mark.parametrize("variant, r", [("vertex-balanced", 2), ("vertex-achlioptas", 3), ("vertex-balanced", 3)])
def test_single_edge_kernel_matches_generic_engine(variant, r):
    for seed in range(15):
        config = GameConfig(K2, r, 300, Fraction(3, 2) - Fraction(1, 10), variant, seed)
        assert uses_single_edge_kernel(config)
        slow = dataclasses.replace(config, fast=False)
        assert run_trial(config).loss_step == run_trial(slow).loss_step


def test_repeated_trial_is_identical():
    config = GameConfig(P3, 2, 80, Fraction(5, 4), seed=11, transcript=True, witness_check=True)
    a, b = run_trial(config), run_trial(config)
    assert a == b and a.transcript


def test_transcript_entries():
    config = GameConfig(K3, 2, 40, Fraction(1, 2), seed=3, transcript=True)
    result = run_trial(config)
    first = result.transcript[0]
    assert first["r_set"] == [0, 1] and first["decision"] == 0
    assert all(option["lambda"] == "1" for option in first["options"])
    assert len(result.transcript) == result.steps


def test_witness_tracking_on_triangle():
    for seed in range(5):
        config = GameConfig(K3, 2, 200, Fraction(5, 6), seed=trial_seed(1, 200, 0, seed), witness_check=True)
        result = run_trial(config)
        assert result.violations == 0 and result.identity_failures == 0
        assert not result.negative_witness and result.copies_checked > 0


def test_witness_first_step_and_path_fixture():
    target = GameTarget.at_threshold(P3, 2)
    # both step-2 vertices see both step-1 vertices, so some edge turns monochromatic
    state = GameState(target, 6, *board(6, [(0, 2), (1, 2), (0, 3), (1, 3), (2, 4)]))
    ledger = WitnessLedger(state, target.theta)
    for step in range(3):
        block, _ = state.reveal()
        decision = state.painter_decide(block)
        assignment = state.apply(block, decision)
        ledger.record_step(step, decision)
        ledger.check_step(assignment)
        if step == 0:
            for vertex, _ in assignment:
                blocks, edges = ledger.witness(SINGLE, (vertex,))
                assert blocks == {0} and not edges and ledger.mu((blocks, edges)) == 1
    assert ledger.violations == 0 and ledger.identity_failures == 0
    edge_key = (2, 1)
    copies = [
        emb
        for colour in (RED, BLUE)
        for v in state.by_colour[colour]
        for emb in state.embeddings(edge_key, v, colour)
    ]
    assert copies
    for emb in copies:
        assert ledger.mu(ledger.witness(edge_key, emb)) <= target.lam[edge_key]


def test_ledger_cap_aborts_with_distinct_status():
    config = GameConfig(K3, 2, 200, Fraction(5, 6), seed=5, witness_check=True, ledger_cap=3)
    assert run_trial(config).status == "aborted"


def test_config_validation():
    with pytest.raises(GraphError):
        GameConfig(K3, 2, 101, Fraction(1)).validate()
    with pytest.raises(GraphError):
        GameConfig(Graph.from_edges(1, []), 2, 100, Fraction(1)).validate()
    with pytest.raises(GraphError):
        GameConfig(K3, 2, 100, Fraction(3)).validate()
    with pytest.raises(GraphError):
        GameConfig(K3, 2, 100, Fraction(1), "vertex-achlioptas", witness_check=True).validate()
    with pytest.raises(CapExceeded):
        new_game(GameConfig(K3, 2, GENERIC_N_CAP + 2, Fraction(1)))


def test_board_sampling():
    rng = np.random.default_rng(0)
    ptr, idx = sample_older_neighbours(400, 0.05, rng)
    for v in range(400):
        row = idx[ptr[v] : ptr[v + 1]]
        assert np.all(row < v) and len(set(row.tolist())) == len(row)
        assert np.all(np.diff(row) > 0)
    expected = 0.05 * 400 * 399 / 2
    assert abs(len(idx) - expected) < 5 * expected**0.5
    ptr, idx = sample_older_neighbours(30, 1.0, np.random.default_rng(1))
    assert len(idx) == 30 * 29 // 2
    assert edge_probability(100, Fraction(1)) == pytest.approx(0.01)


def test_sweep_zero_trials_and_threads():
    assert run_sweep(K2, 2, "vertex-balanced", [100], [Fraction(1)], 0, 1).estimates == []
    a = run_sweep(K3, 2, "vertex-balanced", [60], [Fraction(1, 2), Fraction(1)], 4, 9, "K3", threads=1)
    b = run_sweep(K3, 2, "vertex-balanced", [60], [Fraction(1, 2), Fraction(1)], 4, 9, "K3", threads=3)
    assert a.csv() == b.csv()
    assert a.csv().splitlines()[0] == "variant,F,r,n,theta,trials,survivals,rate,median_loss_step"


def test_censored_median_and_crossing():
    assert censored_median([3, None, 5], 10) == 5
    assert censored_median([None, None, 1], 10) is None
    assert censored_median([2, 4], 10) == 3
    assert crossing([1, 2, 3], [0.0, 0.25, 0.75]) == pytest.approx(2.5)
    assert crossing([1, 2], [0.9, 1.0]) is None


@pytest.mark.parametrize("achlioptas", [False, True])
def test_star_trial_reproducible(achlioptas):
    a = star_trial(3, 2, 2000, achlioptas, trial_seed(4, 0, 2000, 1))
    b = star_trial(3, 2, 2000, achlioptas, trial_seed(4, 0, 2000, 1))
    assert a == b and a.loss_step is not None


def test_star_pigeonhole_holds_every_trial():
    for t in range(30):
        result = star_trial(2, 3, 500, False, trial_seed(2, t))
        assert result.star_step is None or result.loss_step <= result.star_step


def test_star_parameters_checked():
    with pytest.raises(GraphError):
        star_trial(5, 2, 100, False, 0)
