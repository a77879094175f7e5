"""Generic simulator for the vertex balanced Ramsey and Achlioptas games.

Each step reveals ``r`` new vertices together with their edges to everything
revealed so far.  In the balanced variant Painter assigns the ``r`` colours
bijectively; in the Achlioptas variant one of the ``r`` vertices is chosen.
The player loses as soon as a monochromatic (resp. chosen) copy of F exists.

Painter minimizes risk through the potential ``lambda`` of the ordered copies
each assignment would close.  Optionally every monochromatic copy is mapped to
an r-matched witness built from the per-step decisions, and the bound
``mu(witness) <= lambda(copy)`` is checked as the game proceeds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..graphs import CapExceeded, Graph, GraphError, is_isomorphic, key_adjacency, key_without_youngest
from ..graphs import complete_graph
from .board import edge_probability, sample_older_neighbours
from .target import GameTarget

VARIANTS = ("vertex-balanced", "vertex-achlioptas")
GENERIC_N_CAP = 5000
WITNESS_N_CAP = 500
LEDGER_CAP = 2_000_000
CHOSEN = 0


@dataclass
class GameConfig:
    graph: Graph
    r: int
    n: int
    theta: Fraction
    variant: str = "vertex-balanced"
    seed: object = 0
    strategy_theta: Fraction | None = None
    full_candidates: bool = False
    witness_check: bool = False
    transcript: bool = False
    fast: bool = True
    n_cap: int = GENERIC_N_CAP
    ledger_cap: int = LEDGER_CAP

    def validate(self):
        if self.variant not in VARIANTS:
            raise GraphError(f"unknown variant {self.variant!r}")
        if self.r < 2:
            raise GraphError("r must be >= 2")
        if self.n <= 0 or self.n % self.r:
            raise GraphError(f"r = {self.r} must divide n = {self.n}")
        if self.graph.e == 0:
            raise GraphError("the target graph must have at least one edge")
        if not 0 <= Fraction(self.theta) <= 2:
            raise GraphError("theta must lie in [0, 2]")
        if self.witness_check and self.variant != "vertex-balanced":
            raise GraphError("witness tracking applies to the balanced variant only")
        return self


@dataclass
class Decision:
    index: int
    scores: list
    minimizers: list


@dataclass
class TrialResult:
    loss_step: int | None
    steps: int
    status: str
    violations: int = 0
    negative_witness: bool = False
    identity_failures: int = 0
    copies_checked: int = 0
    transcript: list | None = None

    @property
    def survived(self):
        return self.status == "survived"


class GameState:
    """Board, colouring and strategy data of one game."""

    def __init__(self, target: GameTarget, n, ptr, idx, variant="vertex-balanced"):
        self.target = target
        self.r = target.r
        self.n = n
        self.ptr = ptr
        self.idx = idx
        self.variant = variant
        self.revealed_steps = 0
        self.adjacency = [[] for _ in range(n)]
        self.adjacent = [set() for _ in range(n)]
        self.colour = [-1] * n
        self.by_colour = [[] for _ in range(self.r)]

    @property
    def total_steps(self):
        return self.n // self.r

    def step_of(self, vertex):
        return vertex // self.r

    def reveal(self):
        """Reveal the next r-set and its edges; return the new vertices and edges."""
        start = self.revealed_steps * self.r
        block = list(range(start, start + self.r))
        new_edges = []
        for v in block:
            for u in self.idx[self.ptr[v] : self.ptr[v + 1]].tolist():
                self.adjacency[u].append(v)
                self.adjacency[v].append(u)
                self.adjacent[u].add(v)
                self.adjacent[v].add(u)
                new_edges.append((u, v))
        self.revealed_steps += 1
        return block, new_edges

    def set_colour(self, vertex, colour):
        self.colour[vertex] = colour
        self.by_colour[colour].append(vertex)

    def embeddings(self, key, vertex, colour):
        """All copies of the ordered class ``key`` in colour ``colour`` with youngest vertex ``vertex``."""
        plan = self.target.plans[key]
        phi = [-1] * key[0]
        phi[0] = vertex
        r = self.r
        colours = self.colour
        adjacent = self.adjacent

        def extend(i):
            if i == len(plan.steps):
                yield tuple(phi)
                return
            position, anchor, neighbours, younger, older = plan.steps[i]
            upper = min(phi[q] // r for q in younger)
            lower = max((phi[q] // r for q in older), default=-1)
            pool = self.adjacency[phi[anchor]] if anchor >= 0 else self.by_colour[colour]
            for w in pool:
                if colours[w] != colour or w == vertex:
                    continue
                s = w // r
                if not lower < s < upper:
                    continue
                if any(w not in adjacent[phi[q]] for q in neighbours):
                    continue
                phi[position] = w
                yield from extend(i + 1)
            phi[position] = -1

        return extend(0)

    def first_embedding(self, key, vertex, colour):
        return next(self.embeddings(key, vertex, colour), None)

    def minimizer(self, assignment):
        """Lowest-lambda class closed by ``assignment`` (pairs of vertex, colour).

        Ties go to the class lowest in the tie-break order.  Returns
        (key, vertex, embedding).
        """
        for key in self.target.scan:
            for vertex, colour in assignment:
                found = self.first_embedding(key, vertex, colour)
                if found is not None:
                    return key, vertex, found
        raise AssertionError("the single-vertex class always closes")

    def matching(self, block, index):
        """Assignment of colour j to block position (j + index) mod r."""
        return [(block[(j + index) % self.r], j) for j in range(self.r)]

    def _choose(self, options):
        lam, rank = self.target.lam, self.target.rank
        scores = [lam[m[0]] for m in options]
        best = max(scores)
        tied = [i for i, s in enumerate(scores) if s == best]
        pick = min(tied, key=lambda i: (rank[options[i][0]], i))
        return Decision(pick, scores, options)

    def painter_decide(self, block):
        options = [self.minimizer(self.matching(block, k)) for k in range(self.r)]
        return self._choose(options)

    def achlioptas_decide(self, block):
        options = [self.minimizer([(v, CHOSEN)]) for v in block]
        return self._choose(options)

    def apply(self, block, decision):
        if self.variant == "vertex-balanced":
            assignment = self.matching(block, decision.index)
            for vertex, colour in assignment:
                self.set_colour(vertex, colour)
            assert sorted(self.colour[v] for v in block) == list(range(self.r))
            return assignment
        chosen = block[decision.index]
        self.set_colour(chosen, CHOSEN)
        assert sum(1 for v in block if self.colour[v] == CHOSEN) == 1
        return [(chosen, CHOSEN)]

    def lost(self, assignment):
        return any(
            self.first_embedding(key, vertex, colour) is not None
            for vertex, colour in assignment
            for key in self.target.full_keys
        )


class WitnessLedger:
    """Maps monochromatic ordered copies to r-matched witnesses (blocks, edges)."""

    def __init__(self, state: GameState, theta, cap=LEDGER_CAP):
        self.state = state
        self.theta = Fraction(theta)
        self.cap = cap
        self.memo = {}
        self.records = {}
        self.violations = 0
        self.identity_failures = 0
        self.negative = False
        self.checked = 0

    def mu(self, part):
        return len(part[0]) - self.theta * len(part[1])

    def record_step(self, step, decision):
        rejected = [
            (key, embedding)
            for i, (key, _, embedding) in enumerate(decision.minimizers)
            if i != decision.index
        ]
        self.records[step] = rejected

    def _edges_from_youngest(self, key, embedding):
        adj = key_adjacency(key)
        x = embedding[0]
        return {(min(x, embedding[q]), max(x, embedding[q])) for q in range(1, key[0]) if adj[0] >> q & 1}

    def _parts(self, key, embedding):
        step = self.state.step_of(embedding[0])
        base = self.witness(key_without_youngest(key), embedding[1:])
        joined = [
            (self.witness(key_without_youngest(jkey), jemb[1:]), jkey, jemb)
            for jkey, jemb in self.records[step]
        ]
        return step, base, joined

    def witness(self, key, embedding):
        if key[0] == 0:
            return (frozenset(), frozenset())
        found = self.memo.get((key, embedding))
        if found is not None:
            return found
        step, base, joined = self._parts(key, embedding)
        blocks = set(base[0]) | {step}
        edges = set(base[1]) | self._edges_from_youngest(key, embedding)
        for part, jkey, jemb in joined:
            blocks |= part[0]
            edges |= part[1] | self._edges_from_youngest(jkey, jemb)
        result = (frozenset(blocks), frozenset(edges))
        self.memo[(key, embedding)] = result
        if len(self.memo) > self.cap:
            raise CapExceeded("witness ledger exceeded its memory cap")
        return result

    def check_copy(self, key, embedding):
        """Check mu(H') <= lambda(H) unless some partial witness has negative mu."""
        self.checked += 1
        theta = self.theta
        step, base, joined = self._parts(key, embedding)
        union_blocks, union_edges = set(base[0]), set(base[1])
        expected = 1 + self.mu(base) - theta * (key_adjacency(key)[0].bit_count())
        negative = self.mu(base) < 0
        for part, jkey, _ in joined:
            overlap = (union_blocks & part[0], union_edges & part[1])
            negative = negative or self.mu(part) < 0 or self.mu(overlap) < 0
            expected += self.mu(part) - theta * key_adjacency(jkey)[0].bit_count() - self.mu(overlap)
            union_blocks |= part[0]
            union_edges |= part[1]
        whole = self.witness(key, embedding)
        if self.mu(whole) != expected:
            self.identity_failures += 1
        if negative:
            self.negative = True
            return
        if self.mu(whole) > self.state.target.lam[key]:
            self.violations += 1

    def check_step(self, assignment):
        if self.negative:
            return
        state = self.state
        for key in state.target.classes:
            for vertex, colour in assignment:
                for embedding in state.embeddings(key, vertex, colour):
                    self.check_copy(key, embedding)
                    if self.negative:
                        return


def new_game(config: GameConfig, target: GameTarget | None = None):
    config.validate()
    if config.n > config.n_cap:
        raise CapExceeded(f"n = {config.n} exceeds the generic engine cap of {config.n_cap}")
    if target is None:
        target = make_target(config)
    rng = np.random.default_rng(config.seed)
    ptr, idx = sample_older_neighbours(config.n, edge_probability(config.n, config.theta), rng)
    return GameState(target, config.n, ptr, idx, config.variant)


def make_target(config: GameConfig):
    if config.strategy_theta is None:
        return GameTarget.at_threshold(config.graph, config.r, config.full_candidates)
    return GameTarget(config.graph, config.r, Fraction(config.strategy_theta), config.full_candidates)


def play(state: GameState, witness_check=False, transcript=False, ledger_cap=LEDGER_CAP):
    ledger = WitnessLedger(state, state.target.theta, ledger_cap) if witness_check else None
    log = [] if transcript else None
    status, loss = "survived", None
    try:
        while state.revealed_steps < state.total_steps:
            block, new_edges = state.reveal()
            step = state.revealed_steps - 1
            if state.variant == "vertex-balanced":
                decision = state.painter_decide(block)
            else:
                decision = state.achlioptas_decide(block)
            assignment = state.apply(block, decision)
            if ledger is not None:
                ledger.record_step(step, decision)
                ledger.check_step(assignment)
            if log is not None:
                log.append(_transcript_entry(state, block, new_edges, decision))
            if state.lost(assignment):
                status, loss = "lost", step + 1
                break
    except CapExceeded:
        status = "aborted"
    return TrialResult(
        loss,
        state.revealed_steps,
        status,
        violations=ledger.violations if ledger else 0,
        negative_witness=ledger.negative if ledger else False,
        identity_failures=ledger.identity_failures if ledger else 0,
        copies_checked=ledger.checked if ledger else 0,
        transcript=log,
    )


def _transcript_entry(state, block, new_edges, decision):
    return {
        "r_set": block,
        "edges": [list(e) for e in new_edges],
        "decision": decision.index,
        "options": [
            {"class": state.target.describe(key), "lambda": str(state.target.lam[key]), "vertex": vertex}
            for key, vertex, _ in decision.minimizers
        ],
    }


def uses_single_edge_kernel(config: GameConfig):
    return (
        config.fast
        and not config.witness_check
        and not config.transcript
        and is_isomorphic(config.graph, complete_graph(2))
    )


def run_trial(config: GameConfig, target: GameTarget | None = None):
    """Play one game; returns the first losing step or survival."""
    config.validate()
    if uses_single_edge_kernel(config):
        from .kernels import single_edge_vertex_game

        if target is None:
            target = make_target(config)
        rng = np.random.default_rng(config.seed)
        ptr, idx = sample_older_neighbours(config.n, edge_probability(config.n, config.theta), rng)
        avoid = target.lam[(2, 1)] < target.lam[(1, 0)]
        loss = int(
            single_edge_vertex_game(ptr, idx, config.n, config.r, config.variant == "vertex-achlioptas", avoid)
        )
        steps = config.n // config.r
        return TrialResult(loss or None, loss or steps, "lost" if loss else "survived")
    state = new_game(config, target)
    return play(state, config.witness_check, config.transcript, config.ledger_cap)
