"""Monte Carlo sweeps: survival rates over (n, theta) grids and edge star games."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..graphs import GraphError
from .engine import GameConfig, make_target, run_trial
from .kernels import star_edge_game, table_size

SWEEP_HEADER = "variant,F,r,n,theta,trials,survivals,rate,median_loss_step"


def trial_seed(master, *indices):
    return np.random.SeedSequence([int(master), *[int(i) for i in indices]])


def parallel_map(func, items, threads=1):
    """Ordered map; results do not depend on the thread count."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def censored_median(losses, cap):
    """Median loss step, counting survivals as later than every loss; None if it is a survival."""
    if not losses:
        return None
    values = sorted(cap + 1 if x is None else x for x in losses)
    middle = len(values) // 2
    median = values[middle] if len(values) % 2 else (values[middle - 1] + values[middle]) / 2
    return None if median > cap else float(median)


@dataclass
class SurvivalEstimate:
    variant: str
    graph: str
    r: int
    n: int
    theta: Fraction
    trials: int
    survivals: int
    median_loss_step: float | None

    def __post_init__(self):
        assert 0 <= self.survivals <= self.trials

    @property
    def rate(self):
        return self.survivals / self.trials if self.trials else float("nan")

    def csv_row(self):
        median = "" if self.median_loss_step is None else f"{self.median_loss_step:g}"
        theta = "" if self.theta is None else _rational(self.theta)
        return f"{self.variant},{self.graph},{self.r},{self.n},{theta},{self.trials},{self.survivals},{self.rate:.6f},{median}"


def _rational(value):
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def crossing(thetas, rates, level=0.5):
    """theta where the survival rate first reaches ``level``, linearly interpolated."""
    points = list(zip(thetas, rates))
    for (t0, s0), (t1, s1) in zip(points, points[1:]):
        if s0 < level <= s1:
            return float(t0) + (level - s0) * (float(t1) - float(t0)) / (s1 - s0)
    return None


@dataclass
class SweepResult:
    estimates: list
    crossings: dict = field(default_factory=dict)

    def csv(self):
        return "\n".join([SWEEP_HEADER] + [e.csv_row() for e in self.estimates]) + "\n"


def run_sweep(
    graph,
    r,
    variant,
    ns,
    thetas,
    trials,
    seed,
    graph_name="F",
    threads=1,
    strategy_theta=None,
    full_candidates=False,
):
    thetas = [Fraction(t) for t in thetas]
    if trials <= 0:
        return SweepResult([])
    base = GameConfig(graph, r, ns[0], thetas[0], variant, 0, strategy_theta, full_candidates)
    target = make_target(base.validate())
    estimates = []
    crossings = {}
    for n in ns:
        rates = []
        for ti, theta in enumerate(thetas):
            configs = [
                GameConfig(graph, r, n, theta, variant, trial_seed(seed, n, ti, trial), strategy_theta, full_candidates)
                for trial in range(trials)
            ]
            results = parallel_map(lambda c: run_trial(c, target), configs, threads)
            survivals = sum(1 for res in results if res.survived)
            median = censored_median([res.loss_step for res in results], n // r)
            estimate = SurvivalEstimate(variant, graph_name, r, n, theta, trials, survivals, median)
            estimates.append(estimate)
            rates.append(estimate.rate)
        crossings[n] = crossing(thetas, rates)
    return SweepResult(estimates, crossings)


# ---------------------------------------------------------------------------
# edge games on stars

STAR_VARIANTS = ("edge-star-balanced", "edge-star-achlioptas")


@dataclass
class StarTrial:
    loss_step: int | None
    star_step: int | None
    steps: int


def star_trial(k, r, n, achlioptas, seed, budget=None, chunk=None):
    """One edge star game; each step offers r uniformly random unseen pairs."""
    if not (2 <= k <= 4 and 2 <= r <= 3):
        raise GraphError("star games support k in {2,3,4} and r in {2,3}")
    budget = budget or 2 * n
    budget = min(budget, (n * (n - 1) // 2) // r - 1)
    chunk = chunk or max(1024, 4 * r * int(n ** 0.9))
    rng = np.random.default_rng(seed)
    perms = np.array(list(itertools.permutations(range(r))), dtype=np.int64)
    counts = np.zeros(n if achlioptas else n * r, dtype=np.int64)
    degree = np.zeros(n, dtype=np.int64)
    table = np.full(table_size(r * budget), -1, dtype=np.int64)
    state = np.array([0, budget, 0, 0, 0], dtype=np.int64)
    us = np.zeros(r, dtype=np.int64)
    vs = np.zeros(r, dtype=np.int64)
    while state[0] < state[1] and state[2] == 0:
        pairs = rng.integers(0, n, size=(chunk, 2), dtype=np.int64)
        star_edge_game(pairs, 0, n, k, r, achlioptas, perms, counts, degree, table, state, us, vs)
    loss = int(state[2]) or None
    star = int(state[3]) or None
    if not achlioptas and star is not None:
        assert loss is not None and loss <= star, "pigeonhole: loss must come by the forced star"
    return StarTrial(loss, star, int(state[0]))


def fit_exponent(ns, values):
    """Least-squares slope of log(value) against log(n)."""
    return float(np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(values, float)), 1)[0])


@dataclass
class StarGameReport:
    k: int
    r: int
    ns: list
    trials: int
    medians: dict
    fits: dict
    estimates: list

    def csv(self):
        return "\n".join([SWEEP_HEADER] + [e.csv_row() for e in self.estimates]) + "\n"


def edge_star_games(k, r, ns, trials, seed, step_exponents=(), threads=1, budget_factor=2):
    """Median loss steps of both star games per n, with log-log fits across n.

    For each exponent ``a`` in ``step_exponents`` the survival rate for a game
    of ``n**a`` steps is also reported (as the theta column of the rows).
    """
    medians = {variant: {} for variant in STAR_VARIANTS}
    estimates = []
    for vi, variant in enumerate(STAR_VARIANTS):
        achlioptas = variant == "edge-star-achlioptas"
        for n in ns:
            budget = budget_factor * n
            results = parallel_map(
                lambda t: star_trial(k, r, n, achlioptas, trial_seed(seed, vi, n, t), budget),
                range(trials),
                threads,
            )
            losses = [res.loss_step for res in results]
            median = censored_median(losses, budget)
            medians[variant][n] = median
            survivals = sum(1 for x in losses if x is None)
            estimates.append(SurvivalEstimate(variant, f"S{k}", r, n, None, trials, survivals, median))
            for a in step_exponents:
                horizon = n ** float(a)
                alive = sum(1 for x in losses if x is None or x > horizon)
                estimates.append(SurvivalEstimate(variant, f"S{k}", r, n, Fraction(a), trials, alive, median))
    fits = {}
    for variant in STAR_VARIANTS:
        points = [(n, m) for n, m in medians[variant].items() if m is not None]
        fits[variant] = fit_exponent(*zip(*points)) if len(points) >= 2 else None
    return StarGameReport(k, r, list(ns), trials, medians, fits, estimates)
