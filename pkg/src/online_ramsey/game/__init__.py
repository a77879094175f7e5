"""Monte Carlo simulation of the vertex and edge games."""

from .engine import (
    GameConfig,
    GameState,
    TrialResult,
    WitnessLedger,
    new_game,
    play,
    run_trial,
)
from .sweep import SurvivalEstimate, SweepResult, edge_star_games, run_sweep, star_trial
from .target import GameTarget, tie_break_order

__all__ = [
    "GameConfig",
    "GameState",
    "GameTarget",
    "SurvivalEstimate",
    "SweepResult",
    "TrialResult",
    "WitnessLedger",
    "edge_star_games",
    "new_game",
    "play",
    "run_sweep",
    "run_trial",
    "star_trial",
    "tie_break_order",
]
