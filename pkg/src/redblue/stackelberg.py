"""Multi-round interaction between the pattern optimizer and the controller.

Each round: the controller best-responds to the current pattern (coefficient
solve, Monte Carlo metrics, a few sample paths), then the optimizer anchors
its trust penalty at that pattern and instills a new one, which the
controller adopts next round.  All randomness is derived from one master
seed so a run is reproducible end to end.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .controls import FeedbackPolicy
from .model import (
    Constant,
    GridConfig,
    GridSampled,
    ModelParams,
    Pattern,
    TimeFunction,
    grid_function,
    sample_on_grid,
)
from .moments import expected_log_lr, solve_moments
from .red import (
    SOLVER_FBS,
    SOLVER_FPI,
    OptimizationReport,
    RedConfig,
    fbs_solve,
    fpi_solve,
    nn_solve,
)
from .riccati import solve_value_coeffs
from .sde import McSummary, Trajectory, mix_seed, monte_carlo, simulate_path

# Stream tags for per-round seed derivation.
_STREAM_MC = 0
_STREAM_TRAJ = 1
_STREAM_RED = 2
_STREAM_BASELINE = 3


@dataclass(frozen=True, eq=False)
class RoundRecord:
    round_index: int
    f_c_used: GridSampled
    mc: McSummary
    expected_log_lr_moment: float
    sample_trajectories: list[Trajectory]


def solve_red(
    params: ModelParams, config: RedConfig, grid: GridConfig, seed: int
) -> OptimizationReport:
    """Dispatch to the solver named by the config (seed used by nn only)."""
    if config.solver == SOLVER_FPI:
        return fpi_solve(params, config, grid)
    if config.solver == SOLVER_FBS:
        return fbs_solve(params, config, grid)
    return nn_solve(params, config, grid, seed)


def red_seed(master_seed: int, round_index: int) -> int:
    return mix_seed(master_seed, round_index, _STREAM_RED)


def play_rounds(
    params: ModelParams,
    initial_f_c: TimeFunction,
    red_config: RedConfig,
    n_rounds: int,
    mc_paths: int,
    seed: int,
    grid: GridConfig,
    n_sample_trajectories: int = 3,
    threads: int = 1,
) -> list[RoundRecord]:
    """Run the loop and return one record per round, in order.

    The pattern of round k+1 is bit-identical to the optimizer output of
    round k (anchored at round k's pattern and seeded by red_seed).
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be >= 1")
    f_nodes = sample_on_grid(initial_f_c, grid)
    records: list[RoundRecord] = []
    for rnd in range(1, n_rounds + 1):
        f_c = grid_function(f_nodes, grid)
        pattern = Pattern(f_c, Constant(0.0))
        coeffs = solve_value_coeffs(params, pattern, grid)
        policy = FeedbackPolicy(params, pattern, grid, coeffs)
        mc = monte_carlo(
            policy,
            pattern,
            grid,
            mc_paths,
            mix_seed(seed, rnd, _STREAM_MC),
            threads=threads,
        )
        moments = solve_moments(params, coeffs, f_c, grid)
        elr = expected_log_lr(params, coeffs, f_c, moments, grid)
        trajectories = [
            simulate_path(policy, grid, mix_seed(seed, rnd, _STREAM_TRAJ, j))
            for j in range(n_sample_trajectories)
        ]
        records.append(RoundRecord(rnd, f_c, mc, elr, trajectories))
        config = replace(red_config, f_c_initial=f_c)
        report = solve_red(params, config, grid, red_seed(seed, rnd))
        f_nodes = report.f_c.values
    return records


def baseline_summary(
    params: ModelParams,
    grid: GridConfig,
    mc_paths: int,
    seed: int,
    threads: int = 1,
) -> McSummary:
    """Metrics under a zero pattern (the payoff is exactly zero there)."""
    pattern = Pattern(Constant(0.0), Constant(0.0))
    policy = FeedbackPolicy.solve(params, pattern, grid)
    return monte_carlo(
        policy,
        pattern,
        grid,
        mc_paths,
        mix_seed(seed, 0, _STREAM_BASELINE),
        threads=threads,
    )
