"""Euler-Maruyama path simulation, pathwise statistics, and Monte Carlo.

Noise handling is fully deterministic: each path draws its increments from a
generator seeded by a counter-based mix of (master_seed, path_index), blocks
of paths write into disjoint slices of preallocated arrays, and reductions
run in index order.  Results are therefore bit-identical for any thread
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .controls import FeedbackPolicy
from .errors import GridMismatchError, NonFiniteStateError
from .model import GridConfig, GridSampled, ModelParams, Pattern, sample_on_grid

# Paths per simulation block.  Fixed so that results never depend on the
# parallelism degree.
_BLOCK_PATHS = 1024


def mix_seed(*parts: int) -> int:
    """Deterministic 64-bit child seed from non-negative integer components."""
    ss = np.random.SeedSequence([int(p) for p in parts])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One realized path: states at nodes, controls at nodes 0..n-1."""

    times: np.ndarray
    v_path: np.ndarray
    y_path: np.ndarray
    alpha_path: np.ndarray
    beta_path: np.ndarray


@dataclass(frozen=True)
class McSummary:
    n_paths: int
    mean_primary_cost: float
    mean_log_lr: float
    mean_blue_cost: float
    se_primary_cost: float
    se_log_lr: float
    master_seed: int

    def as_dict(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "mean_primary_cost": self.mean_primary_cost,
            "mean_log_lr": self.mean_log_lr,
            "mean_blue_cost": self.mean_blue_cost,
            "se_primary_cost": self.se_primary_cost,
            "se_log_lr": self.se_log_lr,
            "master_seed": self.master_seed,
        }


def _step_paths(policy: FeedbackPolicy, grid: GridConfig, noise: np.ndarray):
    """Vectorized Euler-Maruyama over a block of paths.

    noise has shape (paths, n_steps, 2); returns v, y of shape
    (paths, n_steps + 1) and realized controls of shape (paths, n_steps).
    """
    p = policy.params
    n = grid.n_steps
    h = grid.h
    sq = math.sqrt(h)
    m = noise.shape[0]
    v = np.empty((m, n + 1))
    y = np.empty((m, n + 1))
    alpha = np.empty((m, n))
    beta = np.empty((m, n))
    v[:, 0] = p.v0
    y[:, 0] = p.y0
    av, ay, a0 = policy.alpha_v, policy.alpha_y, policy.alpha_0
    bv, by, b0 = policy.beta_v, policy.beta_y, policy.beta_0
    for k in range(n):
        vk = v[:, k]
        yk = y[:, k]
        ak = av[k] * vk + ay[k] * yk + a0[k]
        bk = bv[k] * vk + by[k] * yk + b0[k]
        alpha[:, k] = ak
        beta[:, k] = bk
        v[:, k + 1] = vk + ak * h + p.sigma_b * sq * noise[:, k, 0]
        y[:, k + 1] = yk + (vk + bk) * h + p.sigma_w * sq * noise[:, k, 1]
    if not (np.all(np.isfinite(v)) and np.all(np.isfinite(y))):
        raise NonFiniteStateError("path simulation overflowed")
    return v, y, alpha, beta


def simulate_path(policy: FeedbackPolicy, grid: GridConfig, seed: int) -> Trajectory:
    """One path driven by increments from a generator seeded with ``seed``."""
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((1, grid.n_steps, 2))
    v, y, alpha, beta = _step_paths(policy, grid, noise)
    return Trajectory(
        times=grid.times(),
        v_path=v[0],
        y_path=y[0],
        alpha_path=alpha[0],
        beta_path=beta[0],
    )


def _primary_costs(
    v: np.ndarray,
    alpha: np.ndarray,
    beta: np.ndarray,
    params: ModelParams,
    grid: GridConfig,
) -> np.ndarray:
    """Left-Riemann running cost plus terminal term, per path."""
    n = grid.n_steps
    h = grid.h
    vb = np.asarray(params.vbar(grid.times()), dtype=float)[:n]
    run = (0.5 * h) * (
        params.r_alpha * np.sum(alpha * alpha, axis=1)
        + params.r_beta * np.sum(beta * beta, axis=1)
        + params.r_v * np.sum((v[:, :n] - vb) ** 2, axis=1)
    )
    term = 0.5 * params.t_v * (v[:, n] - params.vbar_final) ** 2
    return run + term


def _log_lrs(
    v: np.ndarray,
    y: np.ndarray,
    fc_nodes: np.ndarray,
    fd_nodes: np.ndarray,
    params: ModelParams,
    grid: GridConfig,
) -> np.ndarray:
    """Left-endpoint discretization of the log likelihood ratio, per path.

    With g_k = f_c(t_k) Y_k + f_d(t_k):
        (1/sigma_w^2) [ sum g_k (Y_{k+1}-Y_k) - sum V_k g_k h - 1/2 sum g_k^2 h ]
    """
    n = grid.n_steps
    h = grid.h
    g = fc_nodes[:n] * y[:, :n] + fd_nodes[:n]
    dy = y[:, 1:] - y[:, :n]
    stoch = np.sum(g * dy, axis=1)
    drift = np.sum(v[:, :n] * g, axis=1) * h
    quad = 0.5 * h * np.sum(g * g, axis=1)
    return (stoch - drift - quad) / params.sigma_w**2


def _check_traj(traj: Trajectory, pattern: Pattern | None) -> None:
    n1 = traj.times.size
    if traj.v_path.size != n1 or traj.y_path.size != n1:
        raise GridMismatchError("state paths and times have different lengths")
    if traj.alpha_path.size != n1 - 1 or traj.beta_path.size != n1 - 1:
        raise GridMismatchError("control paths must have length n_steps")
    if pattern is None:
        return
    horizon = float(traj.times[-1])
    for f in (pattern.f_c, pattern.f_d):
        if isinstance(f, GridSampled):
            if f.values.size != n1 or f.horizon != horizon:
                raise GridMismatchError(
                    "grid-sampled pattern does not match the trajectory grid"
                )


def primary_cost(traj: Trajectory, params: ModelParams) -> float:
    _check_traj(traj, None)
    grid = GridConfig(traj.times.size - 1, float(traj.times[-1]))
    return float(
        _primary_costs(
            traj.v_path[None, :],
            traj.alpha_path[None, :],
            traj.beta_path[None, :],
            params,
            grid,
        )[0]
    )


def log_likelihood_ratio(
    traj: Trajectory, pattern: Pattern, params: ModelParams
) -> float:
    _check_traj(traj, pattern)
    grid = GridConfig(traj.times.size - 1, float(traj.times[-1]))
    fc = sample_on_grid(pattern.f_c, grid)
    fd = sample_on_grid(pattern.f_d, grid)
    return float(
        _log_lrs(
            traj.v_path[None, :], traj.y_path[None, :], fc, fd, params, grid
        )[0]
    )


def sample_paths(
    policy: FeedbackPolicy, grid: GridConfig, n_paths: int, master_seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """V and Y node values for a whole ensemble, shape (n_paths, n_steps+1).

    Path i is bit-identical to path i of monte_carlo with the same master
    seed (same per-path generators, same block layout).
    """
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    n = grid.n_steps
    v_all = np.empty((n_paths, n + 1))
    y_all = np.empty((n_paths, n + 1))
    for start in range(0, n_paths, _BLOCK_PATHS):
        stop = min(start + _BLOCK_PATHS, n_paths)
        noise = np.empty((stop - start, n, 2))
        for j in range(stop - start):
            rng = np.random.default_rng(mix_seed(master_seed, start + j))
            noise[j] = rng.standard_normal((n, 2))
        v, y, _, _ = _step_paths(policy, grid, noise)
        v_all[start:stop] = v
        y_all[start:stop] = y
    return v_all, y_all


def log_lr_samples(
    policy: FeedbackPolicy,
    pattern: Pattern,
    grid: GridConfig,
    n_paths: int,
    master_seed: int,
) -> np.ndarray:
    """Per-path log likelihood ratios, seeded exactly like monte_carlo."""
    v, y = sample_paths(policy, grid, n_paths, master_seed)
    fc = sample_on_grid(pattern.f_c, grid)
    fd = sample_on_grid(pattern.f_d, grid)
    return _log_lrs(v, y, fc, fd, policy.params, grid)


def monte_carlo(
    policy: FeedbackPolicy,
    pattern: Pattern,
    grid: GridConfig,
    n_paths: int,
    master_seed: int,
    threads: int = 1,
) -> McSummary:
    """Seeded Monte Carlo estimate of the primary cost and log-LR means.

    The `pattern` argument is the one the likelihood statistic tests for;
    it may differ from the pattern the policy was solved with (used to
    evaluate statistics on null-hypothesis paths).
    """
    if n_paths < 2:
        raise ValueError("n_paths must be >= 2")
    params = policy.params
    n = grid.n_steps
    fc = sample_on_grid(pattern.f_c, grid)
    fd = sample_on_grid(pattern.f_d, grid)
    primary = np.empty(n_paths)
    loglr = np.empty(n_paths)

    def run_block(bounds):
        start, stop = bounds
        m = stop - start
        noise = np.empty((m, n, 2))
        for j in range(m):
            rng = np.random.default_rng(mix_seed(master_seed, start + j))
            noise[j] = rng.standard_normal((n, 2))
        v, y, alpha, beta = _step_paths(policy, grid, noise)
        primary[start:stop] = _primary_costs(v, alpha, beta, params, grid)
        loglr[start:stop] = _log_lrs(v, y, fc, fd, params, grid)

    blocks = [
        (start, min(start + _BLOCK_PATHS, n_paths))
        for start in range(0, n_paths, _BLOCK_PATHS)
    ]
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_block, blocks))
    else:
        for bounds in blocks:
            run_block(bounds)

    mean_primary = float(np.mean(primary))
    mean_loglr = float(np.mean(loglr))
    se_primary = float(np.std(primary, ddof=1) / math.sqrt(n_paths))
    se_loglr = float(np.std(loglr, ddof=1) / math.sqrt(n_paths))
    return McSummary(
        n_paths=n_paths,
        mean_primary_cost=mean_primary,
        mean_log_lr=mean_loglr,
        mean_blue_cost=mean_primary - params.lam * mean_loglr,
        se_primary_cost=se_primary,
        se_log_lr=se_loglr,
        master_seed=master_seed,
    )
