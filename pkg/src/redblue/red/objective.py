"""The pattern optimizer's objective and its closed-form node updates.

The observer instills a pattern f_c and pays a proximity penalty for moving
away from the pattern currently trusted by the controller:

    J_red(f_c) = E[log LR] + (lambda_reg / sigma_w^2) * P(f_c)

where E[log LR] comes from the moment ODEs and P is either a quadratic or a
logarithmic trust penalty.  Minimizing the pointwise integrand gives the
closed-form node update shared by the fixed-point and sweep solvers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import (
    DegenerateDenominatorError,
    NegativeDiscriminantError,
    NonPositiveFcError,
    UnsupportedError,
)
from ..model import (
    Constant,
    GridConfig,
    GridSampled,
    ModelParams,
    Pattern,
    TimeFunction,
    grid_function,
    sample_on_grid,
)
from ..moments import MomentCurves, expected_log_lr, solve_moments
from ..riccati import ValueCoeffs, misdirection_gain, pattern_curvature, solve_value_coeffs

PENALTY_QUADRATIC = "quadratic"
PENALTY_LOGARITHMIC = "logarithmic"
SOLVER_FPI = "fpi"
SOLVER_FBS = "fbs"
SOLVER_NN = "nn"

_PENALTIES = (PENALTY_QUADRATIC, PENALTY_LOGARITHMIC)
_SOLVERS = (SOLVER_FPI, SOLVER_FBS, SOLVER_NN)


@dataclass(frozen=True)
class RedConfig:
    """Settings for one pattern-optimization run.

    lambda_reg may be zero (pure payoff, used by the local-minimum checks);
    the solvers themselves are normally run with lambda_reg > 0.
    """

    lambda_reg: float
    penalty_kind: str = PENALTY_QUADRATIC
    f_c_initial: TimeFunction = Constant(1.0)
    solver: str = SOLVER_FPI
    tolerance: float = 1e-3
    max_iters: int = 200
    fbs_relaxation: float = 0.5

    def __post_init__(self):
        if self.penalty_kind not in _PENALTIES:
            raise ValueError(f"unknown penalty kind {self.penalty_kind!r}")
        if self.solver not in _SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}")
        if not self.lambda_reg >= 0.0:
            raise ValueError("lambda_reg must be >= 0")
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0.0 < self.fbs_relaxation <= 1.0:
            raise ValueError("fbs_relaxation must be in (0, 1]")


@dataclass(frozen=True, eq=False)
class OptimizationReport:
    f_c: GridSampled
    objective_history: list[float]
    iterations: int
    converged: bool
    final_expected_log_lr: float
    final_penalty: float
    final_objective: float

    def as_dict(self) -> dict:
        return {
            "f_c": self.f_c.values.tolist(),
            "objective_history": list(self.objective_history),
            "iterations": self.iterations,
            "converged": self.converged,
            "final_expected_log_lr": self.final_expected_log_lr,
            "final_penalty": self.final_penalty,
            "final_objective": self.final_objective,
        }


def node_values(f_c, grid: GridConfig) -> np.ndarray:
    """Accept a TimeFunction or a bare node array; return node values."""
    if isinstance(f_c, TimeFunction):
        return sample_on_grid(f_c, grid)
    vals = np.asarray(f_c, dtype=float)
    if vals.shape != (grid.n_steps + 1,):
        raise ValueError(f"expected {grid.n_steps + 1} node values")
    return vals


def anchor_values(config: RedConfig, grid: GridConfig) -> np.ndarray:
    anchor = sample_on_grid(config.f_c_initial, grid)
    if config.penalty_kind == PENALTY_LOGARITHMIC and np.any(anchor <= 0.0):
        raise NonPositiveFcError("logarithmic penalty needs a positive anchor")
    return anchor


def penalty(f_c, config: RedConfig, grid: GridConfig) -> float:
    """Trapezoid quadrature of the trust penalty over [0, T]."""
    f = node_values(f_c, grid)
    anchor = anchor_values(config, grid)
    if config.penalty_kind == PENALTY_QUADRATIC:
        return float(np.trapezoid((f - anchor) ** 2, dx=grid.h))
    if np.any(f <= 0.0):
        raise NonPositiveFcError("logarithmic penalty needs f_c > 0 on the grid")
    return float(np.trapezoid(-anchor * np.log(f / anchor), dx=grid.h))


def solve_stack(params: ModelParams, f_nodes: np.ndarray, grid: GridConfig):
    """Coefficients, moments, and payoff for one pattern (zero offset)."""
    f_c = grid_function(f_nodes, grid)
    pattern = Pattern(f_c, Constant(0.0))
    coeffs = solve_value_coeffs(params, pattern, grid)
    moments = solve_moments(params, coeffs, f_c, grid)
    elr = expected_log_lr(params, coeffs, f_c, moments, grid)
    return coeffs, moments, elr


def red_objective(params: ModelParams, f_c, config: RedConfig, grid: GridConfig) -> float:
    f = node_values(f_c, grid)
    _, _, elr = solve_stack(params, f, grid)
    if config.lambda_reg == 0.0:
        return elr
    return elr + (config.lambda_reg / params.sigma_w**2) * penalty(f, config, grid)


def coupling_term(
    coeffs: ValueCoeffs, moments: MomentCurves, params: ModelParams
) -> np.ndarray:
    """(eta h11 + rho h02) / r_beta at every node.

    Measures how strongly the controller's cross terms couple into the
    payoff; identically zero for a zero pattern.  Diagnostic only.
    """
    return (coeffs.eta * moments.h11 + coeffs.rho * moments.h02) / params.r_beta


def require_unit_log_anchor(config: RedConfig, grid: GridConfig) -> None:
    """The log-penalty closed forms are derived for an anchor of one."""
    if config.penalty_kind != PENALTY_LOGARITHMIC:
        return
    anchor = sample_on_grid(config.f_c_initial, grid)
    if not np.allclose(anchor, 1.0, rtol=0.0, atol=1e-12):
        raise UnsupportedError(
            "logarithmic penalty solvers support only f_c_initial == 1"
        )


def closed_form_update(
    a: np.ndarray, b: np.ndarray, anchor: np.ndarray, config: RedConfig
) -> np.ndarray:
    """Minimizer of (a/2) f^2 + b f plus the scaled penalty, nodewise.

    Quadratic penalty: f = (2 lambda_reg anchor - b) / (a + 2 lambda_reg).
    Logarithmic (anchor 1): positive root of a f^2 + b f - lambda_reg = 0.
    """
    lreg = config.lambda_reg
    if config.penalty_kind == PENALTY_QUADRATIC:
        den = a + 2.0 * lreg
        if np.any(den <= 0.0):
            raise DegenerateDenominatorError(
                "quadratic update denominator not positive; "
                "lam too small or lambda_reg too weak"
            )
        return (2.0 * lreg * anchor - b) / den
    if np.any(a <= 0.0):
        raise DegenerateDenominatorError(
            "logarithmic update needs a positive leading coefficient "
            "(requires lam > r_beta sigma_w^2 / 2)"
        )
    disc = b * b + 4.0 * a * lreg
    if np.any(disc < 0.0):
        raise NegativeDiscriminantError("no real root for the logarithmic update")
    return (-b + np.sqrt(disc)) / (2.0 * a)


def hamiltonian_coeffs_fpi(
    coeffs: ValueCoeffs, moments: MomentCurves, params: ModelParams
):
    """Nodewise (a, b) of the payoff integrand seen as a function of f_c.

    a = (2u - 1) h02 and b = -(eta h11 + rho h02)/r_beta, with
    u = lam/(r_beta sigma_w^2); the 1/sigma_w^2 payoff prefactor cancels
    against the penalty scaling and is omitted from both.
    """
    u = misdirection_gain(params)
    a = (2.0 * u - 1.0) * moments.h02
    b = -coupling_term(coeffs, moments, params)
    return a, b


def finish_report(
    params: ModelParams,
    config: RedConfig,
    grid: GridConfig,
    f_nodes: np.ndarray,
    history: list[float],
    iterations: int,
    converged: bool,
) -> OptimizationReport:
    """Evaluate the returned pattern once more and assemble the report."""
    _, _, elr = solve_stack(params, f_nodes, grid)
    pen = penalty(f_nodes, config, grid) if config.lambda_reg != 0.0 else 0.0
    objective = elr + (config.lambda_reg / params.sigma_w**2) * pen
    history = list(history) + [objective]
    return OptimizationReport(
        f_c=grid_function(f_nodes, grid),
        objective_history=history,
        iterations=iterations,
        converged=converged,
        final_expected_log_lr=elr,
        final_penalty=pen,
        final_objective=objective,
    )
