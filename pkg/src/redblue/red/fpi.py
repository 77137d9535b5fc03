"""Fixed-point iteration for the pattern optimizer.

Each sweep solves the coefficient and moment systems under the current
pattern, then replaces every node value by the closed-form minimizer of the
payoff integrand at that node.  Iteration stops when the node vector moves
less than the tolerance in Euclidean norm.
"""

from __future__ import annotations

import numpy as np

from ..errors import UnsupportedError
from ..model import GridConfig, ModelParams
from ..moments import MomentCurves
from ..riccati import ValueCoeffs, misdirection_gain
from .objective import (
    PENALTY_QUADRATIC,
    SOLVER_FPI,
    OptimizationReport,
    RedConfig,
    anchor_values,
    closed_form_update,
    finish_report,
    hamiltonian_coeffs_fpi,
    penalty,
    require_unit_log_anchor,
    solve_stack,
)


def fpi_update(
    eta_t: float,
    rho_t: float,
    h11_t: float,
    h02_t: float,
    params: ModelParams,
    config: RedConfig,
    f_c_initial_t: float = 1.0,
) -> float:
    """Closed-form minimizer at a single node.

    ``f_c_initial_t`` is the anchor value at the node (only the quadratic
    penalty supports anchors other than one).
    """
    u = misdirection_gain(params)
    if config.penalty_kind != PENALTY_QUADRATIC and f_c_initial_t != 1.0:
        raise UnsupportedError(
            "logarithmic penalty update supports only an anchor of one"
        )
    a = np.array([(2.0 * u - 1.0) * h02_t])
    b = np.array([-(eta_t * h11_t + rho_t * h02_t) / params.r_beta])
    anchor = np.array([f_c_initial_t])
    return float(closed_form_update(a, b, anchor, config)[0])


def _update_nodes(
    coeffs: ValueCoeffs,
    moments: MomentCurves,
    anchor: np.ndarray,
    params: ModelParams,
    config: RedConfig,
) -> np.ndarray:
    a, b = hamiltonian_coeffs_fpi(coeffs, moments, params)
    return closed_form_update(a, b, anchor, config)


def fpi_solve(
    params: ModelParams, config: RedConfig, grid: GridConfig
) -> OptimizationReport:
    if config.solver != SOLVER_FPI:
        raise ValueError(f"config selects solver {config.solver!r}, not fpi")
    require_unit_log_anchor(config, grid)
    anchor = anchor_values(config, grid)
    scale = config.lambda_reg / params.sigma_w**2
    f = anchor.copy()
    history: list[float] = []
    converged = False
    iterations = 0
    for it in range(config.max_iters):
        coeffs, moments, elr = solve_stack(params, f, grid)
        history.append(elr + scale * penalty(f, config, grid))
        f_new = _update_nodes(coeffs, moments, anchor, params, config)
        delta = float(np.linalg.norm(f_new - f))
        f = f_new
        iterations = it + 1
        if delta < config.tolerance:
            converged = True
            break
    return finish_report(params, config, grid, f, history, iterations, converged)
