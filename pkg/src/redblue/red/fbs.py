"""Forward-backward sweep solver for the pattern optimizer.

Treats the pattern as the control of a deterministic optimal-control problem
whose state stacks the coefficient block with the moment block,
x = (mu, eta, rho, h20, h11, h02).  Each sweep solves the state equations
(coefficients backward, then moments forward; the coefficient block is
autonomous so this ordering is exact), solves the six adjoint equations
backward from zero, and replaces the pattern by the relaxed Hamiltonian
minimizer.  The relaxation weight is halved whenever the objective rises,
which tames the oscillation plain sweeps are prone to.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import GridConfig, GridSampled, ModelParams, sample_on_half_grid
from ..moments import MomentCurves, nodes_to_half_grid
from ..odeint import OdeSystem, integrate_backward
from ..riccati import (
    ValueCoeffs,
    check_same_grid,
    half_grid_index,
    misdirection_gain,
    pattern_curvature,
)
from .objective import (
    SOLVER_FBS,
    OptimizationReport,
    RedConfig,
    anchor_values,
    closed_form_update,
    finish_report,
    penalty,
    require_unit_log_anchor,
    solve_stack,
)


@dataclass(frozen=True, eq=False)
class AdjointState:
    """Costate curves of the sweep, one per state component; zero at T."""

    grid: GridConfig
    psi1: np.ndarray
    psi2: np.ndarray
    psi3: np.ndarray
    psi4: np.ndarray
    psi5: np.ndarray
    psi6: np.ndarray


def solve_adjoint(
    params: ModelParams,
    f_nodes: np.ndarray,
    coeffs: ValueCoeffs,
    moments: MomentCurves,
    grid: GridConfig,
) -> AdjointState:
    """Backward RK4 solve of the six costate equations given the states."""
    check_same_grid(coeffs.grid, grid)
    check_same_grid(moments.grid, grid)
    x1 = nodes_to_half_grid(coeffs.mu)
    x2 = nodes_to_half_grid(coeffs.eta)
    x3 = nodes_to_half_grid(coeffs.rho)
    x4 = nodes_to_half_grid(moments.h20)
    x5 = nodes_to_half_grid(moments.h11)
    x6 = nodes_to_half_grid(moments.h02)
    fc = sample_on_half_grid(GridSampled(f_nodes, grid.horizon), grid)
    index = half_grid_index(grid)

    ra = params.r_alpha
    rb = params.r_beta
    u = misdirection_gain(params)

    def rhs(t: float, psi: np.ndarray) -> np.ndarray:
        p1, p2, p3, p4, p5, p6 = psi
        j = index(t)
        a1, a2, a3 = x1[j], x2[j], x3[j]
        a4, a5, a6 = x4[j], x5[j], x6[j]
        f = fc[j]
        d1 = -p1 * 2.0 * a1 / ra - p2 * a2 / ra + p4 * 2.0 * a4 / ra + p5 * a5 / ra
        d2 = (
            f * a5 / rb
            - 2.0 * p1 * (a2 / rb - 1.0)
            - p2 * (a1 / ra + a3 / rb - f * u)
            - p3 * 2.0 * a2 / ra
            + p4 * 2.0 * a5 / ra
            + p5 * (a4 / rb + a6 / ra)
            + p6 * 2.0 * a5 / rb
        )
        d3 = (
            f * a6 / rb
            - p2 * (a2 / rb - 1.0)
            - 2.0 * p3 * (a3 / rb - f * u)
            + p5 * a5 / rb
            + p6 * 2.0 * a6 / rb
        )
        d4 = p4 * 2.0 * a1 / ra + p5 * (a2 / rb - 1.0)
        d5 = (
            f * a2 / rb
            + p4 * 2.0 * a2 / ra
            + p5 * (-u * f + a3 / rb + a1 / ra)
            + 2.0 * p6 * (a2 / rb - 1.0)
        )
        d6 = (
            f * a3 / rb
            - 0.5 * f * f * (2.0 * u - 1.0)
            + p5 * a2 / ra
            + 2.0 * p6 * (a3 / rb - f * u)
        )
        return np.array([d1, d2, d3, d4, d5, d6])

    states = integrate_backward(OdeSystem(6, rhs), np.zeros(6), grid)
    return AdjointState(
        grid=grid,
        psi1=states[:, 0].copy(),
        psi2=states[:, 1].copy(),
        psi3=states[:, 2].copy(),
        psi4=states[:, 3].copy(),
        psi5=states[:, 4].copy(),
        psi6=states[:, 5].copy(),
    )


def _hamiltonian_coeffs(
    coeffs: ValueCoeffs,
    moments: MomentCurves,
    psi: AdjointState,
    params: ModelParams,
) -> tuple[np.ndarray, np.ndarray]:
    """Nodewise quadratic and linear coefficients of the Hamiltonian in f_c.

    With all costates zero these reduce to the fixed-point coefficients.
    """
    u = misdirection_gain(params)
    c2 = pattern_curvature(params)
    x2, x3 = coeffs.eta, coeffs.rho
    x5, x6 = moments.h11, moments.h02
    a = x6 * (2.0 * u - 1.0) + 2.0 * c2 * psi.psi3
    b = -(x2 * x5 + x3 * x6) / params.r_beta + u * (
        psi.psi5 * x5 + 2.0 * psi.psi6 * x6 - psi.psi2 * x2 - 2.0 * psi.psi3 * x3
    )
    return a, b


def fbs_solve(
    params: ModelParams, config: RedConfig, grid: GridConfig
) -> OptimizationReport:
    if config.solver != SOLVER_FBS:
        raise ValueError(f"config selects solver {config.solver!r}, not fbs")
    require_unit_log_anchor(config, grid)
    anchor = anchor_values(config, grid)
    scale = config.lambda_reg / params.sigma_w**2
    f = anchor.copy()
    omega = config.fbs_relaxation
    history: list[float] = []
    converged = False
    iterations = 0
    for it in range(config.max_iters):
        coeffs, moments, elr = solve_stack(params, f, grid)
        objective = elr + scale * penalty(f, config, grid)
        if history and objective > history[-1]:
            omega *= 0.5
        history.append(objective)
        psi = solve_adjoint(params, f, coeffs, moments, grid)
        a, b = _hamiltonian_coeffs(coeffs, moments, psi, params)
        f_hat = closed_form_update(a, b, anchor, config)
        f_new = (1.0 - omega) * f + omega * f_hat
        delta = float(np.linalg.norm(f_new - f))
        f = f_new
        iterations = it + 1
        if delta < config.tolerance:
            converged = True
            break
    return finish_report(params, config, grid, f, history, iterations, converged)
