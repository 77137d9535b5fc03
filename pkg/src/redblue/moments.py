"""Second moments of the optimally controlled state, and the observer payoff.

In the simplified setting (f_d identically zero, zero velocity target) the
closed-loop dynamics are linear and homogeneous, so the second moments
h20 = E[V^2], h11 = E[V Y], h02 = E[Y^2] close under three coupled ODEs.
They give the expected log likelihood ratio of the instilled pattern in
closed form, which is what the pattern optimizers maximize.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError
from .model import GridConfig, ModelParams, TimeFunction, sample_on_half_grid
from .odeint import OdeSystem, integrate_forward
from .riccati import (
    ValueCoeffs,
    check_same_grid,
    half_grid_index,
    misdirection_gain,
)


@dataclass(frozen=True, eq=False)
class MomentCurves:
    """Grid-sampled h20, h11, h02 curves of length n_steps + 1."""

    grid: GridConfig
    h20: np.ndarray
    h11: np.ndarray
    h02: np.ndarray


def nodes_to_half_grid(values: np.ndarray) -> np.ndarray:
    """Linear interpolation of node values onto nodes plus midpoints."""
    values = np.asarray(values, dtype=float)
    out = np.empty(2 * values.size - 1)
    out[0::2] = values
    out[1::2] = 0.5 * (values[:-1] + values[1:])
    return out


def _require_simplified(coeffs: ValueCoeffs) -> None:
    # The three-moment closure needs homogeneous closed-loop dynamics, i.e.
    # gamma and theta identically zero (zero targets and zero f_d).
    if np.max(np.abs(coeffs.gamma)) > 1e-12 or np.max(np.abs(coeffs.theta)) > 1e-12:
        raise ValueError(
            "moment closure requires the simplified model: "
            "zero velocity targets and zero pattern offset"
        )


def solve_moments(
    params: ModelParams,
    coeffs: ValueCoeffs,
    f_c: TimeFunction,
    grid: GridConfig,
) -> MomentCurves:
    """Forward RK4 solve of the three moment equations.

    ``coeffs`` must come from the same grid and the same f_c (with zero
    f_d and zero velocity targets).
    """
    check_same_grid(coeffs.grid, grid)
    _require_simplified(coeffs)
    mu_h = nodes_to_half_grid(coeffs.mu)
    eta_h = nodes_to_half_grid(coeffs.eta)
    rho_h = nodes_to_half_grid(coeffs.rho)
    fc_h = sample_on_half_grid(f_c, grid)
    index = half_grid_index(grid)

    r_alpha = params.r_alpha
    r_beta = params.r_beta
    u = misdirection_gain(params)
    sb2 = params.sigma_b**2
    sw2 = params.sigma_w**2

    def rhs(t: float, state: np.ndarray) -> np.ndarray:
        h20, h11, h02 = state
        j = index(t)
        mu = mu_h[j]
        eta = eta_h[j]
        rho = rho_h[j]
        fc_t = fc_h[j]
        d20 = -2.0 * (mu / r_alpha) * h20 - 2.0 * (eta / r_alpha) * h11 + sb2
        d11 = (
            (u * fc_t - rho / r_beta - mu / r_alpha) * h11
            + (1.0 - eta / r_beta) * h20
            - (eta / r_alpha) * h02
        )
        d02 = (
            2.0 * (1.0 - eta / r_beta) * h11
            + 2.0 * (u * fc_t - rho / r_beta) * h02
            + sw2
        )
        return np.array([d20, d11, d02])

    initial = np.array(
        [params.v0**2, params.v0 * params.y0, params.y0**2]
    )
    states = integrate_forward(OdeSystem(3, rhs), initial, grid)
    return MomentCurves(
        grid=grid,
        h20=states[:, 0].copy(),
        h11=states[:, 1].copy(),
        h02=states[:, 2].copy(),
    )


def expected_log_lr(
    params: ModelParams,
    coeffs: ValueCoeffs,
    f_c: TimeFunction,
    moments: MomentCurves,
    grid: GridConfig,
) -> float:
    """Trapezoid quadrature of the expected log likelihood ratio.

    Integrand at each node:
        (1/sigma_w^2) [ (-eta h11 - rho h02) f_c / r_beta
                        + (u - 1/2) h02 f_c^2 ]
    with u = lam / (r_beta sigma_w^2).
    """
    check_same_grid(coeffs.grid, grid)
    check_same_grid(moments.grid, grid)
    for curve in (coeffs.eta, coeffs.rho, moments.h11, moments.h02):
        if curve.shape != (grid.n_steps + 1,):
            raise GridMismatchError("curve length does not match the grid")
    fc = np.asarray(f_c(grid.times()), dtype=float)
    u = misdirection_gain(params)
    integrand = (
        (-coeffs.eta * moments.h11 - coeffs.rho * moments.h02)
        / params.r_beta
        * fc
        + (u - 0.5) * moments.h02 * fc * fc
    ) / params.sigma_w**2
    return float(np.trapezoid(integrand, dx=grid.h))
