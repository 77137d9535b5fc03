"""Backward solve of the value-function coefficient system.

The blue team's value function is quadratic in (v, y):

    V(t, v, y) = mu/2 v^2 + eta v y + rho/2 y^2 + gamma v + theta y + xi,

so dynamic programming reduces to six coupled scalar ODEs integrated backward
from the terminal cost.  The (mu, eta, rho) block is autonomous; gamma, theta
pick up the running target vbar and the pattern offset f_d; xi collects the
constant terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError
from .model import GridConfig, ModelParams, Pattern, sample_on_half_grid
from .odeint import OdeSystem, integrate_backward


@dataclass(frozen=True, eq=False)
class ValueCoeffs:
    """Grid-sampled coefficient curves, each of length n_steps + 1."""

    grid: GridConfig
    mu: np.ndarray
    eta: np.ndarray
    rho: np.ndarray
    gamma: np.ndarray
    theta: np.ndarray
    xi: np.ndarray

    def value(self, k: int, v: float, y: float) -> float:
        """Quadratic value at node k (diagnostic)."""
        return (
            0.5 * self.mu[k] * v * v
            + self.eta[k] * v * y
            + 0.5 * self.rho[k] * y * y
            + self.gamma[k] * v
            + self.theta[k] * y
            + self.xi[k]
        )


def check_same_grid(a: GridConfig, b: GridConfig) -> None:
    if a.n_steps != b.n_steps or a.horizon != b.horizon:
        raise GridMismatchError(f"grids differ: {a} vs {b}")


def misdirection_gain(params: ModelParams) -> float:
    """lam / (r_beta * sigma_w^2), the weight of the pattern in beta-hat.

    Zero misdirection weight short-circuits to 0.0, which keeps degenerate
    sigma_w = 0 parameter sets usable in deterministic simulation tests.
    """
    if params.lam == 0.0:
        return 0.0
    return params.lam / (params.r_beta * params.sigma_w**2)


def pattern_curvature(params: ModelParams) -> float:
    """Coefficient of f_c^2 in the rho equation.

    Written in factored form so it is exactly zero at the upper misdirection
    bound lam = r_beta * sigma_w^2, where the coefficient system decouples.
    """
    if params.lam == 0.0:
        return 0.0
    u = misdirection_gain(params)
    return (params.lam / params.sigma_w**2) * (u - 1.0)


def half_grid_index(grid: GridConfig):
    """Map a stage time (node or midpoint) to its half-grid array index."""
    scale = 2.0 * grid.n_steps / grid.horizon
    top = 2 * grid.n_steps

    def index(t: float) -> int:
        j = int(round(t * scale))
        if j < 0:
            return 0
        if j > top:
            return top
        return j

    return index


def terminal_conditions(params: ModelParams) -> np.ndarray:
    return np.array(
        [
            params.t_v,
            0.0,
            0.0,
            -params.t_v * params.vbar_final,
            0.0,
            0.5 * params.t_v * params.vbar_final**2,
        ]
    )


def solve_value_coeffs(
    params: ModelParams, pattern: Pattern, grid: GridConfig
) -> ValueCoeffs:
    """Backward RK4 solve of the six coefficient equations.

    The last node satisfies the terminal conditions exactly.  Pattern and
    target curves are pre-sampled at nodes and midpoints, the only times the
    integrator touches.
    """
    fc = sample_on_half_grid(pattern.f_c, grid)
    fd = sample_on_half_grid(pattern.f_d, grid)
    vb = sample_on_half_grid(params.vbar, grid)
    index = half_grid_index(grid)

    r_alpha = params.r_alpha
    r_beta = params.r_beta
    r_v = params.r_v
    u = misdirection_gain(params)
    c2 = pattern_curvature(params)
    sb2 = params.sigma_b**2
    sw2 = params.sigma_w**2

    def rhs(t: float, state: np.ndarray) -> np.ndarray:
        mu, eta, rho, gamma, theta, xi = state
        j = index(t)
        fc_t = fc[j]
        fd_t = fd[j]
        vb_t = vb[j]
        d_mu = mu * mu / r_alpha + eta * eta / r_beta - 2.0 * eta - r_v
        d_eta = mu * eta / r_alpha + rho * eta / r_beta - rho - u * eta * fc_t
        d_rho = (
            eta * eta / r_alpha
            + rho * rho / r_beta
            - 2.0 * u * rho * fc_t
            + c2 * fc_t * fc_t
        )
        d_gamma = (
            mu * gamma / r_alpha
            + eta * theta / r_beta
            - theta
            + r_v * vb_t
            - u * eta * fd_t
        )
        d_theta = (
            eta * gamma / r_alpha
            + rho * theta / r_beta
            - u * theta * fc_t
            - u * fd_t * rho
            + c2 * fc_t * fd_t
        )
        d_xi = (
            gamma * gamma / (2.0 * r_alpha)
            + theta * theta / (2.0 * r_beta)
            - 0.5 * sb2 * mu
            - 0.5 * sw2 * rho
            - u * fd_t * theta
            - 0.5 * r_v * vb_t * vb_t
            + 0.5 * c2 * fd_t * fd_t
        )
        return np.array([d_mu, d_eta, d_rho, d_gamma, d_theta, d_xi])

    system = OdeSystem(6, rhs)
    states = integrate_backward(system, terminal_conditions(params), grid)
    return ValueCoeffs(
        grid=grid,
        mu=states[:, 0].copy(),
        eta=states[:, 1].copy(),
        rho=states[:, 2].copy(),
        gamma=states[:, 3].copy(),
        theta=states[:, 4].copy(),
        xi=states[:, 5].copy(),
    )
