"""Fixed-step classical Runge-Kutta integration on the uniform grid.

The solvers in this package keep every curve aligned with the grid that the
pattern optimizers use for their control vectors, so the integrator takes
fixed steps of size h = T / n_steps and evaluates right-hand sides only at
nodes and midpoints.  Backward problems are integrated forward in the
reversed time s = T - t through the same code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonFiniteStateError
from .model import GridConfig


@dataclass(frozen=True)
class OdeSystem:
    dimension: int
    rhs: Callable[[float, np.ndarray], np.ndarray]


def _check_finite(state: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(state)):
        raise NonFiniteStateError(f"non-finite state at t={t}: {state}")


def integrate_forward(
    system: OdeSystem, initial_state, grid: GridConfig
) -> np.ndarray:
    """RK4 solution sampled at every node; row 0 is the initial state.

    Stage times are t_k, t_k + h/2, t_k + h, so grid-sampled coefficients
    are only ever read at half-grid points.
    """
    state = np.asarray(initial_state, dtype=float).copy()
    if state.shape != (system.dimension,):
        raise ValueError(
            f"initial state shape {state.shape} != ({system.dimension},)"
        )
    _check_finite(state, 0.0)
    n = grid.n_steps
    h = grid.h
    rhs = system.rhs
    out = np.empty((n + 1, system.dimension))
    out[0] = state
    for k in range(n):
        t = k * h
        k1 = rhs(t, state)
        k2 = rhs(t + 0.5 * h, state + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, state + 0.5 * h * k2)
        k4 = rhs(t + h, state + h * k3)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check_finite(state, t + h)
        out[k + 1] = state
    return out


def integrate_backward(
    system: OdeSystem, terminal_state, grid: GridConfig
) -> np.ndarray:
    """RK4 solution backward from t = T; row n_steps is the terminal state.

    Substitutes s = T - t and integrates forward, which flips the sign of
    the right-hand side.
    """
    horizon = grid.horizon

    def reversed_rhs(s: float, state: np.ndarray) -> np.ndarray:
        return -np.asarray(system.rhs(horizon - s, state))

    reversed_system = OdeSystem(system.dimension, reversed_rhs)
    states = integrate_forward(reversed_system, terminal_state, grid)
    return states[::-1].copy()
