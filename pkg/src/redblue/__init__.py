"""Misdirection-aware linear-quadratic control and pattern optimization."""

from .controls import FeedbackPolicy, optimal_alpha, optimal_beta
from .errors import (
    DegenerateDenominatorError,
    GridMismatchError,
    LambdaOutOfRangeError,
    NegativeDiscriminantError,
    NonFiniteStateError,
    NonPositiveFcError,
    NonPositiveHorizonError,
    NonPositiveWeightError,
    OutOfDomainError,
    RedBlueError,
    UnsupportedError,
)
from .model import (
    Affine,
    Constant,
    GridConfig,
    GridSampled,
    ModelParams,
    Pattern,
    Sinusoid,
    TimeFunction,
    ZERO_PATTERN,
    eval_time_function,
    grid_function,
    sample_on_grid,
    sample_on_half_grid,
    validate_params,
)
from .moments import MomentCurves, expected_log_lr, solve_moments
from .red import (
    PENALTY_LOGARITHMIC,
    PENALTY_QUADRATIC,
    SOLVER_FBS,
    SOLVER_FPI,
    SOLVER_NN,
    AdjointState,
    MlpNetwork,
    OptimizationReport,
    RedConfig,
    coupling_term,
    fbs_solve,
    fpi_solve,
    fpi_update,
    init_network,
    nn_forward,
    nn_gradient,
    nn_solve,
    penalty,
    red_objective,
    solve_adjoint,
)
from .riccati import (
    ValueCoeffs,
    misdirection_gain,
    pattern_curvature,
    solve_value_coeffs,
    terminal_conditions,
)
from .sde import (
    McSummary,
    Trajectory,
    log_likelihood_ratio,
    log_lr_samples,
    mix_seed,
    monte_carlo,
    primary_cost,
    sample_paths,
    simulate_path,
)
from .stackelberg import RoundRecord, baseline_summary, play_rounds

__version__ = "0.1.0"

__all__ = [
    "Affine",
    "AdjointState",
    "Constant",
    "DegenerateDenominatorError",
    "FeedbackPolicy",
    "GridConfig",
    "GridMismatchError",
    "GridSampled",
    "LambdaOutOfRangeError",
    "McSummary",
    "MlpNetwork",
    "ModelParams",
    "MomentCurves",
    "NegativeDiscriminantError",
    "NonFiniteStateError",
    "NonPositiveFcError",
    "NonPositiveHorizonError",
    "NonPositiveWeightError",
    "OptimizationReport",
    "OutOfDomainError",
    "PENALTY_LOGARITHMIC",
    "PENALTY_QUADRATIC",
    "Pattern",
    "RedBlueError",
    "RedConfig",
    "RoundRecord",
    "SOLVER_FBS",
    "SOLVER_FPI",
    "SOLVER_NN",
    "Sinusoid",
    "TimeFunction",
    "Trajectory",
    "UnsupportedError",
    "ValueCoeffs",
    "ZERO_PATTERN",
    "baseline_summary",
    "coupling_term",
    "eval_time_function",
    "expected_log_lr",
    "fbs_solve",
    "fpi_solve",
    "fpi_update",
    "grid_function",
    "init_network",
    "log_likelihood_ratio",
    "log_lr_samples",
    "misdirection_gain",
    "mix_seed",
    "monte_carlo",
    "nn_forward",
    "nn_gradient",
    "nn_solve",
    "optimal_alpha",
    "optimal_beta",
    "pattern_curvature",
    "penalty",
    "play_rounds",
    "primary_cost",
    "red_objective",
    "sample_on_grid",
    "sample_on_half_grid",
    "sample_paths",
    "simulate_path",
    "solve_adjoint",
    "solve_moments",
    "solve_value_coeffs",
    "terminal_conditions",
    "validate_params",
]
