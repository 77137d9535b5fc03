"""Command-line front end: config loading, experiment commands, file output.

Config files are flat JSON documents with dotted keys ("model.sigma_W",
"grid.n_steps", ...).  Every output is a pure function of (config, seed):
CSV cells are printed with 17 significant digits and '\\n' line endings,
JSON is dumped with sorted keys, so reruns are byte-identical.

Exit codes: 0 success (a non-converged optimizer report is data, not an
error), 1 usage or config problem, 2 numeric failure during a run.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .controls import FeedbackPolicy, optimal_beta
from .errors import RedBlueError
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
    grid_function,
    sample_on_grid,
    validate_params,
)
from .moments import expected_log_lr, solve_moments
from .red import RedConfig
from .red.objective import solve_stack
from .riccati import solve_value_coeffs
from .sde import (
    Trajectory,
    log_lr_samples,
    mix_seed,
    monte_carlo,
    simulate_path,
)
from .stackelberg import baseline_summary, play_rounds, solve_red


class ConfigError(Exception):
    pass


_REQUIRED = object()

# key -> (kind, default); kind in {"float", "int", "str", "tf"}
_KEYS = {
    "model.T": ("float", _REQUIRED),
    "model.sigma_B": ("float", _REQUIRED),
    "model.sigma_W": ("float", _REQUIRED),
    "model.r_alpha": ("float", _REQUIRED),
    "model.r_beta": ("float", _REQUIRED),
    "model.r_v": ("float", _REQUIRED),
    "model.t_v": ("float", _REQUIRED),
    "model.vbar": ("tf", "constant:0"),
    "model.vbar_T": ("float", 0.0),
    "model.lambda": ("float", _REQUIRED),
    "model.v0": ("float", _REQUIRED),
    "model.y0": ("float", _REQUIRED),
    "grid.n_steps": ("int", _REQUIRED),
    "pattern.f_c": ("tf", "constant:0"),
    "pattern.f_d": ("tf", "constant:0"),
    "red.penalty": ("str", "quadratic"),
    "red.lambda_reg": ("float", 1.0),
    "red.solver": ("str", "fpi"),
    "red.f_c_initial": ("tf", "constant:1"),
    "red.tolerance": ("float", 1e-3),
    "red.max_iters": ("int", 200),
    "red.relaxation": ("float", 0.5),
    "mc.n_paths": ("int", 1000),
    "mc.sample_trajectories": ("int", 3),
    "stackelberg.n_rounds": ("int", 1),
    "seed": ("int", 0),
    "threads": ("int", 1),
    "out_dir": ("str", "out"),
}


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    grid: GridConfig
    pattern: Pattern
    red: RedConfig
    n_paths: int
    n_sample: int
    n_rounds: int
    seed: int
    threads: int
    out_dir: Path


def parse_time_function(text, horizon: float, key: str) -> TimeFunction:
    """Parse "constant:c", "affine:a,b", "sinusoid:amp,omega[,phase]",
    "grid:v0,v1,...".  A bare number is shorthand for a constant."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return Constant(float(text))
    if not isinstance(text, str):
        raise ConfigError(f"{key}: expected a string or number")
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    try:
        args = [float(p) for p in rest.split(",")] if rest.strip() else []
    except ValueError:
        raise ConfigError(f"{key}: non-numeric argument in {text!r}") from None
    if kind == "constant" and len(args) == 1:
        return Constant(args[0])
    if kind == "affine" and len(args) == 2:
        return Affine(args[0], args[1])
    if kind == "sinusoid" and len(args) in (2, 3):
        phase = args[2] if len(args) == 3 else 0.0
        return Sinusoid(args[0], args[1], phase)
    if kind == "grid" and len(args) >= 2:
        return GridSampled(np.asarray(args), horizon)
    raise ConfigError(f"{key}: cannot parse time function {text!r}")


def _coerce(key: str, kind: str, value):
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key}: expected a number")
        return float(value)
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key}: expected an integer")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a string")
        return value
    return value  # "tf": parsed later, once the horizon is known


def build_run_config(
    doc: dict,
    seed: int | None = None,
    threads: int | None = None,
    out_dir: str | None = None,
) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - set(_KEYS))
    if unknown:
        raise ConfigError("unknown config keys: " + ", ".join(unknown))
    missing = sorted(
        k for k, (_, dflt) in _KEYS.items() if dflt is _REQUIRED and k not in doc
    )
    if missing:
        raise ConfigError("missing required config keys: " + ", ".join(missing))
    raw = {}
    for key, (kind, dflt) in _KEYS.items():
        raw[key] = _coerce(key, kind, doc.get(key, dflt))

    horizon = raw["model.T"]
    if not (isinstance(horizon, float) and horizon > 0.0):
        raise ConfigError("model.T must be a positive number")

    def tf(key):
        return parse_time_function(raw[key], horizon, key)

    params = ModelParams(
        horizon=horizon,
        sigma_b=raw["model.sigma_B"],
        sigma_w=raw["model.sigma_W"],
        r_alpha=raw["model.r_alpha"],
        r_beta=raw["model.r_beta"],
        r_v=raw["model.r_v"],
        t_v=raw["model.t_v"],
        vbar=tf("model.vbar"),
        vbar_final=raw["model.vbar_T"],
        lam=raw["model.lambda"],
        v0=raw["model.v0"],
        y0=raw["model.y0"],
    )
    validate_params(params)
    grid = GridConfig(n_steps=raw["grid.n_steps"], horizon=horizon)
    pattern = Pattern(f_c=tf("pattern.f_c"), f_d=tf("pattern.f_d"))
    red = RedConfig(
        lambda_reg=raw["red.lambda_reg"],
        penalty_kind=raw["red.penalty"],
        f_c_initial=tf("red.f_c_initial"),
        solver=raw["red.solver"],
        tolerance=raw["red.tolerance"],
        max_iters=raw["red.max_iters"],
        fbs_relaxation=raw["red.relaxation"],
    )
    n_paths = raw["mc.n_paths"]
    if n_paths < 2:
        raise ConfigError("mc.n_paths must be >= 2")
    n_sample = raw["mc.sample_trajectories"]
    if n_sample < 0:
        raise ConfigError("mc.sample_trajectories must be >= 0")
    n_rounds = raw["stackelberg.n_rounds"]
    if n_rounds < 1:
        raise ConfigError("stackelberg.n_rounds must be >= 1")
    cfg_seed = raw["seed"] if seed is None else seed
    if cfg_seed < 0:
        raise ConfigError("seed must be >= 0")
    cfg_threads = raw["threads"] if threads is None else threads
    if cfg_threads < 1:
        raise ConfigError("threads must be >= 1")
    return RunConfig(
        params=params,
        grid=grid,
        pattern=pattern,
        red=red,
        n_paths=n_paths,
        n_sample=n_sample,
        n_rounds=n_rounds,
        seed=cfg_seed,
        threads=cfg_threads,
        out_dir=Path(raw["out_dir"] if out_dir is None else out_dir),
    )


# ---------------------------------------------------------------------------
# file writers


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path: Path, obj) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _coeff_rows(grid: GridConfig, coeffs):
    times = grid.times()
    for k in range(times.size):
        yield (
            times[k],
            coeffs.mu[k],
            coeffs.eta[k],
            coeffs.rho[k],
            coeffs.gamma[k],
            coeffs.theta[k],
            coeffs.xi[k],
        )


def _trajectory_rows(trajectories: list[Trajectory]):
    for pid, traj in enumerate(trajectories):
        n = traj.times.size - 1
        for k in range(n + 1):
            alpha = _fmt(traj.alpha_path[k]) if k < n else ""
            beta = _fmt(traj.beta_path[k]) if k < n else ""
            yield (traj.times[k], str(pid), traj.v_path[k], traj.y_path[k], alpha, beta)


def write_coeffs_csv(path: Path, grid: GridConfig, coeffs) -> None:
    write_csv(
        path,
        ["t", "mu", "eta", "rho", "gamma", "theta", "xi"],
        _coeff_rows(grid, coeffs),
    )


def write_trajectories_csv(path: Path, trajectories: list[Trajectory]) -> None:
    write_csv(
        path,
        ["t", "path_id", "v", "y", "alpha", "beta"],
        _trajectory_rows(trajectories),
    )


def write_fc_csv(path: Path, grid: GridConfig, values: np.ndarray) -> None:
    write_csv(path, ["t", "f_c"], zip(grid.times(), values))


# ---------------------------------------------------------------------------
# SVG plots (optional; line charts only, no external tooling)

_SVG_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
_SVG_W, _SVG_H = 640, 420
_SVG_L, _SVG_R, _SVG_T, _SVG_B = 64, 16, 36, 48


def _svg_line_chart(title: str, xlabel: str, ylabel: str, curves) -> str:
    """curves: list of (label, x array, y array)."""
    xs = np.concatenate([np.asarray(c[1], dtype=float) for c in curves])
    ys = np.concatenate([np.asarray(c[2], dtype=float) for c in curves])
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = float(ys.min()), float(ys.max())
    if xmax == xmin:
        xmax = xmin + 1.0
    pad = 0.05 * (ymax - ymin) if ymax > ymin else 1.0
    ymin, ymax = ymin - pad, ymax + pad
    iw = _SVG_W - _SVG_L - _SVG_R
    ih = _SVG_H - _SVG_T - _SVG_B

    def sx(x):
        return _SVG_L + (x - xmin) * iw / (xmax - xmin)

    def sy(y):
        return _SVG_H - _SVG_B - (y - ymin) * ih / (ymax - ymin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<rect x="{_SVG_L}" y="{_SVG_T}" width="{iw}" height="{ih}" '
        'fill="none" stroke="black"/>',
        f'<text x="{_SVG_W / 2:.2f}" y="20" text-anchor="middle" '
        f'font-size="14">{title}</text>',
        f'<text x="{_SVG_W / 2:.2f}" y="{_SVG_H - 10}" '
        f'text-anchor="middle">{xlabel}</text>',
        f'<text x="16" y="{_SVG_T + ih / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_SVG_T + ih / 2:.2f})">{ylabel}</text>',
    ]
    for i in range(5):
        tx = xmin + i * (xmax - xmin) / 4
        ty = ymin + i * (ymax - ymin) / 4
        px, py = sx(tx), sy(ty)
        parts.append(
            f'<line x1="{px:.2f}" y1="{_SVG_H - _SVG_B}" x2="{px:.2f}" '
            f'y2="{_SVG_H - _SVG_B + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{_SVG_H - _SVG_B + 18}" '
            f'text-anchor="middle">{tx:.4g}</text>'
        )
        parts.append(
            f'<line x1="{_SVG_L - 5}" y1="{py:.2f}" x2="{_SVG_L}" '
            f'y2="{py:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_SVG_L - 8}" y="{py + 4:.2f}" '
            f'text-anchor="end">{ty:.4g}</text>'
        )
    for i, (label, cx, cy) in enumerate(curves):
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        pts = " ".join(
            f"{sx(float(a)):.2f},{sy(float(b)):.2f}" for a, b in zip(cx, cy)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            'stroke-width="1.5"/>'
        )
        if label:
            ly = _SVG_T + 16 + 16 * i
            parts.append(
                f'<line x1="{_SVG_L + iw - 90}" y1="{ly - 4}" '
                f'x2="{_SVG_L + iw - 70}" y2="{ly - 4}" stroke="{color}" '
                'stroke-width="1.5"/>'
            )
            parts.append(f'<text x="{_SVG_L + iw - 64}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(path: Path, title, xlabel, ylabel, curves) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(_svg_line_chart(title, xlabel, ylabel, curves))


def _plot_trajectories(out: Path, trajectories: list[Trajectory]) -> None:
    if not trajectories:
        return
    states = []
    controls = []
    for pid, traj in enumerate(trajectories):
        states.append((f"V path {pid}", traj.times, traj.v_path))
        states.append((f"Y path {pid}", traj.times, traj.y_path))
        controls.append((f"alpha path {pid}", traj.times[:-1], traj.alpha_path))
        controls.append((f"beta path {pid}", traj.times[:-1], traj.beta_path))
    write_svg(out / "trajectories.svg", "Sample paths", "t", "state", states)
    write_svg(out / "controls.svg", "Realized controls", "t", "control", controls)


# ---------------------------------------------------------------------------
# commands


def cmd_blue_solve(cfg: RunConfig, plots: bool = False) -> int:
    policy = FeedbackPolicy.solve(cfg.params, cfg.pattern, cfg.grid)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    write_coeffs_csv(out / "coeffs.csv", cfg.grid, policy.coeffs)
    summary = monte_carlo(
        policy, cfg.pattern, cfg.grid, cfg.n_paths, cfg.seed, threads=cfg.threads
    )
    write_json(out / "mc_summary.json", summary.as_dict())
    # sample trajectories are the first paths of the Monte Carlo ensemble
    trajectories = [
        simulate_path(policy, cfg.grid, mix_seed(cfg.seed, i))
        for i in range(cfg.n_sample)
    ]
    write_trajectories_csv(out / "trajectories.csv", trajectories)
    if plots:
        _plot_trajectories(out, trajectories)
    print(f"blue-solve: wrote {out}/coeffs.csv, trajectories.csv, mc_summary.json")
    return 0


def cmd_red_optimize(cfg: RunConfig, plots: bool = False) -> int:
    report = solve_red(cfg.params, cfg.red, cfg.grid, cfg.seed)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    write_fc_csv(out / "fc_optimized.csv", cfg.grid, report.f_c.values)
    write_json(out / "report.json", report.as_dict())
    if plots:
        write_svg(
            out / "fc_optimized.svg",
            "Optimized pattern",
            "t",
            "f_c",
            [("f_c", cfg.grid.times(), report.f_c.values)],
        )
    status = "converged" if report.converged else "not converged"
    print(
        f"red-optimize: {status} after {report.iterations} iterations, "
        f"objective {report.final_objective:.17g}"
    )
    return 0


def cmd_stackelberg(cfg: RunConfig, plots: bool = False) -> int:
    records = play_rounds(
        cfg.params,
        cfg.pattern.f_c,
        cfg.red,
        cfg.n_rounds,
        cfg.n_paths,
        cfg.seed,
        cfg.grid,
        n_sample_trajectories=cfg.n_sample,
        threads=cfg.threads,
    )
    baseline = baseline_summary(
        cfg.params, cfg.grid, cfg.n_paths, cfg.seed, threads=cfg.threads
    )
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    rounds_payload = []
    fc_curves = []
    for record in records:
        rdir = out / f"round_{record.round_index:02d}"
        rdir.mkdir(parents=True, exist_ok=True)
        pattern = Pattern(record.f_c_used, Constant(0.0))
        coeffs = solve_value_coeffs(cfg.params, pattern, cfg.grid)
        write_coeffs_csv(rdir / "coeffs.csv", cfg.grid, coeffs)
        write_fc_csv(rdir / "fc_used.csv", cfg.grid, record.f_c_used.values)
        write_json(rdir / "mc_summary.json", record.mc.as_dict())
        write_trajectories_csv(rdir / "trajectories.csv", record.sample_trajectories)
        if plots:
            _plot_trajectories(rdir, record.sample_trajectories)
        rounds_payload.append(
            {
                "round_index": record.round_index,
                "f_c": record.f_c_used.values.tolist(),
                "expected_log_lr_moment": record.expected_log_lr_moment,
                "mc": record.mc.as_dict(),
            }
        )
        fc_curves.append(
            (
                f"round {record.round_index}",
                cfg.grid.times(),
                record.f_c_used.values,
            )
        )
    write_json(
        out / "rounds.json",
        {"baseline": baseline.as_dict(), "rounds": rounds_payload},
    )
    if plots:
        write_svg(out / "fc_rounds.svg", "Pattern by round", "t", "f_c", fc_curves)
    print(f"stackelberg: wrote {len(records)} round directories and rounds.json")
    return 0


# ---------------------------------------------------------------------------
# validate: invariant suite on the configured model


def _coeff_residual(coeffs) -> float:
    return float(
        max(
            np.max(np.abs(coeffs.eta)),
            np.max(np.abs(coeffs.rho)),
            np.max(np.abs(coeffs.theta)),
        )
    )


def _check_zero_pattern(cfg: RunConfig):
    coeffs = solve_value_coeffs(cfg.params, ZERO_PATTERN, cfg.grid)
    resid = _coeff_residual(coeffs)
    policy = FeedbackPolicy(cfg.params, ZERO_PATTERN, cfg.grid, coeffs)
    worst = 0.0
    for t in np.linspace(0.0, cfg.grid.horizon, 7):
        for v in (-1.0, 0.0, 2.0):
            for y in (-2.0, 0.0, 3.0):
                worst = max(worst, abs(optimal_beta(policy, float(t), v, y)))
    ok = resid <= 1e-8 and worst <= 1e-12
    return ok, f"coefficient residual {resid:.2e}, max |beta| {worst:.2e}"


def _check_full_intensity(cfg: RunConfig):
    params = replace(cfg.params, lam=cfg.params.lam_upper)
    coeffs = solve_value_coeffs(params, cfg.pattern, cfg.grid)
    resid = _coeff_residual(coeffs)
    return resid <= 1e-8, f"coefficient residual {resid:.2e}"


def _check_martingale(cfg: RunConfig):
    policy = FeedbackPolicy.solve(cfg.params, ZERO_PATTERN, cfg.grid)
    fc = sample_on_grid(cfg.pattern.f_c, cfg.grid)
    fd = sample_on_grid(cfg.pattern.f_d, cfg.grid)
    if not (np.any(fc != 0.0) or np.any(fd != 0.0)):
        fc = np.ones(cfg.grid.n_steps + 1)
    # the identity holds for any pattern, but the mean of exp(log L) is only
    # estimable when Var(log L) is modest; a pilot run measures the quadratic
    # variation (-2 E log L under the null) and the pattern is scaled down
    base = Pattern(grid_function(fc, cfg.grid), grid_function(fd, cfg.grid))
    pilot = log_lr_samples(policy, base, cfg.grid, 256, mix_seed(cfg.seed, 90, 0))
    quad_var = max(-2.0 * float(np.mean(pilot)), 1e-12)
    scale = min(1.0, 0.5 / math.sqrt(quad_var))
    pattern = Pattern(
        grid_function(scale * fc, cfg.grid), grid_function(scale * fd, cfg.grid)
    )
    n = min(cfg.n_paths, 20000)
    samples = np.exp(
        log_lr_samples(policy, pattern, cfg.grid, n, mix_seed(cfg.seed, 90, 1))
    )
    mean = float(np.mean(samples))
    se = float(np.std(samples, ddof=1) / math.sqrt(n))
    ok = abs(mean - 1.0) <= 3.0 * se
    return ok, f"mean exp(log L) {mean:.6f}, se {se:.2e}, scale {scale:.3g}"


def _check_cross_oracle(cfg: RunConfig):
    policy = FeedbackPolicy.solve(cfg.params, cfg.pattern, cfg.grid)
    mc = monte_carlo(
        policy,
        cfg.pattern,
        cfg.grid,
        cfg.n_paths,
        mix_seed(cfg.seed, 91),
        threads=cfg.threads,
    )
    moments = solve_moments(cfg.params, policy.coeffs, cfg.pattern.f_c, cfg.grid)
    elr = expected_log_lr(cfg.params, policy.coeffs, cfg.pattern.f_c, moments, cfg.grid)
    gap = abs(mc.mean_log_lr - elr)
    ok = gap <= 3.0 * mc.se_log_lr
    return ok, f"MC {mc.mean_log_lr:.6f} vs ODE {elr:.6f}, 3 se {3 * mc.se_log_lr:.2e}"


def _check_gradient(cfg: RunConfig):
    # stationarity of the payoff at a zero pattern, checked in the upper
    # half of the admissible misdirection range where it must be a minimum
    params = cfg.params
    if not params.lam > 0.5 * params.lam_upper:
        params = replace(params, lam=0.75 * params.lam_upper)
    n1 = cfg.grid.n_steps + 1
    zero = np.zeros(n1)

    def objective(f):
        return solve_stack(params, f, cfg.grid)[2]

    step = 1e-5
    sample = np.unique(np.linspace(0, n1 - 1, 15).astype(int))
    grad = 0.0
    for k in sample:
        bump = zero.copy()
        bump[k] = step
        up = objective(bump)
        bump[k] = -step
        down = objective(bump)
        grad = max(grad, abs(up - down) / (2.0 * step))
    # dense random directions: a single-node bump can sit exactly on a
    # vanishing moment weight (y0 = 0) and mask the minimum
    rng = np.random.default_rng(mix_seed(cfg.seed, 92))
    ascent_ok = True
    for _ in range(5):
        direction = rng.standard_normal(n1)
        direction /= np.linalg.norm(direction)
        if not objective(1e-2 * direction) > 0.0:
            ascent_ok = False
    ok = grad <= 1e-4 and ascent_ok
    return ok, f"max |dJ/df| {grad:.2e}, ascent in sampled directions {ascent_ok}"


def _check_refinement(cfg: RunConfig):
    fine_grid = GridConfig(2 * cfg.grid.n_steps, cfg.grid.horizon)
    coarse = solve_value_coeffs(cfg.params, cfg.pattern, cfg.grid)
    fine = solve_value_coeffs(cfg.params, cfg.pattern, fine_grid)
    err = 0.0
    for name in ("mu", "eta", "rho", "gamma", "theta", "xi"):
        a = getattr(coarse, name)
        b = getattr(fine, name)[::2]
        err = max(err, float(np.max(np.abs(a - b)) / (1.0 + np.max(np.abs(b)))))
    return err <= 1e-6, f"step-halving residual {err:.2e}"


_VALIDATE_CHECKS = [
    ("zero-pattern-decoupling", _check_zero_pattern),
    ("full-intensity-decoupling", _check_full_intensity),
    ("martingale-normalization", _check_martingale),
    ("moment-cross-oracle", _check_cross_oracle),
    ("gradient-stationarity", _check_gradient),
    ("grid-refinement", _check_refinement),
]


def cmd_validate(cfg: RunConfig, plots: bool = False) -> int:
    failures = 0
    for name, fn in _VALIDATE_CHECKS:
        try:
            ok, detail = fn(cfg)
        except (RedBlueError, ValueError) as exc:
            ok, detail = False, f"error: {exc}"
        if not ok:
            failures += 1
        print(f"{name:28s} {'PASS' if ok else 'FAIL'}  {detail}")
    if failures:
        print(f"validate: {failures} check(s) failed")
        return 2
    print("validate: all checks passed")
    return 0


# ---------------------------------------------------------------------------
# entry point

_COMMANDS = {
    "blue-solve": cmd_blue_solve,
    "red-optimize": cmd_red_optimize,
    "stackelberg": cmd_stackelberg,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="redblue",
        description="Misdirection-aware LQ control and pattern optimization",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to a JSON config")
        p.add_argument("--out", default=None, help="output directory override")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--plots", action="store_true", help="emit SVG plots")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        with open(args.config) as fh:
            doc = json.load(fh)
        cfg = build_run_config(
            doc, seed=args.seed, threads=args.threads, out_dir=args.out
        )
    except (ConfigError, OSError, ValueError, RedBlueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](cfg, plots=args.plots)
    except (RedBlueError, ValueError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
