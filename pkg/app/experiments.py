"""
Experiment harness: reproduces every published table and the data behind the
figures, plus single deterministic and Monte Carlo runs.
"""

import logging
import math
import numbers
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

import config
from app.errors import ConfigError, GridMismatch
from app.kernel import kernel_sweep
from app.oracle import OracleConfig, exact_grid, exact_solution, resolution_gap, unit_flux
from app.problem import ekman_problem
from app.quadrature import (
    CosineInverter,
    QuadratureGrid,
    gauss_laguerre_inverse,
    gauss_laguerre_rule,
    midpoint_inverse,
    select_radius,
    truncation_bound,
)
from app.stochastic import (
    MomentField,
    MonteCarloConfig,
    RandomCoefficients,
    TruncatedDistribution,
    mc_moments,
    reference_moments,
)
from app.utils import Stopwatch, summarize_report

logger = logging.getLogger(__name__)

Range = Tuple[float, float, float]


def example_coefficients() -> RandomCoefficients:
    """a ~ N(2, 0.1) on [0.8, 1.2], nu ~ Gamma(shape 4, rate 2) on [0.5, 1.5]."""
    return RandomCoefficients(
        a_dist=TruncatedDistribution.normal(2.0, 0.1, 0.8, 1.2),
        nu_dist=TruncatedDistribution.gamma(4.0, 0.5, 1.5, rate=2.0),
    )


def _is_real(value) -> bool:
    """Finite real number, booleans excluded."""
    return isinstance(value, numbers.Real) and not isinstance(value, bool) and math.isfinite(value)


def _is_integer(value) -> bool:
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


@dataclass
class ExperimentConfig:
    experiment: str = "custom"
    title: str = ""
    a: float = 1.0
    nu: float = 1.0
    coefficients: RandomCoefficients = field(default_factory=example_coefficients)
    R: float = config.DEFAULT_RADIUS
    h: float = config.DEFAULT_STEP
    R_list: List[float] = field(default_factory=lambda: list(config.RADII_DETERMINISTIC))
    h_list: List[float] = field(default_factory=lambda: list(config.STEPS))
    M_list: List[int] = field(default_factory=lambda: list(config.LAGUERRE_DEGREES))
    K: int = config.DEFAULT_K
    K_list: List[int] = field(default_factory=lambda: list(config.REALIZATIONS))
    seed: int = config.DEFAULT_SEED
    z: float = config.BENCHMARK_Z
    t: float = config.BENCHMARK_T
    z_range: Range = (0.0, 5.0, 0.1)
    t_range: Range = (0.0, 1.0, 0.01)
    oracle_panels: int = config.DEFAULT_ORACLE_PANELS
    nodes_per_dim: int = config.DEFAULT_NODES_PER_DIM
    threads: int = 1
    out: Optional[Path] = None

    def validate(self) -> List[Tuple[str, str]]:
        """Field-level problems; empty when the config is usable."""
        problems = []
        if self.experiment not in config.EXPERIMENT_IDS:
            problems.append(("experiment", f"unknown id '{self.experiment}'"))
        if not isinstance(self.title, str):
            problems.append(("title", f"must be a string, got {self.title!r}"))
        for name in ("a", "nu", "R", "h", "t"):
            value = getattr(self, name)
            if not (_is_real(value) and value > 0):
                problems.append((name, f"must be a positive number, got {value!r}"))
        if not (_is_real(self.z) and self.z >= 0):
            problems.append(("z", f"must be a number >= 0, got {self.z!r}"))

        for name in ("R_list", "h_list", "M_list", "K_list"):
            values = getattr(self, name)
            if not isinstance(values, (list, tuple)):
                problems.append((name, f"must be a list, got {values!r}"))
            elif not values:
                problems.append((name, "must not be empty"))
            elif not all(_is_real(v) and v > 0 for v in values):
                problems.append((name, "entries must be positive numbers"))
            elif name == "M_list" and not all(_is_integer(m) and m <= 64 for m in values):
                problems.append((name, "degrees must be integers in 1..64"))
            elif name == "K_list" and not all(_is_integer(k) and k >= 2 for k in values):
                problems.append((name, "realization counts must be integers >= 2"))

        for name, minimum in (("K", 2), ("seed", 0), ("oracle_panels", 100), ("nodes_per_dim", 8), ("threads", 1)):
            value = getattr(self, name)
            if not (_is_integer(value) and value >= minimum):
                problems.append((name, f"must be an integer >= {minimum}, got {value!r}"))

        for name in ("z_range", "t_range"):
            bounds = getattr(self, name)
            if not (isinstance(bounds, (list, tuple)) and len(bounds) == 3 and all(_is_real(v) for v in bounds)):
                problems.append((name, "must be [start, stop, step]"))
                continue
            start, stop, step = bounds
            if not step > 0:
                problems.append((name, f"step must be positive, got {step}"))
            if not (0 <= start <= stop):
                problems.append((name, f"need 0 <= start <= stop, got [{start}, {stop}]"))
        if self.out is not None and not isinstance(self.out, (str, Path)):
            problems.append(("out", f"must be a path, got {self.out!r}"))
        return problems

    @property
    def oracle(self) -> OracleConfig:
        return OracleConfig(panels=self.oracle_panels)


@dataclass
class ErrorReport:
    """Rows in sweep order plus any profile tables produced on the way."""
    experiment: str
    columns: List[str]
    rows: List[Dict[str, float]] = field(default_factory=list)
    profiles: Dict[str, pd.DataFrame] = field(default_factory=dict)
    note: str = ""

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)


def axis(bounds: Range) -> np.ndarray:
    """Evenly spaced axis start, start + step, ... up to and including stop, never past it."""
    start, stop, step = bounds
    span = (stop - start) / step
    count = math.floor(span + 1e-9 * max(1.0, span)) + 1
    return np.round(start + step * np.arange(count), 12)


def rmse(approx, reference) -> np.ndarray:
    """Componentwise root mean square difference over every grid point."""
    approx = np.asarray(approx, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if approx.shape != reference.shape:
        raise GridMismatch(f"Cannot compare fields of shapes {approx.shape} and {reference.shape}")
    diff = (approx - reference).reshape(-1, approx.shape[-1])
    return np.sqrt(np.mean(diff * diff, axis=0))


def _error_row(sweep_name: str, sweep_value, errors, columns, seconds: float) -> Dict[str, float]:
    return {sweep_name: sweep_value, columns[1]: float(errors[0]), columns[2]: float(errors[1]), "seconds": seconds}


def _columns(experiment: str) -> List[str]:
    return list(config.REPORT_COLUMNS[experiment]) + list(config.TIMING_COLUMNS)


def _benchmark_exact(cfg: ExperimentConfig) -> np.ndarray:
    resolution_gap(cfg.a, cfg.nu, unit_flux, cfg.z, cfg.t, cfg.oracle)
    return exact_solution(cfg.a, cfg.nu, unit_flux, cfg.z, cfg.t, cfg.oracle)


def _laguerre_table(cfg: ExperimentConfig) -> ErrorReport:
    columns = _columns("table1")
    report = ErrorReport("table1", columns, note=f"Gauss-Laguerre at z={cfg.z}, t={cfg.t}")
    problem = ekman_problem(cfg.a, cfg.nu)
    exact = _benchmark_exact(cfg)
    for M in cfg.M_list:
        with Stopwatch() as clock:
            approx = gauss_laguerre_inverse(problem, gauss_laguerre_rule(int(M)), cfg.z, cfg.t)
        report.rows.append(_error_row("M", int(M), np.abs(approx - exact), columns, clock.seconds))
    return report


def _midpoint_point_table(cfg: ExperimentConfig, experiment: str, sweep) -> ErrorReport:
    """Absolute errors at the benchmark point over a list of (R, h) pairs."""
    columns = _columns(experiment)
    report = ErrorReport(experiment, columns, note=f"midpoint rule at z={cfg.z}, t={cfg.t}")
    problem = ekman_problem(cfg.a, cfg.nu)
    exact = _benchmark_exact(cfg)
    for sweep_value, R, h in sweep:
        with Stopwatch() as clock:
            approx = midpoint_inverse(problem, QuadratureGrid.from_step(R, h), cfg.z, cfg.t)
        report.rows.append(_error_row(columns[0], sweep_value, np.abs(approx - exact), columns, clock.seconds))
    return report


def deterministic_field(cfg: ExperimentConfig, grid: QuadratureGrid, z_grid, t_grid) -> np.ndarray:
    """Midpoint solution of the Ekman problem on a tensor grid; t = 0 rows hold f = 0."""
    problem = ekman_problem(cfg.a, cfg.nu)
    inverter = CosineInverter.midpoint(grid, z_grid)
    field_values = np.zeros((len(t_grid), len(z_grid), 2))
    for i, t in enumerate(t_grid):
        if t > 0:
            field_values[i] = inverter.apply(kernel_sweep(problem, grid.nodes, t))
    return field_values


def _domain_table(cfg: ExperimentConfig) -> ErrorReport:
    columns = _columns("table4")
    z_grid, t_grid = axis(cfg.z_range), axis(cfg.t_range)
    report = ErrorReport(
        "table4", columns,
        note=f"RMSE over z in [{z_grid[0]}, {z_grid[-1]}] x t in [{t_grid[0]}, {t_grid[-1]}], "
             f"{z_grid.size}x{t_grid.size} points including z = 0 and t = 0",
    )
    exact = exact_grid(cfg.a, cfg.nu, unit_flux, z_grid, t_grid, cfg.oracle)
    for R in cfg.R_list:
        with Stopwatch() as clock:
            approx = deterministic_field(cfg, QuadratureGrid.from_step(R, cfg.h), z_grid, t_grid)
            errors = rmse(approx, exact)
        report.rows.append(_error_row("R", R, errors, columns, clock.seconds))
    report.profiles["exact_surface"] = _surface_frame(z_grid, t_grid, exact)
    return report


def _surface_frame(z_grid, t_grid, values) -> pd.DataFrame:
    zz, tt = np.meshgrid(z_grid, t_grid)
    return pd.DataFrame({
        "z": zz.ravel(), "t": tt.ravel(),
        "u1": values[..., 0].ravel(), "u2": values[..., 1].ravel(),
    })


def _moment_frame(moments: MomentField, prefix: str = "") -> pd.DataFrame:
    return pd.DataFrame({
        "z": moments.z_grid,
        f"{prefix}mean_u1": moments.mean[:, 0], f"{prefix}mean_u2": moments.mean[:, 1],
        f"{prefix}std_u1": moments.std[:, 0], f"{prefix}std_u2": moments.std[:, 1],
    })


def _reference(cfg: ExperimentConfig, z_grid) -> MomentField:
    return reference_moments(cfg.coefficients, z_grid, cfg.t, cfg.nodes_per_dim, cfg.oracle)


def monte_carlo(cfg: ExperimentConfig, K: int, R: float, z_grid) -> MomentField:
    mc_cfg = MonteCarloConfig(
        K=int(K), seed=cfg.seed, grid=QuadratureGrid.from_step(R, cfg.h),
        z_grid=np.asarray(z_grid), t=cfg.t, workers=cfg.threads,
    )
    return mc_moments(cfg.coefficients, mc_cfg)


def _moment_table(cfg: ExperimentConfig, experiment: str) -> ErrorReport:
    """Tables 5-8: RMSE of the Monte Carlo mean or std against the reference."""
    columns = _columns(experiment)
    z_grid = axis(cfg.z_range)
    report = ErrorReport(
        experiment, columns,
        note=f"t={cfg.t}, z in [{z_grid[0]}, {z_grid[-1]}] step {cfg.z_range[2]} including z = 0, "
             f"seed={cfg.seed}, h={cfg.h}",
    )
    reference = _reference(cfg, z_grid)
    use_std = experiment in ("table6", "table8")
    if experiment in ("table5", "table6"):
        sweep = [(int(K), int(K), cfg.R) for K in cfg.K_list]
    else:
        sweep = [(R, cfg.K, R) for R in cfg.R_list]

    for sweep_value, K, R in sweep:
        with Stopwatch() as clock:
            moments = monte_carlo(cfg, K, R, z_grid)
        if use_std:
            errors = rmse(moments.std, reference.std)
        else:
            errors = rmse(moments.mean, reference.mean)
        report.rows.append(_error_row(columns[0], sweep_value, errors, columns, clock.seconds))
    report.profiles["reference_moments"] = _moment_frame(reference)
    return report


def _abs_error_profiles(label: str, sweep, runs: List[MomentField], reference: MomentField) -> pd.DataFrame:
    frames = []
    for value, moments in zip(sweep, runs):
        frames.append(pd.DataFrame({
            label: value,
            "z": moments.z_grid,
            "abs_err_mean_u1": np.abs(moments.mean[:, 0] - reference.mean[:, 0]),
            "abs_err_mean_u2": np.abs(moments.mean[:, 1] - reference.mean[:, 1]),
            "abs_err_std_u1": np.abs(moments.std[:, 0] - reference.std[:, 0]),
            "abs_err_std_u2": np.abs(moments.std[:, 1] - reference.std[:, 1]),
        }))
    return pd.concat(frames, ignore_index=True)


def _figures(cfg: ExperimentConfig) -> ErrorReport:
    """Plot-ready profiles: exact surfaces, RMSE vs R, reference and Monte Carlo error profiles."""
    report = ErrorReport("figures", ["profile", "points", "seconds"])

    with Stopwatch() as clock:
        domain = _domain_table(ExperimentConfig(
            experiment="table4", a=cfg.a, nu=cfg.nu, h=cfg.h, R_list=list(cfg.R_list),
            z_range=(0.0, 5.0, 0.05), t_range=(0.0, 1.0, 0.01), oracle_panels=cfg.oracle_panels,
        ))
    report.profiles["exact_surface"] = domain.profiles["exact_surface"]
    report.profiles["rmse_vs_R"] = domain.frame()
    for name in ("exact_surface", "rmse_vs_R"):
        report.rows.append({"profile": name, "points": len(report.profiles[name]), "seconds": clock.seconds})

    z_grid = axis(cfg.z_range)
    with Stopwatch() as clock:
        reference = _reference(cfg, z_grid)
    report.profiles["reference_moments"] = _moment_frame(reference)
    report.rows.append({"profile": "reference_moments", "points": z_grid.size, "seconds": clock.seconds})

    with Stopwatch() as clock:
        runs = [monte_carlo(cfg, K, cfg.R, z_grid) for K in cfg.K_list]
        report.profiles["mc_errors_by_K"] = _abs_error_profiles("K", cfg.K_list, runs, reference)
    report.rows.append({"profile": "mc_errors_by_K", "points": len(report.profiles["mc_errors_by_K"]),
                        "seconds": clock.seconds})

    radii = [R for R in cfg.R_list if R <= max(config.RADII_RANDOM)]
    with Stopwatch() as clock:
        runs = [monte_carlo(cfg, cfg.K, R, z_grid) for R in radii]
        report.profiles["mc_errors_by_R"] = _abs_error_profiles("R", radii, runs, reference)
    report.rows.append({"profile": "mc_errors_by_R", "points": len(report.profiles["mc_errors_by_R"]),
                        "seconds": clock.seconds})
    return report


def _custom(cfg: ExperimentConfig) -> ErrorReport:
    columns = ["K", "R", "h", "rmse_mean_u1", "rmse_mean_u2", "rmse_std_u1", "rmse_std_u2", "seconds"]
    z_grid = axis(cfg.z_range)
    report = ErrorReport("custom", columns, note=f"t={cfg.t}, seed={cfg.seed}")
    with Stopwatch() as clock:
        moments = monte_carlo(cfg, cfg.K, cfg.R, z_grid)
    reference = _reference(cfg, z_grid)
    mean_err, std_err = rmse(moments.mean, reference.mean), rmse(moments.std, reference.std)
    report.rows.append({
        "K": cfg.K, "R": cfg.R, "h": cfg.h,
        "rmse_mean_u1": mean_err[0], "rmse_mean_u2": mean_err[1],
        "rmse_std_u1": std_err[0], "rmse_std_u2": std_err[1],
        "seconds": clock.seconds,
    })
    report.profiles["moments"] = _moment_frame(moments).merge(_moment_frame(reference, "ref_"), on="z")
    return report


def run_experiment(cfg: ExperimentConfig) -> ErrorReport:
    """Dispatch one experiment id to its sweep."""
    problems = cfg.validate()
    if problems:
        raise ConfigError(problems)
    logger.info(f"Running {cfg.experiment}{' - ' + cfg.title if cfg.title else ''}")

    experiment = cfg.experiment
    if experiment == "table1":
        report = _laguerre_table(cfg)
    elif experiment == "table2":
        report = _midpoint_point_table(cfg, "table2", [(R, R, cfg.h) for R in cfg.R_list])
    elif experiment == "table3":
        report = _midpoint_point_table(cfg, "table3", [(h, cfg.R, h) for h in cfg.h_list])
    elif experiment == "table4":
        report = _domain_table(cfg)
    elif experiment in ("table5", "table6", "table7", "table8"):
        report = _moment_table(cfg, experiment)
    elif experiment == "figures":
        report = _figures(cfg)
    else:
        report = _custom(cfg)

    logger.info(summarize_report(report, config.PUBLISHED_VALUES.get(experiment)))
    return report


def solve_deterministic(cfg: ExperimentConfig) -> pd.DataFrame:
    """Midpoint and exact Ekman solutions side by side on the config's (z, t) grid."""
    z_grid, t_grid = axis(cfg.z_range), axis(cfg.t_range)
    approx = deterministic_field(cfg, QuadratureGrid.from_step(cfg.R, cfg.h), z_grid, t_grid)
    exact = exact_grid(cfg.a, cfg.nu, unit_flux, z_grid, t_grid, cfg.oracle)
    frame = _surface_frame(z_grid, t_grid, approx)
    frame["exact_u1"] = exact[..., 0].ravel()
    frame["exact_u2"] = exact[..., 1].ravel()
    frame["abs_err_u1"] = np.abs(frame["u1"] - frame["exact_u1"])
    frame["abs_err_u2"] = np.abs(frame["u2"] - frame["exact_u2"])
    error = rmse(approx, exact)
    logger.info(f"Solved on {z_grid.size}x{t_grid.size} grid, R={cfg.R}, h={cfg.h}: RMSE {error[0]:.4e} / {error[1]:.4e}")
    return frame


def advise_radius(cfg: ExperimentConfig, tol: float, F_sup: float = 0.0, g_sup: float = 1.0) -> Dict[str, float]:
    """Truncation radius for the Ekman problem with its certified tail bounds."""
    problem = ekman_problem(cfg.a, cfg.nu)
    radius = select_radius(problem, cfg.t, F_sup, g_sup, tol)
    bound = truncation_bound(problem, radius, cfg.t, F_sup, g_sup)
    return {
        "R": radius, "t": cfg.t, "tol": tol,
        "bound_J1": bound.bound_J1, "bound_J2": bound.bound_J2,
        "certified_error": 2.0 / math.pi * bound.total,
    }


def run_moments(cfg: ExperimentConfig) -> pd.DataFrame:
    """Monte Carlo moments next to the reference moments on the config's depth grid."""
    z_grid = axis(cfg.z_range)
    moments = monte_carlo(cfg, cfg.K, cfg.R, z_grid)
    reference = _reference(cfg, z_grid)
    error = rmse(moments.mean, reference.mean)
    logger.info(f"Moments with K={cfg.K}, R={cfg.R}: mean RMSE {error[0]:.4e} / {error[1]:.4e}")
    return _moment_frame(moments).merge(_moment_frame(reference, "ref_"), on="z")
