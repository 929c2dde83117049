"""
Load experiment configs from TOML files.
Honors SOLVER_CONFIG_DIR for bare experiment names and collects every bad
field before failing.
"""
from __future__ import annotations

import logging
import math
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import config
from app.errors import ConfigError, InvalidParameter
from app.experiments import ExperimentConfig, example_coefficients
from app.stochastic import RandomCoefficients, TruncatedDistribution

logger = logging.getLogger(__name__)

# section -> {toml key: ExperimentConfig field}
SECTION_FIELDS: Dict[str, Dict[str, str]] = {
    "problem": {"a": "a", "nu": "nu"},
    "quadrature": {"R": "R", "h": "h", "R_list": "R_list", "h_list": "h_list", "M_list": "M_list"},
    "monte_carlo": {"K": "K", "K_list": "K_list", "seed": "seed", "threads": "threads"},
    "grid": {"z": "z", "t": "t", "z_range": "z_range", "t_range": "t_range"},
    "oracle": {"panels": "oracle_panels", "nodes_per_dim": "nodes_per_dim"},
    "output": {"out": "out"},
}
TOP_LEVEL = {"experiment", "title"}
DIST_SECTIONS = ("a_dist", "nu_dist")
DIST_KEYS = {"kind", "mu", "sigma", "shape", "rate", "scale", "lo", "hi"}


def resolve_path(name: str | Path) -> Path:
    """A path as given, or <SOLVER_CONFIG_DIR or experiments/>/<name>.toml for a bare id."""
    path = Path(name)
    if path.suffix == ".toml" or path.exists():
        return path
    base = Path(os.getenv(config.ENV_CONFIG_DIR) or config.EXPERIMENTS_DIR)
    return base / f"{name}.toml"


def _bound(value: Any) -> float:
    # TOML has inf, but "inf" strings are accepted too
    return math.inf if value in ("inf", "+inf") else float(value)


def _distribution(section: str, raw: Any, problems: List[Tuple[str, str]]) -> Optional[TruncatedDistribution]:
    if not isinstance(raw, dict):
        problems.append((section, "must be a table"))
        return None
    for key in raw:
        if key not in DIST_KEYS:
            problems.append((f"{section}.{key}", "unknown key"))
    kind = raw.get("kind")
    try:
        lo, hi = _bound(raw["lo"]), _bound(raw["hi"])
        if kind == "normal":
            return TruncatedDistribution.normal(float(raw["mu"]), float(raw["sigma"]), lo, hi)
        if kind == "gamma":
            return TruncatedDistribution.gamma(
                float(raw["shape"]), lo, hi,
                rate=raw.get("rate"), scale=raw.get("scale"),
            )
        problems.append((f"{section}.kind", f"must be 'normal' or 'gamma', got {kind!r}"))
    except KeyError as e:
        problems.append((f"{section}.{e.args[0]}", "missing"))
    except (InvalidParameter, TypeError, ValueError) as e:
        problems.append((section, str(e)))
    return None


def parse_config(data: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Build and validate an ExperimentConfig from parsed TOML plus CLI overrides."""
    problems: List[Tuple[str, str]] = []
    values: Dict[str, Any] = {}

    for key, raw in data.items():
        if key in TOP_LEVEL:
            values[key] = raw
        elif key in SECTION_FIELDS:
            if not isinstance(raw, dict):
                problems.append((key, "must be a table"))
                continue
            for sub_key, sub_value in raw.items():
                target = SECTION_FIELDS[key].get(sub_key)
                if target is None:
                    problems.append((f"{key}.{sub_key}", "unknown key"))
                else:
                    values[target] = sub_value
        elif key not in DIST_SECTIONS:
            problems.append((key, "unknown key"))

    defaults = example_coefficients()
    a_dist, nu_dist = defaults.a_dist, defaults.nu_dist
    if "a_dist" in data:
        a_dist = _distribution("a_dist", data["a_dist"], problems) or a_dist
    if "nu_dist" in data:
        nu_dist = _distribution("nu_dist", data["nu_dist"], problems) or nu_dist

    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value

    for name in ("z_range", "t_range"):
        if isinstance(values.get(name), list):
            values[name] = tuple(values[name])
    if isinstance(values.get("out"), str):
        values["out"] = Path(values["out"])

    try:
        cfg = replace(ExperimentConfig(), coefficients=RandomCoefficients(a_dist, nu_dist), **values)
    except TypeError as e:
        raise ConfigError(problems + [("config", str(e))]) from e

    problems.extend(cfg.validate())
    if problems:
        raise ConfigError(problems)
    return cfg


def load_config(path: str | Path, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Read a TOML experiment file; raises ConfigError listing every problem."""
    path = resolve_path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as e:
        raise ConfigError([("path", f"config file not found: {path}")]) from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError([("path", f"{path} is not valid TOML: {e}")]) from e

    cfg = parse_config(data, overrides)
    logger.info(f"Loaded config {path} for experiment {cfg.experiment}")
    return cfg
