"""
Random coupled parabolic system solver
Main entry point - reproduces the published tables and runs single solves
"""

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

import pandas as pd
from dotenv import load_dotenv

import artifacts
import config
from app.errors import (
    ConfigError,
    NonSymmetricError,
    SolverError,
    SpectralConditionViolated,
)
from app.experiments import advise_radius, run_experiment, run_moments, solve_deterministic
from integrations.config_file import load_config

logger = logging.getLogger(__name__)


def configure_logging():
    """Log to solver.log and stderr; SOLVER_LOG_LEVEL picks the level."""
    level_name = os.getenv(config.ENV_LOG_LEVEL, "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(config.LOG_FILE, encoding='utf-8'),
            logging.StreamHandler()
        ]
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML experiment file or bare experiment id")
    common.add_argument("--seed", type=int, help="override the Monte Carlo seed")
    common.add_argument("--out", help="output directory (default: $SOLVER_OUT_DIR or results/)")
    common.add_argument("--threads", type=int, help="Monte Carlo worker threads (default: $SOLVER_THREADS or 1)")
    common.add_argument("--no-timestamp", action="store_true",
                        help="omit generation time and timing columns for byte-identical output")

    parser = argparse.ArgumentParser(prog="solver", description=__doc__.strip().splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", parents=[common], help="reproduce one table or the figure data")
    run.add_argument("experiment", choices=config.EXPERIMENT_IDS)

    commands.add_parser("solve", parents=[common], help="deterministic Ekman solve on a (z, t) grid")
    commands.add_parser("moments", parents=[common], help="Monte Carlo and reference moments at one time")

    select = commands.add_parser("select-R", parents=[common], help="truncation radius for a tolerance")
    select.add_argument("--tol", type=float, required=True)
    select.add_argument("--t", type=float, default=config.BENCHMARK_T)
    select.add_argument("--F-sup", dest="F_sup", type=float, default=0.0)
    select.add_argument("--g-sup", dest="g_sup", type=float, default=1.0)
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    threads = args.threads
    if threads is None and os.getenv(config.ENV_THREADS):
        try:
            threads = int(os.getenv(config.ENV_THREADS))
        except ValueError as e:
            raise ConfigError([(config.ENV_THREADS, f"not an integer: {os.getenv(config.ENV_THREADS)!r}")]) from e
    overrides = {"seed": args.seed, "threads": threads, "out": args.out}
    if args.command == "run":
        overrides["experiment"] = args.experiment
    if args.command == "select-R":
        overrides["t"] = args.t
    return overrides


def _config_name(args: argparse.Namespace) -> str:
    if args.config:
        return args.config
    return args.experiment if args.command == "run" else "custom"


def execute(args: argparse.Namespace) -> List:
    """Run one subcommand and return the written artifact paths."""
    cfg = load_config(_config_name(args), _overrides(args))
    out_dir = cfg.out or os.getenv(config.ENV_OUT_DIR) or config.DEFAULT_OUT_DIR
    artifacts.init_output(out_dir, timestamp=not args.no_timestamp)

    try:
        if args.command == "run":
            report = run_experiment(cfg)
            artifacts.write_table(report.experiment, report.frame(), report.note)
            for name, frame in report.profiles.items():
                artifacts.write_table(f"{report.experiment}_{name}", frame)
        elif args.command == "solve":
            artifacts.write_table("solution", solve_deterministic(cfg), f"a={cfg.a}, nu={cfg.nu}, R={cfg.R}, h={cfg.h}")
        elif args.command == "moments":
            artifacts.write_table("moments", run_moments(cfg), f"K={cfg.K}, seed={cfg.seed}, t={cfg.t}")
        else:
            advice = advise_radius(cfg, args.tol, args.F_sup, args.g_sup)
            artifacts.write_table("select_R", pd.DataFrame([advice]), f"a={cfg.a}, nu={cfg.nu}")
            print(f"R = {advice['R']:.6g}")
    finally:
        paths = artifacts.close_output()
    return paths


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run, and map failures to exit codes."""
    load_dotenv(config.ENV_FILE)
    configure_logging()
    args = build_parser().parse_args(argv)

    try:
        paths = execute(args)
        logger.info(f"Done: {len(paths)} file(s) written")
        return config.EXIT_OK
    except ConfigError as e:
        logger.error(str(e))
        return config.EXIT_CONFIG_ERROR
    except (SpectralConditionViolated, NonSymmetricError) as e:
        logger.error(f"Hypothesis check failed: {e}")
        return config.EXIT_HYPOTHESIS_FAILURE
    except (SolverError, FloatingPointError) as e:
        logger.error(f"Numerical failure: {e}", exc_info=True)
        return config.EXIT_NUMERICAL_FAILURE


if __name__ == "__main__":
    sys.exit(main())
