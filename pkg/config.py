"""
Configuration constants for the random parabolic system solver.
Centralizes paths, harness defaults, sweep axes and CSV column schemas.
"""

from pathlib import Path
from typing import Dict, List, Tuple

# ============================================================================
# PATHS
# ============================================================================

# Base directory for the project
BASE_DIR = Path(__file__).parent

# Checked-in experiment configs, one per table
EXPERIMENTS_DIR = BASE_DIR / "experiments"

# Default output directory for CSV artifacts
DEFAULT_OUT_DIR = BASE_DIR / "results"

LOG_FILE = BASE_DIR / "solver.log"
ENV_FILE = BASE_DIR / ".env"

# ============================================================================
# ENVIRONMENT
# ============================================================================

ENV_OUT_DIR = "SOLVER_OUT_DIR"
ENV_THREADS = "SOLVER_THREADS"
ENV_LOG_LEVEL = "SOLVER_LOG_LEVEL"
ENV_CONFIG_DIR = "SOLVER_CONFIG_DIR"

# ============================================================================
# HARNESS DEFAULTS
# ============================================================================

DEFAULT_STEP = 0.05
DEFAULT_RADIUS = 20.0
DEFAULT_SEED = 20200417
DEFAULT_K = 1600
DEFAULT_ORACLE_PANELS = 20000
DEFAULT_NODES_PER_DIM = 32

# Benchmark point of the deterministic tables
BENCHMARK_Z = 5.0
BENCHMARK_T = 1.0

EXPERIMENT_IDS: Tuple[str, ...] = (
    "table1", "table2", "table3", "table4",
    "table5", "table6", "table7", "table8",
    "figures", "custom",
)

# ============================================================================
# SWEEP AXES
# ============================================================================

LAGUERRE_DEGREES: List[int] = list(range(1, 16))
RADII_DETERMINISTIC: List[float] = [5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
STEPS: List[float] = [0.2, 0.1, 0.05, 0.025, 0.0125]
REALIZATIONS: List[int] = [200, 400, 800, 1600, 3200, 6400, 12800]
RADII_RANDOM: List[float] = [5.0, 10.0, 15.0, 20.0, 25.0]

# ============================================================================
# PUBLISHED VALUES (logged next to reproduced rows)
# ============================================================================

PUBLISHED_VALUES: Dict[str, Dict[float, Tuple[float, float]]] = {
    "table1": {
        1: (2.7254e-01, 1.2057e-01), 2: (7.4014e-01, 3.5587e-01), 3: (2.2645e-02, 1.0762e-01),
        4: (4.4318e-01, 9.7300e-02), 5: (4.5831e-01, 1.5709e-01), 6: (3.6717e-01, 2.1590e-01),
        7: (5.1360e-01, 1.8173e-01), 8: (1.9483e-03, 5.3340e-02), 9: (1.3911e-01, 6.4812e-02),
        10: (4.8348e-01, 1.3559e-01), 11: (3.3161e-01, 1.2510e-01), 12: (2.1783e-01, 6.6086e-02),
        13: (1.4817e-01, 8.2631e-03), 14: (2.3801e-01, 5.7655e-02), 15: (2.8347e-01, 7.0344e-02),
    },
    "table2": {
        5.0: (2.2187e-04, 6.0459e-06), 10.0: (6.6113e-05, 1.1396e-06), 15.0: (9.6916e-05, 4.9150e-07),
        20.0: (9.3665e-05, 2.4768e-07), 25.0: (8.4522e-05, 1.3928e-07), 30.0: (7.4942e-05, 8.4709e-08),
    },
    "table3": {
        0.2: (1.4793e-04, 3.4924e-07), 0.1: (1.4441e-05, 5.0984e-08), 0.05: (9.3665e-05, 2.4768e-07),
        0.025: (1.3112e-04, 3.4100e-07), 0.0125: (1.4912e-04, 3.8592e-07),
    },
    "table4": {
        5.0: (1.9717e-02, 4.3759e-04), 10.0: (8.0645e-03, 4.2821e-05), 15.0: (4.9310e-03, 1.0860e-05),
        20.0: (3.5510e-03, 4.1179e-06), 25.0: (2.7871e-03, 1.9559e-06), 30.0: (2.3023e-03, 1.0771e-06),
    },
    "table5": {
        200: (4.9594e-03, 2.8818e-04), 400: (5.6568e-03, 1.2430e-03), 800: (4.8149e-03, 1.2268e-03),
        1600: (4.9603e-03, 4.5712e-04), 3200: (5.0119e-03, 4.4230e-04), 6400: (4.7532e-03, 8.8098e-04),
        12800: (4.8759e-03, 1.2562e-04),
    },
    "table6": {
        200: (1.8818e-03, 1.3906e-03), 400: (2.7378e-04, 1.9727e-04), 800: (3.8938e-03, 2.3218e-03),
        1600: (5.0547e-04, 3.2676e-04), 3200: (3.1779e-04, 1.1304e-04), 6400: (6.6312e-04, 3.6929e-04),
        12800: (2.9489e-04, 1.5663e-04),
    },
    "table7": {
        5.0: (2.2870e-02, 7.0643e-04), 10.0: (1.0113e-02, 4.6269e-04), 15.0: (6.6053e-03, 4.5785e-04),
        20.0: (4.9603e-03, 4.5712e-04), 25.0: (3.9572e-03, 4.5689e-04),
    },
    "table8": {
        5.0: (5.0618e-04, 3.4636e-04), 10.0: (5.0549e-04, 3.2624e-04), 15.0: (5.0547e-04, 3.2662e-04),
        20.0: (5.0547e-04, 3.2676e-04), 25.0: (5.0547e-04, 3.2681e-04),
    },
}

# ============================================================================
# CSV SCHEMA
# ============================================================================

# (sweep column, first error column, second error column) per experiment
REPORT_COLUMNS: Dict[str, Tuple[str, str, str]] = {
    "table1": ("M", "abs_err_u1", "abs_err_u2"),
    "table2": ("R", "abs_err_u1", "abs_err_u2"),
    "table3": ("h", "abs_err_u1", "abs_err_u2"),
    "table4": ("R", "rmse_u1", "rmse_u2"),
    "table5": ("K", "rmse_mean_u1", "rmse_mean_u2"),
    "table6": ("K", "rmse_std_u1", "rmse_std_u2"),
    "table7": ("R", "rmse_mean_u1", "rmse_mean_u2"),
    "table8": ("R", "rmse_std_u1", "rmse_std_u2"),
}

# Informational wall-clock columns, dropped when timestamps are suppressed
TIMING_COLUMNS: Tuple[str, ...] = ("seconds",)

FLOAT_FORMAT = "%.17g"

# ============================================================================
# EXIT CODES
# ============================================================================

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_HYPOTHESIS_FAILURE = 3
EXIT_NUMERICAL_FAILURE = 4
