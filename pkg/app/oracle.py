"""
Exact solution of the Ekman model used as ground truth.

    u1(z,t) =  sqrt(nu/pi) int_0^t g(s) / sqrt(t-s) e^{-z^2 / (4 nu (t-s))} cos(a(t-s)) ds
    u2(z,t) = -sqrt(nu/pi) int_0^t g(s) / sqrt(t-s) e^{-z^2 / (4 nu (t-s))} sin(a(t-s)) ds

With s = t - v^2 the 1/sqrt(t-s) singularity disappears:
u1 = 2 sqrt(nu/pi) int_0^sqrt(t) g(t - v^2) e^{-z^2/(4 nu v^2)} cos(a v^2) dv.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from app.errors import InvalidParameter

logger = logging.getLogger(__name__)

ScalarFlux = Callable[[NDArray[np.float64]], NDArray[np.float64]]


def unit_flux(s):
    return np.ones_like(np.asarray(s, dtype=float))


@dataclass(frozen=True)
class OracleConfig:
    panels: int = 20000
    tol: float = 1e-9

    def __post_init__(self):
        if self.panels < 100:
            raise InvalidParameter(f"Oracle needs at least 100 panels, got {self.panels}")
        if not self.tol > 0:
            raise InvalidParameter(f"Oracle tolerance must be > 0, got {self.tol}")


def profiles(a_values, nu: float, g: ScalarFlux, z_values, t: float, cfg: OracleConfig) -> NDArray[np.float64]:
    """
    Exact solution for several rotation rates at once.

    Returns shape (len(z_values), len(a_values), 2). The depth factor and the
    rotation factor separate, so the v-quadrature is a matrix product.
    """
    a_values = np.atleast_1d(np.asarray(a_values, dtype=float))
    z_values = np.atleast_1d(np.asarray(z_values, dtype=float))
    dv = math.sqrt(t) / cfg.panels
    v = (np.arange(cfg.panels) + 0.5) * dv
    v_sq = v * v

    weight = np.asarray(g(t - v_sq), dtype=float) * dv
    with np.errstate(under="ignore"):
        depth = np.exp(-(z_values * z_values)[:, None] / (4.0 * nu * v_sq[None, :]))
    phase = np.outer(a_values, v_sq)
    cosine = np.cos(phase) * weight
    sine = np.sin(phase) * weight

    scale = 2.0 * math.sqrt(nu / math.pi)
    u1 = scale * (depth @ cosine.T)
    u2 = -scale * (depth @ sine.T)
    return np.stack([u1, u2], axis=-1)


def _check(a, nu, t):
    if not (a > 0 and nu > 0):
        raise InvalidParameter(f"Need a > 0 and nu > 0, got a={a}, nu={nu}")
    if not t > 0:
        raise InvalidParameter(f"Time must be > 0, got {t}")


def exact_solution(a: float, nu: float, g: ScalarFlux, z: float, t: float,
                   cfg: OracleConfig = OracleConfig()) -> NDArray[np.float64]:
    """[u1, u2] at one (z, t)."""
    _check(a, nu, t)
    if z < 0:
        raise InvalidParameter(f"Depth must be >= 0, got {z}")
    return profiles([a], nu, g, [z], t, cfg)[0, 0]


def exact_grid(a: float, nu: float, g: ScalarFlux, z_grid, t_grid,
               cfg: OracleConfig = OracleConfig()) -> NDArray[np.float64]:
    """Exact solution on a tensor grid, shape (len(t_grid), len(z_grid), 2); t = 0 rows hold f = 0."""
    z_grid = np.asarray(z_grid, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    for name, axis in (("z_grid", z_grid), ("t_grid", t_grid)):
        if axis.size == 0 or np.any(np.diff(axis) <= 0):
            raise InvalidParameter(f"{name} must be nonempty and strictly increasing")
    if z_grid[0] < 0 or t_grid[0] < 0:
        raise InvalidParameter("Grids must start at z >= 0 and t >= 0")

    field = np.zeros((t_grid.size, z_grid.size, 2))
    for i, t in enumerate(t_grid):
        if t == 0:
            continue
        _check(a, nu, t)
        field[i] = profiles([a], nu, g, z_grid, t, cfg)[:, 0]
    logger.debug(f"Exact field on {t_grid.size}x{z_grid.size} grid with {cfg.panels} panels")
    return field


def resolution_gap(a: float, nu: float, g: ScalarFlux, z: float, t: float,
                   cfg: OracleConfig = OracleConfig()) -> float:
    """Max change of the exact value under panel doubling; warns above cfg.tol."""
    coarse = exact_solution(a, nu, g, z, t, cfg)
    fine = exact_solution(a, nu, g, z, t, OracleConfig(panels=2 * cfg.panels, tol=cfg.tol))
    gap = float(np.max(np.abs(fine - coarse)))
    if gap > cfg.tol:
        logger.warning(f"Oracle at z={z}, t={t} moved {gap:.3e} under panel doubling (tol {cfg.tol:.1e})")
    return gap
