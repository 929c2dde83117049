"""
Inversion of the cosine transform

    u(z, t) = (2/pi) int_0^inf V(t)(omega) cos(omega z) d omega

by truncation at R plus a midpoint Riemann sum, with Gauss-Laguerre kept as
the baseline that fails on this oscillatory integrand.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import special

from app.errors import InvalidParameter, RadiusOverflow
from app.kernel import KernelSweep, kernel_sweep
from app.linalg import ERFC_FLOOR_ARG, entry_sum_norm, erfc, log_norm
from app.problem import CoupledProblem

logger = logging.getLogger(__name__)

MAX_LAGUERRE_DEGREE = 64
BOUND_PANELS = 256
MAX_RADIUS = 1e6
RADIUS_RTOL = 1e-3


@dataclass(frozen=True)
class QuadratureGrid:
    """Midpoint grid on [0, R] with N cells; h is always R / N."""
    R: float
    N: int

    def __post_init__(self):
        if not (math.isfinite(self.R) and self.R > 0):
            raise InvalidParameter(f"Truncation radius must be > 0, got {self.R}")
        if self.N < 1:
            raise InvalidParameter(f"Node count must be >= 1, got {self.N}")

    @classmethod
    def from_step(cls, R: float, h: float) -> "QuadratureGrid":
        """Grid with step h; R must be a whole number of steps."""
        if not h > 0:
            raise InvalidParameter(f"Step must be > 0, got {h}")
        N = int(round(R / h))
        if N < 1 or abs(N * h - R) > 1e-9 * max(1.0, R):
            raise InvalidParameter(f"R={R} is not a whole number of steps h={h}")
        return cls(R=float(R), N=N)

    @property
    def h(self) -> float:
        return self.R / self.N

    @property
    def nodes(self) -> NDArray[np.float64]:
        return (np.arange(self.N) + 0.5) * self.h


@dataclass(frozen=True)
class GaussLaguerreRule:
    M: int
    abscissae: NDArray[np.float64]
    weights: NDArray[np.float64]


@dataclass(frozen=True)
class TruncationBound:
    bound_J1: float
    bound_J2: float
    R: float

    @property
    def total(self) -> float:
        return self.bound_J1 + self.bound_J2


class CosineInverter:
    """
    Weighted cosine sums over a fixed node set for a fixed list of z.

    Each z row is applied on its own with the same shapes, so the value at a
    given z never depends on which other z were requested.
    """

    def __init__(self, nodes, weights, z_values):
        self.nodes = np.asarray(nodes, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        self.z_values = np.atleast_1d(np.asarray(z_values, dtype=float))
        if np.any(self.z_values < 0):
            raise InvalidParameter("Depths z must be >= 0")
        self._rows = [self.weights * np.cos(self.nodes * z) for z in self.z_values]

    @classmethod
    def midpoint(cls, grid: QuadratureGrid, z_values) -> "CosineInverter":
        return cls(grid.nodes, np.full(grid.N, 2.0 * grid.h / math.pi), z_values)

    def apply(self, sweep: KernelSweep) -> NDArray[np.float64]:
        """Field of shape (len(z_values), 2)."""
        return np.array([row @ sweep.values for row in self._rows]).reshape(-1, 2)


def midpoint_inverse(p: CoupledProblem, grid: QuadratureGrid, z, t: float) -> NDArray[np.float64]:
    """(2h/pi) sum_j V(t)(w_j) cos(w_j z) over the midpoints w_j = (j + 1/2) h."""
    inverter = CosineInverter.midpoint(grid, z)
    field = inverter.apply(kernel_sweep(p, grid.nodes, t))
    return field[0] if np.ndim(z) == 0 else field


def gauss_laguerre_rule(M: int) -> GaussLaguerreRule:
    """M-point rule for int_0^inf e^{-x} phi(x) dx."""
    if not 1 <= M <= MAX_LAGUERRE_DEGREE:
        raise InvalidParameter(f"Gauss-Laguerre degree must be in 1..{MAX_LAGUERRE_DEGREE}, got {M}")
    abscissae, weights = special.roots_laguerre(M)
    return GaussLaguerreRule(M=M, abscissae=np.asarray(abscissae), weights=np.asarray(weights))


def gauss_laguerre_inverse(p: CoupledProblem, rule: GaussLaguerreRule, z, t: float) -> NDArray[np.float64]:
    """(2/pi) sum_k w_k e^{x_k} V(t)(x_k) cos(x_k z)."""
    weights = (2.0 / math.pi) * rule.weights * np.exp(rule.abscissae)
    inverter = CosineInverter(rule.abscissae, weights, z)
    field = inverter.apply(kernel_sweep(p, rule.abscissae, t))
    return field[0] if np.ndim(z) == 0 else field


def truncation_bound(p: CoupledProblem, R: float, t: float, F_sup: float, g_sup: float) -> TruncationBound:
    """Upper bounds on the omega-tails J1(R) (initial data) and J2(R) (boundary flux)."""
    if not (R > 0 and t > 0 and F_sup >= 0 and g_sup >= 0):
        raise InvalidParameter(f"Need R, t > 0 and F_sup, g_sup >= 0; got R={R}, t={t}, F_sup={F_sup}, g_sup={g_sup}")
    mu = float(log_norm(p.A))
    b = p.b
    root_bt = math.sqrt(b * t)

    bound_J1 = F_sup * math.sqrt(math.pi) / (2.0 * root_bt) * math.exp(mu * t) * erfc(R * root_bt)

    # erfc(Rv) is zero past v = ERFC_FLOOR_ARG / R
    upper = min(root_bt, ERFC_FLOOR_ARG / R)
    dv = upper / BOUND_PANELS
    v = (np.arange(BOUND_PANELS) + 0.5) * dv
    integrand = g_sup * np.exp(mu * v * v / b) * erfc(R * v)
    bound_J2 = math.sqrt(math.pi) * float(entry_sum_norm(p.B)) / b * dv * float(np.sum(integrand))

    return TruncationBound(bound_J1=float(bound_J1), bound_J2=bound_J2, R=float(R))


def select_radius(p: CoupledProblem, t: float, F_sup: float, g_sup: float, tol: float) -> float:
    """
    Smallest R whose certified tail, times 2/pi, stays within tol.

    Doubles from R = 1, then bisects the last bracket to three significant figures.
    """
    if not tol > 0:
        raise InvalidParameter(f"Tolerance must be > 0, got {tol}")
    target = tol * math.pi / 2.0

    def certified(radius: float) -> bool:
        return truncation_bound(p, radius, t, F_sup, g_sup).total <= target

    radius = 1.0
    if certified(radius):
        return radius
    while not certified(radius):
        radius *= 2.0
        if radius > MAX_RADIUS:
            raise RadiusOverflow(MAX_RADIUS, tol)

    lo, hi = radius / 2.0, radius
    while hi - lo > RADIUS_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if certified(mid):
            hi = mid
        else:
            lo = mid
    logger.info(f"Selected R={hi:.4g} for t={t}, tol={tol:.3g}")
    return hi
