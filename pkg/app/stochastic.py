"""
Random layer: truncated coefficient laws, hypothesis checks, Monte Carlo
moments of the midpoint solution and quadrature reference moments of the
exact Ekman solution.
"""

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy import special, stats

from app.errors import InvalidParameter, SpectralConditionViolated
from app.kernel import kernel_sweep
from app.oracle import OracleConfig, ScalarFlux, profiles, unit_flux
from app.problem import ekman_problem
from app.quadrature import CosineInverter, QuadratureGrid

logger = logging.getLogger(__name__)

DEFAULT_CHUNK = 64
DEFAULT_NODES_PER_DIM = 32
NORMAL = "normal"
GAMMA = "gamma"


@dataclass(frozen=True)
class TruncatedDistribution:
    """
    Normal(mu, sigma) or Gamma(shape, rate) restricted to [lo, hi].

    lo == hi is a point mass at lo. hi may be +inf.
    """
    kind: str
    lo: float
    hi: float
    mu: float = 0.0
    sigma: float = 1.0
    shape: float = 1.0
    rate: float = 1.0

    def __post_init__(self):
        if self.kind not in (NORMAL, GAMMA):
            raise InvalidParameter(f"Unknown distribution kind '{self.kind}'")
        if not (math.isfinite(self.lo) and self.lo <= self.hi):
            raise InvalidParameter(f"Support must satisfy finite lo <= hi, got [{self.lo}, {self.hi}]")
        if self.kind == NORMAL and not self.sigma > 0:
            raise InvalidParameter(f"Normal sigma must be > 0, got {self.sigma}")
        if self.kind == GAMMA and not (self.shape > 0 and self.rate > 0 and self.lo >= 0):
            raise InvalidParameter("Gamma needs shape, rate > 0 and a support in [0, inf)")
        if not self.degenerate and not self.normalizer > 0:
            raise InvalidParameter(f"Support [{self.lo}, {self.hi}] carries no probability mass")

    @classmethod
    def normal(cls, mu: float, sigma: float, lo: float, hi: float) -> "TruncatedDistribution":
        return cls(kind=NORMAL, lo=lo, hi=hi, mu=mu, sigma=sigma)

    @classmethod
    def gamma(cls, shape: float, lo: float, hi: float, rate: Optional[float] = None,
              scale: Optional[float] = None) -> "TruncatedDistribution":
        """Shape-rate by default; pass scale instead for the shape-scale reading."""
        if (rate is None) == (scale is None):
            raise InvalidParameter("Give exactly one of rate or scale for a gamma law")
        return cls(kind=GAMMA, lo=lo, hi=hi, shape=shape, rate=rate if rate is not None else 1.0 / scale)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def base(self):
        """The untruncated law as a frozen scipy distribution."""
        if self.kind == NORMAL:
            return stats.norm(loc=self.mu, scale=self.sigma)
        return stats.gamma(self.shape, scale=1.0 / self.rate)

    @property
    def _upper_tail(self) -> bool:
        # work with survival functions when the window sits above the median
        return bool(self.base.cdf(self.lo) > 0.5)

    @property
    def normalizer(self) -> float:
        if self.degenerate:
            return 1.0
        base = self.base
        if self._upper_tail:
            return float(base.sf(self.lo) - base.sf(self.hi))
        return float(base.cdf(self.hi) - base.cdf(self.lo))

    def pdf(self, x) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, self.base.pdf(x) / self.normalizer, 0.0)


def sample(dist: TruncatedDistribution, u01):
    """Inverse-CDF draw on the truncated range; array input gives array output."""
    u = np.asarray(u01, dtype=float)
    if np.any((u < 0) | (u > 1)):
        raise InvalidParameter("Uniform input must lie in [0, 1)")
    if dist.degenerate:
        x = np.full(u.shape, dist.lo)
    else:
        base = dist.base
        with np.errstate(over="ignore", invalid="ignore"):
            if dist._upper_tail:
                x = base.isf(base.sf(dist.lo) - u * dist.normalizer)
            else:
                x = base.ppf(base.cdf(dist.lo) + u * dist.normalizer)
        x = np.clip(np.nan_to_num(x, nan=dist.hi, posinf=dist.hi), dist.lo, dist.hi)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class MomentCertificate:
    """E|x|^r <= m h^r for all r >= 0."""
    m: float
    h: float
    bounded: bool


def check_moment_condition(dist: TruncatedDistribution) -> MomentCertificate:
    h = max(abs(dist.lo), abs(dist.hi))
    if not math.isfinite(h):
        message = f"Support [{dist.lo}, {dist.hi}] is unbounded; no moment certificate"
        logger.warning(message)
        warnings.warn(message, RuntimeWarning)
        return MomentCertificate(m=1.0, h=h, bounded=False)
    return MomentCertificate(m=1.0, h=h, bounded=True)


@dataclass(frozen=True)
class RandomCoefficients:
    """Independent laws of the rotation a and viscosity nu."""
    a_dist: TruncatedDistribution
    nu_dist: TruncatedDistribution


def check_spectral_condition(coeffs: RandomCoefficients) -> float:
    """b* = inf nu, since B = nu I for the Ekman family."""
    b_star = coeffs.nu_dist.lo
    if not b_star > 0:
        raise SpectralConditionViolated(b_star)
    return b_star


@dataclass(frozen=True)
class MonteCarloConfig:
    K: int
    seed: int
    grid: QuadratureGrid
    z_grid: NDArray[np.float64]
    t: float
    workers: int = 1
    chunk: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.K < 2:
            raise InvalidParameter(f"Need at least 2 realizations, got K={self.K}")
        if not self.t > 0:
            raise InvalidParameter(f"Time must be > 0, got {self.t}")
        if self.workers < 1 or self.chunk < 1:
            raise InvalidParameter("workers and chunk must be >= 1")


@dataclass
class MomentField:
    z_grid: NDArray[np.float64]
    t: float
    mean: NDArray[np.float64]
    std: NDArray[np.float64]
    K_used: int = 0
    seed_used: Optional[int] = None


@dataclass
class MomentAccumulator:
    """Running (count, mean, M2) with batch updates and pairwise merging."""
    count: int = 0
    mean: Optional[NDArray[np.float64]] = None
    m2: Optional[NDArray[np.float64]] = None

    def add_batch(self, samples: NDArray[np.float64]):
        samples = np.asarray(samples, dtype=float)
        batch_mean = samples.mean(axis=0)
        batch = MomentAccumulator(
            count=samples.shape[0],
            mean=batch_mean,
            m2=np.sum((samples - batch_mean) ** 2, axis=0),
        )
        self.merge(batch)

    def merge(self, other: "MomentAccumulator"):
        if other.count == 0:
            return
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean.copy(), other.m2.copy()
            return
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean = self.mean + delta * (other.count / total)
        self.m2 = self.m2 + other.m2 + delta * delta * (self.count * other.count / total)
        self.count = total

    @property
    def variance(self) -> NDArray[np.float64]:
        """Plug-in variance, divisor count."""
        return self.m2 / self.count


def draw_coefficients(coeffs: RandomCoefficients, seed: int, k: int) -> Tuple[float, float]:
    """(a_k, nu_k) from the substream of realization k."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))
    u_a, u_nu = rng.random(2)
    return sample(coeffs.a_dist, u_a), sample(coeffs.nu_dist, u_nu)


def mc_moments(coeffs: RandomCoefficients, cfg: MonteCarloConfig) -> MomentField:
    """
    Expectation and standard deviation of the midpoint solution by Monte Carlo.

    Realizations run in fixed chunks whose partial moments are merged in chunk
    order, so the result does not depend on cfg.workers.
    """
    check_moment_condition(coeffs.a_dist)
    check_moment_condition(coeffs.nu_dist)
    b_star = check_spectral_condition(coeffs)

    z_grid = np.atleast_1d(np.asarray(cfg.z_grid, dtype=float))
    nodes = cfg.grid.nodes
    inverter = CosineInverter.midpoint(cfg.grid, z_grid)

    def run_chunk(start: int) -> MomentAccumulator:
        fields = []
        for k in range(start, min(start + cfg.chunk, cfg.K)):
            a_k, nu_k = draw_coefficients(coeffs, cfg.seed, k)
            fields.append(inverter.apply(kernel_sweep(ekman_problem(a_k, nu_k), nodes, cfg.t)))
        partial = MomentAccumulator()
        partial.add_batch(np.stack(fields))
        logger.debug(f"Realizations {start}..{start + len(fields) - 1} done")
        return partial

    starts = range(0, cfg.K, cfg.chunk)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            partials = list(pool.map(run_chunk, starts))
    else:
        partials = [run_chunk(start) for start in starts]

    total = MomentAccumulator()
    for partial in partials:
        total.merge(partial)

    logger.info(f"Monte Carlo: K={cfg.K}, seed={cfg.seed}, R={cfg.grid.R}, N={cfg.grid.N}, b*={b_star:.4g}")
    return MomentField(
        z_grid=z_grid,
        t=cfg.t,
        mean=total.mean,
        std=np.sqrt(np.maximum(total.variance, 0.0)),
        K_used=cfg.K,
        seed_used=cfg.seed,
    )


def _legendre_axis(dist: TruncatedDistribution, nodes_per_dim: int):
    """Nodes and density-weighted Gauss-Legendre weights on the support."""
    if dist.degenerate:
        return np.array([dist.lo]), np.array([1.0])
    if not math.isfinite(dist.hi):
        raise InvalidParameter("Reference moments need a bounded support")
    x, w = special.roots_legendre(nodes_per_dim)
    half = 0.5 * (dist.hi - dist.lo)
    points = dist.lo + half * (x + 1.0)
    return points, half * w * dist.pdf(points)


def reference_moments(coeffs: RandomCoefficients, z_grid, t: float,
                      nodes_per_dim: int = DEFAULT_NODES_PER_DIM,
                      cfg: OracleConfig = OracleConfig(), g: ScalarFlux = unit_flux) -> MomentField:
    """Mean and standard deviation of the exact solution by tensor Gauss-Legendre over (a, nu)."""
    if nodes_per_dim < 8:
        raise InvalidParameter(f"nodes_per_dim must be >= 8, got {nodes_per_dim}")
    z_grid = np.atleast_1d(np.asarray(z_grid, dtype=float))
    a_nodes, a_weights = _legendre_axis(coeffs.a_dist, nodes_per_dim)
    nu_nodes, nu_weights = _legendre_axis(coeffs.nu_dist, nodes_per_dim)

    first = np.zeros((z_grid.size, 2))
    second = np.zeros((z_grid.size, 2))
    for nu_j, w_j in zip(nu_nodes, nu_weights):
        values = profiles(a_nodes, nu_j, g, z_grid, t, cfg)
        first += w_j * np.einsum("a,zac->zc", a_weights, values)
        second += w_j * np.einsum("a,zac->zc", a_weights, values * values)

    variance = np.maximum(second - first * first, 0.0)
    logger.info(f"Reference moments on {z_grid.size} depths with {a_nodes.size}x{nu_nodes.size} nodes")
    return MomentField(z_grid=z_grid, t=float(t), mean=first, std=np.sqrt(variance))
