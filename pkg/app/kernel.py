"""
Cosine-transformed solution V(t)(omega).

For fixed omega the transform of u solves V' = L V - B g(t), V(0) = F(omega)
with L = A - omega^2 B, so

    V(t) = e^{Lt} F(omega) - int_0^t e^{L(t-s)} B g(s) ds.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from app.errors import InvalidParameter
from app.linalg import IDENTITY, Vector2, inverse_where_regular, mat_exp
from app.problem import CoupledProblem, cosine_transform_f

logger = logging.getLogger(__name__)

DEFAULT_S_NODES = 2000


@dataclass(frozen=True)
class KernelSweep:
    """V(t) sampled at a list of frequencies; values has shape (n, 2)."""
    omegas: NDArray[np.float64]
    t: float
    values: NDArray[np.float64]


def _check_point(omegas, t, s_nodes):
    if np.any(omegas < 0) or not np.all(np.isfinite(omegas)):
        raise InvalidParameter("Frequencies must be finite and >= 0")
    if not t > 0:
        raise InvalidParameter(f"Time must be > 0, got {t}")
    if s_nodes < 1:
        raise InvalidParameter(f"s_nodes must be >= 1, got {s_nodes}")


def _operators(p: CoupledProblem, omegas):
    return p.A[None, :, :] - (omegas * omegas)[:, None, None] * p.B[None, :, :]


def _boundary_by_quadrature(p: CoupledProblem, omegas, t: float, s_nodes: int):
    """Composite midpoint rule for int_0^t e^{L(t-s)} B g(s) ds, one omega at a time."""
    ds = t / s_nodes
    s = (np.arange(s_nodes) + 0.5) * ds
    sources = np.asarray(p.data.g(s), dtype=float) @ p.B.T
    lags = (t - s)[:, None, None]
    result = np.empty((omegas.size, 2))
    for i, L in enumerate(_operators(p, omegas)):
        propagators = mat_exp(L[None, :, :] * lags)
        result[i] = ds * np.einsum("sij,sj->i", propagators, sources)
    return result


def kernel_sweep(p: CoupledProblem, omegas, t: float, s_nodes: int = DEFAULT_S_NODES) -> KernelSweep:
    """Evaluate V(t)(omega) for every omega in one batch."""
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    _check_point(omegas, t, s_nodes)

    L = _operators(p, omegas)
    propagators = mat_exp(L * t)
    transformed_f = np.asarray(cosine_transform_f(p.data, omegas), dtype=float).reshape(-1, 2)
    initial = np.einsum("nij,nj->ni", propagators, transformed_f)

    if p.data.g_is_constant:
        source = p.B @ p.data.g_constant
        # e^{Lt} L^{-1}(I - e^{-Lt}) = L^{-1}(e^{Lt} - I): every factor decays
        inverse, singular = inverse_where_regular(L)
        boundary = np.einsum("nij,njk,k->ni", inverse, propagators - IDENTITY, source)
        if np.any(singular):
            logger.warning(f"{int(np.sum(singular))} singular L at t={t}; using time quadrature there")
            boundary[singular] = _boundary_by_quadrature(p, omegas[singular], t, s_nodes)
    else:
        boundary = _boundary_by_quadrature(p, omegas, t, s_nodes)

    return KernelSweep(omegas=omegas, t=float(t), values=initial - boundary)


def kernel_value(p: CoupledProblem, omega: float, t: float, s_nodes: int = DEFAULT_S_NODES) -> Vector2:
    """V(t)(omega) at a single frequency."""
    return kernel_sweep(p, [omega], t, s_nodes).values[0]


def kernel_closed_form_ekman(a: float, nu: float, omega, t: float) -> NDArray[np.float64]:
    """
    Closed form of the Ekman kernel for g = 1:

        nu / (a^2 + nu^2 w^4) * [w^2 nu + e^{-w^2 nu t}(a sin at - w^2 nu cos at),
                                 -a + e^{-w^2 nu t}(a cos at + w^2 nu sin at)]
    """
    omega = np.asarray(omega, dtype=float)
    damping = omega * omega * nu
    decay = np.exp(-damping * t)
    sin_at, cos_at = np.sin(a * t), np.cos(a * t)
    scale = nu / (a * a + damping * damping)
    first = scale * (damping + decay * (a * sin_at - damping * cos_at))
    second = scale * (-a + decay * (a * cos_at + damping * sin_at))
    return np.stack([first, second], axis=-1)
