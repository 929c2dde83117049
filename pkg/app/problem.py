"""
One realization of the coupled parabolic system on the half-line

    u_t = A u + B u_zz,  u(z, 0) = f(z),  u_z(0, t) = g(t),  u -> 0 as z -> inf.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

from app.errors import InvalidParameter, SpectralConditionViolated
from app.linalg import Matrix2, Vector2, as_matrix2, as_vector2, symmetric_eigenvalues, symmetric_part

logger = logging.getLogger(__name__)

# Vectorized data callables: an array of shape (n,) maps to shape (n, 2).
VectorField = Callable[[NDArray[np.float64]], NDArray[np.float64]]

DEFAULT_Z_CAP = 40.0
DEFAULT_Z_NODES = 4000


def constant_field(value) -> VectorField:
    """Callable returning the same 2-vector at every point."""
    constant = as_vector2(value)

    def evaluate(points):
        points = np.atleast_1d(np.asarray(points, dtype=float))
        return np.broadcast_to(constant, points.shape + (2,)).copy()

    return evaluate


ZERO_FIELD = constant_field([0.0, 0.0])


@dataclass(frozen=True)
class BoundaryData:
    """
    Initial profile f, boundary flux g and optional closed forms.

    F is the cosine transform of f when known; g_constant is set when g does
    not depend on t, and g must then return it everywhere.
    """
    f: VectorField = ZERO_FIELD
    g: VectorField = ZERO_FIELD
    F: Optional[VectorField] = None
    g_constant: Optional[Vector2] = None
    z_cap: float = DEFAULT_Z_CAP
    z_nodes: int = DEFAULT_Z_NODES

    @classmethod
    def with_constant_flux(cls, flux, f: VectorField = ZERO_FIELD,
                           F: Optional[VectorField] = None) -> "BoundaryData":
        flux = as_vector2(flux)
        return cls(f=f, g=constant_field(flux), F=F, g_constant=flux)

    @property
    def g_is_constant(self) -> bool:
        return self.g_constant is not None


@dataclass(frozen=True)
class CoupledProblem:
    A: Matrix2
    B: Matrix2
    data: BoundaryData = field(default_factory=BoundaryData)
    b: float = 0.0


def new_problem(A, B, data: Optional[BoundaryData] = None) -> CoupledProblem:
    """Build a problem, rejecting B unless lambda_min((B + B^T)/2) > 0."""
    A = as_matrix2(A)
    B = as_matrix2(B)
    b = float(symmetric_eigenvalues(symmetric_part(B)).lambda_min)
    if b <= 0:
        raise SpectralConditionViolated(b)
    return CoupledProblem(A=A, B=B, data=data if data is not None else BoundaryData(), b=b)


def ekman_problem(a: float, nu: float) -> CoupledProblem:
    """Rotation a, viscosity nu, f = 0 and u_z(0, t) = [-1, 0]^T."""
    if not (np.isfinite(a) and a > 0):
        raise InvalidParameter(f"Coriolis parameter a must be > 0, got {a}")
    if not (np.isfinite(nu) and nu > 0):
        raise InvalidParameter(f"Viscosity nu must be > 0, got {nu}")
    data = BoundaryData.with_constant_flux([-1.0, 0.0], F=ZERO_FIELD)
    return new_problem([[0.0, a], [-a, 0.0]], [[nu, 0.0], [0.0, nu]], data)


def cosine_transform_f(data: BoundaryData, omega, z_cap: Optional[float] = None,
                       nodes: Optional[int] = None) -> NDArray[np.float64]:
    """
    F(omega) = int_0^inf f(z) cos(omega z) dz.

    Uses the closed form when the data carries one, otherwise a midpoint
    rule on [0, z_cap]. Scalar omega gives a 2-vector, an array gives (n, 2).
    """
    scalar = np.ndim(omega) == 0
    omegas = np.atleast_1d(np.asarray(omega, dtype=float))
    if data.F is not None:
        values = np.asarray(data.F(omegas), dtype=float)
    else:
        z_cap = data.z_cap if z_cap is None else z_cap
        nodes = data.z_nodes if nodes is None else nodes
        if z_cap <= 0 or nodes < 1:
            raise InvalidParameter(f"Need z_cap > 0 and nodes >= 1, got {z_cap}, {nodes}")
        dz = z_cap / nodes
        z = (np.arange(nodes) + 0.5) * dz
        profile = np.asarray(data.f(z), dtype=float)
        values = dz * (np.cos(np.outer(omegas, z)) @ profile)
    return values[0] if scalar else values
