"""
Dense 2x2 linear algebra for the coupled system.

Matrices are numpy arrays of shape (2, 2); every routine also accepts a stack
of shape (..., 2, 2) so a whole frequency sweep is handled in one call.
"""

import logging
from typing import NamedTuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from app.errors import InvalidParameter, NonSymmetricError, SingularMatrixError

logger = logging.getLogger(__name__)

Matrix2 = NDArray[np.float64]
Vector2 = NDArray[np.float64]
Scalar = Union[float, NDArray[np.float64]]

SYMMETRY_TOL = 1e-12
SINGULAR_RTOL = 1e-14
SERIES_CUTOFF = 1e-4
ERFC_FLOOR_ARG = 27.0

IDENTITY = np.eye(2)


class SymmetricSpectrum(NamedTuple):
    """Eigenvalues of a symmetric 2x2 matrix, smallest first."""
    lambda_min: Scalar
    lambda_max: Scalar


def _scalar(value):
    """Unwrap 0-d arrays so single-matrix calls return plain floats."""
    if isinstance(value, np.ndarray) and value.ndim == 0:
        return float(value)
    return value


def as_matrix2(values: ArrayLike) -> Matrix2:
    """Validate and convert to a finite 2x2 float matrix."""
    matrix = np.array(values, dtype=float)
    if matrix.shape != (2, 2):
        raise InvalidParameter(f"Expected a 2x2 matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidParameter(f"Matrix entries must be finite: {matrix.tolist()}")
    return matrix


def as_vector2(values: ArrayLike) -> Vector2:
    """Validate and convert to a finite 2-vector."""
    vector = np.array(values, dtype=float)
    if vector.shape != (2,):
        raise InvalidParameter(f"Expected a 2-vector, got shape {vector.shape}")
    if not np.all(np.isfinite(vector)):
        raise InvalidParameter(f"Vector components must be finite: {vector.tolist()}")
    return vector


def symmetric_part(P: ArrayLike) -> Matrix2:
    """Return (P + P^T) / 2."""
    P = np.asarray(P, dtype=float)
    return 0.5 * (P + np.swapaxes(P, -1, -2))


def symmetric_eigenvalues(S: ArrayLike) -> SymmetricSpectrum:
    """Closed-form eigenvalues of a symmetric 2x2 matrix (or stack of them)."""
    S = np.asarray(S, dtype=float)
    asymmetry = np.abs(S[..., 0, 1] - S[..., 1, 0])
    if np.any(asymmetry > SYMMETRY_TOL):
        raise NonSymmetricError(
            f"Matrix is not symmetric: |a12 - a21| = {float(np.max(asymmetry)):.3e}"
        )
    half_trace = 0.5 * (S[..., 0, 0] + S[..., 1, 1])
    radius = np.hypot(0.5 * (S[..., 0, 0] - S[..., 1, 1]), S[..., 0, 1])
    return SymmetricSpectrum(_scalar(half_trace - radius), _scalar(half_trace + radius))


def log_norm(P: ArrayLike) -> Scalar:
    """Logarithmic norm mu(P): largest eigenvalue of the symmetric part."""
    return symmetric_eigenvalues(symmetric_part(P)).lambda_max


def entry_sum_norm(P: ArrayLike) -> Scalar:
    """Sum of absolute entries, the matrix norm used by the truncation bounds."""
    return _scalar(np.sum(np.abs(np.asarray(P, dtype=float)), axis=(-2, -1)))


def mat_exp(P: ArrayLike) -> Matrix2:
    """
    Matrix exponential by the trace-split closed form.

    With P = alpha*I + Q, trace(Q) = 0 and delta^2 = -det(Q),
    e^P = e^alpha * (cosh(delta) I + sinh(delta)/delta Q). Negative delta^2
    switches to cos/sinc; |delta| < 1e-4 uses the even series.
    """
    P = np.asarray(P, dtype=float)
    alpha = 0.5 * (P[..., 0, 0] + P[..., 1, 1])
    Q = P - alpha[..., None, None] * IDENTITY
    delta_sq = Q[..., 0, 0] * Q[..., 0, 0] + Q[..., 0, 1] * Q[..., 1, 0]
    delta = np.sqrt(np.abs(delta_sq))

    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        # real eigenvalues alpha +/- delta; exponentiate them directly so a
        # large delta never meets a vanishing e^alpha
        grow = np.exp(alpha + delta)
        shrink = np.exp(alpha - delta)
        hyper_even = 0.5 * (grow + shrink)
        hyper_odd = (grow - shrink) / (2.0 * delta)

        scale = np.exp(alpha)
        trig_even = scale * np.cos(delta)
        trig_odd = scale * np.sin(delta) / delta

        d2 = delta_sq
        series_even = scale * (1.0 + d2 / 2.0 + d2 * d2 / 24.0 + d2 * d2 * d2 / 720.0)
        series_odd = scale * (1.0 + d2 / 6.0 + d2 * d2 / 120.0 + d2 * d2 * d2 / 5040.0)

    small = delta < SERIES_CUTOFF
    even = np.where(small, series_even, np.where(delta_sq > 0, hyper_even, trig_even))
    odd = np.where(small, series_odd, np.where(delta_sq > 0, hyper_odd, trig_odd))
    return even[..., None, None] * IDENTITY + odd[..., None, None] * Q


def erfc(x: ArrayLike) -> Scalar:
    """Complementary error function, flushed to 0 beyond x = 27."""
    x = np.asarray(x, dtype=float)
    return _scalar(np.where(x > ERFC_FLOOR_ARG, 0.0, special.erfc(x)))


def determinant(P: ArrayLike) -> Scalar:
    P = np.asarray(P, dtype=float)
    return _scalar(P[..., 0, 0] * P[..., 1, 1] - P[..., 0, 1] * P[..., 1, 0])


def singular_mask(P: ArrayLike) -> NDArray[np.bool_]:
    """True where |det P| <= 1e-14 * max(1, ||P||_inf^2)."""
    P = np.asarray(P, dtype=float)
    row_norm = np.max(np.sum(np.abs(P), axis=-1), axis=-1)
    threshold = SINGULAR_RTOL * np.maximum(1.0, row_norm * row_norm)
    return np.abs(determinant(P)) <= threshold


def _adjugate(P: NDArray[np.float64]) -> NDArray[np.float64]:
    adj = np.empty_like(P)
    adj[..., 0, 0] = P[..., 1, 1]
    adj[..., 0, 1] = -P[..., 0, 1]
    adj[..., 1, 0] = -P[..., 1, 0]
    adj[..., 1, 1] = P[..., 0, 0]
    return adj


def mat_inverse(P: ArrayLike) -> Matrix2:
    """Inverse through the adjugate; raises SingularMatrixError below the guard."""
    P = np.asarray(P, dtype=float)
    mask = singular_mask(P)
    det = np.asarray(determinant(P))
    if np.any(mask):
        raise SingularMatrixError(float(np.min(np.abs(det[mask]))))
    return _adjugate(P) / det[..., None, None]


def inverse_where_regular(P: ArrayLike):
    """
    Invert every regular matrix of a stack.

    Returns (inverse, singular): singular entries of the inverse are zero and
    flagged so the caller can route them elsewhere.
    """
    P = np.asarray(P, dtype=float)
    singular = singular_mask(P)
    det = np.where(singular, 1.0, determinant(P))
    inverse = _adjugate(P) / np.asarray(det)[..., None, None]
    inverse[singular] = 0.0
    return inverse, singular
