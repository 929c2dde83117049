"""
Exception types shared by the solver modules
"""

from typing import List, Tuple


class SolverError(Exception):
    """Root of every error raised by the solver package."""


class NonSymmetricError(SolverError):
    """Raised when a symmetric-only routine receives a non-symmetric matrix."""


class SingularMatrixError(SolverError):
    """Raised when a 2x2 matrix is too close to singular to invert."""

    def __init__(self, det: float):
        super().__init__(f"Matrix is singular to working precision (det={det:.3e})")
        self.det = det


class SpectralConditionViolated(SolverError):
    """Raised when lambda_min of the symmetric part of B is not positive."""

    def __init__(self, b: float):
        super().__init__(f"Spectral condition violated: b = {b:.6g} must be > 0")
        self.b = b


class InvalidParameter(SolverError, ValueError):
    """Raised for out-of-domain scalar parameters."""


class RadiusOverflow(SolverError):
    """Raised when no truncation radius below the search cap meets the tolerance."""

    def __init__(self, radius: float, tol: float):
        super().__init__(f"No truncation radius <= {radius:.3g} certifies tol={tol:.3g}")
        self.radius = radius
        self.tol = tol


class GridMismatch(SolverError, ValueError):
    """Raised when two fields on different grids are compared."""


class ConfigError(SolverError, ValueError):
    """Raised when an experiment config fails validation.

    Carries every field-level problem found, not just the first.
    """

    def __init__(self, diagnostics: List[Tuple[str, str]]):
        self.diagnostics = list(diagnostics)
        lines = [f"  {field}: {message}" for field, message in self.diagnostics]
        super().__init__("Invalid experiment config:\n" + "\n".join(lines))
