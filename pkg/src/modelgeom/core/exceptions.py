"""Custom exceptions for the classification library."""

from collections.abc import Sequence

import numpy as np

__all__ = [
    "ChartDomainError",
    "CocycleViolationError",
    "DependentVectorsError",
    "DimensionMismatchError",
    "GeodesicDomainError",
    "InconclusiveError",
    "InvalidStepError",
    "MissingInputError",
    "ModelGeomError",
    "NotACircleRepError",
    "NotALieAlgebraError",
    "NotFaithfulError",
    "SingularMetricError",
    "UnknownGeometryError",
    "UnsupportedCaseError",
    "UnsupportedDegreeError",
    "UnsupportedOperationError",
]


class ModelGeomError(Exception):
    """Base class for every error raised by modelgeom."""


class DimensionMismatchError(ModelGeomError, ValueError):
    """Raised when vectors, matrices or algebras have incompatible dimensions."""


class NotALieAlgebraError(ModelGeomError):
    """Raised when structure constants fail the Jacobi identity."""

    def __init__(self, *, residual: float, tolerance: float) -> None:
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(f"Jacobi residual {residual:.3e} exceeds tolerance {tolerance:.1e}; not a Lie algebra.")


class UnsupportedDegreeError(ModelGeomError):
    """Raised for Chevalley-Eilenberg differentials outside degrees 1 and 2."""

    def __init__(self, degree: int) -> None:
        self.degree = degree
        super().__init__(f"Unsupported cochain degree {degree}; only degrees 1 and 2 are implemented.")


class CocycleViolationError(ModelGeomError):
    """Raised when an antisymmetric form is not closed."""

    def __init__(self, *, residual: float, tolerance: float) -> None:
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(f"Cocycle condition violated (residual {residual:.3e} > {tolerance:.1e}).")


class UnsupportedCaseError(ModelGeomError):
    """Raised for inputs outside the documented scope of an operation."""


class NotFaithfulError(ModelGeomError):
    """Raised when a circle representation is trivial on every sampled angle."""


class NotACircleRepError(ModelGeomError):
    """Raised when a sampler does not behave like a faithful SO(2) representation on R^3."""


class ChartDomainError(ModelGeomError, ValueError):
    """Raised when a point lies outside an entry's chart."""

    def __init__(self, *, point: Sequence[float] | np.ndarray, reason: str) -> None:
        self.point = np.asarray(point, dtype=float)
        self.reason = reason
        super().__init__(f"Point {np.array2string(self.point, precision=6)} is outside the chart: {reason}.")


class UnsupportedOperationError(ModelGeomError):
    """Raised when an entry does not provide the requested structure."""


class SingularMetricError(ModelGeomError):
    """Raised when a metric matrix is singular or not positive definite."""


class InvalidStepError(ModelGeomError, ValueError):
    """Raised for non-positive finite-difference steps or step counts."""


class DependentVectorsError(ModelGeomError, ValueError):
    """Raised when a plane is spanned by linearly dependent vectors."""


class GeodesicDomainError(ModelGeomError):
    """Raised when a geodesic leaves the chart; carries the path computed so far."""

    def __init__(self, *, path: list[np.ndarray], time: float) -> None:
        self.path = path
        self.time = time
        super().__init__(f"Geodesic left the chart domain at t={time:.6g} after {len(path)} points.")


class InconclusiveError(ModelGeomError):
    """Raised when a measured decision quantity falls between the zero and nonzero thresholds."""

    def __init__(self, *, quantity: str, value: float, zero_threshold: float, nonzero_threshold: float) -> None:
        self.quantity = quantity
        self.value = value
        super().__init__(
            f"Inconclusive {quantity}: measured {value:.6g}, which is neither below {zero_threshold:g} "
            f"nor above {nonzero_threshold:g}."
        )


class MissingInputError(ModelGeomError):
    """Raised when a geometry spec lacks data the decision tree needs."""


class UnknownGeometryError(ModelGeomError, KeyError):
    """Raised for labels that are not in the catalog."""

    def __init__(self, label: str) -> None:
        self.label = label
        super().__init__(f"Unknown geometry label {label!r}.")

    def __str__(self) -> str:
        return str(self.args[0])
