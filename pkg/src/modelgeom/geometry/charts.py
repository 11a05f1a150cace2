"""Chart metrics and local charts.

Entries living on an open subset of R^3 use their global coordinates. Sphere factors use embedded
unit vectors; tensor calculus there happens in a stereographic chart centred at the point of
interest, built from an explicit orthonormal frame of the tangent space.
"""

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import null_space

from modelgeom.core.exceptions import ChartDomainError, DimensionMismatchError

__all__ = [
    "ChartMetric",
    "LocalChart",
    "VectorField",
    "as_point",
    "conformal_christoffel",
    "identity_chart",
    "quaternion_frame",
    "round_metric",
    "s3_chart",
    "sphere_frame",
    "stereographic_maps",
]

type VectorField = Callable[[np.ndarray], np.ndarray]


def as_point(p: ArrayLike, dim: int = 3) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape != (dim,):
        raise DimensionMismatchError(f"expected a point with {dim} coordinates, got shape {arr.shape}")
    return arr


def _everywhere(_: np.ndarray) -> bool:
    return True


@dataclass(frozen=True)
class ChartMetric:
    """A metric on a 3-dimensional chart.

    Attributes:
        eval: Chart point to 3x3 metric matrix (symmetrized on evaluation).
        domain: Predicate for chart membership.
        christoffel_oracle: Closed-form Christoffel symbols Γ[k, i, j], when known.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    domain: Callable[[np.ndarray], bool] = _everywhere
    christoffel_oracle: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, p: ArrayLike) -> np.ndarray:
        point = as_point(p)
        if not self.domain(point):
            raise ChartDomainError(point=point, reason="metric evaluated outside its domain")
        g = np.asarray(self.eval(point), dtype=float)
        if g.shape != (3, 3):
            raise DimensionMismatchError(f"metric must be 3x3, got shape {g.shape}")
        return 0.5 * (g + g.T)

    def contains(self, p: ArrayLike) -> bool:
        return bool(self.domain(np.asarray(p, dtype=float)))

    def scaled(self, factor: float) -> "ChartMetric":
        """The metric multiplied by a positive constant (Christoffel symbols are unchanged)."""
        if factor <= 0:
            raise ValueError(f"metric scale must be positive, got {factor}")
        return ChartMetric(
            eval=lambda p: factor * self.eval(p), domain=self.domain, christoffel_oracle=self.christoffel_oracle
        )

    def is_positive_definite(self, p: ArrayLike) -> bool:
        return bool(np.all(np.linalg.eigvalsh(self(p)) > 0))


@dataclass(frozen=True)
class LocalChart:
    """A chart y ↦ point centred at ``center`` (y = 0 maps to the centre).

    ``jacobian(y)`` is the derivative of ``to_point``; tangent vectors of the entry's point space are
    pulled into chart components with its pseudo-inverse.
    """

    center: np.ndarray
    to_point: Callable[[np.ndarray], np.ndarray]
    to_coords: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    metric: ChartMetric = field(repr=False)

    def pull_field(self, ambient_field: VectorField) -> VectorField:
        """Express a vector field on the point space in chart components."""

        def in_chart(y: np.ndarray) -> np.ndarray:
            jac = self.jacobian(np.asarray(y, dtype=float))
            return np.linalg.lstsq(jac, ambient_field(self.to_point(y)), rcond=None)[0]

        return in_chart

    def push_vector(self, v: ArrayLike) -> np.ndarray:
        """Chart components at the centre to a tangent vector of the point space."""
        return self.jacobian(np.zeros(3)) @ np.asarray(v, dtype=float)


def identity_chart(
    center: np.ndarray,
    metric_at: Callable[[np.ndarray], np.ndarray],
    contains: Callable[[np.ndarray], bool],
    christoffel_at: Callable[[np.ndarray], np.ndarray] | None = None,
) -> LocalChart:
    """Translation chart y ↦ center + y for entries whose points already are chart points."""
    center = np.asarray(center, dtype=float)
    oracle = None if christoffel_at is None else (lambda y: christoffel_at(center + y))
    metric = ChartMetric(
        eval=lambda y: metric_at(center + y), domain=lambda y: contains(center + y), christoffel_oracle=oracle
    )
    return LocalChart(
        center=center,
        to_point=lambda y: center + y,
        to_coords=lambda q: np.asarray(q, dtype=float) - center,
        jacobian=lambda _y: np.eye(3),
        metric=metric,
    )


# Frames on spheres
_I = np.array([[0.0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])  # (z1, z2) -> (i z1, i z2)
_J = np.array([[0.0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])  # (z1, z2) -> (-conj z2, conj z1)
_K = _I @ _J


def quaternion_frame(q: np.ndarray) -> np.ndarray:
    """Orthonormal frame (Iq, Jq, Kq) of T_q S^3 as the columns of a 4x3 matrix; Iq is the Hopf direction."""
    return np.column_stack([_I @ q, _J @ q, _K @ q])


def sphere_frame(s: np.ndarray) -> np.ndarray:
    """Oriented orthonormal basis of T_s S^2 as the columns of a 3x2 matrix."""
    frame = null_space(s[None, :])
    if np.linalg.det(np.column_stack([frame, s])) < 0:
        frame = frame[:, ::-1]
    return frame


def stereographic_maps(
    center: np.ndarray, frame: np.ndarray
) -> tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]:
    """Stereographic projection from -center onto the frame's span: (to_point, to_coords, jacobian).

    The round metric in these coordinates is 4 / (1 + |y|^2)^2 times the identity.
    """

    def to_point(y: np.ndarray) -> np.ndarray:
        s = 1.0 + y @ y
        return ((2.0 - s) * center + 2.0 * frame @ y) / s

    def to_coords(q: np.ndarray) -> np.ndarray:
        return frame.T @ q / (1.0 + center @ q)

    def jacobian(y: np.ndarray) -> np.ndarray:
        s = 1.0 + y @ y
        return 2.0 * frame / s - np.outer(2.0 * center + 2.0 * frame @ y, 2.0 * y) / s**2

    return to_point, to_coords, jacobian


def conformal_christoffel(grad_phi: np.ndarray) -> np.ndarray:
    """Γ[k, i, j] for g = e^{2φ} δ: δ_ki ∂_jφ + δ_kj ∂_iφ - δ_ij ∂_kφ."""
    n = grad_phi.shape[0]
    eye = np.eye(n)
    return (
        np.einsum("ki,j->kij", eye, grad_phi)
        + np.einsum("kj,i->kij", eye, grad_phi)
        - np.einsum("ij,k->kij", eye, grad_phi)
    )


def _round_factor(y: np.ndarray) -> float:
    return 4.0 / (1.0 + y @ y) ** 2


def round_metric(dim: int = 3) -> ChartMetric:
    """4 / (1 + |y|^2)^2 times the identity on R^dim, padded with dt^2 up to three coordinates."""

    def metric(y: np.ndarray) -> np.ndarray:
        g = np.eye(3)
        g[:dim, :dim] *= _round_factor(y[:dim])
        return g

    def oracle(y: np.ndarray) -> np.ndarray:
        gamma = np.zeros((3, 3, 3))
        gamma[:dim, :dim, :dim] = conformal_christoffel(-2.0 * y[:dim] / (1.0 + y[:dim] @ y[:dim]))
        return gamma

    return ChartMetric(eval=metric, christoffel_oracle=oracle)


def s3_chart(q: ArrayLike) -> LocalChart:
    """Stereographic chart of the unit sphere in R^4 centred at ``q`` with the quaternionic frame."""
    center = as_point(q, dim=4)
    to_point, to_coords, jacobian = stereographic_maps(center, quaternion_frame(center))
    return LocalChart(center=center, to_point=to_point, to_coords=to_coords, jacobian=jacobian, metric=round_metric(3))
