"""Abstract base class for geometries: a point space, a group action, an invariant metric and, for
axially symmetric geometries, an invariant vector field X.

Concrete entries implement ``_act``, ``local_chart``, ``sample_point`` and ``sample_group``; everything
else (validation, finite-difference differentials, the isotropy representation, descriptors) is
shared here.
"""

import logging
from abc import ABC, abstractmethod
from collections.abc import Callable
from typing import override

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel

from modelgeom.algebra.rep import CircleRepresentation
from modelgeom.constants import FD_STEP
from modelgeom.core.exceptions import (
    ChartDomainError,
    DimensionMismatchError,
    MissingInputError,
    UnsupportedOperationError,
)
from modelgeom.core.models import FloatArray, GeometryLabel, StructureConstants
from modelgeom.geometry.charts import LocalChart, VectorField, identity_chart

__all__ = [
    "CatalogDescriptor",
    "CatalogEntry",
    "EuclideanChartEntry",
    "GeometrySpec",
    "random_boost",
    "random_rotvec",
    "random_unit_vector",
    "sample_ball",
]

logger = logging.getLogger(__name__)


# Sampling helpers
def random_unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_rotvec(rng: np.random.Generator) -> np.ndarray:
    """Random axis times an angle in [0, 2π)."""
    return random_unit_vector(rng, 3) * rng.uniform(0.0, 2 * np.pi)


def random_boost(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random direction with signed magnitude in [-1, 1]."""
    return random_unit_vector(rng, dim) * rng.uniform(-1.0, 1.0)


def sample_ball(rng: np.random.Generator, dim: int, radius: float) -> np.ndarray:
    """Uniform sample from the closed ball of the given radius."""
    return random_unit_vector(rng, dim) * radius * rng.uniform() ** (1.0 / dim)


class CatalogDescriptor(BaseModel, frozen=True):
    """JSON descriptor emitted by ``catalog show``."""

    label: str
    isotropy_dim: int
    flat_connection: bool | None
    kappa: float | None
    base_curvature_sign: int | None
    group_param_dim: int
    point_dim: int
    has_group_law: bool
    base_point: FloatArray
    structure_constants: StructureConstants | None = None
    center_index: int | None = None


class CatalogEntry(ABC):
    """A 3-dimensional geometry (M, G) with its invariant structure.

    Class attributes describe the entry; subclasses set them. Points are vectors of length
    ``point_dim`` (3 for open subsets of R^3, 4 for entries with a sphere factor); group elements are
    parameter vectors of length ``group_param_dim`` with the zero vector acting as the identity.
    """

    label: GeometryLabel | None = None
    isotropy_dim: int
    group_param_dim: int
    point_dim: int = 3
    flat_connection: bool | None = None
    kappa: float | None = None
    base_curvature_sign: int | None = None
    structure_constants: StructureConstants | None = None
    center_index: int | None = None
    has_group_law: bool = False
    has_action: bool = True

    @property
    def name(self) -> str:
        return str(self.label) if self.label is not None else type(self).__name__

    @property
    def base_point(self) -> np.ndarray:
        return np.zeros(self.point_dim)

    # Points and parameters
    @abstractmethod
    def contains(self, p: np.ndarray) -> bool:
        """Whether ``p`` lies in the point space."""

    def check_point(self, p: ArrayLike) -> np.ndarray:
        point = np.asarray(p, dtype=float)
        if point.shape != (self.point_dim,):
            raise DimensionMismatchError(f"{self.name} points have {self.point_dim} coordinates, got shape {point.shape}")
        if not self.contains(point):
            raise ChartDomainError(point=point, reason=f"not a point of {self.name}")
        return point

    def check_params(self, g: ArrayLike) -> np.ndarray:
        params = np.asarray(g, dtype=float)
        if params.shape != (self.group_param_dim,):
            raise DimensionMismatchError(
                f"{self.name} group parameters have length {self.group_param_dim}, got shape {params.shape}"
            )
        return params

    # Group
    def action(self, g: ArrayLike, p: ArrayLike) -> np.ndarray:
        """Apply the group element with parameters ``g`` to ``p``."""
        return self._act(self.check_params(g), self.check_point(p))

    @abstractmethod
    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray: ...

    def compose(self, g: ArrayLike, h: ArrayLike) -> np.ndarray:
        """Parameters of g∘h, so that action(g, action(h, p)) = action(compose(g, h), p)."""
        if not self.has_group_law:
            raise UnsupportedOperationError(f"{self.name} has no explicit parameter group law")
        return self._compose(self.check_params(g), self.check_params(h))

    def _compose(self, g: np.ndarray, h: np.ndarray) -> np.ndarray:  # noqa: ARG002
        raise UnsupportedOperationError(f"{self.name} has no explicit parameter group law")

    @abstractmethod
    def sample_point(self, rng: np.random.Generator) -> np.ndarray: ...

    @abstractmethod
    def sample_group(self, rng: np.random.Generator) -> np.ndarray: ...

    def group_sample(self, seed: int) -> np.ndarray:
        """Deterministic pseudo-random group parameters for ``seed``."""
        return self.sample_group(np.random.default_rng(seed))

    # Metric and charts
    @abstractmethod
    def local_chart(self, p: ArrayLike) -> LocalChart:
        """A chart centred at ``p`` (chart coordinate 0 is ``p``) carrying the invariant metric."""

    def base_chart(self) -> LocalChart:
        return self.local_chart(self.base_point)

    def invariant_metric(self, p: ArrayLike) -> np.ndarray:
        """μ at ``p`` in the local chart centred at ``p``."""
        return self.local_chart(p).metric(np.zeros(3))

    # Invariant vector field
    def x_field(self, p: ArrayLike) -> np.ndarray:
        """X at ``p`` as a tangent vector of the point space."""
        if self.isotropy_dim != 1:
            raise UnsupportedOperationError(f"{self.name} has isotropy dimension {self.isotropy_dim}; X needs 1")
        return self._x(self.check_point(p))

    def _x(self, p: np.ndarray) -> np.ndarray:  # noqa: ARG002
        raise MissingInputError(f"{self.name} declares isotropy dimension 1 but provides no invariant vector field")

    def chart_field(self, p: ArrayLike) -> VectorField:
        """X in the components of the local chart centred at ``p``."""
        return self.local_chart(p).pull_field(self.x_field)

    # Differentials
    def differential(self, g: ArrayLike, p: ArrayLike, h: float = FD_STEP) -> np.ndarray:
        """Jacobian of the action of ``g`` at ``p`` between the local charts at ``p`` and ``g·p``.

        Central differences of F(y) = chart_{g·p}.to_coords(g · chart_p.to_point(y)).
        """
        params = self.check_params(g)
        chart_p = self.local_chart(p)
        chart_q = self.local_chart(self.action(params, p))

        def in_charts(y: np.ndarray) -> np.ndarray:
            return chart_q.to_coords(self._act(params, self.check_point(chart_p.to_point(y))))

        columns = []
        for m in range(3):
            step = np.zeros(3)
            step[m] = h
            columns.append((in_charts(step) - in_charts(-step)) / (2 * h))
        return np.column_stack(columns)

    def pullback_residual(self, g: ArrayLike, p: ArrayLike) -> float:
        """max |(Dg)ᵀ μ(g·p) (Dg) - μ(p)| relative to max(1, max |μ(p)|)."""
        d = self.differential(g, p)
        mu_p = self.invariant_metric(p)
        mu_q = self.invariant_metric(self.action(g, p))
        return float(np.max(np.abs(d.T @ mu_q @ d - mu_p)) / max(1.0, float(np.max(np.abs(mu_p)))))

    # Isotropy
    def isotropy_params(self, theta: float) -> np.ndarray:
        """Group parameters of the isotropy rotation by ``theta`` fixing the base point."""
        if self.isotropy_dim != 1:
            raise UnsupportedOperationError(f"{self.name} has no SO(2) isotropy")
        return self._isotropy_params(theta)

    def _isotropy_params(self, theta: float) -> np.ndarray:  # noqa: ARG002
        raise UnsupportedOperationError(f"{self.name} does not parametrize its isotropy group")

    def killing_fields(self) -> list[VectorField]:
        """Generators of the isometry algebra as vector fields on the point space, when the entry ships them."""
        raise UnsupportedOperationError(f"{self.name} does not ship its Killing fields")

    def isotropy_representation(self) -> CircleRepresentation:
        """θ ↦ differential of the isotropy rotation at the base point, in the base chart."""
        base = self.base_point
        return CircleRepresentation(sampler=lambda theta: self.differential(self.isotropy_params(theta), base))

    def descriptor(self) -> CatalogDescriptor:
        return CatalogDescriptor(
            label=self.name,
            isotropy_dim=self.isotropy_dim,
            flat_connection=self.flat_connection,
            kappa=self.kappa,
            base_curvature_sign=self.base_curvature_sign,
            group_param_dim=self.group_param_dim,
            point_dim=self.point_dim,
            has_group_law=self.has_group_law,
            base_point=self.base_point,
            structure_constants=self.structure_constants,
            center_index=self.center_index,
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class EuclideanChartEntry(CatalogEntry):
    """Entries whose points already are coordinates on an open subset of R^3."""

    @abstractmethod
    def metric_at(self, p: np.ndarray) -> np.ndarray:
        """Closed-form μ at the global coordinate ``p``."""

    # Closed-form Christoffel symbols, when the entry knows them
    christoffel_at: Callable[[np.ndarray], np.ndarray] | None = None

    @override
    def contains(self, p: np.ndarray) -> bool:
        return True

    def local_chart(self, p: ArrayLike) -> LocalChart:
        return identity_chart(self.check_point(p), self.metric_at, self.contains, self.christoffel_at)


type GeometrySpec = CatalogEntry
