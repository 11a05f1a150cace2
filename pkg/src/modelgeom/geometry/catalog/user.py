"""User geometry specs: catalog entries under modification, bundles of callables, and the spec file.

A spec file selects a catalog family and applies modifiers in a fixed order: κ for the warped
family, a constant metric scale, then conjugation of the action by a seeded orthogonal map of the
point space. A bare Lie group is given by isotropy dimension 0 and its structure constants.
"""

import dataclasses
import logging
from collections.abc import Callable
from pathlib import Path
from typing import Literal, override

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import special_ortho_group

from modelgeom.algebra.rep import CircleRepresentation
from modelgeom.core.exceptions import MissingInputError, UnsupportedCaseError, UnsupportedOperationError
from modelgeom.core.models import GeometryKind, StructureConstants
from modelgeom.geometry.catalog.base import CatalogEntry, EuclideanChartEntry
from modelgeom.geometry.catalog.flat import WarpedEuclidean
from modelgeom.geometry.catalog.registry import get_entry
from modelgeom.geometry.charts import LocalChart, VectorField

__all__ = ["ConjugatedGeometry", "GeometrySpecFile", "ScaledGeometry", "UserGeometry", "load_spec"]

logger = logging.getLogger(__name__)

_DESCRIPTIVE = (
    "label",
    "isotropy_dim",
    "group_param_dim",
    "point_dim",
    "flat_connection",
    "kappa",
    "base_curvature_sign",
    "structure_constants",
    "center_index",
    "has_group_law",
    "has_action",
)


class _DerivedGeometry(CatalogEntry):
    """An entry built from another one; descriptive attributes and behaviour default to the source."""

    def __init__(self, source: CatalogEntry) -> None:
        self.source = source
        for attr in _DESCRIPTIVE:
            setattr(self, attr, getattr(source, attr))

    @property
    def base_point(self) -> np.ndarray:
        return self.source.base_point

    def contains(self, p: np.ndarray) -> bool:
        return self.source.contains(p)

    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        return self.source.action(g, p)

    @override
    def _compose(self, g: np.ndarray, h: np.ndarray) -> np.ndarray:
        return self.source.compose(g, h)

    @override
    def _x(self, p: np.ndarray) -> np.ndarray:
        return self.source.x_field(p)

    @override
    def _isotropy_params(self, theta: float) -> np.ndarray:
        return self.source.isotropy_params(theta)

    @override
    def isotropy_representation(self) -> CircleRepresentation:
        # Chart coordinates are shared with the source
        return self.source.isotropy_representation()

    @override
    def killing_fields(self) -> list[VectorField]:
        return self.source.killing_fields()

    def local_chart(self, p: ArrayLike) -> LocalChart:
        return self.source.local_chart(p)

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return self.source.sample_point(rng)

    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return self.source.sample_group(rng)


class ScaledGeometry(_DerivedGeometry):
    """The source geometry with its metric multiplied by a positive constant."""

    def __init__(self, source: CatalogEntry, factor: float) -> None:
        if factor <= 0:
            raise ValueError(f"metric scale must be positive, got {factor}")
        super().__init__(source)
        self.factor = float(factor)

    @property
    def name(self) -> str:
        return f"{self.source.name}*{self.factor:g}"

    @override
    def local_chart(self, p: ArrayLike) -> LocalChart:
        chart = self.source.local_chart(p)
        return dataclasses.replace(chart, metric=chart.metric.scaled(self.factor))


class ConjugatedGeometry(_DerivedGeometry):
    """The source geometry transported by an orthogonal map Q of its point space.

    Points are Q·p, the action is g ↦ Q ∘ g ∘ Qᵀ and X' = Q X(Qᵀ ·); charts are composed with Q, so
    chart metrics coincide with the source's.
    """

    def __init__(self, source: CatalogEntry, q: ArrayLike) -> None:
        matrix = np.asarray(q, dtype=float)
        n = source.point_dim
        if matrix.shape != (n, n) or not np.allclose(matrix @ matrix.T, np.eye(n), atol=1e-12):
            raise ValueError(f"conjugating map must be an orthogonal {n}x{n} matrix")
        super().__init__(source)
        self.q = matrix

    @classmethod
    def from_seed(cls, source: CatalogEntry, seed: int) -> "ConjugatedGeometry":
        return cls(source, special_ortho_group.rvs(source.point_dim, random_state=seed))

    @property
    def name(self) -> str:
        return f"{self.source.name}^Q"

    @property
    @override
    def base_point(self) -> np.ndarray:
        return self.q @ self.source.base_point

    @override
    def contains(self, p: np.ndarray) -> bool:
        return self.source.contains(self.q.T @ p)

    @override
    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        return self.q @ self.source.action(g, self.q.T @ p)

    @override
    def _x(self, p: np.ndarray) -> np.ndarray:
        return self.q @ self.source.x_field(self.q.T @ p)

    @override
    def local_chart(self, p: ArrayLike) -> LocalChart:
        center = self.check_point(p)
        chart = self.source.local_chart(self.q.T @ center)
        q = self.q
        return LocalChart(
            center=center,
            to_point=lambda y: q @ chart.to_point(y),
            to_coords=lambda x: chart.to_coords(q.T @ x),
            jacobian=lambda y: q @ chart.jacobian(y),
            metric=chart.metric,
        )

    @override
    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return self.q @ self.source.sample_point(rng)

    @override
    def killing_fields(self) -> list[VectorField]:
        q = self.q
        return [lambda p, f=f: q @ f(q.T @ p) for f in self.source.killing_fields()]


def _euclidean(_p: np.ndarray) -> np.ndarray:
    return np.eye(3)


def _everywhere(_p: np.ndarray) -> bool:
    return True


class UserGeometry(EuclideanChartEntry):
    """A geometry on an open subset of R^3 given by callables.

    Only ``isotropy_dim`` is mandatory; operations that need a missing piece raise
    ``MissingInputError`` or ``UnsupportedOperationError``.
    """

    def __init__(
        self,
        *,
        isotropy_dim: int,
        metric: Callable[[np.ndarray], np.ndarray] = _euclidean,
        action: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
        group_param_dim: int = 0,
        x_field: VectorField | None = None,
        structure_constants: StructureConstants | None = None,
        center_index: int | None = None,
        domain: Callable[[np.ndarray], bool] = _everywhere,
        isotropy_params: Callable[[float], np.ndarray] | None = None,
    ) -> None:
        if isotropy_dim not in (0, 1, 3):
            raise UnsupportedCaseError(f"isotropy dimension must be 0, 1 or 3, got {isotropy_dim}")
        self.isotropy_dim = isotropy_dim
        self.group_param_dim = group_param_dim
        self.structure_constants = structure_constants
        self.center_index = center_index
        self.has_action = action is not None
        self._metric = metric
        self._action = action
        self._field = x_field
        self._domain = domain
        self._isotropy = isotropy_params

    @override
    def contains(self, p: np.ndarray) -> bool:
        return bool(self._domain(p))

    def metric_at(self, p: np.ndarray) -> np.ndarray:
        return np.asarray(self._metric(p), dtype=float)

    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        if self._action is None:
            raise UnsupportedOperationError("user geometry provides no action")
        return np.asarray(self._action(g, p), dtype=float)

    @override
    def _x(self, p: np.ndarray) -> np.ndarray:
        if self._field is None:
            raise MissingInputError("isotropy dimension 1 requires an invariant vector field")
        return np.asarray(self._field(p), dtype=float)

    @override
    def _isotropy_params(self, theta: float) -> np.ndarray:
        if self._isotropy is None:
            raise MissingInputError("user geometry does not parametrize its isotropy group")
        return np.asarray(self._isotropy(theta), dtype=float)

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-0.5, 0.5, size=3)

    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-1.0, 1.0, size=self.group_param_dim)


class GeometrySpecFile(BaseModel):
    """JSON input of ``classify --spec``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    catalog: GeometryKind | None = None
    kappa: float | None = None
    metric_scale: float | None = Field(default=None, gt=0)
    conjugate_seed: int | None = Field(default=None, ge=0)
    isotropy_dim: Literal[0, 1, 3] | None = None
    structure_constants: StructureConstants | None = None

    def build(self) -> CatalogEntry:
        """The geometry described by this spec.

        Raises:
            MissingInputError: If neither a catalog family nor Lie-group structure constants are given.
            UnsupportedCaseError: For modifiers that do not apply to the selected family.
        """
        if self.catalog in (None, GeometryKind.LIE_GROUP):
            if self.isotropy_dim not in (None, 0):
                raise MissingInputError(f"isotropy dimension {self.isotropy_dim} needs a catalog family")
            if self.structure_constants is None:
                raise MissingInputError("a Lie group spec needs structure_constants")
            return UserGeometry(isotropy_dim=0, structure_constants=self.structure_constants)
        if self.structure_constants is not None:
            raise UnsupportedCaseError("structure_constants describe bare Lie groups only")

        entry: CatalogEntry
        if self.kappa is not None:
            if self.catalog not in (GeometryKind.E2XR, GeometryKind.E2_SEMI_R):
                raise UnsupportedCaseError(f"kappa applies to the warped family, not {self.catalog}")
            entry = WarpedEuclidean(kappa=self.kappa)
        else:
            entry = get_entry(self.catalog)
        if self.isotropy_dim is not None and self.isotropy_dim != entry.isotropy_dim:
            raise UnsupportedCaseError(
                f"{entry.name} has isotropy dimension {entry.isotropy_dim}, spec declares {self.isotropy_dim}"
            )
        if self.metric_scale is not None:
            entry = ScaledGeometry(entry, self.metric_scale)
        if self.conjugate_seed is not None:
            entry = ConjugatedGeometry.from_seed(entry, self.conjugate_seed)
        logger.debug("built %s from spec", entry.name)
        return entry


def load_spec(path: str | Path) -> CatalogEntry:
    """Read a spec file and build its geometry."""
    return GeometrySpecFile.model_validate_json(Path(path).read_text()).build()
