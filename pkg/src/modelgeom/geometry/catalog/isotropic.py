"""Isotropic geometries (isotropy SO(3)): Euclidean space, the round sphere and hyperbolic space."""

from typing import override

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import expm
from scipy.spatial.transform import Rotation

from modelgeom.core.models import GeometryKind, GeometryLabel
from modelgeom.geometry.catalog.base import (
    CatalogEntry,
    EuclideanChartEntry,
    random_boost,
    random_rotvec,
    random_unit_vector,
    sample_ball,
)
from modelgeom.geometry.charts import LocalChart, conformal_christoffel, s3_chart

__all__ = ["Euclidean3", "Hyperbolic3", "RoundSphere3", "mobius_add", "mobius_boost"]

SPHERE_TOL = 1e-9


def mobius_add(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Möbius addition a ⊕ x on the Poincaré ball: the isometry mapping 0 to a without rotation."""
    ax, aa, xx = a @ x, a @ a, x @ x
    return ((1.0 + 2.0 * ax + xx) * a + (1.0 - aa) * x) / (1.0 + 2.0 * ax + aa * xx)


def mobius_boost(b: np.ndarray) -> np.ndarray:
    """Ball point reached from 0 by moving hyperbolic distance |b| along b."""
    norm = float(np.linalg.norm(b))
    if norm == 0.0:
        return np.zeros_like(b)
    return np.tanh(norm / 2.0) * b / norm


def _antisymmetric(params: np.ndarray) -> np.ndarray:
    a = np.zeros((4, 4))
    a[np.triu_indices(4, k=1)] = params
    return a - a.T


class Euclidean3(EuclideanChartEntry):
    """E3: R^3 with the rigid motions; parameters (translation, rotation vector)."""

    label = GeometryLabel(kind=GeometryKind.E3)
    isotropy_dim = 3
    group_param_dim = 6
    base_curvature_sign = 0
    has_group_law = True

    @override
    def metric_at(self, p: np.ndarray) -> np.ndarray:
        return np.eye(3)

    @override
    def christoffel_at(self, p: np.ndarray) -> np.ndarray:
        return np.zeros((3, 3, 3))

    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        return Rotation.from_rotvec(g[3:]).apply(p) + g[:3]

    def _compose(self, g: np.ndarray, h: np.ndarray) -> np.ndarray:
        r_g, r_h = Rotation.from_rotvec(g[3:]), Rotation.from_rotvec(h[3:])
        return np.concatenate([g[:3] + r_g.apply(h[:3]), (r_g * r_h).as_rotvec()])

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-2.0, 2.0, size=3)

    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return np.concatenate([rng.uniform(-2.0, 2.0, size=3), random_rotvec(rng)])


class RoundSphere3(CatalogEntry):
    """S3_SO4: the unit sphere in R^4 with SO(4); parameters are the upper-triangular entries of so(4)."""

    label = GeometryLabel(kind=GeometryKind.S3_SO4)
    isotropy_dim = 3
    group_param_dim = 6
    point_dim = 4
    base_curvature_sign = 1

    @property
    def base_point(self) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0, 0.0])

    def contains(self, p: np.ndarray) -> bool:
        return abs(float(np.linalg.norm(p)) - 1.0) <= SPHERE_TOL

    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        q = expm(_antisymmetric(g)) @ p
        return q / np.linalg.norm(q)

    def local_chart(self, p: ArrayLike) -> LocalChart:
        return s3_chart(self.check_point(p))

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return random_unit_vector(rng, 4)

    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(0.0, 2 * np.pi, size=6)


class Hyperbolic3(EuclideanChartEntry):
    """H3: the Poincaré ball with curvature -1; parameters (boost vector, rotation vector).

    g = (b, r) acts by x ↦ a ⊕ R x with a = tanh(|b|/2) b/|b| and R = exp(r).
    """

    label = GeometryLabel(kind=GeometryKind.H3)
    isotropy_dim = 3
    group_param_dim = 6
    base_curvature_sign = -1

    def contains(self, p: np.ndarray) -> bool:
        return float(p @ p) < 1.0

    def metric_at(self, p: np.ndarray) -> np.ndarray:
        return 4.0 / (1.0 - p @ p) ** 2 * np.eye(3)

    def christoffel_at(self, p: np.ndarray) -> np.ndarray:
        return conformal_christoffel(2.0 * p / (1.0 - p @ p))

    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        return mobius_add(mobius_boost(g[:3]), Rotation.from_rotvec(g[3:]).apply(p))

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return sample_ball(rng, 3, 0.5)

    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return np.concatenate([random_boost(rng, 3), random_rotvec(rng)])
