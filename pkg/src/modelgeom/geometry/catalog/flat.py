"""Axially symmetric geometries with a flat connection: M = N x R with X = ∂_t.

The warped family μ = e^{κt}(dx^2 + dy^2) + dt^2 carries the group E(2) ⋊ R acting by
(x, t) ↦ (e^{-κs/2} R_θ x + a, t + s); κ = 0 is the product E2xR and every κ ≠ 0 is equivalent to
κ = 1 through (x, t) ↦ (x, κt).
"""

from dataclasses import dataclass
from typing import override

import numpy as np
from numpy.typing import ArrayLike
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
from modelgeom.geometry.catalog.isotropic import SPHERE_TOL, mobius_add, mobius_boost
from modelgeom.geometry.charts import LocalChart, conformal_christoffel, round_metric, sphere_frame, stereographic_maps

__all__ = [
    "HyperbolicPlaneTimesLine",
    "KappaNormalization",
    "SphereTimesLine",
    "WarpedEuclidean",
    "kappa_normalization",
    "rotation2",
]

_AXIS = np.array([0.0, 0.0, 1.0])


def rotation2(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


class SphereTimesLine(CatalogEntry):
    """S2xR: points (s, t) with s on the unit sphere; parameters (rotation vector, translation)."""

    label = GeometryLabel(kind=GeometryKind.S2XR)
    isotropy_dim = 1
    group_param_dim = 4
    point_dim = 4
    flat_connection = True
    base_curvature_sign = 1
    has_group_law = True

    @property
    def base_point(self) -> np.ndarray:
        return np.array([0.0, 0.0, 1.0, 0.0])

    def contains(self, p: np.ndarray) -> bool:
        return abs(float(np.linalg.norm(p[:3])) - 1.0) <= SPHERE_TOL

    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        s = Rotation.from_rotvec(g[:3]).apply(p[:3])
        return np.append(s / np.linalg.norm(s), p[3] + g[3])

    def _compose(self, g: np.ndarray, h: np.ndarray) -> np.ndarray:
        rotation = Rotation.from_rotvec(g[:3]) * Rotation.from_rotvec(h[:3])
        return np.append(rotation.as_rotvec(), g[3] + h[3])

    def local_chart(self, p: ArrayLike) -> LocalChart:
        center = self.check_point(p)
        s0, t0 = center[:3], center[3]
        sphere_to_point, sphere_to_coords, sphere_jacobian = stereographic_maps(s0, sphere_frame(s0))

        def jacobian(y: np.ndarray) -> np.ndarray:
            jac = np.zeros((4, 3))
            jac[:3, :2] = sphere_jacobian(y[:2])
            jac[3, 2] = 1.0
            return jac

        return LocalChart(
            center=center,
            to_point=lambda y: np.append(sphere_to_point(y[:2]), t0 + y[2]),
            to_coords=lambda q: np.append(sphere_to_coords(q[:3]), q[3] - t0),
            jacobian=jacobian,
            metric=round_metric(2),
        )

    @override
    def _x(self, p: np.ndarray) -> np.ndarray:
        return np.array([0.0, 0.0, 0.0, 1.0])

    @override
    def _isotropy_params(self, theta: float) -> np.ndarray:
        return np.array([0.0, 0.0, theta, 0.0])

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return np.append(random_unit_vector(rng, 3), rng.uniform(-1.0, 1.0))

    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return np.append(random_rotvec(rng), rng.uniform(-2.0, 2.0))


class HyperbolicPlaneTimesLine(EuclideanChartEntry):
    """H2xR: Poincaré disk times R; parameters (boost in R^2, rotation angle, translation)."""

    label = GeometryLabel(kind=GeometryKind.H2XR)
    isotropy_dim = 1
    group_param_dim = 4
    flat_connection = True
    base_curvature_sign = -1

    def contains(self, p: np.ndarray) -> bool:
        return float(p[:2] @ p[:2]) < 1.0

    def metric_at(self, p: np.ndarray) -> np.ndarray:
        g = np.eye(3)
        g[:2, :2] *= 4.0 / (1.0 - p[:2] @ p[:2]) ** 2
        return g

    def christoffel_at(self, p: np.ndarray) -> np.ndarray:
        gamma = np.zeros((3, 3, 3))
        gamma[:2, :2, :2] = conformal_christoffel(2.0 * p[:2] / (1.0 - p[:2] @ p[:2]))
        return gamma

    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        x = mobius_add(mobius_boost(g[:2]), rotation2(g[2]) @ p[:2])
        return np.append(x, p[2] + g[3])

    @override
    def _x(self, p: np.ndarray) -> np.ndarray:
        return _AXIS.copy()

    @override
    def _isotropy_params(self, theta: float) -> np.ndarray:
        return np.array([0.0, 0.0, theta, 0.0])

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return np.append(sample_ball(rng, 2, 0.5), rng.uniform(-1.0, 1.0))

    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return np.concatenate([random_boost(rng, 2), [rng.uniform(0.0, 2 * np.pi), rng.uniform(-2.0, 2.0)]])


class WarpedEuclidean(EuclideanChartEntry):
    """E2xR (κ = 0) and E2SemiR (κ ≠ 0): parameters (a ∈ R^2, θ, s).

    Group law (a₁, θ₁, s₁)(a₂, θ₂, s₂) = (a₁ + e^{-κs₁/2} R_θ₁ a₂, θ₁ + θ₂, s₁ + s₂).
    """

    isotropy_dim = 1
    group_param_dim = 4
    flat_connection = True
    base_curvature_sign = 0
    has_group_law = True

    def __init__(self, kappa: float = 1.0) -> None:
        self.kappa = float(kappa)
        kind = GeometryKind.E2XR if self.kappa == 0.0 else GeometryKind.E2_SEMI_R
        self.label = GeometryLabel(kind=kind)

    @property
    def name(self) -> str:
        return f"{self.label}(kappa={self.kappa:g})" if self.kappa not in (0.0, 1.0) else str(self.label)

    def metric_at(self, p: np.ndarray) -> np.ndarray:
        warp = np.exp(self.kappa * p[2])
        return np.diag([warp, warp, 1.0])

    def christoffel_at(self, p: np.ndarray) -> np.ndarray:
        half = 0.5 * self.kappa
        gamma = np.zeros((3, 3, 3))
        gamma[2, 0, 0] = gamma[2, 1, 1] = -half * np.exp(self.kappa * p[2])
        gamma[0, 0, 2] = gamma[0, 2, 0] = gamma[1, 1, 2] = gamma[1, 2, 1] = half
        return gamma

    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        x = np.exp(-0.5 * self.kappa * g[3]) * rotation2(g[2]) @ p[:2] + g[:2]
        return np.append(x, p[2] + g[3])

    def _compose(self, g: np.ndarray, h: np.ndarray) -> np.ndarray:
        a = g[:2] + np.exp(-0.5 * self.kappa * g[3]) * rotation2(g[2]) @ h[:2]
        return np.array([a[0], a[1], g[2] + h[2], g[3] + h[3]])

    @override
    def _x(self, p: np.ndarray) -> np.ndarray:
        return _AXIS.copy()

    @override
    def _isotropy_params(self, theta: float) -> np.ndarray:
        return np.array([0.0, 0.0, theta, 0.0])

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return np.append(rng.uniform(-2.0, 2.0, size=2), rng.uniform(-1.0, 1.0))

    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return np.array(
            [rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(0.0, 2 * np.pi), rng.uniform(-2.0, 2.0)]
        )


@dataclass(frozen=True)
class KappaNormalization:
    """The equivalence (M, G_κ) ≅ (M, G_1): f(x, t) = (x, κt) on points, F(a, θ, s) = (a, θ, κs) on parameters."""

    kappa: float

    def point(self, p: ArrayLike) -> np.ndarray:
        q = np.array(p, dtype=float)
        q[2] *= self.kappa
        return q

    def params(self, g: ArrayLike) -> np.ndarray:
        h = np.array(g, dtype=float)
        h[3] *= self.kappa
        return h

    def residual(self, g: ArrayLike, p: ArrayLike) -> float:
        """|f(g·p) - F(g)·f(p)| with g acting on the κ-entry and F(g) on the κ = 1 entry."""
        source, target = WarpedEuclidean(self.kappa), WarpedEuclidean(1.0)
        lhs = self.point(source.action(g, p))
        rhs = target.action(self.params(g), self.point(p))
        return float(np.max(np.abs(lhs - rhs)))


def kappa_normalization(kappa: float) -> KappaNormalization:
    """The normalization sending the warped geometry with parameter ``kappa`` to κ = 1.

    Raises:
        ValueError: If ``kappa`` is zero (the product geometry is not equivalent to κ = 1).
    """
    if kappa == 0.0:
        raise ValueError("kappa = 0 is the product geometry E2xR and cannot be normalized to kappa = 1")
    return KappaNormalization(kappa=float(kappa))
