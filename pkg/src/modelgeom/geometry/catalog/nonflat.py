"""Axially symmetric geometries with a non-flat connection: S3_U2, SLTilde and NilSO2.

Each entry records the structure constants of its group G on a basis (e_0, e_1, e_2, e_3) with e_0
spanning the center (the fibre direction X) and e_3 generating the isotropy.
"""

from functools import cache
from typing import override

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import expm

from modelgeom.algebra.cohomology import central_extension, coboundary
from modelgeom.algebra.rep import CircleRepresentation
from modelgeom.core.exceptions import UnsupportedOperationError
from modelgeom.core.models import GeometryKind, GeometryLabel, StructureConstants, TwoCocycle
from modelgeom.geometry.catalog.base import CatalogEntry, EuclideanChartEntry, random_rotvec, random_unit_vector
from modelgeom.geometry.catalog.flat import rotation2
from modelgeom.geometry.catalog.isotropic import SPHERE_TOL
from modelgeom.geometry.charts import LocalChart, VectorField, s3_chart

__all__ = [
    "HeisenbergRotations",
    "HopfSphere",
    "UniversalCoverSL2",
    "e2_algebra",
    "heisenberg_product",
    "nil_rotation",
    "sl2_algebra",
    "so3_algebra",
    "unitary",
    "unitary_params",
]


# Base algebras on (e_1, e_2, e_3)
def so3_algebra() -> StructureConstants:
    return StructureConstants.from_brackets(3, {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (2, 0): [0, 1, 0]})


def sl2_algebra() -> StructureConstants:
    """sl(2, R) with e_3 generating the compact direction: [e_1, e_2] = -e_3."""
    return StructureConstants.from_brackets(3, {(0, 1): [0, 0, -1], (1, 2): [1, 0, 0], (2, 0): [0, 1, 0]})


def e2_algebra() -> StructureConstants:
    """e(2): [e_1, e_3] = -e_2, [e_2, e_3] = e_1."""
    return StructureConstants.from_brackets(3, {(0, 2): [0, -1, 0], (1, 2): [1, 0, 0]})


# S3_U2
_PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)


def unitary(g: ArrayLike) -> np.ndarray:
    """U = e^{iφ} exp(-½ i Σ v_k σ_k) for parameters (φ, v)."""
    params = np.asarray(g, dtype=float)
    return np.exp(1j * params[0]) * expm(-0.5j * np.einsum("k,kab->ab", params[1:], _PAULI))


def unitary_params(u: np.ndarray) -> np.ndarray:
    """Parameters (φ, v) with unitary(φ, v) = u."""
    phi = 0.5 * float(np.angle(np.linalg.det(u)))
    s = np.exp(-1j * phi) * u
    w = float(s[0, 0].real)
    m = 1j * (s - w * np.eye(2))
    axis = np.array([m[1, 0].real, m[1, 0].imag, m[0, 0].real])
    sin_half = float(np.linalg.norm(axis))
    if sin_half <= 1e-15:
        v = np.zeros(3) if w > 0 else np.array([2 * np.pi, 0.0, 0.0])
    else:
        v = 2.0 * np.arctan2(sin_half, w) * axis / sin_half
    return np.concatenate([[phi], v])


def _to_c2(p: np.ndarray) -> np.ndarray:
    return np.array([p[0] + 1j * p[1], p[2] + 1j * p[3]])


def _from_c2(z: np.ndarray) -> np.ndarray:
    return np.array([z[0].real, z[0].imag, z[1].real, z[1].imag])


class HopfSphere(CatalogEntry):
    """S3_U2: the unit sphere in C^2 with U(2); X(p) = i·p generates the Hopf fibration."""

    label = GeometryLabel(kind=GeometryKind.S3_U2)
    isotropy_dim = 1
    group_param_dim = 4
    point_dim = 4
    flat_connection = False
    base_curvature_sign = 1
    has_group_law = True
    center_index = 0

    def __init__(self) -> None:
        so3 = so3_algebra()
        self.structure_constants = central_extension(so3, coboundary(so3, [0.0, 0.0, 0.5]))

    @property
    def base_point(self) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0, 0.0])

    def contains(self, p: np.ndarray) -> bool:
        return abs(float(np.linalg.norm(p)) - 1.0) <= SPHERE_TOL

    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        q = _from_c2(unitary(g) @ _to_c2(p))
        return q / np.linalg.norm(q)

    def _compose(self, g: np.ndarray, h: np.ndarray) -> np.ndarray:
        return unitary_params(unitary(g) @ unitary(h))

    def local_chart(self, p: ArrayLike) -> LocalChart:
        return s3_chart(self.check_point(p))

    @override
    def _x(self, p: np.ndarray) -> np.ndarray:
        return _from_c2(1j * _to_c2(p))

    @override
    def _isotropy_params(self, theta: float) -> np.ndarray:
        # diag(1, e^{iθ}) fixes (1, 0)
        return np.array([0.5 * theta, 0.0, 0.0, theta])

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return random_unit_vector(rng, 4)

    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return np.concatenate([[rng.uniform(0.0, 2 * np.pi)], random_rotvec(rng)])


# SLTilde
class UniversalCoverSL2(EuclideanChartEntry):
    """SLTilde on D^2 x R with μ = λ²(dx² + dy²) + (dt + α)², λ = 2/(1 - r²), α = 2(x dy - y dx)/(1 - r²).

    The group has no closed-form global action here; it is represented by its Killing fields
    (fibre translation, rotation and two lifted boosts) and its structure constants R x sl(2, R).
    """

    label = GeometryLabel(kind=GeometryKind.SL_TILDE)
    isotropy_dim = 1
    group_param_dim = 0
    flat_connection = False
    base_curvature_sign = -1
    center_index = 0
    has_action = False

    def __init__(self) -> None:
        sl2 = sl2_algebra()
        self.structure_constants = central_extension(sl2, coboundary(sl2, [0.0, 0.0, 1.0]))

    def contains(self, p: np.ndarray) -> bool:
        return float(p[:2] @ p[:2]) < 1.0

    def metric_at(self, p: np.ndarray) -> np.ndarray:
        x, y = p[0], p[1]
        d = 1.0 - x * x - y * y
        lam2 = 4.0 / d**2
        ax, ay = -2.0 * y / d, 2.0 * x / d
        return np.array([[lam2 + ax * ax, ax * ay, ax], [ax * ay, lam2 + ay * ay, ay], [ax, ay, 1.0]])

    @override
    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        raise UnsupportedOperationError("SLTilde has no global parameterized action; use its Killing fields")

    @override
    def _x(self, p: np.ndarray) -> np.ndarray:
        return np.array([0.0, 0.0, 1.0])

    @override
    def killing_fields(self) -> list[VectorField]:
        """Generators (∂_t, rotation, boost along x, boost along y) of the isometry algebra."""

        def fibre(_p: np.ndarray) -> np.ndarray:
            return np.array([0.0, 0.0, 1.0])

        def rotation(p: np.ndarray) -> np.ndarray:
            return np.array([-p[1], p[0], 0.0])

        def boost_x(p: np.ndarray) -> np.ndarray:
            x, y = p[0], p[1]
            return np.array([1.0 - x * x + y * y, -2.0 * x * y, -2.0 * y])

        def boost_y(p: np.ndarray) -> np.ndarray:
            x, y = p[0], p[1]
            return np.array([-2.0 * x * y, 1.0 + x * x - y * y, 2.0 * x])

        return [fibre, rotation, boost_x, boost_y]

    @override
    def isotropy_representation(self) -> CircleRepresentation:
        # The rotation field fixes the origin and its flow is (x, y, t) ↦ (R_θ(x, y), t)
        def sampler(theta: float) -> np.ndarray:
            r = np.eye(3)
            r[:2, :2] = rotation2(theta)
            return r

        return CircleRepresentation(sampler=sampler)

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        radius = 0.5 * np.sqrt(rng.uniform())
        angle = rng.uniform(0.0, 2 * np.pi)
        return np.array([radius * np.cos(angle), radius * np.sin(angle), rng.uniform(-1.0, 1.0)])

    @override
    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return np.zeros(0)


# NilSO2
def heisenberg_product(n: np.ndarray, p: np.ndarray) -> np.ndarray:
    """(x, y, z)(x', y', z') = (x + x', y + y', z + z' + x y')."""
    return np.array([n[0] + p[0], n[1] + p[1], n[2] + p[2] + n[0] * p[1]])


def nil_rotation(theta: float, p: np.ndarray) -> np.ndarray:
    """The automorphism of the Heisenberg group lifting the counterclockwise rotation R_θ of (x, y).

    ρ_θ(x, y, z) = (R_θ(x, y), z + ½ s (c (x² - y²) - 2 s x y)) with c = cos θ, s = sin θ.
    """
    c, s = np.cos(theta), np.sin(theta)
    x, y, z = p
    return np.array([c * x - s * y, s * x + c * y, z + 0.5 * s * (c * (x * x - y * y) - 2.0 * s * x * y)])


@cache
def _nil_algebra() -> StructureConstants:
    e2 = e2_algebra()
    return central_extension(e2, TwoCocycle.from_pairs(e2, {(0, 1): 1.0}))


class HeisenbergRotations(EuclideanChartEntry):
    """NilSO2: the Heisenberg group with left translations and the rotations ρ_θ.

    Parameters (a, b, c, θ) act by p ↦ (a, b, c)·ρ_θ(p); μ = dx² + dy² + (dz - x dy)².
    """

    label = GeometryLabel(kind=GeometryKind.NIL_SO2)
    isotropy_dim = 1
    group_param_dim = 4
    flat_connection = False
    base_curvature_sign = 0
    has_group_law = True
    center_index = 0

    def __init__(self) -> None:
        self.structure_constants = _nil_algebra()

    def metric_at(self, p: np.ndarray) -> np.ndarray:
        x = p[0]
        return np.array([[1.0, 0.0, 0.0], [0.0, 1.0 + x * x, -x], [0.0, -x, 1.0]])

    def _act(self, g: np.ndarray, p: np.ndarray) -> np.ndarray:
        return heisenberg_product(g[:3], nil_rotation(g[3], p))

    def _compose(self, g: np.ndarray, h: np.ndarray) -> np.ndarray:
        return np.append(heisenberg_product(g[:3], nil_rotation(g[3], h[:3])), g[3] + h[3])

    @override
    def _x(self, p: np.ndarray) -> np.ndarray:
        return np.array([0.0, 0.0, 1.0])

    @override
    def _isotropy_params(self, theta: float) -> np.ndarray:
        return np.array([0.0, 0.0, 0.0, theta])

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-2.0, 2.0, size=3)

    def sample_group(self, rng: np.random.Generator) -> np.ndarray:
        return np.append(rng.uniform(-2.0, 2.0, size=3), rng.uniform(0.0, 2 * np.pi))
