"""Finite-difference tensor calculus on chart metrics.

Conventions:

- Christoffel symbols are stored as ``Γ[k, i, j]`` = Γ^k_ij.
- R(X, Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z; ``Riem[l, k, i, j]`` = R^l_kij with R(∂_i, ∂_j)∂_k = R^l_kij ∂_l.
- dω(Y, Z) = Y·ω(Z) - Z·ω(Y) - ω([Y, Z]); in coordinates (dω)_ij = ∂_i ω_j - ∂_j ω_i.
"""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import ArrayLike

from modelgeom.algebra.rep import IsotypicSplit
from modelgeom.constants import FD_STEP, FD_STEP_CURVATURE
from modelgeom.core.exceptions import (
    ChartDomainError,
    DependentVectorsError,
    DimensionMismatchError,
    GeodesicDomainError,
    InvalidStepError,
    SingularMetricError,
    UnsupportedCaseError,
    UnsupportedOperationError,
)
from modelgeom.core.models import StructureConstants, scaled_tolerance
from modelgeom.geometry.charts import ChartMetric, VectorField, as_point

if TYPE_CHECKING:
    from modelgeom.geometry.catalog.base import GeometrySpec

__all__ = [
    "HorizontalCurvature",
    "christoffel",
    "connection_curvature",
    "connection_curvature_algebraic",
    "connection_form",
    "curvature_symmetry_residual",
    "divergence",
    "exterior_derivative_of_dual",
    "geodesic_integrate",
    "geodesic_residual",
    "geodesic_speeds",
    "horizontal_curvature",
    "killing_residual",
    "lie_derivative_metric",
    "lie_derivative_split",
    "riemann",
    "sectional_curvature",
    "structure_constants_from_fields",
    "vector_field_bracket",
]

logger = logging.getLogger(__name__)


def _check_step(h: float) -> None:
    if not h > 0:
        raise InvalidStepError(f"finite-difference step must be positive, got {h}")


def _central_jacobian(f: VectorField, p: np.ndarray, h: float) -> np.ndarray:
    """J[m, ...] = ∂_m f(p) by central differences."""
    _check_step(h)
    columns = []
    for m in range(p.shape[0]):
        step = np.zeros_like(p)
        step[m] = h
        columns.append((np.asarray(f(p + step)) - np.asarray(f(p - step))) / (2 * h))
    return np.array(columns)


def _checked_metric(metric: ChartMetric, p: np.ndarray) -> np.ndarray:
    g = metric(p)
    eigenvalues = np.linalg.eigvalsh(g)
    if eigenvalues[0] <= 1e-14 * max(1.0, float(eigenvalues[-1])):
        raise SingularMetricError(f"metric is singular or indefinite at {p.tolist()} (eigenvalues {eigenvalues.tolist()})")
    return g


def christoffel(metric: ChartMetric, p: ArrayLike, h: float = FD_STEP) -> np.ndarray:
    """Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il - ∂_l g_ij) with central differences of step ``h``.

    Raises:
        InvalidStepError: If ``h <= 0``.
        SingularMetricError: If the metric at ``p`` is not positive definite.
    """
    _check_step(h)
    point = as_point(p)
    g_inv = np.linalg.inv(_checked_metric(metric, point))
    dg = _central_jacobian(metric, point, h)  # dg[m, i, j] = ∂_m g_ij
    lowered = dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)  # [i, j, l]
    gamma = 0.5 * np.einsum("kl,ijl->kij", g_inv, lowered)
    return 0.5 * (gamma + gamma.transpose(0, 2, 1))


def riemann(metric: ChartMetric, p: ArrayLike, h: float = FD_STEP_CURVATURE) -> np.ndarray:
    """Riemann tensor ``Riem[l, k, i, j]`` = R^l_kij from differences of finite-difference Christoffels."""
    point = as_point(p)
    gamma = christoffel(metric, point, h)
    d_gamma = _central_jacobian(lambda q: christoffel(metric, q, h), point, h)  # [m, k, i, j]
    return (
        np.einsum("iljk->lkij", d_gamma)
        - np.einsum("jlik->lkij", d_gamma)
        + np.einsum("lim,mjk->lkij", gamma, gamma)
        - np.einsum("ljm,mik->lkij", gamma, gamma)
    )


def curvature_symmetry_residual(metric: ChartMetric, p: ArrayLike, h: float = FD_STEP_CURVATURE) -> float:
    """max |R_abcd - R_cdab| over max(1, max |R_abcd|), with R_abcd = g_al R^l_bcd.

    Pair symmetry holds exactly for a Levi-Civita connection, so this measures finite-difference noise.
    """
    point = as_point(p)
    lowered = np.einsum("al,lkij->akij", _checked_metric(metric, point), riemann(metric, point, h))
    scale = max(1.0, float(np.max(np.abs(lowered))))
    return float(np.max(np.abs(lowered - lowered.transpose(2, 3, 0, 1)))) / scale


def sectional_curvature(
    metric: ChartMetric, p: ArrayLike, u: ArrayLike, v: ArrayLike, h: float = FD_STEP_CURVATURE
) -> float:
    """K(u, v) = <R(u, v)v, u> / (|u|^2 |v|^2 - <u, v>^2).

    Raises:
        DependentVectorsError: If ``u`` and ``v`` do not span a plane.
    """
    point = as_point(p)
    u, v = as_point(u), as_point(v)
    g = _checked_metric(metric, point)
    uu, vv, uv = u @ g @ u, v @ g @ v, u @ g @ v
    area = uu * vv - uv**2
    if area <= 1e-12 * uu * vv:
        raise DependentVectorsError("u and v are linearly dependent")
    r_uvv = np.einsum("lkij,i,j,k->l", riemann(metric, point, h), u, v, v)
    return float(u @ g @ r_uvv / area)


def divergence(metric: ChartMetric, field: VectorField, p: ArrayLike, h: float = FD_STEP) -> float:
    """div X = (1/√det g) ∂_i(√det g X^i)."""
    point = as_point(p)
    volume = np.sqrt(np.linalg.det(_checked_metric(metric, point)))

    def density(q: np.ndarray) -> np.ndarray:
        return np.sqrt(np.linalg.det(metric(q))) * np.asarray(field(q), dtype=float)

    return float(np.trace(_central_jacobian(density, point, h)) / volume)


def lie_derivative_metric(metric: ChartMetric, field: VectorField, p: ArrayLike, h: float = FD_STEP) -> np.ndarray:
    """(L_X g)_ij = ∇_i X_j + ∇_j X_i."""
    point = as_point(p)
    gamma = christoffel(metric, point, h)
    x_low = metric(point) @ np.asarray(field(point), dtype=float)
    d_x_low = _central_jacobian(lambda q: metric(q) @ np.asarray(field(q), dtype=float), point, h)  # [i, j]
    nabla = d_x_low - np.einsum("kij,k->ij", gamma, x_low)
    return nabla + nabla.T


def killing_residual(metric: ChartMetric, field: VectorField, p: ArrayLike, h: float = FD_STEP) -> float:
    """‖∇_i X_j + ∇_j X_i‖_∞; zero iff X is a Killing field at ``p``."""
    return float(np.max(np.abs(lie_derivative_metric(metric, field, p, h))))


def lie_derivative_split(
    metric: ChartMetric, field: VectorField, p: ArrayLike, split: IsotypicSplit, h: float = FD_STEP
) -> tuple[float, float]:
    """Eigenvalues (λ₁ on L, λ₂ on W) of the endomorphism g⁻¹ L_X g for an isotropy-invariant split.

    For an invariant field λ₁ vanishes and div X = λ₂.
    """
    point = as_point(p)
    g = metric(point)
    lie = lie_derivative_metric(metric, field, point, h)
    line, w = split.line, split.plane[0]
    return float(line @ lie @ line / (line @ g @ line)), float(w @ lie @ w / (w @ g @ w))


def geodesic_residual(metric: ChartMetric, field: VectorField, p: ArrayLike, h: float = FD_STEP) -> float:
    """‖∇_X X‖_∞ at ``p``; zero when the integral curve of X through ``p`` is a geodesic."""
    point = as_point(p)
    x = np.asarray(field(point), dtype=float)
    d_x = _central_jacobian(field, point, h)  # [i, k] = ∂_i X^k
    accel = x @ d_x + np.einsum("kij,i,j->k", christoffel(metric, point, h), x, x)
    return float(np.max(np.abs(accel)))


def _integrate(
    metric: ChartMetric, p: ArrayLike, v: ArrayLike, time: float, steps: int
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    if steps < 1:
        raise InvalidStepError(f"geodesic integration needs at least one step, got {steps}")
    x, xdot = as_point(p), as_point(v)
    dt = time / steps
    points, velocities = [x.copy()], [xdot.copy()]

    def rhs(state_x: np.ndarray, state_v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if not metric.contains(state_x):
            raise ChartDomainError(point=state_x, reason="geodesic left the chart")
        return state_v, -np.einsum("kij,i,j->k", christoffel(metric, state_x), state_v, state_v)

    for step in range(steps):
        try:
            k1x, k1v = rhs(x, xdot)
            k2x, k2v = rhs(x + 0.5 * dt * k1x, xdot + 0.5 * dt * k1v)
            k3x, k3v = rhs(x + 0.5 * dt * k2x, xdot + 0.5 * dt * k2v)
            k4x, k4v = rhs(x + dt * k3x, xdot + dt * k3v)
        except ChartDomainError as exc:
            raise GeodesicDomainError(path=points, time=step * dt) from exc
        x = x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        xdot = xdot + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        if not metric.contains(x):
            raise GeodesicDomainError(path=points, time=(step + 1) * dt)
        points.append(x)
        velocities.append(xdot)
    return points, velocities


def geodesic_integrate(metric: ChartMetric, p: ArrayLike, v: ArrayLike, T: float, steps: int) -> list[np.ndarray]:  # noqa: N803
    """Fixed-step classical Runge-Kutta integration of ẍ^k + Γ^k_ij ẋ^i ẋ^j = 0.

    Returns:
        ``steps + 1`` chart points, starting at ``p``.

    Raises:
        InvalidStepError: If ``steps < 1``.
        GeodesicDomainError: If the path leaves the chart; ``path`` holds the points computed so far.
    """
    return _integrate(metric, p, v, T, steps)[0]


def geodesic_speeds(metric: ChartMetric, p: ArrayLike, v: ArrayLike, T: float, steps: int) -> np.ndarray:  # noqa: N803
    """‖ẋ‖_μ at every integration node."""
    points, velocities = _integrate(metric, p, v, T, steps)
    return np.array([np.sqrt(w @ metric(x) @ w) for x, w in zip(points, velocities, strict=True)])


def connection_form(metric: ChartMetric, field: VectorField) -> VectorField:
    """ω = μ(X, ·) / μ(X, X), so ω(X) = 1."""

    def omega(q: np.ndarray) -> np.ndarray:
        x = np.asarray(field(q), dtype=float)
        x_low = metric(q) @ x
        return x_low / (x_low @ x)

    return omega


def exterior_derivative_of_dual(metric: ChartMetric, field: VectorField, p: ArrayLike, h: float = FD_STEP) -> np.ndarray:
    """(dω)_ij = ∂_i ω_j - ∂_j ω_i for the normalized metric dual ω of ``field``."""
    d_omega = _central_jacobian(connection_form(metric, field), as_point(p), h)
    return d_omega - d_omega.T


def connection_curvature(entry: "GeometrySpec", p: ArrayLike, h: float = FD_STEP) -> np.ndarray:
    """dω at ``p`` in the entry's local chart centred at ``p``.

    Raises:
        UnsupportedOperationError: If the entry is not axially symmetric.
    """
    if entry.isotropy_dim != 1:
        raise UnsupportedOperationError(f"connection curvature needs isotropy dimension 1, got {entry.isotropy_dim}")
    chart = entry.local_chart(p)
    return exterior_derivative_of_dual(chart.metric, entry.chart_field(p), np.zeros(3), h)


def connection_curvature_algebraic(sc: StructureConstants, center_index: int) -> np.ndarray:
    """dω(e_i, e_j) = -ω([e_i, e_j]) for ω dual to the central e_{center_index}, on the complementary basis.

    Raises:
        UnsupportedCaseError: If e_{center_index} is not central.
    """
    if not 0 <= center_index < sc.dim:
        raise DimensionMismatchError(f"center index {center_index} out of range for dimension {sc.dim}")
    if np.max(np.abs(sc.c[center_index])) > scaled_tolerance(sc.c):
        raise UnsupportedCaseError(f"e_{center_index} is not central")
    keep = [k for k in range(sc.dim) if k != center_index]
    return -sc.c[np.ix_(keep, keep, [center_index])][:, :, 0]


def vector_field_bracket(x: VectorField, y: VectorField, p: ArrayLike, h: float = FD_STEP) -> np.ndarray:
    """[X, Y](p) = DY·X - DX·Y."""
    point = as_point(p)
    d_x = _central_jacobian(x, point, h)  # [i, k] = ∂_i X^k
    d_y = _central_jacobian(y, point, h)
    return np.asarray(x(point)) @ d_y - np.asarray(y(point)) @ d_x


def structure_constants_from_fields(
    fields: list[VectorField], points: list[np.ndarray], h: float = FD_STEP, tol: float = 1e-6
) -> StructureConstants:
    """Structure constants of the span of ``fields`` under the vector-field bracket.

    Each bracket is solved for in the span by least squares over all sample points.

    Raises:
        UnsupportedCaseError: If a bracket leaves the span (residual above ``tol``).
    """
    n = len(fields)
    basis = np.vstack([np.column_stack([np.asarray(f(q), dtype=float) for f in fields]) for q in points])
    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            rhs = np.concatenate([vector_field_bracket(fields[i], fields[j], q, h) for q in points])
            coeffs, *_ = np.linalg.lstsq(basis, rhs, rcond=None)
            residual = float(np.max(np.abs(basis @ coeffs - rhs)))
            if residual > tol:
                raise UnsupportedCaseError(f"bracket [{i}, {j}] leaves the span (residual {residual:.3e})")
            coeffs[np.abs(coeffs) < tol] = 0.0
            c[i, j], c[j, i] = coeffs, -coeffs
    return StructureConstants(dim=n, c=c)


@dataclass(frozen=True)
class HorizontalCurvature:
    """Curvatures of the plane orthogonal to X at a point (orthonormal horizontal pair u, v).

    Attributes:
        ambient: Sectional curvature of M on the horizontal plane.
        leaf: Intrinsic curvature of the leaf through the point (Gauss equation; meaningful when dω = 0).
        base: Curvature of the base of the Riemannian submersion along X (O'Neill; meaningful when X is Killing).
        x_norm_sq: μ(X, X).
        d_omega: dω(u, v).
    """

    ambient: float
    leaf: float
    base: float
    x_norm_sq: float
    d_omega: float


def _horizontal_pair(g: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """μ-orthonormal u, v spanning the μ-orthogonal complement of x."""
    candidates = [e for e in np.eye(3)]
    basis: list[np.ndarray] = [x / np.sqrt(x @ g @ x)]
    for e in sorted(candidates, key=lambda e: abs(e @ g @ basis[0])):
        w = e - sum((e @ g @ b) * b for b in basis)
        norm = np.sqrt(w @ g @ w)
        if norm > 1e-6:
            basis.append(w / norm)
        if len(basis) == 3:
            break
    return basis[1], basis[2]


def horizontal_curvature(metric: ChartMetric, field: VectorField, p: ArrayLike) -> HorizontalCurvature:
    """Ambient, leaf and base curvature of the horizontal plane ker ω at ``p``."""
    point = as_point(p)
    g = _checked_metric(metric, point)
    x = np.asarray(field(point), dtype=float)
    u, v = _horizontal_pair(g, x)
    ambient = sectional_curvature(metric, point, u, v)

    # Second fundamental form of the leaf with respect to n = X/|X|
    def unit_normal(q: np.ndarray) -> np.ndarray:
        xq = np.asarray(field(q), dtype=float)
        return xq / np.sqrt(xq @ metric(q) @ xq)

    gamma = christoffel(metric, point)
    n = unit_normal(point)
    d_n = _central_jacobian(unit_normal, point, FD_STEP)  # [i, k]
    nabla_n = d_n + np.einsum("kij,j->ik", gamma, n)  # row i: ∇_{∂_i} n

    def second_form(a: np.ndarray, b: np.ndarray) -> float:
        return float(-(a @ nabla_n) @ g @ b)

    leaf = ambient + second_form(u, u) * second_form(v, v) - 0.5 * (second_form(u, v) + second_form(v, u)) ** 2
    d_omega = float(u @ exterior_derivative_of_dual(metric, field, point) @ v)
    x_norm_sq = float(x @ g @ x)
    base = ambient + 0.75 * d_omega**2 * x_norm_sq
    logger.debug("horizontal curvature: ambient %.6g leaf %.6g base %.6g dω %.6g", ambient, leaf, base, d_omega)
    return HorizontalCurvature(ambient=ambient, leaf=leaf, base=base, x_norm_sq=x_norm_sq, d_omega=d_omega)
