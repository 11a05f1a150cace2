"""Lie algebras from structure constants and the derived-algebra classification in dimension 3."""

import logging

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import null_space

from modelgeom.constants import ABS_TOL, RANK_RTOL
from modelgeom.core.exceptions import DimensionMismatchError, NotALieAlgebraError, UnsupportedCaseError
from modelgeom.core.models import AlgebraClass, AlgebraKind, SolvableForm, StructureConstants, scaled_tolerance

__all__ = [
    "ad_matrices",
    "bracket",
    "center",
    "classify_algebra",
    "derived_algebra",
    "is_unimodular",
    "isomorphic",
    "jacobi_residual",
    "jacobi_tolerance",
    "killing_form",
    "quotient_by_center",
    "require_lie_algebra",
]

logger = logging.getLogger(__name__)


def _as_vector(sc: StructureConstants, x: ArrayLike, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape != (sc.dim,):
        raise DimensionMismatchError(f"{name} must have length {sc.dim}, got shape {arr.shape}")
    return arr


def bracket(sc: StructureConstants, x: ArrayLike, y: ArrayLike) -> np.ndarray:
    """Evaluate [x, y] = sum_ij x_i y_j c[i][j][.]."""
    return np.einsum("i,j,ijk->k", _as_vector(sc, x, "x"), _as_vector(sc, y, "y"), sc.c)


def ad_matrices(sc: StructureConstants) -> np.ndarray:
    """Stack of ad_{e_i} matrices; ``ad[i][k][j]`` is the e_k coefficient of [e_i, e_j]."""
    return sc.c.transpose(0, 2, 1)


def jacobi_residual(sc: StructureConstants) -> float:
    """Max over basis triples of the infinity norm of the cyclic Jacobi sum."""
    c = sc.c
    cyclic = (
        np.einsum("jkm,iml->ijkl", c, c) + np.einsum("kim,jml->ijkl", c, c) + np.einsum("ijm,kml->ijkl", c, c)
    )
    return float(np.max(np.abs(cyclic)))


def jacobi_tolerance(sc: StructureConstants) -> float:
    # Jacobi sums are quadratic in the constants
    scale = float(np.max(np.abs(sc.c)))
    return ABS_TOL * max(1.0, scale**2)


def require_lie_algebra(sc: StructureConstants) -> None:
    """Raise NotALieAlgebraError unless the Jacobi identity holds within tolerance."""
    residual = jacobi_residual(sc)
    tolerance = jacobi_tolerance(sc)
    if residual > tolerance:
        raise NotALieAlgebraError(residual=residual, tolerance=tolerance)


def _rank_cutoff(singular_values: np.ndarray, c: np.ndarray) -> float:
    top = float(singular_values[0]) if singular_values.size else 0.0
    return max(RANK_RTOL * top, scaled_tolerance(c))


def derived_algebra(sc: StructureConstants) -> tuple[int, list[np.ndarray]]:
    """Dimension and an orthonormal basis of span{[e_i, e_j]}."""
    brackets = sc.c.reshape(sc.dim * sc.dim, sc.dim)
    _, s, vt = np.linalg.svd(brackets)
    rank = int(np.sum(s > _rank_cutoff(s, sc.c)))
    return rank, [vt[k].copy() for k in range(rank)]


def center(sc: StructureConstants) -> np.ndarray:
    """Orthonormal basis of the center as the columns of an n x m matrix."""
    n = sc.dim
    # Row (j, k), column i: e_k coefficient of [e_i, e_j]
    system = sc.c.transpose(1, 2, 0).reshape(n * n, n)
    return null_space(system, rcond=RANK_RTOL)


def is_unimodular(sc: StructureConstants) -> bool:
    """True iff trace(ad_{e_i}) = 0 for every basis vector."""
    traces = np.einsum("ijj->i", sc.c)
    return bool(np.all(np.abs(traces) <= scaled_tolerance(sc.c)))


def killing_form(sc: StructureConstants) -> np.ndarray:
    """K_ij = trace(ad_{e_i} ad_{e_j})."""
    ad = ad_matrices(sc)
    return np.einsum("iab,jba->ij", ad, ad)


def _solvable_form(a: np.ndarray) -> tuple[SolvableForm, float]:
    """Canonical form of an invertible 2x2 matrix up to conjugation and nonzero scaling."""
    scale = float(np.linalg.norm(a))
    half_trace = 0.5 * float(np.trace(a))
    det = float(np.linalg.det(a))
    disc = half_trace**2 - det
    disc_tol = 1e-9 * scale**2

    if disc > disc_tol:
        root = np.sqrt(disc)
        lam1, lam2 = half_trace + root, half_trace - root
        large = lam1 if abs(lam1) >= abs(lam2) else lam2
        # det / large avoids cancellation in the smaller eigenvalue
        return SolvableForm.REAL_DIAG, det / large / large
    if disc < -disc_tol:
        return SolvableForm.COMPLEX, abs(half_trace) / np.sqrt(-disc)

    nilpotent_part = a - half_trace * np.eye(2)
    if np.linalg.norm(nilpotent_part) <= 1e-6 * scale:
        return SolvableForm.REAL_DIAG, 1.0
    return SolvableForm.JORDAN, 1.0


def classify_algebra(sc: StructureConstants) -> AlgebraClass:
    """Classify a 3-dimensional Lie algebra by the dimension of its derived algebra.

    Args:
        sc: Structure constants of a 3-dimensional Lie algebra.

    Returns:
        The isomorphism class. For ``Solvable2`` the canonical form of ad_{e3} on g' is normalized
        by its eigenvalue of largest modulus.

    Raises:
        DimensionMismatchError: If ``sc.dim != 3``.
        NotALieAlgebraError: If the Jacobi identity fails.
    """
    if sc.dim != 3:
        raise DimensionMismatchError(f"classification is implemented for dimension 3 only, got {sc.dim}")
    require_lie_algebra(sc)

    derived_dim, basis = derived_algebra(sc)
    unimodular = is_unimodular(sc)
    tol = scaled_tolerance(sc.c)
    logger.debug("derived algebra has dimension %d (unimodular=%s)", derived_dim, unimodular)

    match derived_dim:
        case 0:
            return AlgebraClass(kind=AlgebraKind.ABELIAN, unimodular=True, derived_dim=0)
        case 1:
            u = basis[0]
            central = all(np.linalg.norm(bracket(sc, u, e)) <= tol for e in np.eye(3))
            kind = AlgebraKind.HEISENBERG if central else AlgebraKind.H2XR
            return AlgebraClass(kind=kind, unimodular=unimodular, derived_dim=1)
        case 2:
            u1, u2 = basis
            e3 = np.cross(u1, u2)
            restricted = np.array([[u_a @ bracket(sc, e3, u_b) for u_b in (u1, u2)] for u_a in (u1, u2)])
            form, param = _solvable_form(restricted)
            logger.debug("ad_e3 on g' = %s -> %s(%g)", restricted.tolist(), form, param)
            return AlgebraClass(
                kind=AlgebraKind.SOLVABLE2, form=form, param=float(param), unimodular=unimodular, derived_dim=2
            )
        case 3:
            eigenvalues = np.linalg.eigvalsh(killing_form(sc))
            kind = AlgebraKind.SO3 if np.all(eigenvalues < 0) else AlgebraKind.SL2R
            return AlgebraClass(kind=kind, unimodular=True, derived_dim=3)
    raise UnsupportedCaseError(f"unexpected derived dimension {derived_dim}")


def isomorphic(a: StructureConstants, b: StructureConstants) -> bool:
    """True iff both 3-dimensional algebras fall in the same class (Solvable2 parameters within 1e-6)."""
    return classify_algebra(a).same_class(classify_algebra(b))


def quotient_by_center(sc: StructureConstants, center_index: int) -> StructureConstants:
    """Quotient by the central basis vector ``e_{center_index}``: drop that index everywhere."""
    n = sc.dim
    if not 0 <= center_index < n:
        raise DimensionMismatchError(f"center index {center_index} out of range for dimension {n}")
    if np.max(np.abs(sc.c[center_index])) > scaled_tolerance(sc.c):
        raise UnsupportedCaseError(f"e_{center_index} is not central")
    keep = [k for k in range(n) if k != center_index]
    return StructureConstants(dim=n - 1, c=sc.c[np.ix_(keep, keep, keep)])
