"""Chevalley-Eilenberg cochains with trivial real coefficients, H^2 and central extensions.

Cochain bases are canonical: C^1 is indexed by basis vectors, C^2 by pairs i < j and C^3 by
triples i < j < k, all in lexicographic order.
"""

import itertools
import logging

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import null_space

from modelgeom.algebra.lie import jacobi_residual, jacobi_tolerance, require_lie_algebra
from modelgeom.constants import ABS_TOL, RANK_RTOL
from modelgeom.core.exceptions import (
    CocycleViolationError,
    DimensionMismatchError,
    UnsupportedCaseError,
    UnsupportedDegreeError,
)
from modelgeom.core.models import CohomologyResult, StructureConstants, TwoCocycle, scaled_tolerance

__all__ = [
    "ce_differential",
    "central_extension",
    "coboundary",
    "cochain_pairs",
    "cocycle_residual",
    "extension_scaling",
    "h2",
    "weakly_isomorphic",
]

logger = logging.getLogger(__name__)


def cochain_pairs(dim: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(dim), 2))


def _cochain_triples(dim: int) -> list[tuple[int, int, int]]:
    return list(itertools.combinations(range(dim), 3))


def _pair_matrix(dim: int, values: np.ndarray) -> np.ndarray:
    """Antisymmetric matrix from coordinates in the pair basis."""
    m = np.zeros((dim, dim))
    for value, (i, j) in zip(values, cochain_pairs(dim), strict=True):
        m[i, j] = value
        m[j, i] = -value
    return m


def _pair_vector(matrix: np.ndarray) -> np.ndarray:
    return np.array([matrix[i, j] for i, j in cochain_pairs(matrix.shape[0])])


def _d2_tensor(c: np.ndarray, w: np.ndarray) -> np.ndarray:
    """(dω)(e_i, e_j, e_k) = -ω([e_i,e_j],e_k) - ω([e_j,e_k],e_i) - ω([e_k,e_i],e_j) for all i, j, k."""
    bracket_then_pair = np.einsum("ijm,mk->ijk", c, w)  # ω([e_i, e_j], e_k)
    return -(bracket_then_pair + bracket_then_pair.transpose(1, 2, 0) + bracket_then_pair.transpose(2, 0, 1))


def cocycle_residual(sc: StructureConstants, matrix: ArrayLike) -> float:
    """Max |dω| over basis triples; zero iff ω is closed."""
    w = np.asarray(matrix, dtype=float)
    if w.shape != (sc.dim, sc.dim):
        raise DimensionMismatchError(f"cocycle matrix must be {sc.dim}x{sc.dim}, got {w.shape}")
    return float(np.max(np.abs(_d2_tensor(sc.c, w))))


def _cocycle_tolerance(sc: StructureConstants, w: np.ndarray) -> float:
    return scaled_tolerance(sc.c) * max(1.0, float(np.max(np.abs(w))))


def ce_differential(sc: StructureConstants, degree: int) -> np.ndarray:
    """Matrix of d: C^degree -> C^(degree+1) between the canonical cochain bases.

    Degree 1: (dφ)(x, y) = -φ([x, y]). Degree 2: (dω)(x, y, z) = -ω([x,y],z) - ω([y,z],x) - ω([z,x],y).
    """
    n = sc.dim
    if degree == 1:
        return np.array([-sc.c[i, j] for i, j in cochain_pairs(n)]).reshape(len(cochain_pairs(n)), n)
    if degree == 2:
        pairs, triples = cochain_pairs(n), _cochain_triples(n)
        d2 = np.zeros((len(triples), len(pairs)))
        for col in range(len(pairs)):
            unit = np.zeros(len(pairs))
            unit[col] = 1.0
            tensor = _d2_tensor(sc.c, _pair_matrix(n, unit))
            d2[:, col] = [tensor[i, j, k] for i, j, k in triples]
        return d2
    raise UnsupportedDegreeError(degree)


def _orthonormal_range(matrix: np.ndarray, cutoff: float) -> np.ndarray:
    if matrix.size == 0:
        return np.zeros((matrix.shape[0], 0))
    u, s, _ = np.linalg.svd(matrix, full_matrices=False)
    return u[:, s > cutoff]


def _row_reduce(rows: np.ndarray, tol: float) -> np.ndarray:
    """Reduced row echelon form; leading entries are +1."""
    r = rows.copy()
    pivot_row = 0
    for col in range(r.shape[1]):
        if pivot_row == r.shape[0]:
            break
        best = pivot_row + int(np.argmax(np.abs(r[pivot_row:, col])))
        if abs(r[best, col]) <= tol:
            continue
        r[[pivot_row, best]] = r[[best, pivot_row]]
        r[pivot_row] /= r[pivot_row, col]
        for other in range(r.shape[0]):
            if other != pivot_row:
                r[other] -= r[other, col] * r[pivot_row]
        pivot_row += 1
    r[np.abs(r) <= tol] = 0.0
    return r


class _Cohomology:
    """Kernel/image data of d1 and d2 shared by h2 and the class tests."""

    def __init__(self, sc: StructureConstants) -> None:
        require_lie_algebra(sc)
        self.sc = sc
        d1 = ce_differential(sc, 1)
        d2 = ce_differential(sc, 2)
        m = d1.shape[0]
        cutoff = scaled_tolerance(sc.c)
        self.boundaries = _orthonormal_range(d1, cutoff)
        self.cycles = np.eye(m) if d2.shape[0] == 0 else null_space(d2, rcond=RANK_RTOL)
        projector = np.eye(m) - self.boundaries @ self.boundaries.T
        self.complement = _orthonormal_range(projector @ self.cycles, cutoff)

    @property
    def betti2(self) -> int:
        return self.cycles.shape[1] - self.boundaries.shape[1]

    def class_vector(self, matrix: np.ndarray) -> np.ndarray:
        """Coordinates of [ω] along the complement of the coboundaries."""
        return self.complement.T @ _pair_vector(matrix)


def h2(sc: StructureConstants) -> CohomologyResult:
    """Second cohomology H^2(g; R) with canonical representatives.

    Representatives span the cocycles modulo coboundaries; they are brought to reduced row echelon
    form in the pair basis, so the first nonzero entry of every representative matrix is +1.

    Raises:
        UnsupportedCaseError: For algebras above dimension 4.
    """
    if sc.dim > 4:
        raise UnsupportedCaseError(f"h2 is implemented up to dimension 4, got {sc.dim}")
    data = _Cohomology(sc)
    betti2 = data.betti2
    representatives: list[TwoCocycle] = []
    if betti2 > 0:
        rows = _row_reduce(data.complement.T, tol=ABS_TOL)
        representatives = [TwoCocycle(base=sc, matrix=_pair_matrix(sc.dim, row)) for row in rows[:betti2]]
    logger.debug(
        "h2: cocycles %d, coboundaries %d, betti2 %d", data.cycles.shape[1], data.boundaries.shape[1], betti2
    )
    return CohomologyResult(
        betti2=betti2,
        representatives=representatives,
        coboundary_rank=data.boundaries.shape[1],
        cocycle_rank=data.cycles.shape[1],
    )


def coboundary(sc: StructureConstants, phi: ArrayLike) -> TwoCocycle:
    """The exact cocycle dφ for a 1-cochain φ."""
    vec = np.asarray(phi, dtype=float)
    if vec.shape != (sc.dim,):
        raise DimensionMismatchError(f"1-cochain must have length {sc.dim}, got shape {vec.shape}")
    return TwoCocycle(base=sc, matrix=_pair_matrix(sc.dim, ce_differential(sc, 1) @ vec))


def _check_cocycle(sc: StructureConstants, omega: TwoCocycle) -> None:
    if omega.base.dim != sc.dim or not np.allclose(omega.base.c, sc.c, rtol=0.0, atol=scaled_tolerance(sc.c)):
        raise DimensionMismatchError("cocycle is defined over a different algebra")
    residual = cocycle_residual(sc, omega.matrix)
    tolerance = _cocycle_tolerance(sc, omega.matrix)
    if residual > tolerance:
        raise CocycleViolationError(residual=residual, tolerance=tolerance)


def central_extension(sc: StructureConstants, omega: TwoCocycle) -> StructureConstants:
    """Central extension R x_ω g on the basis (e_0, e_1, ..., e_n).

    [e_0, .] = 0 and [e_i, e_j] = [e_i, e_j]_g + ω(e_i, e_j) e_0, with the old basis shifted by one.
    """
    _check_cocycle(sc, omega)
    n = sc.dim
    if n + 1 > 6:
        raise UnsupportedCaseError(f"extension of a {n}-dimensional algebra exceeds the supported dimension")
    c = np.zeros((n + 1, n + 1, n + 1))
    c[1:, 1:, 1:] = sc.c
    c[1:, 1:, 0] = omega.matrix
    extended = StructureConstants(dim=n + 1, c=c)
    residual = jacobi_residual(extended)
    logger.debug("central extension built; Jacobi residual %.3e", residual)
    if residual > jacobi_tolerance(extended) * max(1.0, float(np.max(np.abs(omega.matrix)))):
        raise CocycleViolationError(residual=residual, tolerance=jacobi_tolerance(extended))
    return extended


def weakly_isomorphic(sc: StructureConstants, a: TwoCocycle, b: TwoCocycle) -> bool:
    """Whether the extensions by ``a`` and ``b`` are weakly isomorphic.

    Both classes zero, or both nonzero when H^2 is one-dimensional (center scaling identifies them).

    Raises:
        UnsupportedCaseError: If betti2 > 1.
        CocycleViolationError: If either form is not closed.
    """
    if sc.dim != 3:
        raise DimensionMismatchError(f"weak isomorphism is implemented for dimension 3 only, got {sc.dim}")
    _check_cocycle(sc, a)
    _check_cocycle(sc, b)
    data = _Cohomology(sc)
    if data.betti2 > 1:
        raise UnsupportedCaseError(f"weak isomorphism needs betti2 <= 1, got {data.betti2}")
    tol = scaled_tolerance(sc.c) * 10
    a_zero = bool(np.linalg.norm(data.class_vector(a.matrix)) <= tol * max(1.0, float(np.max(np.abs(a.matrix)))))
    b_zero = bool(np.linalg.norm(data.class_vector(b.matrix)) <= tol * max(1.0, float(np.max(np.abs(b.matrix)))))
    return a_zero == b_zero


def extension_scaling(sc: StructureConstants, a: TwoCocycle, b: TwoCocycle) -> float:
    """The factor λ with [a] = λ[b] when betti2 = 1 and [b] is nonzero.

    Rescaling the center e_0 by λ turns the extension by ``b`` into the extension by ``a``.
    """
    _check_cocycle(sc, a)
    _check_cocycle(sc, b)
    data = _Cohomology(sc)
    if data.betti2 != 1:
        raise UnsupportedCaseError(f"extension scaling needs betti2 = 1, got {data.betti2}")
    va, vb = data.class_vector(a.matrix), data.class_vector(b.matrix)
    if np.linalg.norm(vb) <= scaled_tolerance(sc.c):
        raise UnsupportedCaseError("reference class is zero")
    return float(va @ vb / (vb @ vb))
