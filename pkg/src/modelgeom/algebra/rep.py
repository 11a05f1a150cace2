"""Faithful SO(2) representations on R^3: the fixed line, its complement, and the commutant."""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from functools import cache

import numpy as np
from scipy.linalg import null_space
from scipy.stats import qmc

from modelgeom.constants import COMMUTANT_ANGLES, HALTON_ANGLES, REP_TOL
from modelgeom.core.exceptions import NotACircleRepError, NotFaithfulError

__all__ = [
    "CircleRepresentation",
    "IsotypicSplit",
    "commutant_basis",
    "decompose",
    "sample_angles",
    "symmetric_commutant_basis",
]

logger = logging.getLogger(__name__)


@cache
def sample_angles(count: int = HALTON_ANGLES) -> tuple[float, ...]:
    """First ``count`` nonzero points of the base-2 Halton sequence scaled to [0, 2π)."""
    points = qmc.Halton(d=1, scramble=False).random(count + 1)[1:, 0]
    return tuple(float(2 * np.pi * x) for x in points)


@dataclass(frozen=True)
class CircleRepresentation:
    """A representation θ ↦ R(θ) of SO(2) on R^3 given by an angle sampler.

    The sampler must be stateless: it may be evaluated concurrently.
    """

    sampler: Callable[[float], np.ndarray]
    faithful: bool = True

    def __call__(self, theta: float) -> np.ndarray:
        matrix = np.asarray(self.sampler(theta), dtype=float)
        if matrix.shape != (3, 3):
            raise NotACircleRepError(f"sampler returned shape {matrix.shape}, expected (3, 3)")
        return matrix

    def homomorphism_residual(self, angles: tuple[float, ...] | None = None) -> float:
        """Max of ‖R(0) - I‖, ‖R(a + b) - R(a)R(b)‖ and |det R - 1| over sampled angles."""
        angles = angles or sample_angles()
        residual = float(np.max(np.abs(self(0.0) - np.eye(3))))
        for a, b in zip(angles, angles[1:], strict=False):
            residual = max(residual, float(np.max(np.abs(self(a + b) - self(a) @ self(b)))))
        for a in angles:
            residual = max(residual, abs(float(np.linalg.det(self(a))) - 1.0))
        return residual

    def conjugated(self, q: np.ndarray) -> "CircleRepresentation":
        """θ ↦ Q R(θ) Qᵀ."""
        q = np.asarray(q, dtype=float)
        return CircleRepresentation(sampler=lambda theta: q @ self(theta) @ q.T, faithful=self.faithful)


@dataclass(frozen=True)
class IsotypicSplit:
    """V = L ⊕ W: ``line`` spans the fixed line, the rows of ``plane`` span its orthogonal complement."""

    line: np.ndarray
    plane: np.ndarray

    @property
    def basis(self) -> np.ndarray:
        """Columns (line, plane[0], plane[1]) as an orthogonal matrix."""
        return np.column_stack([self.line, self.plane[0], self.plane[1]])

    def off_diagonal_norm(self, f: np.ndarray) -> float:
        """Norm of the L-W and W-L blocks of ``f`` written in the split basis."""
        block = self.basis.T @ f @ self.basis
        return float(np.linalg.norm(block[0, 1:]) + np.linalg.norm(block[1:, 0]))


def _fix_sign(v: np.ndarray) -> np.ndarray:
    return v if v[int(np.argmax(np.abs(v)))] > 0 else -v


def decompose(rep: CircleRepresentation) -> IsotypicSplit:
    """Split R^3 into the fixed line L and the invariant plane W = L^⊥.

    L is read off at the sampled angle maximizing ‖R(θ) - I‖ and then checked for invariance on all
    sampled angles.

    Raises:
        NotFaithfulError: If every sample is the identity.
        NotACircleRepError: If no sample has a one-dimensional fixed space or the split is not invariant.
    """
    angles = sample_angles()
    samples = {theta: rep(theta) for theta in angles}
    distances = {theta: float(np.linalg.norm(r - np.eye(3))) for theta, r in samples.items()}
    if not rep.faithful or max(distances.values()) <= REP_TOL:
        raise NotFaithfulError("representation is trivial on every sampled angle")

    line: np.ndarray | None = None
    for theta in sorted(angles, key=lambda t: -distances[t]):
        fixed = null_space(samples[theta] - np.eye(3), rcond=1e-8)
        if fixed.shape[1] == 1:
            line = _fix_sign(fixed[:, 0])
            logger.debug("fixed line read at theta=%.6f (distance %.3e)", theta, distances[theta])
            break
    if line is None:
        raise NotACircleRepError("no sampled angle has a one-dimensional fixed space")

    plane = null_space(line[None, :]).T
    split = IsotypicSplit(line=line, plane=plane)
    for theta, r in samples.items():
        if np.linalg.norm(r @ line - line) > REP_TOL or np.linalg.norm(line @ r @ plane.T) > REP_TOL:
            raise NotACircleRepError(f"split is not invariant at theta={theta:.6f}")
    return split


def _commutation_system(rep: CircleRepresentation) -> np.ndarray:
    # Row-major vec: vec(f R - R f) = (I ⊗ Rᵀ - R ⊗ I) vec(f)
    blocks = []
    for theta in sample_angles(COMMUTANT_ANGLES):
        r = rep(theta)
        blocks.append(np.kron(np.eye(3), r.T) - np.kron(r, np.eye(3)))
    return np.vstack(blocks)


def commutant_basis(rep: CircleRepresentation) -> list[np.ndarray]:
    """Basis (P_L, I_W, J_W) of the endomorphisms commuting with every sampled R(θ).

    P_L projects onto the fixed line, I_W is the identity on W and J_W the rotation generator on W,
    all written in the original coordinates. The commutation system is solved at 8 sampled angles
    and must have a three-dimensional solution space containing these matrices.
    """
    split = decompose(rep)
    system = _commutation_system(rep)
    solutions = null_space(system, rcond=1e-8)
    if solutions.shape[1] != 3:
        raise NotACircleRepError(f"commutant has dimension {solutions.shape[1]}, expected 3")

    w1, w2 = split.plane
    canonical = [
        np.outer(split.line, split.line),
        np.outer(w1, w1) + np.outer(w2, w2),
        np.outer(w2, w1) - np.outer(w1, w2),
    ]
    for f in canonical:
        vec = f.reshape(9)
        outside = vec - solutions @ (solutions.T @ vec)
        if np.linalg.norm(outside) > REP_TOL:
            raise NotACircleRepError("canonical commutant element does not commute with the representation")
    return canonical


def symmetric_commutant_basis(rep: CircleRepresentation) -> list[np.ndarray]:
    """The symmetric part of the commutant: span(P_L, I_W)."""
    return commutant_basis(rep)[:2]
