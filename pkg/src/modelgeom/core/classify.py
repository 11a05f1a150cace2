"""The classification decision tree: isotropy dimension, then flat or non-flat connection, then the base.

Every measured decision quantity is invariant under scaling the metric by a constant: sectional
curvatures are multiplied by det(μ)^{1/3} (isotropic case) or by |X|² (axial case), while dω of the
normalized dual form and div X do not depend on the scale at all.
"""

import logging

import numpy as np

from modelgeom.algebra.lie import classify_algebra, quotient_by_center
from modelgeom.core.exceptions import InconclusiveError, MissingInputError, UnsupportedCaseError
from modelgeom.core.models import (
    AlgebraKind,
    DecisionTrace,
    GeometryKind,
    GeometryLabel,
    SolvableForm,
    Tolerances,
    TraceStep,
)
from modelgeom.geometry.catalog import CatalogEntry
from modelgeom.geometry.diffgeo import connection_curvature, divergence, horizontal_curvature, sectional_curvature

__all__ = ["classify_geometry", "decision_trace"]

logger = logging.getLogger(__name__)

_PLANES = ((0, 1), (0, 2), (1, 2))


def _sign(quantity: str, value: float, tolerances: Tolerances) -> int:
    """-1, 0 or +1 for values outside the inconclusive gap between the two thresholds."""
    if abs(value) < tolerances.zero_threshold:
        return 0
    if abs(value) > tolerances.nonzero_threshold:
        return 1 if value > 0 else -1
    raise InconclusiveError(
        quantity=quantity,
        value=value,
        zero_threshold=tolerances.zero_threshold,
        nonzero_threshold=tolerances.nonzero_threshold,
    )


_SIGN_BRANCH = {-1: "negative", 0: "zero", 1: "positive"}


class _TreeWalk:
    """Accumulates trace steps while walking the decision tree for one spec."""

    def __init__(self, spec: CatalogEntry, tolerances: Tolerances) -> None:
        self.spec = spec
        self.tolerances = tolerances
        self.steps: list[TraceStep] = []

    def record(self, question: str, value: float | int | str | None, branch: str) -> None:
        logger.debug("%s: %s -> %s", question, value, branch)
        self.steps.append(TraceStep(question=question, value=value, branch=branch))

    def run(self) -> GeometryLabel:
        isotropy = self.spec.isotropy_dim
        match isotropy:
            case 3:
                self.record("isotropy dimension", 3, "isotropic")
                return self._isotropic()
            case 1:
                self.record("isotropy dimension", 1, "axially symmetric")
                return self._axial()
            case 0:
                self.record("isotropy dimension", 0, "Lie group")
                return self._lie_group()
        raise UnsupportedCaseError(f"isotropy dimension must be 0, 1 or 3, got {isotropy}")

    def _isotropic(self) -> GeometryLabel:
        metric = self.spec.base_chart().metric
        origin = np.zeros(3)
        scale = float(np.linalg.det(metric(origin))) ** (1.0 / 3.0)
        basis = np.eye(3)
        curvatures = [scale * sectional_curvature(metric, origin, basis[i], basis[j]) for i, j in _PLANES]
        spread = max(curvatures) - min(curvatures)
        if spread > self.tolerances.zero_threshold * max(1.0, max(abs(k) for k in curvatures)):
            raise InconclusiveError(
                quantity="sectional curvature spread across coordinate planes",
                value=spread,
                zero_threshold=self.tolerances.zero_threshold,
                nonzero_threshold=self.tolerances.nonzero_threshold,
            )
        curvature = float(np.mean(curvatures))
        sign = _sign("normalized sectional curvature", curvature, self.tolerances)
        self.record("normalized sectional curvature", curvature, _SIGN_BRANCH[sign])
        kind = {0: GeometryKind.E3, 1: GeometryKind.S3_SO4, -1: GeometryKind.H3}[sign]
        return GeometryLabel(kind=kind)

    def _axial(self) -> GeometryLabel:
        spec = self.spec
        base = spec.base_point
        spec.x_field(base)  # a missing field fails here, before any numerics
        chart = spec.base_chart()
        field = spec.chart_field(base)
        origin = np.zeros(3)

        d_omega = float(np.max(np.abs(connection_curvature(spec, base, self.tolerances.fd_step))))
        flat = _sign("connection curvature |dω|", d_omega, self.tolerances) == 0
        self.record("connection curvature |dω|", d_omega, "flat" if flat else "non-flat")

        if flat:
            curvature = horizontal_curvature(chart.metric, field, origin)
            leaf = curvature.leaf * curvature.x_norm_sq
            sign = _sign("normalized leaf curvature", leaf, self.tolerances)
            self.record("normalized leaf curvature", leaf, _SIGN_BRANCH[sign])
            if sign > 0:
                return GeometryLabel(kind=GeometryKind.S2XR)
            if sign < 0:
                return GeometryLabel(kind=GeometryKind.H2XR)
            div = divergence(chart.metric, field, origin, self.tolerances.fd_step)
            warped = _sign("divergence of X", div, self.tolerances) != 0
            self.record("divergence of X", div, "warped" if warped else "product")
            return GeometryLabel(kind=GeometryKind.E2_SEMI_R if warped else GeometryKind.E2XR)

        if spec.structure_constants is not None and spec.center_index is not None:
            quotient = classify_algebra(quotient_by_center(spec.structure_constants, spec.center_index))
            self.record("quotient algebra by the center", str(quotient), quotient.kind.value)
            if quotient.kind is AlgebraKind.SO3:
                return GeometryLabel(kind=GeometryKind.S3_U2)
            if quotient.kind is AlgebraKind.SL2R:
                return GeometryLabel(kind=GeometryKind.SL_TILDE)
            if quotient.form is SolvableForm.COMPLEX and quotient.param is not None and abs(quotient.param) < 1e-6:
                return GeometryLabel(kind=GeometryKind.NIL_SO2)
            raise UnsupportedCaseError(f"quotient algebra {quotient} is not the algebra of an isotropic surface")

        curvature = horizontal_curvature(chart.metric, field, origin)
        base_curvature = curvature.base * curvature.x_norm_sq
        sign = _sign("normalized base curvature", base_curvature, self.tolerances)
        self.record("normalized base curvature", base_curvature, _SIGN_BRANCH[sign])
        kind = {1: GeometryKind.S3_U2, -1: GeometryKind.SL_TILDE, 0: GeometryKind.NIL_SO2}[sign]
        return GeometryLabel(kind=kind)

    def _lie_group(self) -> GeometryLabel:
        sc = self.spec.structure_constants
        if sc is None:
            raise MissingInputError("isotropy dimension 0 requires the structure constants of the group")
        algebra = classify_algebra(sc)
        self.record("Lie algebra class", str(algebra), algebra.bianchi_type)
        return GeometryLabel(kind=GeometryKind.LIE_GROUP, algebra=algebra)


def decision_trace(spec: CatalogEntry, tolerances: Tolerances | None = None) -> DecisionTrace:
    """Walk the decision tree, recording every question, measured value and branch.

    Raises:
        InconclusiveError: If a decision quantity falls between the zero and nonzero thresholds.
        MissingInputError: If X (isotropy 1) or the structure constants (isotropy 0) are missing.
    """
    walk = _TreeWalk(spec, tolerances or Tolerances())
    label = walk.run()
    logger.info("%s classified as %s", spec.name, label)
    return DecisionTrace(steps=walk.steps, label=label)


def classify_geometry(spec: CatalogEntry, tolerances: Tolerances | None = None) -> GeometryLabel:
    """The label of ``spec`` among the final list of geometries."""
    return decision_trace(spec, tolerances).label
