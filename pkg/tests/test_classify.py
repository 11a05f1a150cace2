"""Tests for the classification decision tree."""

import numpy as np
import pytest

from modelgeom.core.classify import classify_geometry, decision_trace
from modelgeom.core.exceptions import InconclusiveError, MissingInputError, UnsupportedCaseError
from modelgeom.core.models import AlgebraKind, GeometryKind, GeometryLabel, StructureConstants, Tolerances
from modelgeom.geometry.catalog import GeometrySpecFile, UserGeometry, get_entry

CATALOG = ["E3", "S3_SO4", "H3", "S2xR", "H2xR", "E2xR", "E2SemiR", "S3_U2", "SLTilde", "NilSO2"]


@pytest.mark.parametrize("label", CATALOG)
def test_catalog_round_trip(label: str) -> None:
    assert classify_geometry(get_entry(label)) == GeometryLabel(kind=GeometryKind(label))


class TestModifiedSpecs:
    """Scaling, κ and conjugation never change the label."""

    @pytest.mark.parametrize(
        ("payload", "expected"),
        [
            ({"catalog": "E2xR", "metric_scale": 3.0}, GeometryKind.E2XR),
            ({"catalog": "E2SemiR", "kappa": 2.0}, GeometryKind.E2_SEMI_R),
            ({"catalog": "E2SemiR", "kappa": -0.5, "metric_scale": 2.0}, GeometryKind.E2_SEMI_R),
            ({"catalog": "S3_U2", "conjugate_seed": 4}, GeometryKind.S3_U2),
            ({"catalog": "NilSO2", "conjugate_seed": 9}, GeometryKind.NIL_SO2),
            ({"catalog": "H2xR", "metric_scale": 0.25}, GeometryKind.H2XR),
            ({"catalog": "S2xR", "metric_scale": 5.0, "conjugate_seed": 1}, GeometryKind.S2XR),
            ({"catalog": "H3", "metric_scale": 7.0}, GeometryKind.H3),
            ({"catalog": "S3_SO4", "conjugate_seed": 2}, GeometryKind.S3_SO4),
        ],
        ids=[
            "scaled-product",
            "kappa-2",
            "kappa-negative-scaled",
            "conjugated-hopf",
            "conjugated-nil",
            "scaled-h2xr",
            "scaled-conjugated-s2xr",
            "scaled-h3",
            "conjugated-s3",
        ],
    )
    def test_label_is_preserved(self, payload: dict, expected: GeometryKind) -> None:
        entry = GeometrySpecFile.model_validate(payload).build()
        assert classify_geometry(entry).kind is expected


class TestLieGroups:
    @pytest.mark.parametrize(
        ("fixture", "kind"),
        [("so3", AlgebraKind.SO3), ("sl2", AlgebraKind.SL2R), ("heisenberg", AlgebraKind.HEISENBERG)],
    )
    def test_label_carries_the_algebra(self, fixture: str, kind: AlgebraKind, request: pytest.FixtureRequest) -> None:
        sc: StructureConstants = request.getfixturevalue(fixture)
        label = classify_geometry(GeometrySpecFile(isotropy_dim=0, structure_constants=sc).build())
        assert label.kind is GeometryKind.LIE_GROUP
        assert label.algebra is not None
        assert label.algebra.kind is kind

    def test_trace_reports_the_bianchi_type(self, so3: StructureConstants) -> None:
        trace = decision_trace(UserGeometry(isotropy_dim=0, structure_constants=so3))
        assert [step.branch for step in trace.steps] == ["Lie group", "IX"]
        assert str(trace.label) == "LieGroup(SO3)"

    def test_missing_structure_constants(self) -> None:
        with pytest.raises(MissingInputError):
            classify_geometry(UserGeometry(isotropy_dim=0))


class TestTraces:
    def test_isotropic(self) -> None:
        trace = decision_trace(get_entry("H3"))
        assert [step.branch for step in trace.steps] == ["isotropic", "negative"]
        assert trace.steps[1].value < 0

    def test_warped(self) -> None:
        trace = decision_trace(get_entry("E2SemiR"))
        assert [step.branch for step in trace.steps] == ["axially symmetric", "flat", "zero", "warped"]
        assert trace.steps[-1].value == pytest.approx(1.0, abs=1e-6)

    def test_hopf_uses_the_quotient_algebra(self) -> None:
        trace = decision_trace(get_entry("S3_U2"))
        assert trace.steps[1].branch == "non-flat"
        assert trace.steps[-1].question == "quotient algebra by the center"
        assert trace.steps[-1].branch == "SO3"

    def test_trace_serializes(self) -> None:
        data = decision_trace(get_entry("S2xR")).model_dump(mode="json")
        assert data["label"]["kind"] == "S2xR"
        assert data["steps"][0]["question"] == "isotropy dimension"


class TestUserSpecs:
    """Axial user geometries without structure constants fall back to the base curvature."""

    def test_nil_metric(self) -> None:
        nil = get_entry("NilSO2")
        entry = UserGeometry(isotropy_dim=1, metric=nil.metric_at, x_field=lambda _p: np.array([0.0, 0.0, 1.0]))
        trace = decision_trace(entry)
        assert trace.steps[-1].question == "normalized base curvature"
        assert trace.label.kind is GeometryKind.NIL_SO2

    def test_universal_cover_metric(self) -> None:
        sl = get_entry("SLTilde")
        entry = UserGeometry(
            isotropy_dim=1,
            metric=sl.metric_at,
            x_field=lambda _p: np.array([0.0, 0.0, 1.0]),
            domain=lambda p: bool(p[:2] @ p[:2] < 1.0),
        )
        assert classify_geometry(entry).kind is GeometryKind.SL_TILDE

    def test_missing_field(self) -> None:
        with pytest.raises(MissingInputError):
            classify_geometry(UserGeometry(isotropy_dim=1))

    def test_unsupported_isotropy(self) -> None:
        with pytest.raises(UnsupportedCaseError):
            UserGeometry(isotropy_dim=2)


def test_inconclusive_gap() -> None:
    tolerances = Tolerances(zero_threshold=1e-3, nonzero_threshold=100.0)
    with pytest.raises(InconclusiveError) as exc_info:
        classify_geometry(get_entry("H3"), tolerances)
    assert exc_info.value.quantity == "normalized sectional curvature"


def test_small_kappa_falls_in_the_divergence_gap() -> None:
    """div X = κ, so 1e-4 <= |κ| <= 0.1 is neither product nor warped under the default thresholds."""
    entry = GeometrySpecFile.model_validate({"catalog": "E2SemiR", "kappa": 0.05}).build()
    with pytest.raises(InconclusiveError) as exc_info:
        classify_geometry(entry)
    assert exc_info.value.quantity == "divergence of X"
    assert exc_info.value.value == pytest.approx(0.05, abs=1e-5)
    resolved = classify_geometry(entry, Tolerances(nonzero_threshold=0.01))
    assert resolved.kind is GeometryKind.E2_SEMI_R
