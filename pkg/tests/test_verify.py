"""Tests for batch verification."""

import logging
from typing import Self

import numpy as np
import pytest

from modelgeom.core.models import CheckResult, Report, Tolerances
from modelgeom.core.verify import VerifyConfig, draw_sample, sample_checks, verify_entry
from modelgeom.geometry.catalog import GeometrySpecFile, WarpedEuclidean, get_entry
from modelgeom.utils.logging import VerificationLoggerBase

CATALOG = ["E3", "S3_SO4", "H3", "S2xR", "H2xR", "E2xR", "E2SemiR", "S3_U2", "SLTilde", "NilSO2"]


class RecordingLogger(VerificationLoggerBase):
    """Collects hook calls instead of printing them."""

    def __init__(self) -> None:
        self.started: list[str] = []
        self.finished: list[CheckResult] = []
        self.messages: list[tuple[int, str]] = []
        self.entered = self.exited = False

    def __enter__(self) -> Self:
        self.entered = True
        return self

    def __exit__(self, exc_type: type[BaseException] | None, exc_val: BaseException | None, exc_tb: object) -> None:
        self.exited = True

    def check_started(self, quantity: str) -> None:
        self.started.append(quantity)

    def check_finished(self, result: CheckResult) -> None:
        self.finished.append(result)

    def debug(self, message: str, *args: object) -> None:
        self.messages.append((logging.DEBUG, message % args if args else message))

    def info(self, message: str, *args: object) -> None:
        self.messages.append((logging.INFO, message % args if args else message))

    def warning(self, message: str, *args: object) -> None:
        self.messages.append((logging.WARNING, message % args if args else message))

    def error(self, message: str, *args: object) -> None:
        self.messages.append((logging.ERROR, message % args if args else message))


def _checks(report: Report) -> dict[str, CheckResult]:
    return {c.quantity: c for c in report.results["checks"]}


@pytest.mark.parametrize("label", CATALOG)
async def test_catalog_entries_pass(label: str) -> None:
    report = await verify_entry(get_entry(label), VerifyConfig(samples=6, seed=3))
    failed = [c.quantity for c in report.results["checks"] if not c.passed]
    assert failed == []
    assert report.passed
    assert report.command == "verify"
    assert report.seed == 3


class TestCheckSelection:
    def test_isotropic_checks(self) -> None:
        names = [c.quantity for c in sample_checks(get_entry("H3"), Tolerances())]
        assert names == ["metric symmetric positive definite", "pullback invariance", "constant sectional curvature"]

    def test_universal_cover_uses_killing_generators(self) -> None:
        names = [c.quantity for c in sample_checks(get_entry("SLTilde"), Tolerances())]
        assert "Killing generators" in names
        assert "pullback invariance" not in names
        assert "connection curvature (non-flat)" in names

    def test_warped_checks(self) -> None:
        names = [c.quantity for c in sample_checks(WarpedEuclidean(2.0), Tolerances())]
        assert "kappa normalization" in names
        assert "composition law" in names
        assert "connection curvature (flat)" in names

    def test_product_has_no_normalization(self) -> None:
        names = [c.quantity for c in sample_checks(get_entry("E2xR"), Tolerances())]
        assert "kappa normalization" not in names


class TestDeterminism:
    def test_draws_depend_only_on_seed_and_index(self) -> None:
        entry = get_entry("NilSO2")
        first, again = draw_sample(entry, 5, 2), draw_sample(entry, 5, 2)
        assert np.array_equal(first.point, again.point)
        assert np.array_equal(first.g, again.g)
        assert not np.array_equal(first.point, draw_sample(entry, 5, 3).point)

    async def test_reports_repeat_across_worker_counts(self) -> None:
        entry = get_entry("H2xR")
        one = await verify_entry(entry, VerifyConfig(samples=5, seed=11, max_workers=1, geodesic_steps=200))
        many = await verify_entry(entry, VerifyConfig(samples=5, seed=11, max_workers=4, geodesic_steps=200))
        assert one.model_dump(mode="json") == many.model_dump(mode="json")


class TestReports:
    async def test_hooks_are_called(self) -> None:
        recorder = RecordingLogger()
        report = await verify_entry(get_entry("E2SemiR"), VerifyConfig(samples=3, geodesic_steps=200), recorder)
        assert recorder.entered
        assert recorder.exited
        assert recorder.entry == "E2SemiR"
        assert recorder.samples == 3
        assert [r.quantity for r in recorder.finished] == [c.quantity for c in report.results["checks"]]
        assert set(recorder.started) == {r.quantity for r in recorder.finished}

    async def test_divergence_value_is_kappa(self) -> None:
        report = await verify_entry(WarpedEuclidean(2.0), VerifyConfig(samples=4, geodesic_steps=200))
        divergence = _checks(report)["divergence of X"]
        assert divergence.value == pytest.approx(2.0, abs=1e-5)

    async def test_conjugated_spec_passes(self) -> None:
        entry = GeometrySpecFile.model_validate({"catalog": "S3_U2", "conjugate_seed": 1}).build()
        report = await verify_entry(entry, VerifyConfig(samples=4, geodesic_steps=200))
        checks = _checks(report)
        assert checks["pullback invariance"].passed
        assert checks["X equivariance"].passed

    async def test_tight_tolerance_fails(self) -> None:
        tolerances = Tolerances(invariance=1e-30)
        recorder = RecordingLogger()
        report = await verify_entry(
            get_entry("S3_SO4"), VerifyConfig(samples=3, geodesic_steps=200, tolerances=tolerances), recorder
        )
        assert not report.passed
        assert not _checks(report)["pullback invariance"].passed

    async def test_report_serializes_pass_alias(self) -> None:
        report = await verify_entry(get_entry("E3"), VerifyConfig(samples=2, geodesic_steps=100))
        data = report.model_dump(mode="json", by_alias=True)
        assert data["pass"] is True
        assert all("pass" in check for check in data["results"]["checks"])
        assert data["tolerances"]["invariance"] == Tolerances().invariance
