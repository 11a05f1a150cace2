"""Batch verification of a geometry's invariant structure.

Every per-sample check is evaluated on the same draws: sample ``i`` takes a point p and group
elements g, h from ``default_rng([seed, i])``, so reports do not depend on thread scheduling.
Samples run in worker threads bounded by a capacity limiter; the numerical kernels are plain numpy.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from functools import partial

import anyio
import numpy as np
from anyio import CapacityLimiter, to_thread
from pydantic import BaseModel, ConfigDict, Field

from modelgeom.algebra.lie import classify_algebra, quotient_by_center
from modelgeom.algebra.rep import commutant_basis, decompose
from modelgeom.constants import DEFAULT_MAX_WORKERS, DEFAULT_SAMPLES, DEFAULT_SEED, GEODESIC_STEPS
from modelgeom.core.classify import classify_geometry
from modelgeom.core.exceptions import ModelGeomError, UnsupportedOperationError
from modelgeom.core.models import CheckResult, Report, Tolerances
from modelgeom.geometry.catalog import CatalogEntry, WarpedEuclidean, kappa_normalization
from modelgeom.geometry.charts import VectorField
from modelgeom.geometry.diffgeo import (
    connection_curvature,
    divergence,
    geodesic_residual,
    geodesic_speeds,
    killing_residual,
    lie_derivative_split,
    sectional_curvature,
    structure_constants_from_fields,
)
from modelgeom.utils.logging import VerificationLogger, VerificationLoggerBase

__all__ = ["SampleCheck", "VerifyConfig", "draw_sample", "sample_checks", "verify_entry"]

# Killing fields are "clearly not Killing" above this residual
_NON_KILLING_FLOOR = 1e-2
_FIELD_ALGEBRA_POINTS = 4


class VerifyConfig(BaseModel):
    """Sampling and tolerance settings of a verification run."""

    model_config = ConfigDict(frozen=True)

    samples: int = Field(default=DEFAULT_SAMPLES, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    max_workers: int = Field(default=DEFAULT_MAX_WORKERS, ge=1)
    geodesic_steps: int = Field(default=GEODESIC_STEPS, ge=1)
    tolerances: Tolerances = Field(default_factory=Tolerances)


@dataclass(frozen=True)
class Sample:
    index: int
    point: np.ndarray
    g: np.ndarray
    h: np.ndarray


def draw_sample(entry: CatalogEntry, seed: int, index: int) -> Sample:
    """The ``index``-th draw of a run seeded with ``seed``; independent of every other index."""
    rng = np.random.default_rng([seed, index])
    point = entry.sample_point(rng)
    return Sample(index=index, point=point, g=entry.sample_group(rng), h=entry.sample_group(rng))


type Measure = Callable[[CatalogEntry, Sample], float]
type Judge = Callable[[np.ndarray, float], tuple[float, bool, float | None]]


def _judge_max(values: np.ndarray, tolerance: float) -> tuple[float, bool, float | None]:
    residual = float(np.max(values))
    return residual, residual <= tolerance, None


def _judge_spread(values: np.ndarray, tolerance: float) -> tuple[float, bool, float | None]:
    spread = float(np.max(values) - np.min(values))
    return spread, spread <= tolerance, float(np.mean(values))


def _judge_relative_spread(values: np.ndarray, tolerance: float) -> tuple[float, bool, float | None]:
    mean = float(np.mean(values))
    spread = float(np.max(values) - np.min(values)) / abs(mean)
    return spread, spread <= tolerance, mean


def _judge_target(target: float) -> Judge:
    def judge(values: np.ndarray, tolerance: float) -> tuple[float, bool, float | None]:
        residual = float(np.max(np.abs(values - target)))
        return residual, residual <= tolerance, float(np.mean(values))

    return judge


def _judge_floor(values: np.ndarray, floor: float) -> tuple[float, bool, float | None]:
    """Passes when every value exceeds ``floor``; the residual is the shortfall of the smallest one."""
    low = float(np.min(values))
    return max(0.0, floor - low), low > floor, low


@dataclass(frozen=True)
class SampleCheck:
    """A quantity measured on every sample and judged over the batch."""

    quantity: str
    tolerance: float
    measure: Measure
    judge: Judge = _judge_max


# Per-sample measures
def _metric_defect(entry: CatalogEntry, s: Sample) -> float:
    """Asymmetry of the raw chart metric, plus 1 when it is not positive definite."""
    chart = entry.local_chart(s.point)
    raw = np.asarray(chart.metric.eval(np.zeros(3)), dtype=float)
    asym = float(np.max(np.abs(raw - raw.T)))
    return asym + (0.0 if chart.metric.is_positive_definite(np.zeros(3)) else 1.0)


def _invariance(entry: CatalogEntry, s: Sample) -> float:
    return entry.pullback_residual(s.g, s.point)


def _composition(entry: CatalogEntry, s: Sample) -> float:
    lhs = entry.action(s.g, entry.action(s.h, s.point))
    rhs = entry.action(entry.compose(s.g, s.h), s.point)
    return float(np.max(np.abs(lhs - rhs)))


def _killing_generators(fields: list[VectorField], h: float) -> Measure:
    def measure(entry: CatalogEntry, s: Sample) -> float:
        chart = entry.local_chart(s.point)
        return max(killing_residual(chart.metric, chart.pull_field(f), np.zeros(3), h) for f in fields)

    return measure


def _x_length(entry: CatalogEntry, s: Sample) -> float:
    chart = entry.local_chart(s.point)
    x = entry.chart_field(s.point)(np.zeros(3))
    return float(np.sqrt(x @ chart.metric(np.zeros(3)) @ x))


def _x_equivariance(entry: CatalogEntry, s: Sample) -> float:
    """|Dg · X(p) - X(g·p)| in the charts centred at p and g·p."""
    origin = np.zeros(3)
    moved = entry.action(s.g, s.point)
    pushed = entry.differential(s.g, s.point) @ entry.chart_field(s.point)(origin)
    return float(np.max(np.abs(pushed - entry.chart_field(moved)(origin))))


def _divergence(h: float) -> Measure:
    def measure(entry: CatalogEntry, s: Sample) -> float:
        chart = entry.local_chart(s.point)
        return divergence(chart.metric, entry.chart_field(s.point), np.zeros(3), h)

    return measure


def _killing_iff_divergence_free(tolerances: Tolerances) -> Measure:
    """0 when "X is Killing" and "div X = 0" agree at the sample, 1 otherwise."""

    def measure(entry: CatalogEntry, s: Sample) -> float:
        chart = entry.local_chart(s.point)
        field = entry.chart_field(s.point)
        origin = np.zeros(3)
        div_free = abs(divergence(chart.metric, field, origin, tolerances.fd_step)) < tolerances.divergence
        residual = killing_residual(chart.metric, field, origin, tolerances.fd_step)
        if div_free:
            return 0.0 if residual < tolerances.killing else 1.0
        return 0.0 if residual > _NON_KILLING_FLOOR else 1.0

    return measure


def _flow_geodesic(entry: CatalogEntry, s: Sample) -> float:
    chart = entry.local_chart(s.point)
    return geodesic_residual(chart.metric, entry.chart_field(s.point), np.zeros(3))


def _d_omega(entry: CatalogEntry, s: Sample) -> float:
    return float(np.max(np.abs(connection_curvature(entry, s.point))))


def _interior_d_omega(entry: CatalogEntry, s: Sample) -> float:
    x = entry.chart_field(s.point)(np.zeros(3))
    return float(np.max(np.abs(connection_curvature(entry, s.point) @ x)))


def _sectional(entry: CatalogEntry, s: Sample) -> float:
    chart = entry.local_chart(s.point)
    basis = np.eye(3)
    return sectional_curvature(chart.metric, np.zeros(3), basis[0], basis[1])


def _kappa_residual(entry: CatalogEntry, s: Sample) -> float:
    assert entry.kappa is not None
    return kappa_normalization(entry.kappa).residual(s.g, s.point)


def _killing_fields(entry: CatalogEntry) -> list[VectorField] | None:
    try:
        return entry.killing_fields()
    except UnsupportedOperationError:
        return None


def sample_checks(entry: CatalogEntry, tolerances: Tolerances) -> list[SampleCheck]:
    """The per-sample checks that apply to ``entry``, in report order."""
    checks = [SampleCheck("metric symmetric positive definite", tolerances.absolute, _metric_defect)]
    fields = _killing_fields(entry)
    if entry.has_action:
        checks.append(SampleCheck("pullback invariance", tolerances.invariance, _invariance))
    elif fields is not None:
        checks.append(
            SampleCheck("Killing generators", tolerances.killing, _killing_generators(fields, tolerances.fd_step))
        )
    if entry.has_group_law:
        checks.append(SampleCheck("composition law", tolerances.composition, _composition))

    if entry.isotropy_dim == 3:
        checks.append(SampleCheck("constant sectional curvature", tolerances.zero_threshold, _sectional, _judge_spread))

    if entry.isotropy_dim == 1:
        checks.append(SampleCheck("X length spread", tolerances.length_spread, _x_length, _judge_relative_spread))
        if entry.has_action:
            checks.append(SampleCheck("X equivariance", tolerances.invariance, _x_equivariance))
        checks.append(
            SampleCheck("Killing iff divergence-free", 0.0, _killing_iff_divergence_free(tolerances))
        )
        checks.append(SampleCheck("flow-line geodesic residual", tolerances.geodesic_residual, _flow_geodesic))
        checks.append(SampleCheck("interior product i_X dω", tolerances.invariance, _interior_d_omega))
        if entry.flat_connection is not None:
            expected = entry.kappa or 0.0
            checks.append(
                SampleCheck(
                    "divergence of X", tolerances.divergence, _divergence(tolerances.fd_step), _judge_target(expected)
                )
            )
        if entry.flat_connection is True:
            checks.append(SampleCheck("connection curvature (flat)", tolerances.invariance, _d_omega))
        elif entry.flat_connection is False:
            checks.append(
                SampleCheck("connection curvature (non-flat)", tolerances.nonzero_threshold, _d_omega, _judge_floor)
            )

    if isinstance(entry, WarpedEuclidean) and entry.kappa not in (None, 0.0):
        checks.append(SampleCheck("kappa normalization", tolerances.composition, _kappa_residual))
    return checks


# Single-shot checks
def _isotropy_representation(entry: CatalogEntry) -> tuple[float, float | None]:
    """Homomorphism residual of the isotropy representation and alignment of X with its fixed line."""
    rep = entry.isotropy_representation()
    split = decompose(rep)
    commutant_basis(rep)
    x = entry.chart_field(entry.base_point)(np.zeros(3))
    x_hat = x / np.linalg.norm(x)
    alignment = float(min(np.linalg.norm(x_hat - split.line), np.linalg.norm(x_hat + split.line)))
    return max(rep.homomorphism_residual(), alignment), None


def _lie_derivative_split(entry: CatalogEntry, tolerances: Tolerances) -> tuple[float, float | None]:
    """λ₁ vanishes on the fixed line and λ₂ equals div X on the plane."""
    chart = entry.base_chart()
    field = entry.chart_field(entry.base_point)
    origin = np.zeros(3)
    split = decompose(entry.isotropy_representation())
    line_eigenvalue, plane_eigenvalue = lie_derivative_split(chart.metric, field, origin, split, tolerances.fd_step)
    div = divergence(chart.metric, field, origin, tolerances.fd_step)
    return max(abs(line_eigenvalue), abs(plane_eigenvalue - div)), plane_eigenvalue


def _round_trip(entry: CatalogEntry, tolerances: Tolerances) -> tuple[float, float | None]:
    return (0.0 if classify_geometry(entry, tolerances) == entry.label else 1.0), None


def _energy_drift(entry: CatalogEntry, config: VerifyConfig) -> tuple[float, float | None]:
    """Relative drift of the μ-speed along a unit-speed geodesic from the base point."""
    metric = entry.base_chart().metric
    origin = np.zeros(3)
    direction = np.array([1.0, 0.5, -0.25])
    direction /= np.sqrt(direction @ metric(origin) @ direction)
    speeds = geodesic_speeds(metric, origin, direction, 1.0, config.geodesic_steps)
    return float(np.max(np.abs(speeds - speeds[0])) / speeds[0]), float(speeds[-1])


def _field_algebra(entry: CatalogEntry, config: VerifyConfig) -> tuple[float, float | None]:
    """The bracket algebra of the Killing fields modulo its centre matches the declared one."""
    assert entry.structure_constants is not None and entry.center_index is not None
    fields = entry.killing_fields()
    points = [draw_sample(entry, config.seed, i).point for i in range(_FIELD_ALGEBRA_POINTS)]
    recovered = structure_constants_from_fields(fields, points, config.tolerances.fd_step)
    expected = classify_algebra(quotient_by_center(entry.structure_constants, entry.center_index))
    found = classify_algebra(quotient_by_center(recovered, entry.center_index))
    return (0.0 if found.same_class(expected) else 1.0), None


@dataclass(frozen=True)
class _SingleCheck:
    quantity: str
    tolerance: float
    run: Callable[[], tuple[float, float | None]]


def _single_checks(entry: CatalogEntry, config: VerifyConfig) -> list[_SingleCheck]:
    tolerances = config.tolerances
    checks: list[_SingleCheck] = []
    if entry.isotropy_dim == 1:
        checks.append(
            _SingleCheck("isotropy representation", tolerances.rep, partial(_isotropy_representation, entry))
        )
        checks.append(
            _SingleCheck("Lie derivative split", tolerances.divergence, partial(_lie_derivative_split, entry, tolerances))
        )
    if entry.label is not None:
        checks.append(_SingleCheck("classification round trip", 0.0, partial(_round_trip, entry, tolerances)))
    checks.append(_SingleCheck("geodesic energy drift", tolerances.energy_drift, partial(_energy_drift, entry, config)))
    if (
        _killing_fields(entry) is not None
        and entry.structure_constants is not None
        and entry.center_index is not None
    ):
        checks.append(_SingleCheck("Killing field algebra", 0.0, partial(_field_algebra, entry, config)))
    return checks


def _measure_sample(
    entry: CatalogEntry, checks: list[SampleCheck], seed: int, index: int
) -> tuple[list[float | None], list[str]]:
    sample = draw_sample(entry, seed, index)
    values: list[float | None] = []
    errors: list[str] = []
    for check in checks:
        try:
            values.append(float(check.measure(entry, sample)))
        except ModelGeomError as exc:
            values.append(None)
            errors.append(f"{check.quantity} failed on sample {index}: {exc}")
    return values, errors


def _run_single(entry: CatalogEntry, check: _SingleCheck) -> tuple[CheckResult, str | None]:
    try:
        residual, value = check.run()
    except ModelGeomError as exc:
        failed = CheckResult(
            entry=entry.name, quantity=check.quantity, samples=1, max_residual=1.0, tolerance=check.tolerance, passed=False
        )
        return failed, f"{check.quantity} failed: {exc}"
    result = CheckResult(
        entry=entry.name,
        quantity=check.quantity,
        samples=1,
        max_residual=residual,
        tolerance=check.tolerance,
        passed=residual <= check.tolerance,
        value=value,
    )
    return result, None


def _aggregate(entry: CatalogEntry, check: SampleCheck, column: list[float | None]) -> CheckResult:
    measured = np.array([v for v in column if v is not None], dtype=float)
    if measured.size == 0:
        return CheckResult(
            entry=entry.name, quantity=check.quantity, samples=0, max_residual=1.0, tolerance=check.tolerance, passed=False
        )
    residual, passed, value = check.judge(measured, check.tolerance)
    return CheckResult(
        entry=entry.name,
        quantity=check.quantity,
        samples=int(measured.size),
        max_residual=residual,
        tolerance=check.tolerance,
        passed=passed and measured.size == len(column),
        value=value,
    )


async def verify_entry(
    entry: CatalogEntry,
    config: VerifyConfig | None = None,
    logger: VerificationLoggerBase | None = None,
) -> Report:
    """Run every applicable check on ``config.samples`` draws and the single-shot checks once.

    Checks that raise a library error are reported as failed rather than propagated.

    Args:
        entry: The geometry to verify.
        config: Sample count, seed, worker limit and tolerances.
        logger: Progress reporter. If None, creates a quiet ``VerificationLogger`` internally.
    """
    config = config or VerifyConfig()
    logger = logger if logger is not None else VerificationLogger(show_spinner=False, level=logging.WARNING)
    checks = sample_checks(entry, config.tolerances)
    singles = _single_checks(entry, config)
    limiter = CapacityLimiter(config.max_workers)

    logger.entry = entry.name
    logger.samples = config.samples
    with logger:
        for check in [*checks, *singles]:
            logger.check_started(check.quantity)

        rows: list[list[float | None]] = [[] for _ in range(config.samples)]
        single_results: list[CheckResult | None] = [None] * len(singles)

        async def run_sample(index: int) -> None:
            values, errors = await to_thread.run_sync(
                _measure_sample, entry, checks, config.seed, index, limiter=limiter
            )
            rows[index] = values
            for message in errors:
                logger.error(message)

        async def run_single(position: int) -> None:
            result, error = await to_thread.run_sync(_run_single, entry, singles[position], limiter=limiter)
            single_results[position] = result
            if error is not None:
                logger.error(error)

        async with anyio.create_task_group() as tg:
            for index in range(config.samples):
                tg.start_soon(run_sample, index)
            for position in range(len(singles)):
                tg.start_soon(run_single, position)

        results: list[CheckResult] = []
        for column, check in enumerate(checks):
            result = _aggregate(entry, check, [row[column] for row in rows])
            logger.check_finished(result)
            results.append(result)
        for result in single_results:
            assert result is not None
            logger.check_finished(result)
            results.append(result)

    logger.debug("%d checks over %d samples", len(results), config.samples)
    return Report(
        command="verify",
        inputs={"entry": entry.name, "samples": config.samples, "seed": config.seed},
        results={"entry": entry.name, "checks": results},
        passed=all(r.passed for r in results),
        tolerances=config.tolerances.model_dump(),
        seed=config.seed,
    )
