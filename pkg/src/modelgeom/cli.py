"""Command-line interface.

Every verb prints one JSON report on standard output and returns an exit code: 0 when all contained
checks pass, 2 when a check fails, 1 for usage errors, malformed input or library errors (with a
one-line diagnostic on standard error). Vectors are comma separated; write negative leading values as
``--point=-1,0,0``.
"""

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass
from functools import partial
from itertools import combinations
from pathlib import Path
from typing import Any, NoReturn, override

import anyio
import numpy as np

from modelgeom import schemas
from modelgeom.algebra.cohomology import central_extension, h2
from modelgeom.algebra.lie import classify_algebra
from modelgeom.algebra.rep import commutant_basis, decompose
from modelgeom.constants import DEFAULT_SAMPLES, DEFAULT_SEED, GEODESIC_STEPS
from modelgeom.core.classify import decision_trace
from modelgeom.core.exceptions import ModelGeomError
from modelgeom.core.models import CheckResult, Report, StructureConstants, Tolerances, TwoCocycle
from modelgeom.core.verify import VerifyConfig, verify_entry
from modelgeom.geometry.catalog import GeometrySpecFile, get_entry, list_geometries
from modelgeom.geometry.diffgeo import (
    curvature_symmetry_residual,
    geodesic_integrate,
    geodesic_speeds,
    horizontal_curvature,
    sectional_curvature,
)
from modelgeom.utils.logging import VerificationLogger, configure_logging, console

__all__ = ["EXIT_ERROR", "EXIT_FAIL", "EXIT_PASS", "build_parser", "main", "run"]

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2


@dataclass(frozen=True)
class Outcome:
    """What a verb produced: the schema its results follow, the echoed inputs and the verdict."""

    schema: str
    inputs: dict[str, Any]
    results: Any
    passed: bool = True
    seed: int | None = None


type Handler = Callable[[argparse.Namespace, Tolerances], Outcome]


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with code 1 instead of argparse's 2, which is reserved for failed checks."""

    @override
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _vector(text: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",")], dtype=float)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def _check(entry: str, quantity: str, residual: float, tolerance: float, value: float | None = None) -> CheckResult:
    return CheckResult(
        entry=entry,
        quantity=quantity,
        samples=1,
        max_residual=residual,
        tolerance=tolerance,
        passed=residual <= tolerance,
        value=value,
    )


def _dump_checks(checks: Sequence[CheckResult]) -> list[dict[str, Any]]:
    return [c.model_dump(mode="json", by_alias=True) for c in checks]


# Verbs
def _classify_algebra(args: argparse.Namespace, _tolerances: Tolerances) -> Outcome:
    sc = StructureConstants.from_json(_read(args.file))
    algebra = classify_algebra(sc)
    return Outcome(
        schema=schemas.ALGEBRA_CLASS,
        inputs={"file": str(args.file), "structure_constants": sc.model_dump(mode="json")},
        results={**algebra.model_dump(mode="json"), "bianchi_type": algebra.bianchi_type},
    )


def _classify(args: argparse.Namespace, tolerances: Tolerances) -> Outcome:
    spec = GeometrySpecFile.model_validate_json(_read(args.spec))
    trace = decision_trace(spec.build(), tolerances)
    algebra = trace.label.algebra
    return Outcome(
        schema=schemas.CLASSIFICATION,
        inputs={"spec": spec.model_dump(mode="json", exclude_none=True)},
        results={
            "label": str(trace.label),
            "algebra": algebra.model_dump(mode="json") if algebra is not None else None,
            "trace": [step.model_dump(mode="json") for step in trace.steps],
        },
    )


def _catalog_list(_args: argparse.Namespace, _tolerances: Tolerances) -> Outcome:
    return Outcome(schema=schemas.CATALOG_LIST, inputs={}, results={"geometries": [str(g) for g in list_geometries()]})


def _catalog_show(args: argparse.Namespace, _tolerances: Tolerances) -> Outcome:
    entry = get_entry(args.label)
    return Outcome(
        schema=schemas.CATALOG_DESCRIPTOR,
        inputs={"label": args.label},
        results=entry.descriptor().model_dump(mode="json"),
    )


def _verify(args: argparse.Namespace, tolerances: Tolerances) -> Outcome:
    entry = get_entry(args.label)
    config = VerifyConfig(samples=args.samples, seed=args.seed, tolerances=tolerances)
    progress = VerificationLogger(
        show_spinner=console.is_terminal, level=logging.INFO if args.verbose else logging.WARNING
    )
    report: Report = anyio.run(partial(verify_entry, entry, config, progress))
    return Outcome(
        schema=schemas.CHECKS,
        inputs=report.inputs,
        results={"entry": entry.name, "checks": _dump_checks(report.results["checks"])},
        passed=report.passed,
        seed=report.seed,
    )


def _cohomology(args: argparse.Namespace, _tolerances: Tolerances) -> Outcome:
    sc = StructureConstants.from_json(_read(args.file))
    return Outcome(
        schema=schemas.COHOMOLOGY,
        inputs={"file": str(args.file), "structure_constants": sc.model_dump(mode="json")},
        results=h2(sc).model_dump(mode="json"),
    )


def _extend(args: argparse.Namespace, _tolerances: Tolerances) -> Outcome:
    sc = StructureConstants.from_json(_read(args.file))
    omega = TwoCocycle.model_validate_json(_read(args.cocycle))
    return Outcome(
        schema=schemas.STRUCTURE_CONSTANTS,
        inputs={"file": str(args.file), "cocycle": omega.model_dump(mode="json")},
        results=central_extension(sc, omega).model_dump(mode="json"),
    )


def _curvature(args: argparse.Namespace, tolerances: Tolerances) -> Outcome:
    entry = get_entry(args.label)
    point = entry.check_point(args.point if args.point is not None else entry.base_point)
    chart = entry.local_chart(point)
    origin = np.zeros(3)
    residual = curvature_symmetry_residual(chart.metric, origin, tolerances.fd_step_curvature)
    basis = np.eye(3)
    checks = [
        _check(
            entry.name,
            f"sectional curvature e{i}^e{j}",
            residual,
            tolerances.zero_threshold,
            sectional_curvature(chart.metric, origin, basis[i], basis[j], tolerances.fd_step_curvature),
        )
        for i, j in combinations(range(3), 2)
    ]
    horizontal = None
    if entry.isotropy_dim == 1:
        horizontal = asdict(horizontal_curvature(chart.metric, entry.chart_field(point), origin))
    return Outcome(
        schema=schemas.CURVATURE,
        inputs={"label": args.label, "point": point.tolist()},
        results={"entry": entry.name, "point": point.tolist(), "checks": _dump_checks(checks), "horizontal": horizontal},
        passed=all(c.passed for c in checks),
    )


def _geodesic(args: argparse.Namespace, tolerances: Tolerances) -> Outcome:
    entry = get_entry(args.label)
    point = entry.check_point(args.point if args.point is not None else entry.base_point)
    chart = entry.local_chart(point)
    origin = np.zeros(3)
    path = geodesic_integrate(chart.metric, origin, args.dir, args.time, args.steps)
    speeds = geodesic_speeds(chart.metric, origin, args.dir, args.time, args.steps)
    drift = float(np.max(np.abs(speeds - speeds[0])) / speeds[0])
    checks = [_check(entry.name, "geodesic energy drift", drift, tolerances.energy_drift, float(speeds[-1]))]
    inputs = {
        "label": args.label,
        "point": point.tolist(),
        "direction": args.dir.tolist(),
        "time": args.time,
        "steps": args.steps,
    }
    return Outcome(
        schema=schemas.GEODESIC,
        inputs=inputs,
        results={
            "entry": entry.name,
            "point": point.tolist(),
            "direction": args.dir.tolist(),
            "time": args.time,
            "steps": args.steps,
            "end": chart.to_point(path[-1]).tolist(),
            "length": float(speeds[0] * args.time),
            "checks": _dump_checks(checks),
        },
        passed=checks[0].passed,
    )


def _rep(args: argparse.Namespace, tolerances: Tolerances) -> Outcome:
    entry = get_entry(args.label)
    rep = entry.isotropy_representation()
    split = decompose(rep)
    residual = rep.homomorphism_residual()
    return Outcome(
        schema=schemas.REP_SPLIT,
        inputs={"label": args.label},
        results={
            "entry": entry.name,
            "line": split.line.tolist(),
            "plane": split.plane.tolist(),
            "commutant": [f.tolist() for f in commutant_basis(rep)],
            "homomorphism_residual": residual,
        },
        passed=residual <= tolerances.rep,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modelgeom", description="Classify and verify 3-dimensional model geometries.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress and decisions to stderr")
    verbs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = verbs.add_parser("classify-algebra", help="classify a 3-dimensional Lie algebra")
    p.add_argument("file", type=Path, help="structure constants (JSON bracket list)")
    p.set_defaults(handler=_classify_algebra)

    p = verbs.add_parser("classify", help="classify a geometry spec")
    p.add_argument(
        "--spec",
        type=Path,
        required=True,
        help="geometry spec file (JSON); a kappa with 1e-4 <= |kappa| <= 0.1 is inconclusive at default thresholds",
    )
    p.set_defaults(handler=_classify)

    catalog = verbs.add_parser("catalog", help="list or describe catalog geometries")
    actions = catalog.add_subparsers(dest="action", required=True, parser_class=_Parser)
    actions.add_parser("list", help="labels of the catalog").set_defaults(handler=_catalog_list)
    p = actions.add_parser("show", help="descriptor of one entry")
    p.add_argument("label")
    p.set_defaults(handler=_catalog_show)

    p = verbs.add_parser("verify", help="batch-verify the invariant structure of an entry")
    p.add_argument("label")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(handler=_verify)

    cohomology = verbs.add_parser("cohomology", help="Lie algebra cohomology")
    degrees = cohomology.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = degrees.add_parser("h2", help="second cohomology with trivial real coefficients")
    p.add_argument("file", type=Path)
    p.set_defaults(handler=_cohomology)

    p = verbs.add_parser("extend", help="central extension by a 2-cocycle")
    p.add_argument("file", type=Path)
    p.add_argument("--cocycle", type=Path, required=True)
    p.set_defaults(handler=_extend)

    p = verbs.add_parser("curvature", help="sectional curvatures at a point")
    p.add_argument("label")
    p.add_argument("--point", type=_vector, default=None, help="point of the entry (default: base point)")
    p.set_defaults(handler=_curvature)

    p = verbs.add_parser("geodesic", help="integrate a geodesic in the local chart at a point")
    p.add_argument("label")
    p.add_argument("--point", type=_vector, default=None, help="initial point (default: base point)")
    p.add_argument("--dir", type=_vector, required=True, help="initial velocity in chart coordinates")
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--steps", type=int, default=GEODESIC_STEPS)
    p.set_defaults(handler=_geodesic)

    p = verbs.add_parser("rep", help="isotropy representation split of an axially symmetric entry")
    p.add_argument("label")
    p.set_defaults(handler=_rep)
    return parser


def _command_name(args: argparse.Namespace) -> str:
    action = getattr(args, "action", None)
    return f"{args.command} {action}" if action else args.command


def _envelope(args: argparse.Namespace, outcome: Outcome, tolerances: Tolerances) -> dict[str, Any]:
    report = Report(
        command=_command_name(args),
        inputs=outcome.inputs,
        results=outcome.results,
        passed=outcome.passed,
        tolerances=tolerances.model_dump(),
        seed=outcome.seed,
    )
    payload = report.model_dump(mode="json", by_alias=True)
    schemas.validate_payload(schemas.REPORT, payload)
    schemas.validate_payload(outcome.schema, payload["results"])
    return payload


def run(argv: Sequence[str] | None = None) -> int:
    """Run one verb and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR

    configure_logging(logging.DEBUG if args.verbose else logging.WARNING)
    tolerances = Tolerances()
    handler: Handler = args.handler
    try:
        outcome = handler(args, tolerances)
        payload = _envelope(args, outcome, tolerances)
    except (ModelGeomError, ValueError, OSError) as exc:
        logger.debug("%s failed", _command_name(args), exc_info=True)
        console.print(f"modelgeom: error: {exc}", markup=False, highlight=False, soft_wrap=True, style="red")
        return EXIT_ERROR

    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_PASS if outcome.passed else EXIT_FAIL


def main() -> None:
    sys.exit(run())
