"""Classification and numerical verification of 3-dimensional model geometries.

Example usage:
    import anyio
    from modelgeom import classify_algebra, classify_geometry, get_entry, verify_entry
    from modelgeom.core.models import StructureConstants

    # Lie algebras
    heisenberg = StructureConstants.from_brackets(3, {(0, 1): [0, 0, 1]})
    print(classify_algebra(heisenberg))  # Heisenberg

    # Geometries
    nil = get_entry("NilSO2")
    print(classify_geometry(nil))  # NilSO2

    # Batch verification of the invariant structure
    report = anyio.run(verify_entry, nil)
    print(report.passed)
"""

from modelgeom.algebra.cohomology import ce_differential, central_extension, h2, weakly_isomorphic
from modelgeom.algebra.lie import bracket, classify_algebra, derived_algebra, is_unimodular, isomorphic
from modelgeom.algebra.rep import CircleRepresentation, IsotypicSplit, commutant_basis, decompose
from modelgeom.core.classify import classify_geometry, decision_trace
from modelgeom.core.exceptions import InconclusiveError, ModelGeomError, UnknownGeometryError
from modelgeom.core.models import (
    AlgebraClass,
    AlgebraKind,
    CheckResult,
    CohomologyResult,
    DecisionTrace,
    GeometryKind,
    GeometryLabel,
    Report,
    StructureConstants,
    Tolerances,
    TwoCocycle,
)
from modelgeom.core.verify import VerifyConfig, verify_entry
from modelgeom.geometry.catalog import CatalogEntry, GeometrySpecFile, get_entry, list_geometries, load_spec

__all__ = [
    "AlgebraClass",
    "AlgebraKind",
    "CatalogEntry",
    "CheckResult",
    "CircleRepresentation",
    "CohomologyResult",
    "DecisionTrace",
    "GeometryKind",
    "GeometryLabel",
    "GeometrySpecFile",
    "InconclusiveError",
    "IsotypicSplit",
    "ModelGeomError",
    "Report",
    "StructureConstants",
    "Tolerances",
    "TwoCocycle",
    "UnknownGeometryError",
    "VerifyConfig",
    "bracket",
    "ce_differential",
    "central_extension",
    "classify_algebra",
    "classify_geometry",
    "commutant_basis",
    "decision_trace",
    "decompose",
    "derived_algebra",
    "get_entry",
    "h2",
    "is_unimodular",
    "isomorphic",
    "list_geometries",
    "load_spec",
    "verify_entry",
    "weakly_isomorphic",
]
