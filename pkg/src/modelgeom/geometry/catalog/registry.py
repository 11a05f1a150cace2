"""Lookup of catalog entries by label."""

from collections.abc import Callable
from functools import cache

from modelgeom.core.exceptions import UnknownGeometryError
from modelgeom.core.models import GeometryKind, GeometryLabel
from modelgeom.geometry.catalog.base import CatalogEntry
from modelgeom.geometry.catalog.flat import HyperbolicPlaneTimesLine, SphereTimesLine, WarpedEuclidean
from modelgeom.geometry.catalog.isotropic import Euclidean3, Hyperbolic3, RoundSphere3
from modelgeom.geometry.catalog.nonflat import HeisenbergRotations, HopfSphere, UniversalCoverSL2

__all__ = ["get_entry", "list_geometries"]

_FACTORIES: dict[GeometryKind, Callable[[], CatalogEntry]] = {
    GeometryKind.E3: Euclidean3,
    GeometryKind.S3_SO4: RoundSphere3,
    GeometryKind.H3: Hyperbolic3,
    GeometryKind.S2XR: SphereTimesLine,
    GeometryKind.H2XR: HyperbolicPlaneTimesLine,
    GeometryKind.E2XR: lambda: WarpedEuclidean(kappa=0.0),
    GeometryKind.E2_SEMI_R: lambda: WarpedEuclidean(kappa=1.0),
    GeometryKind.S3_U2: HopfSphere,
    GeometryKind.SL_TILDE: UniversalCoverSL2,
    GeometryKind.NIL_SO2: HeisenbergRotations,
}


def list_geometries() -> list[GeometryLabel]:
    """The ten catalog labels followed by the ``LieGroup`` family marker."""
    return [GeometryLabel(kind=kind) for kind in _FACTORIES] + [GeometryLabel(kind=GeometryKind.LIE_GROUP)]


@cache
def _build(kind: GeometryKind) -> CatalogEntry:
    return _FACTORIES[kind]()


def get_entry(label: str | GeometryKind | GeometryLabel) -> CatalogEntry:
    """The catalog entry for ``label``.

    Raises:
        UnknownGeometryError: If the label is not one of the ten catalog geometries.
    """
    if isinstance(label, GeometryLabel):
        kind = label.kind
    else:
        try:
            kind = GeometryKind(label)
        except ValueError:
            raise UnknownGeometryError(str(label)) from None
    if kind not in _FACTORIES:
        raise UnknownGeometryError(str(kind))
    return _build(kind)
