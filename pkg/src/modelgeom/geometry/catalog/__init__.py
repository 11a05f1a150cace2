"""Executable definitions of the 3-dimensional geometries.

Each entry carries its point space, group action, invariant metric and (isotropy SO(2)) invariant
vector field X. The module-level functions are thin wrappers over the ``CatalogEntry`` methods.
"""

import numpy as np
from numpy.typing import ArrayLike

from modelgeom.geometry.catalog.base import CatalogDescriptor, CatalogEntry, EuclideanChartEntry, GeometrySpec
from modelgeom.geometry.catalog.flat import (
    HyperbolicPlaneTimesLine,
    KappaNormalization,
    SphereTimesLine,
    WarpedEuclidean,
    kappa_normalization,
)
from modelgeom.geometry.catalog.isotropic import Euclidean3, Hyperbolic3, RoundSphere3
from modelgeom.geometry.catalog.nonflat import HeisenbergRotations, HopfSphere, UniversalCoverSL2
from modelgeom.geometry.catalog.registry import get_entry, list_geometries
from modelgeom.geometry.catalog.user import (
    ConjugatedGeometry,
    GeometrySpecFile,
    ScaledGeometry,
    UserGeometry,
    load_spec,
)

__all__ = [
    "CatalogDescriptor",
    "CatalogEntry",
    "ConjugatedGeometry",
    "Euclidean3",
    "EuclideanChartEntry",
    "GeometrySpec",
    "GeometrySpecFile",
    "HeisenbergRotations",
    "HopfSphere",
    "Hyperbolic3",
    "HyperbolicPlaneTimesLine",
    "KappaNormalization",
    "RoundSphere3",
    "ScaledGeometry",
    "SphereTimesLine",
    "UniversalCoverSL2",
    "UserGeometry",
    "WarpedEuclidean",
    "action",
    "get_entry",
    "group_sample",
    "invariant_metric",
    "invariant_vector_field",
    "kappa_normalization",
    "list_geometries",
    "load_spec",
]


def action(entry: CatalogEntry, g: ArrayLike, p: ArrayLike) -> np.ndarray:
    """Apply the group element with parameters ``g`` to the point ``p``."""
    return entry.action(g, p)


def invariant_metric(entry: CatalogEntry, p: ArrayLike) -> np.ndarray:
    """The invariant metric at ``p`` in the local chart centred at ``p``."""
    return entry.invariant_metric(p)


def invariant_vector_field(entry: CatalogEntry, p: ArrayLike) -> np.ndarray:
    """X(p) as a tangent vector of the point space; only for isotropy dimension 1."""
    return entry.x_field(p)


def group_sample(entry: CatalogEntry, seed: int) -> np.ndarray:
    return entry.group_sample(seed)
