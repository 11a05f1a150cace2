"""Lie algebras, their second cohomology and circle representations."""

from modelgeom.algebra.cohomology import ce_differential, central_extension, h2, weakly_isomorphic
from modelgeom.algebra.lie import bracket, classify_algebra, derived_algebra, is_unimodular, isomorphic
from modelgeom.algebra.rep import CircleRepresentation, IsotypicSplit, commutant_basis, decompose

__all__ = [
    "CircleRepresentation",
    "IsotypicSplit",
    "bracket",
    "ce_differential",
    "central_extension",
    "classify_algebra",
    "commutant_basis",
    "decompose",
    "derived_algebra",
    "h2",
    "is_unimodular",
    "isomorphic",
    "weakly_isomorphic",
]
