"""Versioned JSON Schemas of the CLI payloads.

Schemas are read from this package with ``importlib.resources`` and turned into pydantic models by
``json_schema_to_pydantic.create_model``; payloads are validated in their JSON form, after dumping.
"""

import json
from functools import cache
from importlib.resources import files
from typing import Any

from json_schema_to_pydantic import create_model
from pydantic import BaseModel

schemas_dir = files("modelgeom.schemas")

ALGEBRA_CLASS = "algebra_class"
CATALOG_DESCRIPTOR = "catalog_descriptor"
CATALOG_LIST = "catalog_list"
CHECKS = "checks"
CLASSIFICATION = "classification"
COHOMOLOGY = "cohomology"
CURVATURE = "curvature"
GEODESIC = "geodesic"
REPORT = "report"
REP_SPLIT = "rep_split"
STRUCTURE_CONSTANTS = "structure_constants"

SCHEMA_NAMES = (
    ALGEBRA_CLASS,
    CATALOG_DESCRIPTOR,
    CATALOG_LIST,
    CHECKS,
    CLASSIFICATION,
    COHOMOLOGY,
    CURVATURE,
    GEODESIC,
    REPORT,
    REP_SPLIT,
    STRUCTURE_CONSTANTS,
)

__all__ = [
    "ALGEBRA_CLASS",
    "CATALOG_DESCRIPTOR",
    "CATALOG_LIST",
    "CHECKS",
    "CLASSIFICATION",
    "COHOMOLOGY",
    "CURVATURE",
    "GEODESIC",
    "REPORT",
    "REP_SPLIT",
    "SCHEMA_NAMES",
    "STRUCTURE_CONSTANTS",
    "load_schema",
    "schema_model",
    "validate_payload",
]


def load_schema(name: str) -> dict[str, Any]:
    """The parsed ``<name>.schema.json``."""
    if name not in SCHEMA_NAMES:
        raise KeyError(f"no schema named {name!r}")
    return json.loads((schemas_dir / f"{name}.schema.json").read_text(encoding="utf-8"))


@cache
def schema_model(name: str) -> type[BaseModel]:
    return create_model(load_schema(name))


def validate_payload(name: str, payload: Any) -> None:
    """Validate a JSON-mode payload against a shipped schema.

    Raises:
        pydantic.ValidationError: If the payload does not match.
    """
    schema_model(name).model_validate(payload)
