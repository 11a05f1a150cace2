"""Shared value types: structure constants, algebra classes, cocycles, labels and reports.

All types are frozen pydantic models. Arrays are stored as read-only float ndarrays and serialize
to nested JSON lists; structure constants use the bracket-list wire format on the JSON side.
"""

from collections.abc import Mapping, Sequence
from enum import StrEnum
from typing import Annotated, Any, Self

import numpy as np
from pydantic import (
    AliasChoices,
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    model_serializer,
    model_validator,
)

from modelgeom.constants import (
    ABS_TOL,
    COMPOSITION_TOL,
    DIVERGENCE_TOL,
    ENERGY_DRIFT_TOL,
    FD_STEP,
    FD_STEP_CURVATURE,
    GEODESIC_RESIDUAL_TOL,
    INVARIANCE_TOL,
    KILLING_TOL,
    LENGTH_SPREAD_TOL,
    MAX_ALGEBRA_DIM,
    NONZERO_THRESHOLD,
    REP_TOL,
    ZERO_THRESHOLD,
)

__all__ = [
    "AlgebraClass",
    "AlgebraKind",
    "CheckResult",
    "CohomologyResult",
    "DecisionTrace",
    "FloatArray",
    "GeometryKind",
    "GeometryLabel",
    "Report",
    "SolvableForm",
    "StructureConstants",
    "Tolerances",
    "TraceStep",
    "TwoCocycle",
    "scaled_tolerance",
]


def _to_float_array(v: object) -> np.ndarray:
    arr = np.array(v, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("array contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _array_to_list(v: np.ndarray) -> list:
    return v.tolist()


FloatArray = Annotated[
    np.ndarray,
    PlainValidator(_to_float_array),
    PlainSerializer(_array_to_list, when_used="json"),
]


def scaled_tolerance(values: np.ndarray, atol: float = ABS_TOL) -> float:
    """Absolute tolerance scaled by the infinity norm of ``values`` (never below ``atol``)."""
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    return atol * max(1.0, scale)


# Lie algebras
class StructureConstants(BaseModel):
    """An n-dimensional real Lie algebra given by c[i][j][k], the coefficient of e_k in [e_i, e_j].

    On the JSON side the constants use the bracket-list format
    ``{"dim": n, "brackets": [{"i": i, "j": j, "coeffs": [...]}, ...]}`` with ``i < j`` and zero
    brackets omitted; the antisymmetric completion is applied on load.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dim: int = Field(ge=2, le=MAX_ALGEBRA_DIM)
    c: FloatArray

    @model_validator(mode="before")
    @classmethod
    def _from_bracket_list(cls, data: object) -> object:
        if isinstance(data, Mapping) and "brackets" in data and "c" not in data:
            dim = int(data["dim"])
            c = np.zeros((dim, dim, dim))
            for entry in data["brackets"]:
                i, j, coeffs = int(entry["i"]), int(entry["j"]), entry["coeffs"]
                if not 0 <= i < j < dim:
                    raise ValueError(f"bracket indices must satisfy 0 <= i < j < dim, got ({i}, {j})")
                if len(coeffs) != dim:
                    raise ValueError(f"bracket ({i}, {j}) has {len(coeffs)} coefficients, expected {dim}")
                c[i, j] = coeffs
                c[j, i] = -np.asarray(coeffs, dtype=float)
            return {"dim": dim, "c": c}
        return data

    @model_validator(mode="after")
    def _check_shape(self) -> Self:
        n = self.dim
        if self.c.shape != (n, n, n):
            raise ValueError(f"structure constants must have shape {(n, n, n)}, got {self.c.shape}")
        asym = float(np.max(np.abs(self.c + self.c.transpose(1, 0, 2))))
        if asym > scaled_tolerance(self.c):
            raise ValueError(f"structure constants are not antisymmetric (residual {asym:.3e})")
        return self

    @model_serializer(mode="plain")
    def _to_bracket_list(self) -> dict[str, Any]:
        brackets = [
            {"i": i, "j": j, "coeffs": self.c[i, j].tolist()}
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
            if np.any(self.c[i, j] != 0.0)
        ]
        return {"dim": self.dim, "brackets": brackets}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StructureConstants):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self.c, other.c))

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[tuple[int, int], Sequence[float]]) -> Self:
        """Build constants from ``{(i, j): coeffs}``; pairs with ``i > j`` are accepted and flipped."""
        c = np.zeros((dim, dim, dim))
        for (i, j), coeffs in brackets.items():
            vec = np.asarray(coeffs, dtype=float)
            c[i, j] += vec
            c[j, i] -= vec
        return cls(dim=dim, c=c)

    @classmethod
    def zeros(cls, dim: int) -> Self:
        return cls(dim=dim, c=np.zeros((dim, dim, dim)))

    @classmethod
    def from_json(cls, text: str | bytes) -> Self:
        return cls.model_validate_json(text)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def push_forward(self, basis_change: np.ndarray) -> "StructureConstants":
        """Constants in the new basis f_a = sum_i T[i, a] e_i (columns of ``T`` are the new basis vectors)."""
        t = np.asarray(basis_change, dtype=float)
        if t.shape != (self.dim, self.dim):
            raise ValueError(f"basis change must be {self.dim}x{self.dim}, got {t.shape}")
        t_inv = np.linalg.inv(t)
        c = np.einsum("ia,jb,ijk,dk->abd", t, t, self.c, t_inv)
        return StructureConstants(dim=self.dim, c=c)


class AlgebraKind(StrEnum):
    """Isomorphism families of 3-dimensional real Lie algebras, split by derived dimension."""

    ABELIAN = "Abelian"
    HEISENBERG = "Heisenberg"
    H2XR = "H2xR"
    SOLVABLE2 = "Solvable2"
    SO3 = "SO3"
    SL2R = "SL2R"


class SolvableForm(StrEnum):
    """Canonical form of ad_{e3} restricted to a 2-dimensional derived algebra."""

    REAL_DIAG = "RealDiag"
    COMPLEX = "Complex"
    JORDAN = "Jordan"


_DERIVED_DIM: dict[AlgebraKind, int] = {
    AlgebraKind.ABELIAN: 0,
    AlgebraKind.HEISENBERG: 1,
    AlgebraKind.H2XR: 1,
    AlgebraKind.SOLVABLE2: 2,
    AlgebraKind.SO3: 3,
    AlgebraKind.SL2R: 3,
}


class AlgebraClass(BaseModel, frozen=True):
    """Isomorphism class of a 3-dimensional Lie algebra.

    Attributes:
        kind: Family selected by the derived-algebra decision tree.
        form: Canonical form of ad_{e3}|g' (``Solvable2`` only).
        param: RealDiag: second eigenvalue a with |a| <= 1 after normalizing the larger one to 1.
            Complex: |real part| / imaginary part. Jordan: 1.
        unimodular: Whether trace(ad_x) vanishes for every x.
        derived_dim: Dimension of [g, g].
    """

    kind: AlgebraKind
    form: SolvableForm | None = None
    param: float | None = None
    unimodular: bool
    derived_dim: int = Field(ge=0, le=3)

    @model_validator(mode="after")
    def _check_consistency(self) -> Self:
        if _DERIVED_DIM[self.kind] != self.derived_dim:
            raise ValueError(f"{self.kind} requires derived_dim {_DERIVED_DIM[self.kind]}, got {self.derived_dim}")
        if self.kind is AlgebraKind.SOLVABLE2:
            if self.form is None or self.param is None:
                raise ValueError("Solvable2 requires a canonical form and parameter")
        elif self.form is not None or self.param is not None:
            raise ValueError(f"{self.kind} carries no canonical form")
        if self.kind is AlgebraKind.H2XR and self.unimodular:
            raise ValueError("H2xR is never unimodular")
        if self.kind in {AlgebraKind.ABELIAN, AlgebraKind.HEISENBERG, AlgebraKind.SO3, AlgebraKind.SL2R}:
            if not self.unimodular:
                raise ValueError(f"{self.kind} is always unimodular")
        return self

    def same_class(self, other: "AlgebraClass", tol: float = 1e-6) -> bool:
        """Equal kind, and for Solvable2 equal form with parameters within ``tol``."""
        if self.kind is not other.kind:
            return False
        if self.kind is not AlgebraKind.SOLVABLE2:
            return True
        assert self.param is not None and other.param is not None
        return self.form is other.form and abs(self.param - other.param) <= tol

    @property
    def bianchi_type(self) -> str:
        """Bianchi type of the class (I to IX; VI and VII carry their parameter suffix)."""
        match self.kind:
            case AlgebraKind.ABELIAN:
                return "I"
            case AlgebraKind.HEISENBERG:
                return "II"
            case AlgebraKind.H2XR:
                return "III"
            case AlgebraKind.SO3:
                return "IX"
            case AlgebraKind.SL2R:
                return "VIII"
        if self.form is SolvableForm.JORDAN:
            return "IV"
        if self.form is SolvableForm.COMPLEX:
            return "VII_0" if self.unimodular else "VII_h"
        if self.param is not None and abs(self.param - 1.0) <= 1e-6:
            return "V"
        return "VI_0" if self.unimodular else "VI_h"

    def __str__(self) -> str:
        if self.kind is AlgebraKind.SOLVABLE2:
            return f"Solvable2[{self.form}({self.param:.6g})]"
        return str(self.kind)


# Cohomology
class TwoCocycle(BaseModel):
    """Antisymmetric real 2-form on a Lie algebra, ω(e_i, e_j) = matrix[i][j]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    base: StructureConstants
    matrix: FloatArray

    @model_validator(mode="after")
    def _check_matrix(self) -> Self:
        n = self.base.dim
        if self.matrix.shape != (n, n):
            raise ValueError(f"cocycle matrix must be {n}x{n}, got {self.matrix.shape}")
        asym = float(np.max(np.abs(self.matrix + self.matrix.T)))
        if asym > scaled_tolerance(self.matrix):
            raise ValueError(f"cocycle matrix is not antisymmetric (residual {asym:.3e})")
        return self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TwoCocycle):
            return NotImplemented
        return self.base == other.base and bool(np.array_equal(self.matrix, other.matrix))

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_pairs(cls, base: StructureConstants, values: Mapping[tuple[int, int], float]) -> Self:
        """Build ω from ``{(i, j): ω(e_i, e_j)}``, completing antisymmetrically."""
        m = np.zeros((base.dim, base.dim))
        for (i, j), value in values.items():
            m[i, j] += value
            m[j, i] -= value
        return cls(base=base, matrix=m)

    def scaled(self, factor: float) -> "TwoCocycle":
        return TwoCocycle(base=self.base, matrix=factor * self.matrix)


class CohomologyResult(BaseModel, frozen=True):
    """Second cohomology with trivial real coefficients.

    ``cocycle_rank`` is dim Z^2 (kernel of d2), ``coboundary_rank`` is dim B^2 (image of d1).
    """

    betti2: int = Field(ge=0)
    representatives: list[TwoCocycle]
    coboundary_rank: int = Field(ge=0)
    cocycle_rank: int = Field(ge=0)

    @model_validator(mode="after")
    def _check_ranks(self) -> Self:
        if self.betti2 != self.cocycle_rank - self.coboundary_rank:
            raise ValueError("betti2 must equal cocycle_rank - coboundary_rank")
        if len(self.representatives) != self.betti2:
            raise ValueError("one representative per cohomology dimension is required")
        return self


# Geometries
class GeometryKind(StrEnum):
    """Labels of the final list of 3-dimensional geometries."""

    E3 = "E3"
    S3_SO4 = "S3_SO4"
    H3 = "H3"
    S2XR = "S2xR"
    H2XR = "H2xR"
    E2XR = "E2xR"
    E2_SEMI_R = "E2SemiR"
    S3_U2 = "S3_U2"
    SL_TILDE = "SLTilde"
    NIL_SO2 = "NilSO2"
    LIE_GROUP = "LieGroup"


class GeometryLabel(BaseModel, frozen=True):
    """A geometry label; ``LieGroup`` carries the algebra class (``None`` marks the whole family)."""

    kind: GeometryKind
    algebra: AlgebraClass | None = None

    @model_validator(mode="after")
    def _check_algebra(self) -> Self:
        if self.algebra is not None and self.kind is not GeometryKind.LIE_GROUP:
            raise ValueError(f"{self.kind} does not carry an algebra class")
        return self

    @classmethod
    def parse(cls, text: str) -> Self:
        return cls(kind=GeometryKind(text))

    def __str__(self) -> str:
        if self.kind is GeometryKind.LIE_GROUP:
            return f"LieGroup({self.algebra})" if self.algebra is not None else "LieGroup"
        return str(self.kind)


# Reports
class TraceStep(BaseModel, frozen=True):
    """One question of the decision tree with the measured value and the branch taken."""

    question: str
    value: float | int | str | None
    branch: str


class DecisionTrace(BaseModel, frozen=True):
    steps: list[TraceStep]
    label: GeometryLabel


class Tolerances(BaseModel, frozen=True):
    """Tolerances applied by verification and classification; echoed in every report."""

    absolute: float = ABS_TOL
    fd_step: float = FD_STEP
    fd_step_curvature: float = FD_STEP_CURVATURE
    zero_threshold: float = ZERO_THRESHOLD
    nonzero_threshold: float = NONZERO_THRESHOLD
    invariance: float = INVARIANCE_TOL
    composition: float = COMPOSITION_TOL
    killing: float = KILLING_TOL
    geodesic_residual: float = GEODESIC_RESIDUAL_TOL
    energy_drift: float = ENERGY_DRIFT_TOL
    length_spread: float = LENGTH_SPREAD_TOL
    divergence: float = DIVERGENCE_TOL
    rep: float = REP_TOL


class CheckResult(BaseModel, frozen=True):
    """Outcome of one numerical check over a batch of samples."""

    model_config = ConfigDict(populate_by_name=True)

    entry: str
    quantity: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool = Field(validation_alias=AliasChoices("pass", "passed"), serialization_alias="pass")
    value: float | None = None


class Report(BaseModel, frozen=True):
    """JSON envelope printed by the CLI; ``pass`` is the conjunction of all contained checks."""

    model_config = ConfigDict(populate_by_name=True)

    command: str
    inputs: dict[str, Any]
    results: Any
    passed: bool = Field(validation_alias=AliasChoices("pass", "passed"), serialization_alias="pass")
    tolerances: dict[str, float]
    seed: int | None = None
