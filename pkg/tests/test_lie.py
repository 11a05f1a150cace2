"""Tests for brackets, invariants and the classification of 3-dimensional Lie algebras."""

from collections.abc import Callable

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import special_ortho_group

from modelgeom.algebra.lie import (
    bracket,
    center,
    classify_algebra,
    derived_algebra,
    is_unimodular,
    isomorphic,
    jacobi_residual,
    killing_form,
    quotient_by_center,
    require_lie_algebra,
)
from modelgeom.core.exceptions import DimensionMismatchError, NotALieAlgebraError, UnsupportedCaseError
from modelgeom.constants import ABS_TOL
from modelgeom.core.models import AlgebraKind, SolvableForm, StructureConstants
from modelgeom.geometry.catalog.nonflat import e2_algebra, sl2_algebra, so3_algebra

NIL_EXTENSION = StructureConstants.from_brackets(4, {(1, 2): [1, 0, 0, 0], (1, 3): [0, 0, -1, 0], (2, 3): [0, 1, 0, 0]})
REAL_DIAG = StructureConstants.from_brackets(3, {(2, 0): [1, 0, 0], (2, 1): [0, 2, 0]})
COMPLEX = StructureConstants.from_brackets(3, {(2, 0): [0.5, 1, 0], (2, 1): [-1, 0.5, 0]})
JORDAN = StructureConstants.from_brackets(3, {(2, 0): [1, 0, 0], (2, 1): [1, 1, 0]})

CANONICAL = {
    "abelian": StructureConstants.zeros(3),
    "heisenberg": StructureConstants.from_brackets(3, {(0, 1): [0, 0, 1]}),
    "h2xr": StructureConstants.from_brackets(3, {(0, 1): [0, 1, 0]}),
    "real-diag": REAL_DIAG,
    "complex": COMPLEX,
    "jordan": JORDAN,
    "e2": e2_algebra(),
    "so3": so3_algebra(),
    "sl2": sl2_algebra(),
}


class TestBracket:
    def test_nil_extension_bracket(self) -> None:
        assert np.allclose(bracket(NIL_EXTENSION, [0, 1, 0, 0], [0, 0, 1, 0]), [1, 0, 0, 0])

    def test_bracket_is_antisymmetric(self, sl2: StructureConstants, rng: np.random.Generator) -> None:
        x, y = rng.normal(size=3), rng.normal(size=3)
        assert np.allclose(bracket(sl2, x, y), -bracket(sl2, y, x))
        assert np.allclose(bracket(sl2, x, x), 0.0)

    def test_abelian_bracket_vanishes(self, abelian: StructureConstants) -> None:
        assert np.allclose(bracket(abelian, [1, 2, 3], [4, 5, 6]), 0.0)

    def test_dimension_mismatch(self, so3: StructureConstants) -> None:
        with pytest.raises(DimensionMismatchError):
            bracket(so3, [1, 0], [0, 1, 0])


class TestJacobi:
    def test_lie_algebras_have_zero_residual(self, abelian: StructureConstants, e2: StructureConstants) -> None:
        assert jacobi_residual(abelian) == 0.0
        assert jacobi_residual(e2) == 0.0
        assert jacobi_residual(NIL_EXTENSION) == 0.0

    def test_broken_constants(self) -> None:
        # [e0,[e1,e2]] + [e1,[e2,e0]] + [e2,[e0,e1]] = e2
        broken = StructureConstants.from_brackets(3, {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]})
        assert jacobi_residual(broken) == pytest.approx(1.0)
        with pytest.raises(NotALieAlgebraError) as exc_info:
            require_lie_algebra(broken)
        assert exc_info.value.residual == pytest.approx(1.0)

    def test_classify_rejects_non_lie_constants(self) -> None:
        broken = StructureConstants.from_brackets(3, {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]})
        with pytest.raises(NotALieAlgebraError):
            classify_algebra(broken)


class TestInvariants:
    @pytest.mark.parametrize(
        ("fixture", "expected"),
        [("abelian", 0), ("heisenberg", 1), ("h2xr", 1), ("e2", 2), ("so3", 3), ("sl2", 3)],
    )
    def test_derived_dimension(self, fixture: str, expected: int, request: pytest.FixtureRequest) -> None:
        dim, basis = derived_algebra(request.getfixturevalue(fixture))
        assert dim == expected
        if basis:
            gram = np.array(basis) @ np.array(basis).T
            assert np.allclose(gram, np.eye(dim))

    def test_unimodularity(self, so3: StructureConstants, h2xr: StructureConstants, e2: StructureConstants) -> None:
        assert is_unimodular(so3)
        assert is_unimodular(e2)
        assert not is_unimodular(h2xr)

    def test_killing_form_of_so3(self, so3: StructureConstants) -> None:
        assert np.allclose(killing_form(so3), -2 * np.eye(3))

    def test_killing_form_signature_of_sl2(self, sl2: StructureConstants) -> None:
        eigenvalues = np.linalg.eigvalsh(killing_form(sl2))
        assert (eigenvalues > 0).sum() == 2
        assert (eigenvalues < 0).sum() == 1

    def test_center_of_heisenberg(self, heisenberg: StructureConstants) -> None:
        z = center(heisenberg)
        assert z.shape == (3, 1)
        assert np.allclose(np.abs(z[:, 0]), [0, 0, 1])

    def test_quotient_by_center(self) -> None:
        quotient = quotient_by_center(NIL_EXTENSION, 0)
        assert classify_algebra(quotient).form is SolvableForm.COMPLEX

    def test_quotient_requires_central_index(self) -> None:
        with pytest.raises(UnsupportedCaseError, match="not central"):
            quotient_by_center(NIL_EXTENSION, 1)


class TestClassifyAlgebra:
    """The derived-algebra decision tree."""

    def test_abelian(self, abelian: StructureConstants) -> None:
        result = classify_algebra(abelian)
        assert result.kind is AlgebraKind.ABELIAN
        assert result.unimodular

    def test_heisenberg(self, heisenberg: StructureConstants) -> None:
        result = classify_algebra(heisenberg)
        assert result.kind is AlgebraKind.HEISENBERG
        assert result.unimodular

    def test_h2xr(self, h2xr: StructureConstants) -> None:
        result = classify_algebra(h2xr)
        assert result.kind is AlgebraKind.H2XR
        assert not result.unimodular

    def test_real_diagonal(self) -> None:
        result = classify_algebra(REAL_DIAG)
        assert result.kind is AlgebraKind.SOLVABLE2
        assert result.form is SolvableForm.REAL_DIAG
        assert result.param == pytest.approx(0.5)
        assert not result.unimodular

    def test_euclidean_motions_are_complex_type(self, e2: StructureConstants) -> None:
        result = classify_algebra(e2)
        assert result.form is SolvableForm.COMPLEX
        assert result.param == pytest.approx(0.0, abs=1e-12)
        assert result.bianchi_type == "VII_0"

    def test_complex_parameter(self) -> None:
        # ad_e3 on g' has eigenvalues 0.5 ± i
        result = classify_algebra(COMPLEX)
        assert result.form is SolvableForm.COMPLEX
        assert result.param == pytest.approx(0.5)

    def test_jordan(self) -> None:
        result = classify_algebra(JORDAN)
        assert result.form is SolvableForm.JORDAN
        assert result.bianchi_type == "IV"

    def test_simple_algebras(self, so3: StructureConstants, sl2: StructureConstants) -> None:
        assert classify_algebra(so3).kind is AlgebraKind.SO3
        assert classify_algebra(sl2).kind is AlgebraKind.SL2R

    def test_requires_dimension_three(self) -> None:
        with pytest.raises(DimensionMismatchError):
            classify_algebra(NIL_EXTENSION)


class TestIsomorphic:
    def test_so3_under_basis_change(self, so3: StructureConstants, basis_change: Callable[..., np.ndarray]) -> None:
        assert isomorphic(so3, so3.push_forward(basis_change()))

    def test_scaled_heisenberg(self, heisenberg: StructureConstants) -> None:
        scaled = StructureConstants(dim=3, c=2 * heisenberg.c)
        assert isomorphic(heisenberg, scaled)

    def test_so3_is_not_sl2(self, so3: StructureConstants, sl2: StructureConstants) -> None:
        assert not isomorphic(so3, sl2)


@pytest.mark.parametrize("fixture", ["abelian", "heisenberg", "h2xr", "so3", "sl2", "e2"])
def test_classification_is_basis_independent(
    fixture: str, request: pytest.FixtureRequest, basis_change: Callable[..., np.ndarray]
) -> None:
    """A handful of random basis changes leave the class and derived dimension unchanged."""
    sc: StructureConstants = request.getfixturevalue(fixture)
    reference = classify_algebra(sc)
    for _ in range(20):
        moved = sc.push_forward(basis_change())
        assert classify_algebra(moved).same_class(reference)
        assert derived_algebra(moved)[0] == reference.derived_dim


@pytest.mark.slow
@pytest.mark.parametrize(
    "sc",
    [
        StructureConstants.zeros(3),
        StructureConstants.from_brackets(3, {(0, 1): [0, 0, 1]}),
        StructureConstants.from_brackets(3, {(0, 1): [0, 1, 0]}),
        REAL_DIAG,
        StructureConstants.from_brackets(3, {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (2, 0): [0, 1, 0]}),
        StructureConstants.from_brackets(3, {(0, 1): [0, 0, -1], (1, 2): [1, 0, 0], (2, 0): [0, 1, 0]}),
    ],
    ids=["abelian", "heisenberg", "h2xr", "real-diag", "so3", "sl2"],
)
def test_thousand_basis_changes(sc: StructureConstants, basis_change: Callable[..., np.ndarray]) -> None:
    """Zero misclassifications over 1000 basis changes per canonical algebra, condition numbers up to 1e3."""
    reference = classify_algebra(sc)
    for _ in range(1000):
        result = classify_algebra(sc.push_forward(basis_change()))
        assert result.kind is reference.kind
        assert result.form is reference.form
        if reference.param is not None:
            assert result.param == pytest.approx(reference.param, abs=1e-6)


@pytest.mark.parametrize("sc", CANONICAL.values(), ids=CANONICAL.keys())
@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    log_singular=st.lists(st.floats(min_value=0.0, max_value=3.0), min_size=3, max_size=3),
)
def test_killing_form_transforms_as_bilinear_form(sc: StructureConstants, seed: int, log_singular: list[float]) -> None:
    rng = np.random.default_rng(seed)
    u = special_ortho_group.rvs(3, random_state=rng)
    v = special_ortho_group.rvs(3, random_state=rng)
    t = u @ np.diag(10.0 ** np.array(log_singular)) @ v
    expected = t.T @ killing_form(sc) @ t
    np.testing.assert_allclose(
        killing_form(sc.push_forward(t)), expected, rtol=0, atol=ABS_TOL * max(1.0, np.abs(expected).max())
    )


@pytest.mark.parametrize("sc", CANONICAL.values(), ids=CANONICAL.keys())
def test_unimodularity_matches_classification(
    sc: StructureConstants, basis_change: Callable[..., np.ndarray]
) -> None:
    for _ in range(50):
        moved = sc.push_forward(basis_change())
        assert is_unimodular(moved) is classify_algebra(moved).unimodular
