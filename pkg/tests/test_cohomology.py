"""Tests for Chevalley-Eilenberg cohomology and central extensions."""

from collections.abc import Callable

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modelgeom.algebra.cohomology import (
    ce_differential,
    central_extension,
    coboundary,
    cocycle_residual,
    extension_scaling,
    h2,
    weakly_isomorphic,
)
from modelgeom.algebra.lie import classify_algebra, derived_algebra, isomorphic, jacobi_residual
from modelgeom.core.exceptions import CocycleViolationError, UnsupportedCaseError, UnsupportedDegreeError
from modelgeom.core.models import AlgebraKind, StructureConstants, TwoCocycle
from modelgeom.geometry.catalog.nonflat import e2_algebra


def omega(sc: StructureConstants, lam: float) -> TwoCocycle:
    """ω_λ on e(2): λ on the pair spanning the derived algebra."""
    return TwoCocycle.from_pairs(sc, {(0, 1): lam})


class TestDifferential:
    def test_abelian_degree_one_is_zero(self, abelian: StructureConstants) -> None:
        assert np.allclose(ce_differential(abelian, 1), 0.0)

    def test_e2_ranks(self, e2: StructureConstants) -> None:
        assert np.linalg.matrix_rank(ce_differential(e2, 1)) == 2
        d2 = ce_differential(e2, 2)
        assert d2.shape == (1, 3)
        assert np.linalg.matrix_rank(d2) == 0

    @pytest.mark.parametrize("fixture", ["abelian", "heisenberg", "h2xr", "so3", "sl2", "e2"])
    def test_d_squared_vanishes(self, fixture: str, request: pytest.FixtureRequest) -> None:
        sc: StructureConstants = request.getfixturevalue(fixture)
        assert np.max(np.abs(ce_differential(sc, 2) @ ce_differential(sc, 1))) <= 1e-12

    def test_d_squared_vanishes_in_dimension_four(self, e2: StructureConstants) -> None:
        nil = central_extension(e2, omega(e2, 1.0))
        assert np.max(np.abs(ce_differential(nil, 2) @ ce_differential(nil, 1))) <= 1e-12

    @pytest.mark.parametrize("degree", [0, 3])
    def test_unsupported_degree(self, so3: StructureConstants, degree: int) -> None:
        with pytest.raises(UnsupportedDegreeError):
            ce_differential(so3, degree)


class TestH2:
    def test_so3(self, so3: StructureConstants) -> None:
        result = h2(so3)
        assert result.betti2 == 0
        assert result.representatives == []

    def test_e2_matches_omega_one(self, e2: StructureConstants) -> None:
        result = h2(e2)
        assert result.betti2 == 1
        assert result.coboundary_rank == 2
        assert result.cocycle_rank == 3
        assert np.allclose(result.representatives[0].matrix, omega(e2, 1.0).matrix)

    def test_abelian(self, abelian: StructureConstants) -> None:
        result = h2(abelian)
        assert result.betti2 == 3
        assert len(result.representatives) == 3
        for rep in result.representatives:
            first = rep.matrix[np.triu_indices(3, 1)]
            assert first[np.flatnonzero(first)[0]] == pytest.approx(1.0)

    def test_sl2(self, sl2: StructureConstants) -> None:
        assert h2(sl2).betti2 == 0

    def test_heisenberg(self, heisenberg: StructureConstants) -> None:
        assert h2(heisenberg).betti2 == 2

    def test_dimension_four(self, e2: StructureConstants) -> None:
        nil = central_extension(e2, omega(e2, 1.0))
        result = h2(nil)
        assert result.betti2 == result.cocycle_rank - result.coboundary_rank

    def test_dimension_limit(self) -> None:
        with pytest.raises(UnsupportedCaseError, match="up to dimension 4"):
            h2(StructureConstants.zeros(5))

    def test_betti_number_is_basis_independent(
        self, e2: StructureConstants, heisenberg: StructureConstants, basis_change: Callable[..., np.ndarray]
    ) -> None:
        for sc in (e2, heisenberg):
            for _ in range(10):
                # ranks are cut off relative to the largest constant
                assert h2(sc.push_forward(basis_change(max_condition=30.0))).betti2 == h2(sc).betti2


class TestCentralExtension:
    def test_trivial_extension_is_direct_product(self, e2: StructureConstants) -> None:
        extended = central_extension(e2, omega(e2, 0.0))
        assert np.allclose(extended.c[0], 0.0)
        assert np.allclose(extended.c[1:, 1:, 1:], e2.c)
        assert np.allclose(extended.c[:, :, 0], 0.0)

    def test_omega_one_reproduces_nil_brackets(self, e2: StructureConstants) -> None:
        extended = central_extension(e2, omega(e2, 1.0))
        expected = StructureConstants.from_brackets(
            4, {(1, 2): [1, 0, 0, 0], (1, 3): [0, 0, -1, 0], (2, 3): [0, 1, 0, 0]}
        )
        assert extended == expected

    def test_flat_and_non_flat_extensions_differ(self, e2: StructureConstants) -> None:
        trivial = central_extension(e2, omega(e2, 0.0))
        twisted = central_extension(e2, omega(e2, 1.0))
        assert derived_algebra(trivial)[0] == 2
        assert derived_algebra(twisted)[0] == 3

    def test_non_closed_form_is_rejected(self, h2xr: StructureConstants) -> None:
        # dω(e0, e1, e2) = -ω(e1, e2) on h2xr
        with pytest.raises(CocycleViolationError):
            central_extension(h2xr, TwoCocycle.from_pairs(h2xr, {(1, 2): 1.0}))

    def test_extension_of_so3_by_coboundary_splits(self, so3: StructureConstants) -> None:
        extended = central_extension(so3, coboundary(so3, [0, 0, 0.5]))
        assert jacobi_residual(extended) <= 1e-12
        reduced = StructureConstants(dim=3, c=extended.c[1:, 1:, 1:])
        assert isomorphic(reduced, so3)

    def test_jacobi_iff_cocycle_on_random_forms(self, h2xr: StructureConstants, rng: np.random.Generator) -> None:
        """On a non-unimodular algebra some antisymmetric forms are closed and some are not."""
        closed = open_ = 0
        for _ in range(50):
            a = rng.normal(size=(3, 3))
            matrix = a - a.T
            if rng.uniform() < 0.5:
                matrix[1, 2] = matrix[2, 1] = 0.0
            closed_form = cocycle_residual(h2xr, matrix) < 1e-9
            form = TwoCocycle(base=h2xr, matrix=matrix)
            if closed_form:
                closed += 1
                assert jacobi_residual(central_extension(h2xr, form)) < 1e-9
            else:
                open_ += 1
                with pytest.raises(CocycleViolationError):
                    central_extension(h2xr, form)
        assert closed > 0
        assert open_ > 0


class TestWeakIsomorphism:
    @pytest.mark.parametrize("lam", [0.5, 2.0, -3.0])
    def test_nonzero_multiples(self, e2: StructureConstants, lam: float) -> None:
        assert weakly_isomorphic(e2, omega(e2, lam), omega(e2, 1.0))

    def test_zero_class(self, e2: StructureConstants) -> None:
        assert not weakly_isomorphic(e2, omega(e2, 0.0), omega(e2, 1.0))

    def test_reflexive(self, so3: StructureConstants) -> None:
        form = coboundary(so3, [1.0, 0.0, 0.0])
        assert weakly_isomorphic(so3, form, form)

    def test_coboundary_shift_keeps_class(self, e2: StructureConstants) -> None:
        shifted = TwoCocycle(base=e2, matrix=omega(e2, 1.0).matrix + coboundary(e2, [1.0, 2.0, 3.0]).matrix)
        assert extension_scaling(e2, shifted, omega(e2, 1.0)) == pytest.approx(1.0)

    def test_extension_scaling(self, e2: StructureConstants) -> None:
        assert extension_scaling(e2, omega(e2, -3.0), omega(e2, 1.0)) == pytest.approx(-3.0)

    def test_abelian_is_out_of_scope(self, abelian: StructureConstants) -> None:
        form = TwoCocycle.from_pairs(abelian, {(0, 1): 1.0})
        with pytest.raises(UnsupportedCaseError, match="betti2"):
            weakly_isomorphic(abelian, form, form)


def test_nil_extension_classifies_through_its_quotient(e2: StructureConstants) -> None:
    extended = central_extension(e2, omega(e2, 1.0))
    quotient = StructureConstants(dim=3, c=extended.c[1:, 1:, 1:])
    assert classify_algebra(quotient).kind is AlgebraKind.SOLVABLE2


_NONZERO = st.floats(min_value=0.01, max_value=100.0) | st.floats(min_value=-100.0, max_value=-0.01)


@given(lam=_NONZERO, mu=_NONZERO)
def test_any_two_nonzero_classes_are_weakly_isomorphic(lam: float, mu: float) -> None:
    e2 = e2_algebra()
    assert weakly_isomorphic(e2, omega(e2, lam), omega(e2, mu))
    assert extension_scaling(e2, omega(e2, lam), omega(e2, mu)) == pytest.approx(lam / mu)
