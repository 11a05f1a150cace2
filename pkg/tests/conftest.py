from collections.abc import Callable
from typing import Literal

import numpy as np
import pytest
from scipy.stats import special_ortho_group

from modelgeom.core.models import StructureConstants
from modelgeom.geometry.catalog.nonflat import e2_algebra, sl2_algebra, so3_algebra


@pytest.fixture
def anyio_backend() -> Literal["asyncio"]:
    return "asyncio"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def basis_change(rng: np.random.Generator) -> Callable[..., np.ndarray]:
    """Random basis changes U diag(s) V with singular values log-uniform in [1, max_condition]."""

    def draw(dim: int = 3, max_condition: float = 1e3) -> np.ndarray:
        u = special_ortho_group.rvs(dim, random_state=rng)
        v = special_ortho_group.rvs(dim, random_state=rng)
        s = np.exp(rng.uniform(0.0, np.log(max_condition), size=dim))
        return u @ np.diag(s) @ v

    return draw


@pytest.fixture
def abelian() -> StructureConstants:
    return StructureConstants.zeros(3)


@pytest.fixture
def heisenberg() -> StructureConstants:
    return StructureConstants.from_brackets(3, {(0, 1): [0, 0, 1]})


@pytest.fixture
def h2xr() -> StructureConstants:
    return StructureConstants.from_brackets(3, {(0, 1): [0, 1, 0]})


@pytest.fixture
def so3() -> StructureConstants:
    return so3_algebra()


@pytest.fixture
def sl2() -> StructureConstants:
    return sl2_algebra()


@pytest.fixture
def e2() -> StructureConstants:
    return e2_algebra()
