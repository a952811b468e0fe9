from pathlib import Path

import numpy as np
import pytest

from bounds import MatrixSet
from config.matrix_sets import ANDO_SHIH, THREE_MATRICES


FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240501)


@pytest.fixture
def ando_shih() -> MatrixSet:
    return MatrixSet.of(*ANDO_SHIH, name="ando_shih")


@pytest.fixture
def three_matrices() -> MatrixSet:
    return MatrixSet.of(*THREE_MATRICES, name="three_matrices")


@pytest.fixture
def random_set(rng):
    """Factory for matrix sets with entries uniform in [-1, 1]."""

    def _make(n: int, m: int) -> MatrixSet:
        return MatrixSet.of(*(rng.uniform(-1.0, 1.0, size=(n, n)) for _ in range(m)))

    return _make
