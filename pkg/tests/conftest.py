import numpy as np
import pytest

from ubssvc import MixingMatrix, default_mixing_matrix


@pytest.fixture
def matrix() -> MixingMatrix:
    return default_mixing_matrix()


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)
