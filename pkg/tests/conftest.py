import numpy as np
import pytest

from noisefilter import Dataset


@pytest.fixture
def make_random_dataset():
    def make(n, d=3, k=2, seed=0):
        rng = np.random.default_rng(seed)
        return Dataset(rng.normal(size=(n, d)), rng.integers(0, k, size=n), k)

    return make
