import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def gaussian(m, n, seed):
    return np.random.default_rng(seed).standard_normal((m, n))


def psd(n, seed, rank=None):
    X = np.random.default_rng(seed).standard_normal((rank or n, n))
    G = X.T @ X
    return (G + G.T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
