import numpy as np
import pytest

from tailpair.dgp import dgp_from_table, simulate_dgp
from tailpair.sample import BivariateSample, TailConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def toy_sample():
    # hand-checkable 4-point sample used across estimator tests
    return BivariateSample(xs=[1.0, 5.0, 3.0, 9.0], ys=[2.0, 8.0, 1.0, 7.0])


@pytest.fixture
def toy_config():
    return TailConfig(k=2, k1=2, k2=2)


@pytest.fixture(scope="session")
def dgp1_sample_2000():
    return simulate_dgp(dgp_from_table(1), 2000, seed=2024)


@pytest.fixture(scope="session")
def dgp1_config_2000():
    return TailConfig(k=200, k1=200, k2=200)
