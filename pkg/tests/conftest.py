"""Shared fixtures: canonical generating functions, phases and grids."""
import numpy as np
import pytest

from fiolab.grids import GridSpec
from fiolab.phases import GeneratingFunction, special_phase


@pytest.fixture(scope="session")
def S_xt():
    """The identity-case generating function S = x*theta."""
    return GeneratingFunction.from_expr("x*theta", 1)


@pytest.fixture(scope="session")
def S_chirp():
    """The quadratic chirp S = x*theta + theta^2/2."""
    return GeneratingFunction.from_expr("x*theta + theta**2/2", 1)


@pytest.fixture(scope="session")
def phi_xt(S_xt):
    """phi = (x - y)*theta."""
    return special_phase(S_xt)


@pytest.fixture(scope="session")
def grid256():
    return GridSpec(1, 8.0, 256, dft_aligned=True)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
