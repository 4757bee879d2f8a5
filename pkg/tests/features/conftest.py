import numpy as np
import pytest

from pycasimir import ALL_INDICES, beta_poly

# Rows of the coefficient table with a non-zero Ei polynomial
EI_INDICES = [i for i in ALL_INDICES if any(beta_poly(i).ei_part)]

@pytest.fixture
def beta_index(request):
    return request.param

@pytest.fixture
def ei_index(request):
    return request.param

@pytest.fixture
def rng():
    return np.random.default_rng(1234)

def pytest_generate_tests(metafunc):
    if "beta_index" in metafunc.fixturenames:
        metafunc.parametrize("beta_index", ALL_INDICES, indirect=True,
                             ids=str)
    if "ei_index" in metafunc.fixturenames:
        metafunc.parametrize("ei_index", EI_INDICES, indirect=True, ids=str)
