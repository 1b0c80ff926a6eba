import numpy as np
import pytest

from cutproject.scheme import fibonacci_scheme, make_scheme


@pytest.fixture
def fib():
    return fibonacci_scheme()


@pytest.fixture
def ident():
    return make_scheme(np.eye(2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
