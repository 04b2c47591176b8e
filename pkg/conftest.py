import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from ff_algebra import field_of_order  # noqa: E402
from group_core import AffineGroup, FunctionGraphGroup, multiplicative_subgroup  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full acceptance grids (run with -m slow)")


@pytest.fixture
def f5():
    return field_of_order(5)


@pytest.fixture
def f7():
    return field_of_order(7)


@pytest.fixture
def f9():
    return field_of_order(9)


@pytest.fixture
def aff7_pm1(f7):
    return AffineGroup(f7, (1, 6))


@pytest.fixture
def aff13_cubic():
    f = field_of_order(13)
    return AffineGroup(f, multiplicative_subgroup(f, 3))


@pytest.fixture
def fg31():
    return FunctionGraphGroup(field_of_order(3), 1, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
