import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from branch_core import make_impedance  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def lossless():
    return make_impedance(0.0, 0.1)


@pytest.fixture
def lossy():
    """rho = 0.5, x = 0.1"""
    return make_impedance(0.05, 0.1)
