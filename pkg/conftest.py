"""
Pytest configuration and fixtures for groupmap tests.
"""

import numpy as np
import pytest

from apps.forward.models import ModelParams
from apps.lattice.models import LabelMap, LatticeDims


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run calibration and reproduction tests marked slow",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


# =============================================================================
# Lattice Fixtures
# =============================================================================


@pytest.fixture
def dims_4x4():
    """A 4x4 lattice."""
    return LatticeDims(4, 4)


@pytest.fixture
def checkerboard_3x3():
    """A 3x3 checkerboard of {0, 1}."""
    return LabelMap(np.indices((3, 3)).sum(axis=0) % 2, 2)


@pytest.fixture
def striped_map():
    """An 8x8 map with label = column // 2, K = 4."""
    return LabelMap(np.tile(np.arange(8) // 2, (8, 1)), 4)


# =============================================================================
# Parameter Fixtures
# =============================================================================


@pytest.fixture
def uniform_params_k10():
    """Uniform pi over 10 labels, epsilon = 0.01, moderate coupling."""
    return ModelParams(pi=np.full(10, 0.1), epsilon=0.01, beta_x=0.5, beta_h=0.5)


@pytest.fixture
def binary_params():
    """K = 2 parameters with a noisy mask distribution."""
    return ModelParams(pi=np.array([0.3, 0.7]), epsilon=0.1, beta_x=0.5, beta_h=0.4)


# =============================================================================
# Random Fixtures
# =============================================================================


@pytest.fixture
def rng():
    """A fixed-seed numpy generator for building test inputs."""
    return np.random.default_rng(20240601)
