import numpy as np
import pytest

from slelab.dataclasses import ConformalChain, RunConfig
from slelab.driving import sample_sle_driving
from slelab.trace import polyline_trace
from slelab.verify import BUBBLE_FIXTURES, FIXTURE_SPACING


@pytest.fixture
def fixture_trace():
    """Polyline trace of a named bubble fixture."""
    def _make(name):
        return polyline_trace(BUBBLE_FIXTURES[name][0], FIXTURE_SPACING)
    return _make


@pytest.fixture(scope="session")
def kappa6_path():
    return sample_sle_driving(6.0, 2e-3, 1000, seed=11)


@pytest.fixture
def dyadic_chain():
    return ConformalChain(np.array([0.0, 0.5, -0.25]), np.array([0.25, 0.5, 0.125]))


@pytest.fixture
def hitprob_config():
    return RunConfig(
        task="hitprob",
        kappa=6.0,
        horizon=20.0,
        steps=400,
        seeds=(3, 5, 8),
        n_traces=64,
    )
