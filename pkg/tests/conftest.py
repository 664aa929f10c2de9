import numpy as np
import pytest

from dsgchain.model import ChainParams, Driving, PotentialKind, TimeGrid

DSG = PotentialKind.DOUBLE_SINE_GORDON
SG = PotentialKind.SINE_GORDON
PHI6 = PotentialKind.PHI6_KLEIN_GORDON


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_driven():
    """Short driven, damped run used by several modules."""
    from dsgchain.integrator import run_simulation

    params = ChainParams(10, 2.0, 0.05, DSG)
    return run_simulation(params, Driving(0.8, 0.9, 50.0), TimeGrid(0.05, 20.0))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
