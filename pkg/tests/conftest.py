import numpy as np
import pytest

from mixflow.config import RunConfig
from mixflow.thermo import ColdPressureParams, MixtureSpec

ACCEPTANCE_LINES = []


@pytest.fixture
def cold():
    return ColdPressureParams(1.0, 1.0, 2.0, 2.0)


@pytest.fixture
def spec2(cold):
    return MixtureSpec((1.0, 2.0), (0.0, 0.0), (0.0, 0.0), 1.0, cold)


@pytest.fixture
def default_cfg():
    return RunConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
