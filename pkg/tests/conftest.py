import numpy as np
import pytest

from chamber_sampler.geometry import random_general_position
from chamber_sampler.rs import ArrangementSpec

# four general-position centered lines in the plane (8 chambers)
FOUR_LINES = np.array([
    [1.0, 0.0],
    [0.0, 1.0],
    [1.0, 1.0],
    [1.0, -2.0],
])


@pytest.fixture
def four_lines():
    return ArrangementSpec.from_vectors(FOUR_LINES)


@pytest.fixture
def orthogonal_lines():
    return ArrangementSpec(np.eye(2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def gp_spec(k, m, seed):
    return ArrangementSpec(random_general_position(k, m, np.random.default_rng(seed)))


# one line per acceptance criterion, printed after the test summary
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
