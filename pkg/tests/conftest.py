import numpy as np
import pytest

from fastncut.graph import from_edges

G4_EDGES = [(0, 1, 1.0), (1, 2, 0.1), (2, 3, 1.0)]


@pytest.fixture
def g4():
    """Two strong pairs joined by a weak bridge: 0 -1.0- 1 -0.1- 2 -1.0- 3."""
    return from_edges(4, G4_EDGES)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
