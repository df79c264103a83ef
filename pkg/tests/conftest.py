import numpy as np
import pytest

# One line per acceptance criterion, filled by tests/test_acceptance.py.
# Printed in the terminal summary because pytest's fd-level capture swallows
# direct writes (even to sys.__stdout__) for passing tests.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def gauss_pair(rng):
    """Moderate same-law pair, big enough for every metric's preconditions."""
    return rng.normal(size=(240, 6)), rng.normal(size=(220, 6))
