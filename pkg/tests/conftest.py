import math

import pytest
from hypothesis import settings

from nonlocal_decay import Grid, make_symbol

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

C_WAVE = 2.0 / math.sqrt(math.pi)  # speed with delta_c = pi/4


@pytest.fixture(scope="session")
def whitham():
    return make_symbol("whitham")


@pytest.fixture(scope="session")
def bidirectional():
    return make_symbol("bidirectional-whitham")


@pytest.fixture(scope="session")
def capillary():
    return make_symbol("capillary-whitham", beta=0.5)


@pytest.fixture(scope="session")
def kdv():
    return make_symbol("kdv-oracle")


@pytest.fixture(scope="session")
def grid80():
    return Grid(2**14, 80.0)


# Acceptance verdicts, one line per criterion, echoed in the terminal summary.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
