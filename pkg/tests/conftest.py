import pytest

from anharm import DoubleWellParams, spectrum
from anharm.perturbation import find_avoided_crossing

SHALLOW = DoubleWellParams(-2.0, 1.0)
DEEP = DoubleWellParams(-4.0, 1.0)

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def shallow():
    return SHALLOW


@pytest.fixture(scope="session")
def deep():
    return DEEP


@pytest.fixture(scope="session")
def shallow40():
    return spectrum(SHALLOW, 40)


@pytest.fixture(scope="session")
def deep_crossing():
    return find_avoided_crossing(DEEP, 50, 1, (0.3, 1.2))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])
