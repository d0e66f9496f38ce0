import pytest

from arboral import Instance, run

FIGURE1_ACCESS = (6, 1, 2, 4, 3, 5)
FIGURE1_RED = [(6, 1), (1, 2), (2, 3), (4, 4), (3, 5), (5, 6)]
FIGURE1_BLUE = [(6, 2), (1, 3), (6, 3), (2, 4), (6, 4), (2, 5), (4, 5), (4, 6), (6, 6)]

_acceptance_lines = []


@pytest.fixture
def fig1():
    return Instance(FIGURE1_ACCESS)


@pytest.fixture
def fig1_trace(fig1):
    return run(fig1)


@pytest.fixture
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _acceptance_lines:
        terminalreporter.write_line(line)
