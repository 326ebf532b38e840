import pytest

from patcharray import AngularGrid, default_geometry, sample_pattern


@pytest.fixture(scope="session")
def geo():
    return default_geometry()


@pytest.fixture(scope="session")
def grid():
    return AngularGrid(0.5, 0.5)


@pytest.fixture(scope="session")
def element(geo, grid):
    return sample_pattern(geo, grid)


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line; printed in the terminal summary."""

    def _report(criterion, passed, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
