import pytest

from instantons.background import KinkPath
from instantons.fluctuation import build_stability_operator
from instantons.model import DoubleWellParams

# Lines collected by the acceptance tests, echoed at the end of the run.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def unit():
    return DoubleWellParams()


@pytest.fixture(scope="session")
def kink_op_30(unit):
    return build_stability_operator(KinkPath(unit), L=30.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
