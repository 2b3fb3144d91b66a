from fractions import Fraction

import pytest

from cutstack.construction import explicit_params, valpha_params

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def p221():
    return explicit_params(2, 1, 1, n_max=3)


@pytest.fixture(scope="session")
def va():
    return valpha_params(Fraction(1, 2), "n^2", n_max=5, bootstrap=(2, 0, 1))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
