import numpy as np
import pytest

from support import ACCEPTANCE_LINES, NONUNIFORM


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=NONUNIFORM, ids=lambda lat: lat.family.value)
def lattice(request):
    return request.param
