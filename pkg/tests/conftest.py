import numpy as np
import pytest

from transop import fixtures


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[(1.0, 1.0), (4.0, 1.0), (2.0, 3.0)], ids=lambda ab: f"sys2{ab}")
def sys2_ab(request):
    a, b = request.param
    return fixtures.sys2(a, b), a, b


# acceptance criteria record one line each here; printed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
