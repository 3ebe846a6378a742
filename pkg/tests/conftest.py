import numpy as np
import pytest

from tfapprox import make_config

CONFIG_MATRIX = [(4, 2, 2), (12, 6, 3), (24, 4, 2), (60, 12, 4), (210, 30, 5),
                 (12, 12, 12), (12, 6, 1), (8, 8, 1), (7, 7, 7), (6, 1, 1)]


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=CONFIG_MATRIX, ids=lambda t: "d{}-p{}-s{}".format(*t))
def config(request):
    return make_config(*request.param)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
