import random

import pytest

from recolor.corpus import petersen
from recolor.graph_core import Graph, complete_graph, cycle_graph, path_graph


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running corpus sweeps")


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture
def pet() -> Graph:
    return petersen()


@pytest.fixture
def c4() -> Graph:
    return cycle_graph(4)


@pytest.fixture
def p3() -> Graph:
    return path_graph(3)



def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS, line

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(line(number))
