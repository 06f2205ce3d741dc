from fractions import Fraction

import pytest

from container_lab.hypergraph import Hypergraph, vset


def hg(n, *edges):
    return Hypergraph(n, edges)


STAR = Hypergraph(4, [[0, 1], [0, 2], [0, 3]])
EDGE = Hypergraph(2, [[0, 1]])
HALF = Fraction(1, 2)


@pytest.fixture
def star():
    return STAR


@pytest.fixture
def edge():
    return EDGE


__all__ = ["hg", "vset", "STAR", "EDGE", "HALF"]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[key])
