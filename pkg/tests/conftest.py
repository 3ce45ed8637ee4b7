from pathlib import Path

import pytest

from cpnet import parse_cpnet, parse_game

DATA = Path(__file__).parent / "data"

ACCEPTANCE_RESULTS = []


def load_net(name):
    return parse_cpnet((DATA / name).read_text())


@pytest.fixture
def cyclic4():
    return load_net("cyclic4.cpn")


@pytest.fixture
def acyclic4():
    return load_net("acyclic4.cpn")


@pytest.fixture
def twocycle():
    return load_net("twocycle.cpn")


@pytest.fixture
def redundant3():
    return load_net("redundant3.cpn")


@pytest.fixture
def prisoners():
    return parse_game((DATA / "prisoners.game").read_text())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
