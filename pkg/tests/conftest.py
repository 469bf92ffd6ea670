import random

import pytest

from tcplog.generate import random_program
from tcplog.parser import parse_program

P_EX_TEXT = """\
0.6::e(a,b).
0.5::e(b,c).
0.3::e(a,c).
path(X,Y) :- e(X,Y).
path(X,Y) :- e(X,Z), path(Z,Y).
"""


@pytest.fixture
def p_ex_text():
    return P_EX_TEXT


@pytest.fixture
def p_ex():
    return parse_program(P_EX_TEXT)


@pytest.fixture
def p_ex_file(tmp_path):
    path = tmp_path / "fixture.pl"
    path.write_text(P_EX_TEXT)
    return str(path)


def corpus(n, seed=20240601, **kw):
    """Deterministic list of random programs shared by the property suites."""
    rng = random.Random(seed)
    return [random_program(rng, **kw) for _ in range(n)]


CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
