from itertools import product

import pytest
from hypothesis import HealthCheck, settings

from vecbkk import fixtures
from vecbkk.polyhedra import convex_hull

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def simplex(n, k=1):
    return convex_hull([(0,) * n] + [tuple(k * int(i == j) for j in range(n)) for i in range(n)])


def box(n, k=1):
    return convex_hull(product(*[(0, k)] * n))


@pytest.fixture(scope="session")
def sq2():
    return fixtures.sq2()


@pytest.fixture(scope="session")
def u23():
    return fixtures.u23()


@pytest.fixture(scope="session")
def hyp4():
    return fixtures.hyp4()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
