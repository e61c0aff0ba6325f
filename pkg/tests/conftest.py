from __future__ import annotations

import pytest
from hypothesis import settings

from genusbound import kernels
from genusbound.places import inequality_system
from genusbound.weil import make_elliptic_class

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

BACKENDS = ["python"] + (["compiled"] if kernels.compiled is not None else [])


def elliptic_system(q, traces, D):
    return inequality_system(q, [make_elliptic_class(q, t) for t in traces], D)


@pytest.fixture(scope="session")
def f2_system():
    return elliptic_system(2, range(-2, 3), 8)


@pytest.fixture(scope="session")
def f3_system():
    return elliptic_system(3, range(-3, 4), 12)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
