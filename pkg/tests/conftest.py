import os

import pytest
from hypothesis import HealthCheck, settings

from ultraparadox.valued_fields import RationalFunctions, RationalsPadic, Trivial

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def q2():
    return RationalsPadic(2)


@pytest.fixture
def q3():
    return RationalsPadic(3)


@pytest.fixture
def f2s():
    """F_2(s) with the valuation at the place s."""
    return RationalFunctions(2, (0, 1))


@pytest.fixture
def f2s_q():
    """F_2(s) with the place X^2 + X + 1."""
    return RationalFunctions(2, (1, 1, 1))


@pytest.fixture
def qs_q():
    """Q(s) with the place 2X + 1."""
    return RationalFunctions(0, (1, 2))


@pytest.fixture
def trivial0():
    return Trivial(0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
