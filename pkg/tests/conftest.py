from fractions import Fraction

import mpmath
import pytest
from hypothesis import strategies as st

from bandgap import surd

mpmath.mp.dps = 60

GAMMA_1 = surd(15, -1, 5, 22)
GAMMA_2 = surd(99, -1, 5, 158)
GAMMA_3 = surd(209, -1, 5, 358)
EXAMPLE_GAMMAS = (GAMMA_1, GAMMA_2, GAMMA_3)


def mp_value(x):
    """High-precision oracle value, independent of the package's own float conversion."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return (x.p + x.r * mpmath.sqrt(x.D)) / x.q


@st.composite
def surds(draw, irrational=True, positive=False):
    p = draw(st.integers(-200, 200))
    r = draw(st.integers(1, 30)) * draw(st.sampled_from([1, -1]))
    D = draw(st.sampled_from([2, 3, 5, 6, 7, 8, 10, 11, 12, 13, 18, 45, 99]))
    q = draw(st.integers(1, 150)) * draw(st.sampled_from([1, -1]))
    x = surd(p, r, D, q)
    if positive and x < 0:
        x = -x
    return x


@st.composite
def exact_reals(draw):
    if draw(st.booleans()):
        return Fraction(draw(st.integers(-500, 500)), draw(st.integers(1, 60)))
    return draw(surds())


@pytest.fixture(params=range(3), ids=["gamma1", "gamma2", "gamma3"])
def example_gamma(request):
    return EXAMPLE_GAMMAS[request.param]


# one PASS/FAIL line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[n])
