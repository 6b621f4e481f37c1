from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from bandgap import (
    ContinuedFraction,
    Ordering,
    cf_compare,
    compare,
    convergent_error_bounds,
    convergent_offset,
    convergents,
    expand,
    intermediate_error_bound,
    lower_error_bound,
    parse_cf,
    surd,
    value,
)
from bandgap.contfrac import compare_values
from bandgap.errors import IndexOutOfRange, ParseError, Truncated

from conftest import EXAMPLE_GAMMAS, GAMMA_1, GAMMA_2, GAMMA_3, mp_value, surds


def mp_cf(x, n):
    """First ``n`` coefficients by repeated floor/reciprocal at high precision."""
    out = []
    with mpmath.workdps(300):
        y = mp_value(x)
        for _ in range(n):
            c = int(mpmath.floor(y))
            out.append(c)
            y = 1 / (y - c)
    return out


@pytest.mark.parametrize(
    "x, text",
    [
        (GAMMA_1, "[0;1,1,2,(1)]"),
        (GAMMA_2, "[0;1,1,1,1,2,(1)]"),
        (GAMMA_3, "[0;1,1,2,1,2,(1)]"),
        (surd(1, 1, 5, 2), "[1;(1)]"),
        (surd(0, 1, 2), "[1;(2)]"),
        (surd(0, 1, 3), "[1;(1,2)]"),
        (Fraction(415, 93), "[4;2,6,7]"),
        (Fraction(-7, 3), "[-3;1,2]"),
    ],
)
def test_known_expansions(x, text):
    cf = expand(x)
    assert str(cf) == text
    assert parse_cf(text) == cf
    assert value(cf) == x


@given(surds())
@settings(max_examples=300, deadline=None)
def test_expansion_matches_mpmath(x):
    cf = expand(x)
    coeffs = [cf[j] for j in range(25)]
    assert coeffs == mp_cf(x, 25)


@given(surds())
@settings(max_examples=1000, deadline=None)
def test_round_trip_surd(x):
    assert value(expand(x)) == x


@given(st.fractions())
@settings(max_examples=300, deadline=None)
def test_round_trip_rational(x):
    assert value(expand(x)) == x


def test_canonical_forms():
    assert ContinuedFraction((2, 1)) == ContinuedFraction((3,))
    assert ContinuedFraction((1, 2, 2), (2, 2)) == ContinuedFraction((1,), (2,))
    assert ContinuedFraction((0, 1, 1, 2, 1), (1,)) == ContinuedFraction((0, 1, 1, 2), (1,))
    assert value(ContinuedFraction((1, 2, 2), (2, 2))) == surd(0, 1, 2)


def test_indexing():
    cf = expand(GAMMA_1)
    assert [cf[j] for j in range(7)] == [0, 1, 1, 2, 1, 1, 1]
    with pytest.raises(IndexOutOfRange):
        expand(Fraction(3, 2))[5]
    with pytest.raises(TypeError):
        len(cf)


def test_example_convergents():
    assert convergents(parse_cf("[0;1,1,1,1,2,(1)]"), 4)[-1].value == Fraction(3, 5)
    assert convergents(parse_cf("[0;1,1,2,1,2,(1)]"), 4)[-1].value == Fraction(4, 7)
    convs = convergents(expand(GAMMA_1), 6)
    assert [(c.p, c.q) for c in convs] == [(0, 1), (1, 1), (1, 2), (3, 5), (4, 7), (7, 12), (11, 19)]
    assert convergents(expand(GAMMA_2), 4)[-1].q == 5
    assert [c.q for c in convergents(expand(GAMMA_3), 4) if c.index % 2 == 0] == [1, 2, 7]


def test_truncated_warning():
    with pytest.warns(Truncated):
        out = convergents(expand(Fraction(3, 7)), 10)
    assert out[-1].value == Fraction(3, 7)


@given(surds(positive=True))
@settings(max_examples=200, deadline=None)
def test_interlacing_and_determinant(x):
    convs = convergents(expand(x), 20)
    evens = [c.value for c in convs if c.index % 2 == 0]
    odds = [c.value for c in convs if c.index % 2 == 1]
    assert all(a < b for a, b in zip(evens, evens[1:]))
    assert all(a > b for a, b in zip(odds, odds[1:]))
    assert all(compare(e, x) < 0 for e in evens)
    assert all(compare(o, x) > 0 for o in odds)
    for a, b in zip(convs, convs[1:]):
        assert b.p * a.q - a.p * b.q == (-1) ** a.index


def _error_product(x, c):
    # q_n * |q_n*x - p_n| exactly
    d = x * c.q - c.p
    return d * c.q if d > 0 else -d * c.q


def test_error_bounds_example_n2():
    b = convergent_error_bounds(expand(GAMMA_1), 2)
    assert b == (Fraction(3, 10), Fraction(1, 4), Fraction(1, 3))


@pytest.mark.parametrize("x", EXAMPLE_GAMMAS + (surd(1, 1, 5, 2), surd(0, 1, 7), surd(3, 2, 13, 5)))
def test_error_sandwich(x):
    cf = expand(x)
    convs = convergents(cf, 30)
    for n in range(1, 31):
        b = convergent_error_bounds(cf, n)
        e = _error_product(x, convs[n])
        assert b.weak_lower <= b.lower
        assert compare(b.lower, e) < 0 < compare(b.upper, e)
    assert compare(lower_error_bound(cf, 0), _error_product(x, convs[0])) <= 0


def test_error_bounds_need_n_at_least_one():
    with pytest.raises(IndexOutOfRange):
        convergent_error_bounds(expand(GAMMA_1), 0)
    with pytest.raises(IndexOutOfRange):
        convergent_error_bounds(expand(Fraction(7, 5)), 1)


def test_intermediate_bound_between_convergents():
    # every p/q strictly between p_{n-1}/q_{n-1} and p_{n+1}/q_{n+1}, with q < q_{n+1}, respects 1/c_{n+1}
    x = surd(3, 2, 13, 5)
    cf = expand(x)
    convs = convergents(cf, 8)
    for n in range(1, 7):
        lo, hi = sorted((convs[n - 1].value, convs[n + 1].value))
        bound = intermediate_error_bound(cf, n)
        for q in range(1, convs[n + 1].q):
            for p in range(int(lo * q) - 1, int(hi * q) + 2):
                f = Fraction(p, q)
                if lo < f < hi and f.denominator == q and f != convs[n].value:
                    d = x * q - p
                    assert compare(abs_surd(d) * q, bound) >= 0


def abs_surd(d):
    return d if d > 0 else -d


@pytest.mark.parametrize("x", EXAMPLE_GAMMAS)
def test_offset_residual(x):
    cf = expand(x)
    convs = convergents(cf, 30)
    for n in range(0, 31):
        exact_off = mp_value(x) - mpmath.mpf(convs[n].p) / convs[n].q
        got = convergent_offset(cf, n)
        assert abs(mpmath.mpf(got.numerator) / got.denominator - exact_off) <= 1e-12


@given(surds(), surds())
@settings(max_examples=300, deadline=None)
def test_cf_compare_matches_values(x, y):
    a, b = expand(x), expand(y)
    assert cf_compare(a, b) == compare(x, y) == compare_values(a, b)


@given(st.fractions(max_denominator=50), surds())
@settings(max_examples=200, deadline=None)
def test_cf_compare_finite_vs_infinite(x, y):
    assert cf_compare(expand(x), expand(y)) == compare(x, y)
    assert cf_compare(expand(x), expand(x)) == Ordering.EQ


def test_cf_compare_examples():
    a = parse_cf("[0;1,1,2,(1)]")
    b = parse_cf("[0;1,1,1,1,2,(1)]")
    assert cf_compare(a, b) == Ordering.LT  # odd index 3: the larger coefficient gives the smaller value
    assert cf_compare(parse_cf("[0;1,1,1]"), a) == Ordering.GT  # 2/3 > 0.58018
    assert cf_compare(parse_cf("[0;2]"), parse_cf("[0;1,1]")) == Ordering.EQ
    assert cf_compare(a, a) == Ordering.EQ
    # a finite prefix of odd length index lies above
    assert cf_compare(parse_cf("[1;2]"), parse_cf("[1;2,3]")) == Ordering.GT


@pytest.mark.parametrize("text", ["[0;1,,]x", "0;1,2", "[0;1,()]", "[a;1]"])
def test_parse_cf_rejects(text):
    with pytest.raises(ParseError):
        parse_cf(text)
