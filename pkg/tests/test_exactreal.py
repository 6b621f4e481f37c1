import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from bandgap import (
    Ordering,
    QuadraticSurd,
    ceil,
    compare,
    exact,
    floor,
    format_exact,
    frac,
    invert,
    parse_exact,
    scale_add,
    surd,
    to_float,
)
from bandgap.errors import DivisionByZero, ParseError, Unsupported

from conftest import exact_reals, mp_value, surds


def test_canonical_form_splits_square_factor():
    x = surd(0, 1, 8)
    assert (x.p, x.r, x.D, x.q) == (0, 2, 2, 1)
    assert surd(2, 2, 5, 4) == surd(1, 1, 5, 2)


def test_collapse_to_rational():
    assert surd(3, 2, 4, 1) == Fraction(7)
    assert isinstance(surd(3, 0, 5, 2), Fraction)
    assert surd(0, 1, 2) * surd(0, 1, 2) == 2
    assert isinstance(surd(0, 1, 2) * surd(0, 1, 2), Fraction)


def test_product_of_pure_surds_across_fields():
    assert surd(0, 1, 2) * surd(0, 1, 3) == surd(0, 1, 6)


def test_mixed_field_sum_is_unsupported():
    with pytest.raises(Unsupported):
        surd(1, 1, 2) + surd(0, 1, 3)


def test_example_gamma_floats():
    g = surd(15, -1, 5, 22)
    assert to_float(g) == pytest.approx(0.5801787282954, abs=1e-12)
    assert floor(g) == 0 and ceil(g) == 1


def test_zero_division():
    with pytest.raises(DivisionByZero):
        invert(Fraction(0))
    with pytest.raises((DivisionByZero, ZeroDivisionError)):
        surd(1, 1, 2, 0)


def test_bool_rejected():
    with pytest.raises(TypeError):
        exact(True)


@given(exact_reals(), exact_reals())
@settings(max_examples=300, deadline=None)
def test_compare_matches_mpmath(x, y):
    mx, my = mp_value(x), mp_value(y)
    expected = Ordering.EQ if abs(mx - my) < mpmath.mpf(10) ** -50 else (Ordering.LT if mx < my else Ordering.GT)
    assert compare(x, y) == expected
    assert compare(y, x) == -expected


@given(surds(), surds())
@settings(max_examples=200, deadline=None)
def test_compare_across_fields(x, y):
    mx, my = mp_value(x), mp_value(y)
    if abs(mx - my) > mpmath.mpf(10) ** -40:
        assert (compare(x, y) < 0) == (mx < my)


@given(exact_reals())
@settings(max_examples=300, deadline=None)
def test_floor_ceil_frac(x):
    assert floor(x) == int(mpmath.floor(mp_value(x)))
    assert ceil(x) == int(mpmath.ceil(mp_value(x)))
    f = frac(x)
    assert 0 <= f < 1
    assert f + floor(x) == x


@given(surds(), st.integers(-50, 50), st.integers(-10, 10))
@settings(max_examples=200, deadline=None)
def test_field_arithmetic(x, m, b):
    y = scale_add(x, m, b)
    assert abs(mp_value(y) - (m * mp_value(x) + b)) < mpmath.mpf(10) ** -40
    inv = invert(x)
    assert inv * x == 1
    assert abs(mp_value(inv) - 1 / mp_value(x)) < mpmath.mpf(10) ** -40


@given(surds(), surds())
@settings(max_examples=200, deadline=None)
def test_same_field_ring_ops(x, y):
    y = surd(y.p, y.r, x.D, y.q)  # same field as x
    for got, want in ((x + y, mp_value(x) + mp_value(y)), (x - y, mp_value(x) - mp_value(y)),
                      (x * y, mp_value(x) * mp_value(y))):
        assert abs(mp_value(got) - want) < mpmath.mpf(10) ** -40
    if y != 0:
        assert abs(mp_value(x / y) - mp_value(x) / mp_value(y)) < mpmath.mpf(10) ** -40


@given(exact_reals())
@settings(max_examples=300, deadline=None)
def test_to_float_correctly_rounded(x):
    f = to_float(x)
    # the nearest double to the mpmath oracle
    assert f == float(mpmath.mpf(mp_value(x)))


@given(surds())
@settings(max_examples=100, deadline=None)
def test_to_float_high_precision(x):
    v = to_float(x, 200)
    assert abs(v - mp_value(x)) <= abs(mp_value(x)) * mpmath.mpf(2) ** -190 + mpmath.mpf(10) ** -55


def test_to_float_rejects_low_precision():
    with pytest.raises(ValueError):
        to_float(Fraction(1, 3), 20)


@given(exact_reals())
@settings(max_examples=300, deadline=None)
def test_parse_format_round_trip(x):
    assert parse_exact(format_exact(x)) == x


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3", Fraction(3)),
        ("-7/4", Fraction(-7, 4)),
        ("sqrt(5)", surd(0, 1, 5)),
        ("-sqrt(2)", surd(0, -1, 2)),
        ("(15-1*sqrt(5))/22", surd(15, -1, 5, 22)),
        ("(1+sqrt(5))/2", surd(1, 1, 5, 2)),
        ("(0+1*sqrt(2))/1", surd(0, 1, 2)),
    ],
)
def test_parse_examples(text, expected):
    assert parse_exact(text) == expected


def test_format_examples():
    assert format_exact(surd(15, -1, 5, 22)) == "(15-1*sqrt(5))/22"
    assert format_exact(Fraction(3, 4)) == "3/4"


@pytest.mark.parametrize("text", ["(1+sqrt(5)/2", "(1 sqrt(5))/2", "1+sqrt(5)/2", "", "abc", "1/0"])
def test_parse_rejects(text):
    with pytest.raises((ParseError, DivisionByZero)):
        parse_exact(text)


def test_decimal_means_float_mode():
    assert parse_exact("0.25") == 0.25 and isinstance(parse_exact("0.25"), float)


def test_float_comparison_is_exact():
    s = surd(0, 1, 2)
    below, above = math.nextafter(math.sqrt(2), 0), math.sqrt(2)  # the double sqrt(2) rounds up
    assert below < s < above
    assert s != math.sqrt(2)


def test_float_arithmetic_refused():
    with pytest.raises(TypeError):
        surd(0, 1, 2) + 0.5


def test_hash_consistent_with_eq():
    assert hash(surd(2, 2, 5, 4)) == hash(surd(1, 1, 5, 2))
    assert isinstance(surd(1, 1, 5, 2), QuadraticSurd)


def test_documented_examples():
    g = surd(15, -1, 5, 22)
    s5 = surd(0, 1, 5)
    assert compare(Fraction(1, 2), Fraction(1, 2)) == Ordering.EQ
    assert compare(g, Fraction(2, 3)) == Ordering.LT
    assert compare(s5, 2) == Ordering.GT
    assert floor(g) == 0 and floor(s5) == 2 and floor(2 * g) == 1
    assert scale_add(Fraction(1, 2), 3, 0) == Fraction(3, 2)
    assert scale_add(g, 2, 0) == surd(15, -1, 5, 11)
    assert scale_add(s5, 0, Fraction(7, 3)) == Fraction(7, 3)
    assert invert(Fraction(2, 3)) == Fraction(3, 2)
    assert invert(g) == surd(15, 1, 5, 10)
    assert invert(Fraction(1)) == 1
    assert to_float(Fraction(1, 2)) == 0.5
    assert to_float(s5) == 2.2360679774997896
    # 22 * 0.5801786520 = 12.76393 differs from 15 - sqrt(5) = 12.763932022 in the 7th digit
    assert abs(to_float(g) - 0.5801787282954) < 1e-12


def test_large_discriminant_stays_fast():
    # a square factor made of large primes; the cofactor test removes it without factoring
    big = (2 ** 127 - 1) ** 2 * 3
    x = surd(1, 1, big, 2)
    assert x.D == 3 and x.r == 2 ** 127 - 1
    assert x + x.conjugate() == 1
