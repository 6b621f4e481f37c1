"""Exact positive reals: rationals and quadratic surds ``(p + r*sqrt(D))/q``.

Rationals are plain :class:`fractions.Fraction` objects.  Quadratic surds
live in :class:`QuadraticSurd`, which interoperates with ``Fraction`` and
``int`` through the usual operators and compares exactly against floats.
Floors and comparisons never touch floating point.
"""

from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from typing import Union

import mpmath

from .errors import DivisionByZero, ParseError, Unsupported

__all__ = [
    "ExactReal",
    "Ordering",
    "QuadraticSurd",
    "ceil",
    "compare",
    "exact",
    "floor",
    "format_exact",
    "frac",
    "invert",
    "is_exact",
    "parse_exact",
    "scale_add",
    "surd",
    "to_float",
]


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


_TRIAL_LIMIT = 1000
_FACTOR_LIMIT = 10 ** 30  # beyond this, square factors above _TRIAL_LIMIT may remain


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, core)`` with ``n == s*s*core``.

    ``core`` is square-free whenever ``n`` can be factored cheaply.  Huge
    inputs (continued-fraction discriminants grow exponentially with the
    period) only get small factors and a perfect-square cofactor removed;
    values are compared by magnitude, so a residual square factor is harmless.
    """
    s, core = 1, 1
    f = 2
    while f <= _TRIAL_LIMIT and f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        s *= f ** (e // 2)
        if e % 2:
            core *= f
        f += 1 if f == 2 else 2
    if n > 1:
        t = math.isqrt(n)
        if t * t == n:
            s, n = s * t, 1
        elif f * f <= n < _FACTOR_LIMIT:
            from sympy import factorint

            for prime, e in factorint(n).items():
                s *= prime ** (e // 2)
                if e % 2:
                    core *= prime
            n = 1
    return s, core * n


def _rebase(x: QuadraticSurd, D: int):
    """``x`` written over ``sqrt(D)`` as raw ``(p, r, q)``, or None if the fields differ."""
    if x.D == D:
        return x.p, x.r, x.q
    t = math.isqrt(x.D * D)
    if t * t != x.D * D:
        return None
    # sqrt(D_x) = (t/D) * sqrt(D)
    return x.p * D, x.r * t, x.q * D


def _sign(a: int, b: int, D: int) -> int:
    """Sign of ``a + b*sqrt(D)`` for integers a, b and D >= 0."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0 or D == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2*D
    d = a * a - b * b * D
    return sa if d > 0 else (sb if d < 0 else 0)


class QuadraticSurd:
    """The irrational number ``(p + r*sqrt(D))/q``.

    Instances are normalized: ``D > 1`` with its square factors removed,
    ``r != 0``, ``q > 0`` and ``gcd(p, r, q) == 1``.  Use :func:`surd` to build values;
    it collapses to a ``Fraction`` whenever the input is rational.
    """

    __slots__ = ("p", "r", "D", "q")

    p: int
    r: int
    D: int
    q: int

    def __init__(self, p: int, r: int, D: int, q: int):
        # raw constructor; callers guarantee canonical form
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticSurd is immutable")

    def __reduce__(self):
        return (QuadraticSurd, (self.p, self.r, self.D, self.q))

    # -- conversions -----------------------------------------------------

    def __repr__(self):
        return f"QuadraticSurd({self.p}, {self.r}, {self.D}, {self.q})"

    def __str__(self):
        return format_exact(self)

    def __float__(self):
        return to_float(self)

    def __floor__(self):
        return floor(self)

    def __ceil__(self):
        return ceil(self)

    def __bool__(self):
        return True

    def __hash__(self):
        # invariant under rewriting sqrt(D) as (s/t)*sqrt(D*t*t/s/s)
        return hash((QuadraticSurd, Fraction(self.p, self.q), Fraction(self.r * self.r * self.D, self.q * self.q), self.r > 0))

    def conjugate(self) -> QuadraticSurd:
        """Galois conjugate ``(p - r*sqrt(D))/q``."""
        return QuadraticSurd(self.p, -self.r, self.D, self.q)

    # -- arithmetic ------------------------------------------------------

    def __neg__(self):
        return QuadraticSurd(-self.p, -self.r, self.D, self.q)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if _sign(self.p, self.r, self.D) < 0 else self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, Fraction):
            a, b = other.numerator, other.denominator
            return _make(self.p * b + a * self.q, self.r * b, self.D, self.q * b)
        o = _rebase(other, self.D)
        if o is None:
            raise Unsupported(f"sum of sqrt({self.D}) and sqrt({other.D}) is not a quadratic surd")
        op, orr, oq = o
        return _make(self.p * oq + op * self.q, self.r * oq + orr * self.q, self.D, self.q * oq)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, Fraction):
            a, b = other.numerator, other.denominator
            return _make(self.p * a, self.r * a, self.D, self.q * b)
        o = _rebase(other, self.D)
        if o is not None:
            op, orr, oq = o
            return _make(self.p * op + self.r * orr * self.D, self.p * orr + op * self.r, self.D, self.q * oq)
        if self.p == 0 and other.p == 0:
            return surd(0, self.r * other.r, self.D * other.D, self.q * other.q)
        raise Unsupported(f"product of sqrt({self.D}) and sqrt({other.D}) terms is not a quadratic surd")

    __rmul__ = __mul__

    def reciprocal(self) -> QuadraticSurd:
        n = self.p * self.p - self.r * self.r * self.D
        return _make(self.q * self.p, -self.q * self.r, self.D, n)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, Fraction):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.reciprocal()

    # -- comparison ------------------------------------------------------

    def _cmp(self, other):
        other = _coerce(other, floats=True)
        if other is NotImplemented:
            return other
        return int(compare(self, other))

    def __eq__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0


ExactReal = Union[Fraction, QuadraticSurd]


def _coerce(x, floats=False):
    if isinstance(x, (Fraction, QuadraticSurd)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    # floats convert exactly, but only for comparisons
    if floats and isinstance(x, float) and math.isfinite(x):
        return Fraction(x)
    return NotImplemented


def surd(p: int, r: int, D: int, q: int = 1) -> ExactReal:
    """Canonical value of ``(p + r*sqrt(D))/q``."""
    if D < 0:
        raise ValueError("D must be non-negative")
    if r != 0 and D > 1:
        s, D = _squarefree_split(D)
        r *= s
    return _make(p, r, D, q)


def _make(p: int, r: int, D: int, q: int) -> ExactReal:
    # D has already been through _squarefree_split
    if q == 0:
        raise DivisionByZero("zero denominator")
    if r == 0 or D == 0:
        return Fraction(p, q)
    if D == 1:
        return Fraction(p + r, q)
    if q < 0:
        p, r, q = -p, -r, -q
    g = math.gcd(math.gcd(p, r), q)
    if g > 1:
        p, r, q = p // g, r // g, q // g
    return QuadraticSurd(p, r, D, q)


def exact(x) -> ExactReal:
    """Coerce ints, Fractions, surds and exact-real strings."""
    if isinstance(x, str):
        v = parse_exact(x)
        if isinstance(v, float):
            raise ParseError(f"{x!r} is not an exact real")
        return v
    if isinstance(x, bool):
        raise TypeError("bool is not an exact real")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, QuadraticSurd)):
        return x
    raise TypeError(f"cannot treat {type(x).__name__} as an exact real")


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticSurd)) and not isinstance(x, bool)


def _parts(x: ExactReal) -> tuple[int, int, int, int]:
    if isinstance(x, QuadraticSurd):
        return x.p, x.r, x.D, x.q
    return x.numerator, 0, 0, x.denominator


def compare(x, y) -> Ordering:
    """Exact three-way comparison of two exact reals.

    Works across different quadratic fields: the sign of
    ``A + B*sqrt(D1) - C*sqrt(D2)`` is settled by one squaring step.
    """
    x, y = exact(x), exact(y)
    p1, r1, D1, q1 = _parts(x)
    p2, r2, D2, q2 = _parts(y)
    A = p1 * q2 - p2 * q1
    B = r1 * q2
    C = r2 * q1
    if C == 0:
        return Ordering(_sign(A, B, D1))
    if B == 0:
        return Ordering(_sign(A, -C, D2))
    if D1 == D2:
        return Ordering(_sign(A, B - C, D1))
    su = _sign(A, B, D1)
    sv = (C < 0) - (C > 0)
    if su == 0 or sv == 0 or su == sv:
        return Ordering(su or sv)
    s = _sign(A * A + B * B * D1 - C * C * D2, 2 * A * B, D1)
    return Ordering(su if s > 0 else sv if s < 0 else 0)


def floor(x) -> int:
    """Greatest integer not exceeding ``x``; integer square roots only."""
    x = exact(x)
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    p, r, D, q = x.p, x.r, x.D, x.q
    s = math.isqrt(r * r * D)  # s < |r|*sqrt(D) < s + 1
    if r > 0:
        return (p + s) // q
    return (p - s - 1) // q


def ceil(x) -> int:
    return -floor(-exact(x))


def frac(x) -> ExactReal:
    """Fractional part ``x - floor(x)`` in [0, 1)."""
    x = exact(x)
    return x - floor(x)


def scale_add(x, m: int, b=0) -> ExactReal:
    """Exact ``m*x + b``."""
    return exact(x) * m + exact(b)


def invert(x) -> ExactReal:
    x = exact(x)
    if isinstance(x, Fraction):
        if x == 0:
            raise DivisionByZero("cannot invert zero")
        return 1 / x
    return x.reciprocal()


def to_float(x, precision_bits: int = 53):
    """Round ``x`` to a binary float.

    With 53 bits the result is a Python ``float``; larger precisions return
    an ``mpmath.mpf`` carrying that many bits.
    """
    if precision_bits < 53:
        raise ValueError("precision_bits must be at least 53")
    x = exact(x)
    if isinstance(x, Fraction):
        num, den = x.numerator, x.denominator
    else:
        guard = precision_bits + 8
        k = guard
        while True:
            num = floor(x * (1 << k))
            if abs(num).bit_length() > guard:
                break
            k += guard - abs(num).bit_length() + 1
        den = 1 << k
    if precision_bits == 53:
        return float(Fraction(num, den))
    return mpmath.fdiv(num, den, prec=precision_bits)


_INT_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?")
_SURD_RE = re.compile(
    r"""\s*(?P<open>\()?\s*
        (?P<p>[+-]?\d+)?\s*
        (?P<sign>[+-])?\s*
        (?:(?P<r>\d+)\s*\*\s*)?
        sqrt\s*\(\s*(?P<D>\d+)\s*\)\s*
        (?P<close>\))?\s*
        (?:/\s*(?P<q>\d+)\s*)?""",
    re.VERBOSE,
)


def parse_exact(text: str):
    """Parse ``"p"``, ``"p/q"`` or ``"(p+r*sqrt(D))/q"``.

    Decimal literals such as ``"1.25"`` are accepted but come back as plain
    ``float`` (non-exact mode).
    """
    m = _INT_RE.fullmatch(text)
    if m:
        den = int(m.group(2) or 1)
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    m = _SURD_RE.fullmatch(text)
    if m:
        if bool(m.group("open")) != bool(m.group("close")):
            raise ParseError(f"unbalanced parentheses in {text!r}")
        if m.group("p") is not None and m.group("sign") is None:
            raise ParseError(f"missing sign before sqrt in {text!r}")
        if m.group("p") is not None and m.group("q") and not m.group("open"):
            raise ParseError(f"ambiguous expression {text!r}; parenthesize the numerator")
        p = int(m.group("p") or 0)
        r = int(m.group("r") or 1)
        if m.group("sign") == "-":
            r = -r
        q = int(m.group("q") or 1)
        if q == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return surd(p, r, int(m.group("D")), q)
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"cannot parse {text!r} as a real number") from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {text!r}")
    return value


def format_exact(x) -> str:
    """Inverse of :func:`parse_exact` for exact values."""
    if isinstance(x, float):
        return repr(x)
    x = exact(x)
    if isinstance(x, Fraction):
        return str(x)
    sign = "-" if x.r < 0 else "+"
    return f"({x.p}{sign}{abs(x.r)}*sqrt({x.D}))/{x.q}"
