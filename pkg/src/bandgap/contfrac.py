"""Continued fractions of exact reals, their convergents and error bounds."""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .errors import IndexOutOfRange, ParseError, PeriodNotFound, Truncated
from .exactreal import ExactReal, Ordering, compare, exact, surd

DEFAULT_MAX_TERMS = 10_000
TAIL_DEPTH = 40


def _canonical(head: tuple[int, ...], tail: tuple[int, ...]):
    if not head:
        raise ValueError("a continued fraction needs at least c_0")
    if any(c < 1 for c in head[1:]) or any(c < 1 for c in tail):
        raise ValueError("coefficients after c_0 must be positive integers")
    if not tail:
        if len(head) > 1 and head[-1] == 1:
            head = head[:-2] + (head[-2] + 1,)
        return head, tail
    # primitive period
    n = len(tail)
    for k in range(1, n + 1):
        if n % k == 0 and tail == tail[:k] * (n // k):
            tail = tail[:k]
            break
    # shortest pre-period; c_0 always stays in the head
    while len(head) > 1 and head[-1] == tail[-1]:
        tail = (head[-1],) + tail[:-1]
        head = head[:-1]
    return head, tail


@dataclass(frozen=True)
class ContinuedFraction:
    """``[c_0; c_1, ..., c_k, (t_1, ..., t_r)]`` with an optional periodic tail.

    The constructor canonicalizes: finite expansions never end in 1 (unless
    the whole expansion is ``[1]``), periodic tails are primitive and the
    pre-period is as short as possible.
    """

    head: tuple[int, ...]
    tail: tuple[int, ...] = ()

    def __post_init__(self):
        head, tail = _canonical(tuple(int(c) for c in self.head), tuple(int(c) for c in self.tail))
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "tail", tail)

    @property
    def is_finite(self) -> bool:
        return not self.tail

    def __len__(self):
        if self.tail:
            raise TypeError("infinite continued fraction has no length")
        return len(self.head)

    def __getitem__(self, j: int) -> int:
        if j < 0:
            raise IndexOutOfRange(f"negative coefficient index {j}")
        if j < len(self.head):
            return self.head[j]
        if not self.tail:
            raise IndexOutOfRange(f"finite continued fraction has no coefficient c_{j}")
        return self.tail[(j - len(self.head)) % len(self.tail)]

    def coefficients(self) -> Iterator[int]:
        yield from self.head
        while self.tail:
            yield from self.tail

    def __str__(self):
        return format_cf(self)


class Convergent(NamedTuple):
    index: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


class ErrorBounds(NamedTuple):
    lower: Fraction
    weak_lower: Fraction
    upper: Fraction


def _expand_rational(x: Fraction) -> list[int]:
    a, b = x.numerator, x.denominator
    out = []
    while b:
        c = a // b
        out.append(c)
        a, b = b, a - c * b
    return out


def expand(x, max_terms: int = DEFAULT_MAX_TERMS) -> ContinuedFraction:
    """Continued fraction of ``x``.

    Quadratic surds are expanded in the form ``(P + sqrt(N))/Q`` with
    ``Q | N - P^2``; the first repeated state ``(P, Q)`` marks the period.
    """
    x = exact(x)
    if isinstance(x, Fraction):
        return ContinuedFraction(tuple(_expand_rational(x)))
    p, r, D, q = x.p, x.r, x.D, x.q
    if r < 0:
        p, q = -p, -q
    N = r * r * D * q * q
    P, Q = p * abs(q), q * abs(q)
    s = math.isqrt(N)
    seen: dict[tuple[int, int], int] = {}
    coeffs: list[int] = []
    for i in range(max_terms):
        state = (P, Q)
        if state in seen:
            start = seen[state]
            head = coeffs[: max(start, 1)]
            tail = coeffs[start:] if start >= 1 else coeffs[1:] + coeffs[:1]
            return ContinuedFraction(tuple(head), tuple(tail))
        seen[state] = i
        c = (P + s) // Q if Q > 0 else (-P - s - 1) // (-Q)
        coeffs.append(c)
        P = c * Q - P
        Q = (N - P * P) // Q
    raise PeriodNotFound(f"no period within {max_terms} terms; increase max_terms")


def _head_convergents(coeffs) -> tuple[int, int, int, int]:
    """Return ``(p_n, q_n, p_{n-1}, q_{n-1})`` after consuming ``coeffs``."""
    p, q, pp, qq = 1, 0, 0, 1
    for c in coeffs:
        p, pp = c * p + pp, p
        q, qq = c * q + qq, q
    return p, q, pp, qq


def value(cf: ContinuedFraction) -> ExactReal:
    """Exact value; eventually periodic expansions give a quadratic surd."""
    if cf.is_finite:
        p, q, _, _ = _head_convergents(cf.head)
        return Fraction(p, q)
    # y = [t_1; t_2, ..., t_r, y]  =>  Q y^2 + (QQ - P) y - PP = 0
    P, Q, PP, QQ = _head_convergents(cf.tail)
    b = QQ - P
    y = surd(-b, 1, b * b + 4 * Q * PP, 2 * Q)
    p, q, pp, qq = _head_convergents(cf.head)
    return (y * p + pp) / (y * q + qq)


def convergents(cf: ContinuedFraction, n_max: int) -> list[Convergent]:
    """Convergents ``p_n/q_n`` for ``n = 0..n_max``.

    A finite expansion that runs out early yields what it has and emits a
    :class:`~bandgap.errors.Truncated` warning.
    """
    out = []
    p, q, pp, qq = 1, 0, 0, 1
    for n, c in enumerate(cf.coefficients()):
        if n > n_max:
            break
        p, pp = c * p + pp, p
        q, qq = c * q + qq, q
        out.append(Convergent(n, p, q))
    if len(out) < n_max + 1:
        warnings.warn(
            f"continued fraction has only {len(out)} coefficients, {n_max + 1} requested",
            Truncated,
            stacklevel=2,
        )
    return out


def cf_compare(a: ContinuedFraction, b: ContinuedFraction) -> Ordering:
    """Order two expansions coefficient-wise.

    At the first differing index ``j``, ``a < b`` iff ``j`` is even and
    ``a_j < b_j`` or ``j`` is odd and ``a_j > b_j``.  A finite expansion that
    ends first behaves as if its next coefficient were infinite.
    """
    if a == b:
        return Ordering.EQ
    limit = max(len(a.head), len(b.head)) + 2 * max(len(a.tail), 1) * max(len(b.tail), 1) + 1
    ia, ib = a.coefficients(), b.coefficients()
    for j in range(limit):
        x = next(ia, math.inf)
        y = next(ib, math.inf)
        if x == y:
            if x == math.inf:
                return Ordering.EQ
            continue
        smaller = x < y if j % 2 == 0 else x > y
        return Ordering.LT if smaller else Ordering.GT
    return Ordering.EQ


def _finite(coeffs) -> Fraction:
    p, q, _, _ = _head_convergents(coeffs)
    return Fraction(p, q)


def _require(cf: ContinuedFraction, last: int):
    try:
        cf[last]
    except IndexOutOfRange:
        raise IndexOutOfRange(f"bounds need coefficient c_{last}, which does not exist") from None


def _backward_upper(cf: ContinuedFraction, n: int) -> Fraction:
    # upper estimate of [0; c_n, c_{n-1}, ..., c_1]; exact for n <= 1
    if n == 0:
        return Fraction(0)
    if n == 1:
        return Fraction(1, cf[1])
    return _finite((0, cf[n], cf[n - 1] + 1))


def lower_error_bound(cf: ContinuedFraction, n: int) -> Fraction:
    """Strong lower bound on ``q_n*|q_n*x - p_n|``, valid for every ``n >= 0``."""
    _require(cf, n + 3)
    return 1 / (_finite((cf[n + 1], cf[n + 2], cf[n + 3] + 1)) + _backward_upper(cf, n))


def convergent_error_bounds(cf: ContinuedFraction, n: int) -> ErrorBounds:
    """Rational bounds ``lower < q_n*|q_n*x - p_n| < upper``.

    ``lower = 1/([c_{n+1}; c_{n+2}, c_{n+3}+1] + [0; c_n, c_{n-1}+1])`` and
    ``upper = 1/([c_{n+1}; c_{n+2}+1] + [0; c_n+1])``.  For ``n = 1`` the
    backward part ``[0; c_1]`` is used as is, since it is exact there.
    ``weak_lower = 1/(c_{n+1} + 1/c_{n+2} + 1/c_n)`` is always below ``lower``.
    """
    if n < 1:
        raise IndexOutOfRange("error bounds are defined for n >= 1")
    lower = lower_error_bound(cf, n)
    weak = 1 / (cf[n + 1] + Fraction(1, cf[n + 2]) + Fraction(1, cf[n]))
    upper = 1 / (_finite((cf[n + 1], cf[n + 2] + 1)) + Fraction(1, cf[n] + 1))
    return ErrorBounds(lower, weak, upper)


def intermediate_error_bound(cf: ContinuedFraction, n: int) -> Fraction:
    """``1/c_{n+1}``: a lower bound on ``q*|q*x - p|`` for any ``p/q`` strictly
    between the convergents ``p_{n-1}/q_{n-1}`` and ``p_{n+1}/q_{n+1}``.

    The hypothesis on ``p/q`` is not checked.
    """
    if n < 1:
        raise IndexOutOfRange("n must be at least 1")
    return Fraction(1, cf[n + 1])


def convergent_offset(cf: ContinuedFraction, n: int, depth: int = TAIL_DEPTH) -> Fraction:
    """``x - p_n/q_n`` from the complete-quotient identity

    ``(-1)^n / (q_n^2 * ([c_{n+1}; c_{n+2}, ...] + [0; c_n, ..., c_1]))``

    with the forward expansion cut after ``depth`` coefficients.
    """
    conv = convergents(cf, n)[-1]
    forward = []
    for j in range(n + 1, n + 1 + depth):
        try:
            forward.append(cf[j])
        except IndexOutOfRange:
            break
    backward = _finite((0,) + tuple(cf[j] for j in range(n, 0, -1))) if n else Fraction(0)
    return Fraction((-1) ** n) / (conv.q ** 2 * (_finite(forward) + backward))


_CF_RE = re.compile(r"\s*\[\s*([+-]?\d+)\s*(?:;\s*(.*?))?\s*\]\s*")


def parse_cf(text: str) -> ContinuedFraction:
    """Parse ``"[0;1,1,2,(1)]"``; a parenthesized block is the periodic tail."""
    m = _CF_RE.fullmatch(text)
    if not m:
        raise ParseError(f"cannot parse continued fraction {text!r}")
    head = [int(m.group(1))]
    tail: list[int] = []
    body = m.group(2) or ""
    pm = re.fullmatch(r"(.*?)\s*,?\s*\(([^()]*)\)\s*", body)
    if pm:
        body, tail_text = pm.group(1), pm.group(2)
        tail = [int(t) for t in tail_text.split(",") if t.strip()]
        if not tail:
            raise ParseError("empty periodic block")
    try:
        head += [int(t) for t in body.split(",") if t.strip()]
        return ContinuedFraction(tuple(head), tuple(tail))
    except ValueError as exc:
        raise ParseError(f"bad continued fraction {text!r}: {exc}") from None


def format_cf(cf: ContinuedFraction) -> str:
    parts = [str(c) for c in cf.head[1:]]
    if cf.tail:
        parts.append("(" + ",".join(str(c) for c in cf.tail) + ")")
    if not parts:
        return f"[{cf.head[0]}]"
    return f"[{cf.head[0]};{','.join(parts)}]"


def compare_values(a: ContinuedFraction, b: ContinuedFraction) -> Ordering:
    """Reference ordering through exact values (used to cross-check ``cf_compare``)."""
    return compare(value(a), value(b))
