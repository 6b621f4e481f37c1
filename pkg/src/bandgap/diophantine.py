"""One-sided approximation quality of quadratic irrationals.

``upsilon(x)`` is the liminf of ``m*(m*x - floor(m*x))`` over ``m``; its
minimum with ``upsilon(1/x)`` is the Markov constant.  Neither is computable
in general, so this module offers a running-minimum upper estimate and, for
quadratic surds, a lower bound certified from the periodic continued
fraction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .contfrac import ContinuedFraction, expand, lower_error_bound
from .errors import OutOfClass, RationalInput, Unsupported
from .exactreal import QuadraticSurd, compare, exact, floor, invert, is_exact, to_float

DEFAULT_HORIZON = 10_000

# level bounds for the restricted class [0;1,1,c_3,1,c_5,...]
NOT_CONVERGENT_LEVEL = 1.0
CONVERGENT_C1_LEVEL = 0.4
CONVERGENT_C2_LEVEL = 4 / math.pi * (2 - math.sqrt(3))
INVERSE_LEVEL = 1 / 3


@dataclass(frozen=True)
class UpsilonEstimate:
    upper: float
    certified_lower: Optional[Fraction]
    horizon: int
    argmin: int


class Branch(enum.Enum):
    NOT_CONVERGENT = "NOT_CONVERGENT"
    CONVERGENT_C1 = "CONVERGENT_C1"
    CONVERGENT_C2 = "CONVERGENT_C2"


@dataclass(frozen=True)
class LevelClass:
    m: int
    branch: Branch
    level: float


@dataclass(frozen=True)
class BadApproximability:
    badly_approximable: bool
    certificate: Optional[Fraction]
    reason: str = ""

    def __bool__(self):
        return self.badly_approximable


@lru_cache(maxsize=256)
def _expansion(gamma) -> ContinuedFraction:
    return expand(gamma)


def _irrational(gamma) -> QuadraticSurd:
    if not is_exact(gamma):
        raise Unsupported(f"{gamma!r} is not an exact quadratic surd")
    gamma = exact(gamma)
    if not isinstance(gamma, QuadraticSurd):
        raise RationalInput(f"{gamma} is rational; upsilon vanishes at its denominator")
    if gamma < 0:
        raise ValueError("gamma must be positive")
    return gamma


def _round_up(x) -> float:
    f = to_float(x)
    if compare(Fraction(f), x) < 0:
        f = math.nextafter(f, math.inf)
    return f


def upsilon_upper(gamma, horizon: int = DEFAULT_HORIZON) -> UpsilonEstimate:
    """Exact running minimum of ``m*(m*gamma - floor(m*gamma))`` for ``m <= horizon``."""
    gamma = _irrational(gamma)
    if horizon < 1:
        raise ValueError("horizon must be positive")
    best, arg = None, 0
    for m in range(1, horizon + 1):
        mg = gamma * m
        v = (mg - floor(mg)) * m
        if best is None or v < best:
            best, arg = v, m
    return UpsilonEstimate(_round_up(best), upsilon_lower_quadratic(gamma), horizon, arg)


def upsilon_lower_quadratic(gamma) -> Fraction:
    """Certified positive lower bound on ``m*(m*gamma - floor(m*gamma))`` over all ``m``.

    ``floor(m*gamma)/m`` reduces either to an even convergent ``p_2n/q_2n``
    (with ``m = h*q_2n``, giving at least the convergent's error bound) or to
    a fraction strictly between two consecutive even convergents, where
    ``1/c_2n`` bounds it.  The coefficients are eventually periodic, so one
    pass over the pre-period and two periods covers every case.
    """
    gamma = _irrational(gamma)
    cf = _expansion(gamma)
    stop = len(cf.head) + 2 * len(cf.tail) + 2
    bounds = [lower_error_bound(cf, n) for n in range(0, stop, 2)]
    bounds += [Fraction(1, cf[n]) for n in range(2, stop, 2)]
    return min(bounds)


def markov(gamma, horizon: int = DEFAULT_HORIZON) -> float:
    """Upper estimate of the Markov constant: the smaller one-sided estimate."""
    gamma = _irrational(gamma)
    return min(upsilon_upper(gamma, horizon).upper, upsilon_upper(invert(gamma), horizon).upper)


def is_badly_approximable(gamma) -> BadApproximability:
    if not is_exact(gamma):
        raise Unsupported(f"cannot certify non-exact value {gamma!r}")
    gamma = exact(gamma)
    if not isinstance(gamma, QuadraticSurd):
        return BadApproximability(False, None, "rational numbers are not badly approximable")
    if gamma < 0:
        gamma = -gamma
    cert = min(upsilon_lower_quadratic(gamma), upsilon_lower_quadratic(invert(gamma)))
    return BadApproximability(True, cert, "quadratic irrational: bounded partial quotients")


def check_level_class(gamma) -> ContinuedFraction:
    """Return the expansion of ``gamma`` after checking it has the form
    ``[0; 1, 1, c_3, 1, c_5, ...]`` with every ``c_{2n+1}`` in ``{1, 2}``."""
    gamma = _irrational(gamma)
    cf = _expansion(gamma)
    stop = len(cf.head) + 2 * len(cf.tail) + 2
    for j in range(stop):
        c = cf[j]
        if j == 0:
            ok = c == 0
        elif j == 1 or j % 2 == 0:
            ok = c == 1
        else:
            ok = c in (1, 2)
        if not ok:
            raise OutOfClass(f"{gamma} = {cf} has c_{j} = {c}, outside the two-valued pattern")
    return cf


def level(gamma, m: int) -> float:
    """``(2/pi)*m*tan((pi/2)*(m*gamma - floor(m*gamma)))`` with an exact fractional part."""
    mg = exact(gamma) * m
    f = to_float(mg - floor(mg))
    return 2 / math.pi * m * math.tan(math.pi / 2 * f)


def classify_level(gamma, m: int) -> LevelClass:
    if m < 1:
        raise ValueError("m must be positive")
    cf = check_level_class(gamma)
    gamma = exact(gamma)
    p_m = floor(gamma * m)
    branch = Branch.NOT_CONVERGENT
    p, q, pp, qq = 1, 0, 0, 1
    for n, c in enumerate(cf.coefficients()):
        p, pp = c * p + pp, p
        q, qq = c * q + qq, q
        if q > m:
            break
        if n % 2 == 0 and q == m and p == p_m:
            branch = Branch.CONVERGENT_C2 if cf[n + 1] == 2 else Branch.CONVERGENT_C1
            break
    return LevelClass(m, branch, level(gamma, m))
