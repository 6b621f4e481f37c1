"""Band-gap structure of hyperrectangular lattice graphs with delta couplings.

Energies are ``E = k**2 > 0``.  Internally everything runs in ``k``.  With a
coupling ``alpha > 0`` a point is in the spectrum iff ``F(k) >= alpha`` where

    F(k) = 2k * sum_j tan(pi/2 * frac(k*a_j/pi)),

and with ``alpha < 0`` iff ``G(k) >= |alpha|`` where ``G`` uses
``ceil(x) - x`` in place of the fractional part.  ``F`` and ``G`` jump at the
points ``m*pi/a_j``; every gap is attached to one of these anchors.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, cmp_to_key
from typing import Iterable, Optional, Sequence

from .diophantine import check_level_class, upsilon_lower_quadratic
from .errors import (
    AtDiscontinuity,
    KirchhoffCase,
    NoCrossing,
    NonpositiveEnergy,
    OutOfClass,
    RationalInput,
    Unsupported,
)
from .exactreal import QuadraticSurd, compare, exact, floor, format_exact, is_exact, parse_exact, to_float

FLOAT_TOL = 1e-9  # coincidence tolerance for plain-float lengths
ROOT_RTOL = 1e-12
ROOT_MAXITER = 200
_CLAMP = 1 - 1e-15
_DISC_RTOL = 1e-13


class Which(enum.Enum):
    F_EQUALS_ALPHA = "F"
    G_EQUALS_ABS_ALPHA = "G"


class Finiteness(enum.Enum):
    FINITE_CERTIFIED = "FINITE_CERTIFIED"
    INFINITE_CERTIFIED = "INFINITE_CERTIFIED"
    UNKNOWN = "UNKNOWN"


def _length(x):
    if isinstance(x, str):
        x = parse_exact(x)
    if isinstance(x, bool):
        raise TypeError("bool is not a length")
    if is_exact(x):
        x = exact(x)
    elif isinstance(x, (int, float)):
        x = float(x)
    else:
        raise TypeError(f"unsupported length type {type(x).__name__}")
    if not x > 0:
        raise ValueError(f"edge lengths must be positive, got {x}")
    return x


@dataclass(frozen=True)
class Lattice:
    """Periodic lattice with edge lengths ``a_1..a_d`` and coupling ``alpha``.

    Lengths may be exact (``int``, ``Fraction``, ``QuadraticSurd`` or their
    text forms) or plain floats; one float switches the whole lattice to
    non-certified float mode.
    """

    lengths: tuple
    alpha: float = 0.0

    def __post_init__(self):
        lengths = tuple(_length(a) for a in self.lengths)
        if len(lengths) < 2:
            raise ValueError("lattice dimension d must be at least 2")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "alpha", float(self.alpha))

    @classmethod
    def parse(cls, lengths: str, alpha: float) -> Lattice:
        return cls(tuple(parse_exact(t) for t in lengths.split(",")), alpha)

    @property
    def d(self) -> int:
        return len(self.lengths)

    @cached_property
    def is_exact(self) -> bool:
        return all(is_exact(a) for a in self.lengths)

    @cached_property
    def float_lengths(self) -> tuple[float, ...]:
        return tuple(float(a) for a in self.lengths)

    @cached_property
    def ratios(self) -> dict[tuple[int, int], object]:
        """``a_j/a_l`` keyed by 1-based ``(j, l)``; exact when the lattice is."""
        out = {}
        for l, al in enumerate(self.lengths, 1):
            for j, aj in enumerate(self.lengths, 1):
                if not self.is_exact:
                    out[j, l] = float(aj) / float(al)
                    continue
                try:
                    out[j, l] = aj / al
                except Unsupported:
                    raise Unsupported(
                        f"ratio of lengths a_{j} = {format_exact(aj)} and a_{l} = {format_exact(al)} "
                        "is not a quadratic surd"
                    ) from None
        return out

    def scaled(self, s) -> Lattice:
        """Lengths times ``s`` and coupling divided by ``s``."""
        if self.is_exact and is_exact(s):
            lengths = tuple(a * exact(s) for a in self.lengths)
        else:
            lengths = tuple(a * float(s) for a in self.float_lengths)
        return Lattice(lengths, self.alpha / float(s))

    def with_alpha(self, alpha: float) -> Lattice:
        return Lattice(self.lengths, alpha)

    def length_strings(self) -> list[str]:
        return [format_exact(a) for a in self.lengths]


@dataclass(frozen=True)
class Discontinuity:
    k: float
    anchors: tuple[tuple[int, int], ...]
    key: object = field(default=None, compare=False)  # exact k/pi when available


@dataclass(frozen=True)
class Gap:
    """Open gap ``(lower_k**2, upper_k**2)`` attached to the anchor ``m*pi/a_ell``."""

    ell: int
    m: int
    lower_k: float
    upper_k: float
    anchors: tuple[tuple[int, int], ...] = ()

    @property
    def lower_E(self) -> float:
        return self.lower_k ** 2

    @property
    def upper_E(self) -> float:
        return self.upper_k ** 2


@dataclass(frozen=True)
class FinitenessCertificate:
    status: Finiteness
    reason: str
    thresholds: Optional[tuple[float, ...]] = None


@dataclass(frozen=True)
class GapReport:
    lattice: Lattice
    k_max: float
    gaps: tuple[Gap, ...]
    spectral_bottom_E: Optional[float]
    finiteness: Finiteness
    certified: bool = True

    def to_dict(self) -> dict:
        return {
            "d": self.lattice.d,
            "lengths": self.lattice.length_strings(),
            "alpha": fmt_float(self.lattice.alpha),
            "k_max": fmt_float(self.k_max),
            "spectral_bottom_E": fmt_float(self.spectral_bottom_E),
            "finiteness": self.finiteness.value,
            "certified": self.certified,
            "gaps": [
                {"ell": g.ell, "m": g.m, "lower_E": fmt_float(g.lower_E), "upper_E": fmt_float(g.upper_E)}
                for g in self.gaps
            ],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def fmt_float(x):
    """Round to 12 significant digits; ``None`` and NaN become ``None``."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return None
    return float(f"{x:.12g}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# -- band functions ---------------------------------------------------------


def _frac(x: float) -> float:
    return x - math.floor(x)


def _near_integer(x: float, rtol: float) -> bool:
    return abs(x - round(x)) <= rtol * max(1.0, abs(x))


def _check_k(lat: Lattice, k: float):
    if not k > 0:
        raise ValueError("k must be positive")
    for j, a in enumerate(lat.float_lengths, 1):
        x = k * a / math.pi
        if _near_integer(x, _DISC_RTOL):
            raise AtDiscontinuity(f"k*a_{j} = {round(x)}*pi is a discontinuity")


def _F(lat: Lattice, k: float) -> float:
    # no discontinuity check; clamped on the blow-up side
    s = sum(math.tan(math.pi / 2 * min(_frac(k * a / math.pi), _CLAMP)) for a in lat.float_lengths)
    return 2 * k * s


def _G(lat: Lattice, k: float) -> float:
    s = 0.0
    for a in lat.float_lengths:
        f = _frac(k * a / math.pi)
        s += math.tan(math.pi / 2 * min(1 - f, _CLAMP)) if f > 0 else 0.0
    return 2 * k * s


def F(lat: Lattice, k: float) -> float:
    _check_k(lat, k)
    return _F(lat, k)


def G(lat: Lattice, k: float) -> float:
    _check_k(lat, k)
    return _G(lat, k)


def theta_extrema(x: float) -> tuple[float, float]:
    """Min and max of ``(cos(theta) - cos(x))/sin(x)`` over ``theta``."""
    t = x / math.pi
    if _near_integer(t, _DISC_RTOL):
        raise AtDiscontinuity(f"x = {round(t)}*pi")
    lo = -math.tan(math.ceil(t) * math.pi / 2 - x / 2)
    hi = math.tan(x / 2 - math.floor(t) * math.pi / 2)
    return lo, hi


def trace_sum(lat: Lattice, k: float, theta: Sequence[float]) -> float:
    """``sum_j (cos(theta_j) - cos(k*a_j))/sin(k*a_j)``; ``k**2`` is in the
    spectrum iff some quasi-momentum vector makes this ``alpha/(2k)``."""
    if len(theta) != lat.d:
        raise ValueError(f"need {lat.d} quasi-momenta, got {len(theta)}")
    _check_k(lat, k)
    return sum(
        (math.cos(t) - math.cos(k * a)) / math.sin(k * a) for t, a in zip(theta, lat.float_lengths)
    )


def is_in_spectrum(lat: Lattice, E: float) -> bool:
    if not E > 0:
        raise NonpositiveEnergy(f"E = {E} is not positive")
    if lat.alpha == 0:
        return True
    k = math.sqrt(E)
    try:
        _check_k(lat, k)
    except AtDiscontinuity:
        return True  # one-sided limit is +inf
    if lat.alpha > 0:
        return _F(lat, k) >= lat.alpha
    return _G(lat, k) >= -lat.alpha


# -- discontinuities and gap conditions -------------------------------------


def discontinuities(lat: Lattice, k_max: float) -> list[Discontinuity]:
    """All jump points ``m*pi/a_j <= k_max``, coinciding ones merged."""
    if not k_max > 0:
        raise ValueError("k_max must be positive")
    limit = k_max * (1 + 1e-12)
    if lat.is_exact:
        groups: dict = {}
        for j, a in enumerate(lat.lengths, 1):
            for m in range(1, floor(exact(a) * Fraction(limit / math.pi)) + 2):
                key = Fraction(m) / a if isinstance(a, Fraction) else a.reciprocal() * m
                if to_float(key) * math.pi > limit:
                    break
                groups.setdefault(key, []).append((j, m))
        keys = sorted(groups, key=cmp_to_key(lambda u, v: int(compare(u, v))))
        return [Discontinuity(to_float(key) * math.pi, tuple(sorted(groups[key])), key) for key in keys]
    points = []
    for j, a in enumerate(lat.float_lengths, 1):
        m = 1
        while m * math.pi / a <= limit:
            points.append((m * math.pi / a, (j, m)))
            m += 1
    points.sort()
    out: list[list] = []
    for k, anchor in points:
        if out and abs(k - out[-1][0]) <= FLOAT_TOL * k:
            out[-1][1].append(anchor)
        else:
            out.append([k, [anchor]])
    return [Discontinuity(k, tuple(sorted(anchors))) for k, anchors in out]


def _anchor_fracs(lat: Lattice, ell: int, m: int) -> list[float]:
    """``frac(m*a_j/a_ell)`` for every j; exact whenever the lattice is."""
    out = []
    for j in range(1, lat.d + 1):
        x = lat.ratios[j, ell] * m
        if lat.is_exact:
            out.append(to_float(x - floor(x)))
        else:
            out.append(0.0 if _near_integer(x, FLOAT_TOL) else _frac(x))
    return out


def gap_lhs(lat: Lattice, ell: int, m: int, sign: int = 1) -> float:
    """One-sided limit of ``F`` (``sign > 0``, from the right) or ``G``
    (``sign < 0``, from the left) at the anchor ``m*pi/a_ell``."""
    if not 1 <= ell <= lat.d or m < 1:
        raise ValueError(f"no anchor (ell={ell}, m={m})")
    fr = _anchor_fracs(lat, ell, m)
    if sign > 0:
        s = sum(math.tan(math.pi / 2 * f) for f in fr)
    else:
        s = sum(math.tan(math.pi / 2 * (1 - f)) if f > 0 else 0.0 for f in fr)
    return 2 * m * math.pi / lat.float_lengths[ell - 1] * s


def gap_condition(lat: Lattice, ell: int, m: int) -> bool:
    """Whether a gap is attached to ``(m*pi/a_ell)**2``."""
    if lat.alpha == 0:
        raise KirchhoffCase("alpha = 0: the spectrum has no gaps")
    sign = 1 if lat.alpha > 0 else -1
    return gap_lhs(lat, ell, m, sign) < abs(lat.alpha)


def solve_band_edge(
    lat: Lattice,
    interval: tuple[float, float],
    which: Which,
    open_value: Optional[float] = None,
) -> float:
    """Band edge inside an interval of continuity, by bisection.

    For ``F_EQUALS_ALPHA`` the gap sits at the left end of ``interval`` and
    the root of ``F = alpha`` is its upper edge.  For ``G_EQUALS_ABS_ALPHA``
    the gap sits at the right end and the root of ``G = |alpha|`` is its lower
    edge.  ``open_value`` is the one-sided limit at the open end; when absent
    it is evaluated in floating point.
    """
    k_lo, k_hi = interval
    if not 0 <= k_lo < k_hi:
        raise ValueError("need 0 <= k_lo < k_hi")
    target = abs(lat.alpha)
    if which is Which.F_EQUALS_ALPHA:
        if open_value is None:
            open_value = 0.0 if k_lo == 0 else _limit(lat, k_lo, Which.F_EQUALS_ALPHA)
        if open_value > target:
            raise NoCrossing(f"F({k_lo}+) = {open_value} exceeds alpha = {target}; no gap")
        if open_value == target:
            return k_lo
        go_right = lambda k: _F(lat, k) < target  # noqa: E731
    else:
        if open_value is None:
            open_value = _limit(lat, k_hi, Which.G_EQUALS_ABS_ALPHA)
        if open_value > target:
            raise NoCrossing(f"G({k_hi}-) = {open_value} exceeds |alpha| = {target}; no gap")
        if open_value == target:
            return k_hi
        if k_lo == 0 and sum(4 / a for a in lat.float_lengths) <= target:
            return 0.0
        go_right = lambda k: _G(lat, k) >= target  # noqa: E731
    lo, hi = k_lo, k_hi
    for _ in range(ROOT_MAXITER):
        mid = 0.5 * (lo + hi)
        if go_right(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= ROOT_RTOL * hi:
            break
    return 0.5 * (lo + hi)


def _limit(lat: Lattice, k: float, which: Which) -> float:
    # one-sided limit at a float anchor, snapping near-integer arguments
    fr = []
    for a in lat.float_lengths:
        x = k * a / math.pi
        fr.append(0.0 if _near_integer(x, FLOAT_TOL) else _frac(x))
    if which is Which.F_EQUALS_ALPHA:
        return 2 * k * sum(math.tan(math.pi / 2 * f) for f in fr)
    return 2 * k * sum(math.tan(math.pi / 2 * (1 - f)) if f > 0 else 0.0 for f in fr)


# -- scanning ---------------------------------------------------------------


def _probe(lat: Lattice, discs: list[Discontinuity], i: int) -> Optional[Gap]:
    disc = discs[i]
    ell, m = disc.anchors[0]
    if lat.alpha > 0:
        lhs = gap_lhs(lat, ell, m, 1)
        if not lhs < lat.alpha:
            return None
        upper = solve_band_edge(lat, (disc.k, discs[i + 1].k), Which.F_EQUALS_ALPHA, lhs)
        return Gap(ell, m, disc.k, upper, disc.anchors)
    lhs = gap_lhs(lat, ell, m, -1)
    if not lhs < -lat.alpha:
        return None
    k_lo = discs[i - 1].k if i else 0.0
    lower = solve_band_edge(lat, (k_lo, disc.k), Which.G_EQUALS_ABS_ALPHA, lhs)
    return Gap(ell, m, lower, disc.k, disc.anchors)


def scan_gaps(lat: Lattice, k_max: float, threads: Optional[int] = None) -> GapReport:
    """Every gap whose anchor lies in ``(0, k_max]``.

    A gap's far edge may lie beyond ``k_max``; it is still solved for.  With
    ``alpha > 0`` the region below the first band is reported as
    ``spectral_bottom_E``, never as a gap.  With ``alpha < 0`` a region that
    reaches down to ``k = 0`` is likewise excluded (it borders the negative
    spectrum) and its upper end is reported as ``spectral_bottom_E``.
    """
    if not k_max > 0:
        raise ValueError("k_max must be positive")
    cert = finiteness_certificate(lat).status
    if lat.alpha == 0:
        return GapReport(lat, k_max, (), None, cert, lat.is_exact)
    discs = discontinuities(lat, k_max + math.pi / min(lat.float_lengths))
    n = sum(1 for dd in discs if dd.k <= k_max * (1 + 1e-12))
    indices = range(n)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = list(pool.map(lambda i: _probe(lat, discs, i), indices))
    else:
        found = [_probe(lat, discs, i) for i in indices]
    gaps = [g for g in found if g is not None]
    bottom = None
    if lat.alpha > 0:
        k0 = solve_band_edge(lat, (0.0, discs[0].k), Which.F_EQUALS_ALPHA, 0.0)
        bottom = k0 ** 2
    elif gaps and gaps[0].lower_k == 0.0:
        bottom = gaps[0].upper_E
        gaps = gaps[1:]
    return GapReport(lat, k_max, tuple(gaps), bottom, cert, lat.is_exact)


# -- finiteness -------------------------------------------------------------


def finiteness_certificate(lat: Lattice) -> FinitenessCertificate:
    """Decide finiteness of the gap set where a proof route applies.

    Commensurable lengths with ``alpha != 0`` give infinitely many gaps.
    Otherwise, if ``|alpha|`` stays below ``pi**2/a_l * sum_j L_jl`` for every
    ``l``, where ``L_jl`` is a certified lower bound on upsilon of the ratio
    ``a_j/a_l`` (``a_l/a_j`` for ``alpha < 0``), there are finitely many.
    """
    if lat.alpha == 0:
        return FinitenessCertificate(Finiteness.FINITE_CERTIFIED, "Kirchhoff coupling: no gaps at all")
    if not lat.is_exact:
        return FinitenessCertificate(Finiteness.UNKNOWN, "float lengths cannot be certified")
    try:
        ratios = lat.ratios
    except Unsupported as exc:
        return FinitenessCertificate(Finiteness.UNKNOWN, str(exc))
    if all(isinstance(r, Fraction) for r in ratios.values()):
        return FinitenessCertificate(
            Finiteness.INFINITE_CERTIFIED, "commensurable lengths: a gap at every common multiple"
        )
    design = _design_route(lat)
    if design is not None:
        return design
    thresholds = []
    for l in range(1, lat.d + 1):
        total = Fraction(0)
        for j in range(1, lat.d + 1):
            r = ratios[j, l] if lat.alpha > 0 else ratios[l, j]
            if isinstance(r, QuadraticSurd):
                total += upsilon_lower_quadratic(r)
        thresholds.append(math.pi ** 2 / lat.float_lengths[l - 1] * float(total))
    bound = min(thresholds)
    if abs(lat.alpha) < bound:
        return FinitenessCertificate(
            Finiteness.FINITE_CERTIFIED, f"|alpha| below certified threshold {bound:.12g}", tuple(thresholds)
        )
    return FinitenessCertificate(
        Finiteness.UNKNOWN, f"|alpha| not below certified threshold {bound:.12g}", tuple(thresholds)
    )


def _design_route(lat: Lattice) -> Optional[FinitenessCertificate]:
    # (gamma*a, a, ..., a) with gamma = [0;1,1,c_3,1,c_5,...], c_odd in {1,2},
    # and alpha in the design window: gaps sit exactly at (q_2n*pi/a)^2, c_{2n+1} = 2
    from .designer import alpha_window

    if lat.alpha <= 0:
        return None
    for i, odd in enumerate(lat.lengths):
        rest = lat.lengths[:i] + lat.lengths[i + 1 :]
        a = rest[0]
        if any(compare(b, a) != 0 for b in rest) or compare(odd, a) == 0:
            continue
        try:
            cf = check_level_class(odd / a)
        except (OutOfClass, RationalInput, Unsupported):
            continue
        lo, hi = alpha_window(to_float(a))
        if lo <= lat.alpha <= hi:
            stop = len(cf.head) + 2 * len(cf.tail)
            twos = sum(1 for j in range(3, stop, 2) if cf[j] == 2)
            return FinitenessCertificate(
                Finiteness.FINITE_CERTIFIED,
                f"a_{i + 1}/a = {cf} with alpha in the design window: exactly {twos} gap(s)",
            )
    return None


# -- plot data --------------------------------------------------------------


def band_rows(lat: Lattice, k_lo: float, k_hi: float, samples: int) -> list[tuple]:
    """``(k, F, G, in_spectrum)`` on a uniform grid.

    The grid point nearest to each discontinuity is moved onto it and given
    NaN band values so plotted curves break there.
    """
    if samples < 2 or not 0 < k_lo < k_hi:
        raise ValueError("need samples >= 2 and 0 < k_lo < k_hi")
    step = (k_hi - k_lo) / (samples - 1)
    ks = [k_lo + i * step for i in range(samples)]
    jumps = set()
    for disc in discontinuities(lat, k_hi):
        if disc.k >= k_lo:
            i = min(samples - 1, max(0, round((disc.k - k_lo) / step)))
            ks[i] = disc.k
            jumps.add(i)
    rows = []
    for i, k in enumerate(ks):
        if i in jumps:
            rows.append((k, math.nan, math.nan, True))
            continue
        try:
            rows.append((k, F(lat, k), G(lat, k), is_in_spectrum(lat, k * k)))
        except AtDiscontinuity:
            rows.append((k, math.nan, math.nan, True))
    return rows


def write_band_csv(rows: Iterable[tuple], fp) -> None:
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(["k", "F", "G", "in_spectrum"])
    for k, f, g, inside in rows:
        w.writerow([f"{k:.12g}", f"{f:.12g}", f"{g:.12g}", int(inside)])
