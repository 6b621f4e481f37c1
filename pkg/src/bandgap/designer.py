"""Lattices with a prescribed set of spectral gaps.

Take ``gamma = [0; 1, 1, c_3, 1, c_5, 1, ...]`` with every odd coefficient in
``{1, 2}`` and build the lattice ``(gamma*a, a, ..., a)``.  For a coupling in
``[4*pi*(2 - sqrt(3))/a, 2*pi**2/(5*a)]`` the gaps start exactly at
``(q_2n*pi/a)**2`` for those ``n`` with ``c_{2n+1} = 2``, and nowhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import contfrac, spectrum
from .contfrac import ContinuedFraction
from .errors import AlphaOutOfWindow, Infeasible, VerificationFailed
from .exactreal import ExactReal, exact, format_exact, is_exact, parse_exact, to_float

REL_TOL = 1e-9


@dataclass(frozen=True)
class DesignSpec:
    two_positions: tuple[int, ...]
    d: int = 3
    base_length: object = 1
    alpha: Optional[float] = None

    def __post_init__(self):
        pos = tuple(sorted(set(int(n) for n in self.two_positions)))
        if not pos:
            raise ValueError("two_positions must not be empty")
        if pos[0] < 1:
            raise ValueError("positions of 2's are indices n >= 1")
        if self.d < 2:
            raise ValueError("d must be at least 2")
        a = self.base_length
        if isinstance(a, str):
            a = parse_exact(a)
        a = exact(a) if is_exact(a) else float(a)
        if not a > 0:
            raise ValueError("base length must be positive")
        object.__setattr__(self, "two_positions", pos)
        object.__setattr__(self, "base_length", a)
        if self.alpha is not None:
            object.__setattr__(self, "alpha", float(self.alpha))

    @classmethod
    def from_dict(cls, data: dict) -> DesignSpec:
        return cls(tuple(data["two_positions"]), int(data.get("d", 3)), data.get("a", 1), data.get("alpha"))

    def to_dict(self) -> dict:
        return {
            "two_positions": list(self.two_positions),
            "d": self.d,
            "a": format_exact(self.base_length),
            "alpha": self.alpha,
        }


@dataclass(frozen=True)
class DesignResult:
    spec: DesignSpec
    gamma: ExactReal
    gamma_cf: ContinuedFraction
    alpha_window: tuple[float, float]
    chosen_alpha: float
    predicted_anchors: tuple[tuple[int, int], ...]  # (n, q_2n)
    lattice: spectrum.Lattice
    on_window_edge: bool = False

    @property
    def predicted_gap_anchors_E(self) -> list[float]:
        a = float(self.spec.base_length)
        return [(q * math.pi / a) ** 2 for _, q in self.predicted_anchors]

    def to_dict(self) -> dict:
        fmt = spectrum.fmt_float
        return {
            "spec": self.spec.to_dict(),
            "gamma": format_exact(self.gamma),
            "gamma_cf": str(self.gamma_cf),
            "alpha_window": [fmt(x) for x in self.alpha_window],
            "chosen_alpha": fmt(self.chosen_alpha),
            "on_window_edge": self.on_window_edge,
            "predicted_gap_anchors_E": [fmt(e) for e in self.predicted_gap_anchors_E],
            "predicted_q": [q for _, q in self.predicted_anchors],
        }


@dataclass(frozen=True)
class Verification:
    result: DesignResult
    report: spectrum.GapReport
    matched: tuple[tuple[int, int], ...] = field(default=())

    def to_dict(self) -> dict:
        out = self.result.to_dict()
        out["verified"] = True
        out["report"] = self.report.to_dict()
        return out


def alpha_window(a) -> tuple[float, float]:
    """Couplings for which the gap layout is read off the continued fraction."""
    a = float(a)
    if not a > 0:
        raise ValueError("a must be positive")
    return 4 * math.pi * (2 - math.sqrt(3)) / a, 2 * math.pi ** 2 / (5 * a)


def gamma_cf(two_positions: Sequence[int]) -> ContinuedFraction:
    last = 2 * max(two_positions) + 1
    head = [0] + [1] * last
    for n in two_positions:
        head[2 * n + 1] = 2
    return ContinuedFraction(tuple(head), (1,))


def build_gamma(spec: DesignSpec) -> tuple[ContinuedFraction, ExactReal]:
    cf = gamma_cf(spec.two_positions)
    return cf, contfrac.value(cf)


def _even_denominators(cf: ContinuedFraction, n_max: int) -> dict[int, int]:
    convs = contfrac.convergents(cf, 2 * n_max)
    return {c.index // 2: c.q for c in convs if c.index % 2 == 0}


def predict_gaps(spec: DesignSpec) -> DesignResult:
    cf, gamma = build_gamma(spec)
    a = spec.base_length
    lo, hi = alpha_window(a)
    alpha = spec.alpha if spec.alpha is not None else 0.5 * (lo + hi)
    if not lo <= alpha <= hi:
        raise AlphaOutOfWindow(f"alpha = {alpha} outside [{lo:.12g}, {hi:.12g}] for a = {format_exact(a)}")
    q_even = _even_denominators(cf, max(spec.two_positions))
    anchors = tuple((n, q_even[n]) for n in spec.two_positions)
    if is_exact(a):
        first = gamma * a
    else:
        first = to_float(gamma) * a
    lattice = spectrum.Lattice((first,) + (a,) * (spec.d - 1), alpha)
    return DesignResult(spec, gamma, cf, (lo, hi), alpha, anchors, lattice, alpha in (lo, hi))


def verify_design(result: DesignResult, k_max: Optional[float] = None, threads: Optional[int] = None) -> Verification:
    """Scan the designed lattice and compare against the prediction.

    Anchors must match as ``(ell, m)`` pairs and energies to ``1e-9``
    relative; any extra gap is a failure.
    """
    a = float(result.spec.base_length)
    top = max(q for _, q in result.predicted_anchors) * math.pi / a
    if k_max is None:
        k_max = 1.5 * top
    if k_max < 1.5 * top * (1 - 1e-12):
        raise ValueError(f"k_max must be at least 1.5 x the largest anchor ({1.5 * top:.12g})")
    report = spectrum.scan_gaps(result.lattice, k_max, threads=threads)
    predicted = {(2, q): (q * math.pi / a) ** 2 for _, q in result.predicted_anchors}
    found = {}
    unexpected = []
    for gap in report.gaps:
        hit = [anc for anc in gap.anchors if anc in predicted]
        if hit and math.isclose(gap.lower_E, predicted[hit[0]], rel_tol=REL_TOL):
            found[hit[0]] = gap
        else:
            unexpected.append((gap.ell, gap.m, gap.lower_E))
    missing = [(anc, e) for anc, e in predicted.items() if anc not in found]
    if missing or unexpected:
        raise VerificationFailed(
            f"design mismatch: missing {missing}, unexpected {unexpected}", missing, unexpected
        )
    return Verification(result, report, tuple(sorted(found)))


def design_by_target_energies(targets: Sequence[float], a=1, tolerance: float = 0.0, d: int = 3) -> DesignSpec:
    """Greedy placement of 2's so the gap anchors hit the target energies.

    Targets are handled in increasing order.  For each, the candidate
    positions ``n`` after the previous placement are walked while
    ``(q_2n*pi/a)**2`` stays below ``target + tolerance``; the closest anchor
    within tolerance is taken.  Only a sparse set of energies is reachable,
    so most targets are infeasible.
    """
    targets = list(targets)
    if any(t <= 0 for t in targets) or any(x >= y for x, y in zip(targets, targets[1:])):
        raise ValueError("targets must be positive and strictly increasing")
    af = float(exact(a) if is_exact(a) else a)
    placed: list[int] = []
    n = 1
    for t in targets:
        slack = tolerance + 1e-12 * t
        best = None
        while True:
            cf = gamma_cf(placed + [n])
            q = _even_denominators(cf, n)[n]
            e = (q * math.pi / af) ** 2
            if e > t + slack:
                break
            if abs(e - t) <= slack and (best is None or abs(e - t) < best[1]):
                best = (n, abs(e - t))
            n += 1
        if best is None:
            raise Infeasible(f"no gap anchor (q*pi/a)^2 within {tolerance} of target {t}")
        placed.append(best[0])
        n = best[0] + 1
    return DesignSpec(tuple(placed), d, a)
