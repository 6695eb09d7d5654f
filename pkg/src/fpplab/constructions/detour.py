"""Diagonal-detour witnesses against the spiked shape D_{1/2} ∪ [0, ξ1]."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..engine import _distances
from ..errors import DimensionUnsupported, OutOfWindow, UncertifiedWindow
from ..lattice import Configuration, l1_norm
from ..values import format_rational, to_rational


def spike_distance(z, t) -> Fraction:
    """ℓ1 distance from z to t·(D_{1/2} ∪ [0, ξ1])."""
    t = Fraction(t)
    to_ball = max(Fraction(0), l1_norm(z) - t / 2)
    x1, x2 = Fraction(z[0]), Fraction(z[1])
    along = Fraction(0) if 0 <= x1 <= t else (-x1 if x1 < 0 else x1 - t)
    return min(to_ball, abs(x2) + along)


@dataclass
class DetourReport:
    t: Fraction
    alpha: Fraction
    delta: Fraction
    step: int
    checked: int = 0
    bound_violations: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    note: str = ""

    @property
    def verdict(self) -> bool:
        return bool(self.witnesses) and not self.bound_violations

    def to_dict(self) -> dict:
        return {
            "report": "detour-witness",
            "t": format_rational(self.t),
            "alpha": format_rational(self.alpha),
            "delta": format_rational(self.delta),
            "step": self.step,
            "checked": self.checked,
            "bound_violations": self.bound_violations,
            "witnesses": self.witnesses,
            "note": self.note,
        }


def detour_witness_check(cfg: Configuration, t, alpha, delta) -> DetourReport:
    """Search for points z = y + ⌊αt⌋(ξ1 ± ξ2) reached by time t but far from the spiked shape.

    y ranges over lattice points with |y| = ⌊t/2⌋ and T(0, y) ≤ t/2 + δ;
    the sign of ξ2 follows the half-plane of y.  Each detour is checked
    against T(0, z) ≤ T(0, y) + 4αt, and z is a witness when it lies in
    B̃(t) at ℓ1 distance at least αt/2 from t·(D_{1/2} ∪ [0, ξ1]).
    """
    if cfg.d != 2:
        raise DimensionUnsupported("the detour check is two-dimensional")
    t, alpha, delta = to_rational(t), to_rational(alpha), to_rational(delta)
    A = cfg.A
    note = ""
    if not A.sup <= 2:
        note = "the 4αt detour bound assumes sup A <= 2; bound checks are informational here"
    step = math.floor(alpha * t)
    report = DetourReport(t, alpha, delta, step, note=note)
    g, dist = _distances(cfg, (0, 0))
    exits = [dist[i] for i in g.boundary if dist[i] is not None]
    exit_bound = g.to_fraction(min(exits)) if exits else None

    def T(p):
        if p not in cfg.window:
            raise OutOfWindow(f"{p} is outside the window")
        v = g.to_fraction(dist[g.index(p)])
        if exit_bound is None or not exit_bound > v:
            raise UncertifiedWindow(f"window does not certify T(0, {p})")
        return v

    r = math.floor(t / 2)
    for y1 in range(-r, r + 1):
        rest = r - abs(y1)
        for y2 in sorted({rest, -rest}):
            y = (y1, y2)
            ty = T(y)
            if ty > t / 2 + delta:
                continue
            report.checked += 1
            s = 1 if y2 >= 0 else -1
            z = (y1 + step, y2 + s * step)
            tz = T(z)
            if tz > ty + 4 * alpha * t:
                report.bound_violations.append({"y": list(y), "z": list(z)})
            if step and tz <= t:
                gap = spike_distance(z, t)
                if gap >= alpha * t / 2:
                    report.witnesses.append(
                        {
                            "y": list(y),
                            "z": list(z),
                            "T_y": format_rational(ty),
                            "T_z": format_rational(tz),
                            "scaled_distance": format_rational(gap / t),
                        }
                    )
    return report
