"""Cheap-corridor configurations that force geodesics through axis segments."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ..engine import PathRecord, VerificationReport, verify_forced_segments
from ..errors import ConstraintTooLarge, EmptyIntersection, InvalidEpsilon, NoSuitableA, PreconditionError, RatioTooSmall
from ..lattice import Configuration, CylinderConstraint, EpsilonSchedule, Window, window_edges
from ..values import Interval, ValueSet, format_rational, to_rational
from .claims import Claim


def _maxnorm(p) -> int:
    return max(abs(c) for c in p)


@dataclass(frozen=True)
class CorridorSpec:
    d: int
    p1: int
    p2: int
    a: Fraction
    eps: Fraction
    cheap: Fraction
    segments: tuple
    inner: Window
    outer: Window
    constraint: CylinderConstraint
    lam: Fraction | None = None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "p1": self.p1,
            "p2": self.p2,
            "a": format_rational(self.a),
            "eps": format_rational(self.eps),
            "cheap": format_rational(self.cheap),
            "lambda": None if self.lam is None else format_rational(self.lam),
            "segments": [[list(s.start), list(s.end)] for s in self.segments],
        }

    def claim(self, builder: str = "corridor") -> Claim:
        return Claim(builder, "verify_forced_segments", True, self.to_dict())


def corridor_p2(inf, eps, d: int, p1: int) -> int:
    """Smallest p2 > p1 with (4p2 + 4d·p1 + s)·inf + ε < 5s(inf + ε) − ε at s = p2 − p1.

    The right side grows faster in s than the left, so the inequality at
    s = p2 − p1 implies it for every longer excursion.
    """
    inf, eps = Fraction(inf), Fraction(eps)
    p2 = p1 + 1
    while True:
        s = p2 - p1
        if (4 * p2 + 4 * d * p1 + s) * inf + eps < 5 * s * (inf + eps) - eps:
            return p2
        p2 += 1


def multi_corridor_p2(inf, eps, d: int, p1: int) -> int:
    """Smallest p2 meeting the same-facet, neighbouring-facet and opposite-facet comparisons."""
    inf, eps = Fraction(inf), Fraction(eps)

    def smallest_above(bound: Fraction) -> int:
        return math.floor(bound) + 1

    same = p1 + smallest_above(((5 + 2 * d) * p1 * inf + 2 * eps) / eps)
    neighbour = smallest_above((2 * p1 * inf + 2 * eps) / eps)
    opposite = smallest_above(((2 * d + 1) * p1 * inf + 2 * eps) / eps) - p1
    return max(same, neighbour, opposite, p1 + 1)


def _check_constraint(c: CylinderConstraint | None, A: ValueSet, p1: int) -> CylinderConstraint:
    if c is None:
        return CylinderConstraint.trivial(A)
    for e in c.overrides:
        if any(_maxnorm(p) >= p1 for p in e.endpoints):
            raise ConstraintTooLarge(f"constraint edge {e} does not fit inside the inner box")
    return c.bounded()


def _emit(
    A: ValueSet,
    window: Window,
    classify,
    c: CylinderConstraint,
    cheap_iv_total: Fraction,
    inf,
    a,
    seed,
) -> tuple[Configuration, CylinderConstraint, Fraction]:
    """Assign weights: classify(edge) -> 'cheap' | 'expensive' | 'free'."""
    cheap_edges, exp_edges, free = [], [], []
    for e in window_edges(window):
        if e in c.overrides:
            continue
        kind = classify(e)
        (cheap_edges if kind == "cheap" else exp_edges if kind == "expensive" else free).append(e)
    sched = EpsilonSchedule(cheap_iv_total, tuple(cheap_edges + exp_edges))
    alloc = sched.allocation
    overrides = dict(c.overrides)
    for e in cheap_edges:
        overrides[e] = Interval(inf, inf + alloc[e], True, False)
    for e in exp_edges:
        overrides[e] = Interval(a - alloc[e], a + alloc[e], False, False)
    V = CylinderConstraint(A, overrides)
    smallest = min(alloc.values()) if alloc else cheap_iv_total
    cheap = A.representative(Interval(inf, inf + smallest, True, False), "low")
    expensive = a if a in A else A.representative(Interval(a - smallest, a + smallest, False, False), "mid")
    rng = random.Random(seed) if seed is not None else None
    weights = {}
    for e in window_edges(window):
        if e in c.overrides:
            iv = c.overrides[e]
            weights[e] = A.sample(iv, rng) if rng else A.representative(iv, "low")
        elif e in alloc:
            if rng:
                weights[e] = A.sample(overrides[e], rng)
            else:
                weights[e] = cheap if overrides[e].lo == inf else expensive
        else:
            weights[e] = cheap
    return Configuration(window, weights, A, c), V, cheap


def build_corridor(
    A: ValueSet,
    d: int,
    p1: int,
    c: CylinderConstraint | None = None,
    *,
    eps=None,
    a=None,
    p2: int | None = None,
    seed: int | None = None,
) -> tuple[Configuration, CorridorSpec]:
    """Cheap boundaries of [-p1,p1]^d and [-p2,p2]^d joined by the cheap segment [p1ξ1, p2ξ1].

    Every other edge between the two boxes is expensive (near ``a``).  The
    default ε is half the largest admissible one and the default ``a`` is
    the deterministic member of A above 5(inf A + ε).  Passing ``p2``
    overrides the certified size (used for undersized controls).
    """
    inf, sup = A.inf, A.sup
    if not sup > 5 * inf:
        raise RatioTooSmall(f"need sup A > 5 inf A, got {sup} <= 5*{inf}")
    if p1 < 1:
        raise PreconditionError("p1 must be at least 1")
    if eps is None:
        eps = Fraction(1, 2) if math.isinf(sup) else (sup - 5 * inf) / 12
    eps = to_rational(eps)
    if not (eps > 0 and (math.isinf(sup) or 5 * (inf + eps) < sup - eps)):
        raise InvalidEpsilon(f"eps={eps} leaves no room above 5(inf A + eps)")
    a = A.member_above(5 * (inf + eps)) if a is None else to_rational(a)
    if not a > 5 * (inf + eps) or a not in A:
        raise PreconditionError(f"expensive value {a} must lie in A above 5(inf A + eps)")
    c = _check_constraint(c, A, p1)
    if p2 is None:
        p2 = corridor_p2(inf, eps, d, p1)
    if p2 <= p1:
        raise PreconditionError("p2 must exceed p1")

    def classify(e):
        p, q = e.endpoints
        np_, nq = _maxnorm(p), _maxnorm(q)
        if np_ <= p1 and nq <= p1:
            return "cheap" if np_ == nq == p1 else "free"
        if np_ == nq == p2:
            return "cheap"
        if e.axis == 0 and all(x == 0 for x in e.base[1:]) and p1 <= e.base[0] < p2:
            return "cheap"
        return "expensive"

    window = Window.box(p2 + 1, d)
    cfg, V, cheap = _emit(A, window, classify, c, eps, inf, a, seed)
    seg = PathRecord.straight((p1,) + (0,) * (d - 1), 0, p2 - p1)
    spec = CorridorSpec(d, p1, p2, Fraction(a), eps, cheap, (seg,), Window.box(p1, d), Window.box(p2, d), V)
    return cfg, spec


def build_multi_corridor(
    A: ValueSet,
    d: int,
    p1: int,
    lam,
    c: CylinderConstraint | None = None,
    *,
    p2: int | None = None,
    seed: int | None = None,
) -> tuple[Configuration, CorridorSpec]:
    """Cheap boundaries plus all 2d cheap segments ±[p1ξi, p2ξi]."""
    lam = to_rational(lam)
    if not lam > 1:
        raise PreconditionError("lambda must exceed 1")
    inf = A.inf
    try:
        a = A.member_above(lam * inf)
    except EmptyIntersection as exc:
        raise NoSuitableA(f"no member of A exceeds {lam}·inf A") from exc
    if math.isinf(a) or not a > lam * inf:
        raise NoSuitableA(f"no member of A exceeds {lam}·inf A")
    diam = A.diameter
    room = a / lam - inf
    eps = (room if math.isinf(diam) else min(diam / 2, room)) / 2
    if not a > lam * (inf + eps):
        raise NoSuitableA("expensive value too close to the threshold")
    c = _check_constraint(c, A, p1)
    if p2 is None:
        p2 = multi_corridor_p2(inf, eps, d, p1)

    def on_segment(e) -> bool:
        rest = [x for i, x in enumerate(e.base) if i != e.axis]
        if any(rest):
            return False
        s = e.base[e.axis]
        return p1 <= s < p2 or -p2 <= s < -p1

    def classify(e):
        p, q = e.endpoints
        np_, nq = _maxnorm(p), _maxnorm(q)
        if np_ <= p1 and nq <= p1:
            return "cheap" if np_ == nq == p1 else "free"
        if np_ == nq == p2 or on_segment(e):
            return "cheap"
        return "expensive"

    window = Window.box(p2 + 1, d)
    cfg, V, cheap = _emit(A, window, classify, c, eps, inf, a, seed)
    segs = []
    for i in range(d):
        for sign in (1, -1):
            start = tuple(sign * p1 if j == i else 0 for j in range(d))
            segs.append(PathRecord.straight(start, i, p2 - p1, sign))
    spec = CorridorSpec(d, p1, p2, Fraction(a), eps, cheap, tuple(segs), Window.box(p1, d), Window.box(p2, d), V, lam)
    return cfg, spec


def verify_corridor(cfg: Configuration, spec: CorridorSpec) -> VerificationReport:
    return verify_forced_segments(cfg, spec.inner, spec.outer, list(spec.segments))


def ray_bound(d: int) -> int:
    """Upper bound 4d² on geodesic rays: 2d segments, 2d choices after each."""
    return 4 * d * d
