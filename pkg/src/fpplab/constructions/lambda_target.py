"""Configurations whose passage time along a direction targets a given ratio λ."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from ..engine import PathRecord, monotone_path, t_distance
from ..errors import LambdaOutOfRange, PreconditionError, ToleranceInfeasible
from ..lattice import Configuration, CylinderConstraint, EpsilonSchedule, Window, floor_lattice_point, l1_norm, window_edges
from ..values import ValueSet, format_rational, to_rational
from .claims import Claim


class Split(NamedTuple):
    n1: int
    n2: int
    error: Fraction
    within_tolerance: bool | None


def solve_split(a, b, lam, N: int, n: int | None = None) -> Split:
    """Positive N1 + N2 = N making (a·N1 + b·N2)/N closest to λ.

    Ties go to the larger N1.  ``within_tolerance`` reports whether the
    error is below 1/(4n) when n is given.
    """
    a, b, lam = to_rational(a), to_rational(b), to_rational(lam)
    if not a < lam < b:
        raise LambdaOutOfRange(f"lambda={lam} not in ({a}, {b})")
    if N < 2:
        raise PreconditionError("N must be at least 2")
    best = None
    for n1 in range(N - 1, 0, -1):
        err = abs((a * n1 + b * (N - n1)) / N - lam)
        if best is None or err < best[1]:
            best = (n1, err)
    n1, err = best
    ok = None if n is None else err < Fraction(1, 4 * n)
    return Split(n1, N - n1, err, ok)


@dataclass(frozen=True)
class LambdaSpec:
    lam: Fraction
    a: Fraction
    b: Fraction
    n: int
    mu: int
    N1: int
    N2: int
    target: tuple
    box: Window
    gamma0: PathRecord
    split_error: Fraction
    eps: Fraction

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return self.lam - Fraction(1, self.n), self.lam + Fraction(1, self.n)

    def to_dict(self) -> dict:
        return {
            "lambda": format_rational(self.lam),
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "n": self.n,
            "mu": self.mu,
            "N1": self.N1,
            "N2": self.N2,
            "target": list(self.target),
            "split_error": format_rational(self.split_error),
        }

    def claim(self) -> Claim:
        lo, hi = self.interval
        params = self.to_dict() | {"lo": format_rational(lo), "hi": format_rational(hi)}
        return Claim("lambda", "t_distance", True, params)


def _lambda_conditions(a, b, lam, n, mu, N, k, C) -> Split | None:
    if N < 2:
        return None
    s = solve_split(a, b, lam, N, n)
    half = Fraction(1, 2 * n)
    if not s.within_tolerance:
        return None
    ratio = (a * s.n1 + b * s.n2) / mu
    if not (lam - half < ratio < lam + half):
        return None
    # upper bound on the cost of Γ0 and lower bound on every other path
    if not a * s.n1 + b * s.n2 + half + C < mu * (lam + Fraction(1, n)):
        return None
    if not a * s.n1 + b * (s.n2 - k) - half > mu * (lam - Fraction(1, n)):
        return None
    return s


def build_lambda_config(
    A: ValueSet,
    a,
    b,
    lam,
    n: int,
    x: Sequence = (1, 0),
    m: int = 20,
    c: CylinderConstraint | None = None,
    max_mu: int | None = None,
) -> tuple[Configuration, LambdaSpec]:
    """Configuration with T(0, ⌊μx⌋)/μ within 1/n of λ for some integer μ > m.

    Γ0 is the axis-ordered monotone path to ⌊μx⌋; its first N1 edges get
    weight a and every other edge of the box gets weight b.
    """
    a, b, lam = to_rational(a), to_rational(b), to_rational(lam)
    if a not in A or b not in A:
        raise PreconditionError("a and b must belong to A")
    if not a + Fraction(1, n) < lam < b - Fraction(1, n):
        raise LambdaOutOfRange(f"need a + 1/n < lambda < b - 1/n, got lambda={lam}, n={n}")
    x = tuple(to_rational(v) for v in x)
    if sum(abs(v) for v in x) != 1:
        raise PreconditionError("direction must have unit l1 norm")
    c = CylinderConstraint.trivial(A) if c is None else c.bounded()
    k, C = c.k, c.cost_cap
    d = len(x)
    max_mu = max_mu or m + 200 * n + 1000
    for mu in range(m + 1, max_mu + 1):
        p = floor_lattice_point(tuple(mu * v for v in x))
        N = l1_norm(p)
        s = _lambda_conditions(a, b, lam, n, mu, N, k, C)
        if s is not None:
            break
    else:
        raise ToleranceInfeasible(f"no mu in ({m}, {max_mu}] meets the tolerance 1/{n}")
    origin = (0,) * d
    gamma0 = monotone_path(origin, p)
    cheap = set(gamma0.edges[: s.n1])
    pts = [origin, p] + [q for e in c.overrides for q in e.endpoints]
    box = Window.bounding(pts, N + k)
    sched = EpsilonSchedule(Fraction(1, 2 * n), tuple(gamma0.edges))
    weights = {}
    for e in window_edges(box):
        if e in c.overrides:
            weights[e] = A.representative(c.overrides[e], "low")
        else:
            weights[e] = a if e in cheap else b
    cfg = Configuration(box, weights, A, c)
    spec = LambdaSpec(lam, a, b, n, mu, s.n1, s.n2, p, box, gamma0, s.error, sched.total)
    return cfg, spec


def target_ratio(
    A: ValueSet,
    lam,
    n: int,
    x: Sequence = (1, 0),
    m: int = 20,
    c: CylinderConstraint | None = None,
) -> tuple[Configuration, LambdaSpec]:
    """Target λ using a = inf A and b = sup A, tightening n when λ sits near an end.

    The returned spec's n is the smallest n' ≥ n with a + 1/n' < λ < b − 1/n',
    so the certified interval [λ − 1/n', λ + 1/n'] lies inside [λ − 1/n, λ + 1/n].
    """
    lam = to_rational(lam)
    a, b = A.inf, A.sup
    if math.isinf(b) or a not in A or b not in A:
        raise PreconditionError("target_ratio needs A with attained finite inf and sup")
    if not a < lam < b:
        raise LambdaOutOfRange(f"lambda={lam} not in ({a}, {b})")
    n2 = n
    while not (a + Fraction(1, n2) < lam < b - Fraction(1, n2)):
        n2 += 1
    return build_lambda_config(A, a, b, lam, n2, x, m, c)


def verify_lambda(cfg: Configuration, spec: LambdaSpec) -> dict:
    """Engine check: certified T(0, p)/μ inside [λ − 1/n, λ + 1/n]."""
    origin = (0,) * len(spec.target)
    T, cert = t_distance(cfg, origin, spec.target)
    ratio = T / spec.mu
    lo, hi = spec.interval
    return {
        "T": T,
        "ratio": ratio,
        "certified": cert.certified,
        "within": lo <= ratio <= hi,
        "verdict": cert.certified and lo <= ratio <= hi,
    }
