"""Configurations whose reach set B̃(t)/t approximates a prescribed shape."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from ..engine import reach_set
from ..errors import CaseMismatch, ConstraintTooLarge, NoValidN, ShapeNotInClass
from ..lattice import Configuration, CylinderConstraint, EpsilonSchedule, Window, l1_norm, window_edges
from ..shapes import ShapeSpec, SubgraphApprox, build_subgraph_approx, cells_to_points, check_shape_class, hausdorff_distance
from ..values import Interval, ValueSet, format_rational
from .claims import Claim


@dataclass(frozen=True)
class ShapeClaim:
    """What build_shape_config promises about its configuration.

    ``t`` is the time (equal to the resolution n), ``H`` the subgraph in
    grid units, ``excess`` the lattice distance by which B̃(t) may stick
    out of nH_n (and by which nH_n may stick out of B̃(t)), and ``bound``
    the resulting Hausdorff bound 1/(2i) + excess/n.
    """

    case: str
    i: int
    t: int
    H: SubgraphApprox
    N: int
    k: int
    excess: int
    bound: Fraction

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "i": self.i,
            "t": self.t,
            "N": self.N,
            "k": self.k,
            "excess": self.excess,
            "bound": format_rational(self.bound),
        }

    def claim(self) -> Claim:
        return Claim("shape", "reach_set", True, self.to_dict())


def _case_of(A: ValueSet) -> str:
    if A.inf == 0:
        return "i" if math.isinf(A.sup) else "ii"
    if math.isinf(A.sup):
        return "iii"
    raise CaseMismatch("A bounded away from both 0 and infinity is not covered")


def _near_low(A: ValueSet, width) -> Fraction:
    return A.representative(Interval(A.inf, A.inf + width, True, False), "low")


def build_shape_config(
    A: ValueSet,
    K: ShapeSpec,
    i: int,
    case: str | None = None,
    c: CylinderConstraint | None = None,
    n: int | None = None,
    max_multiple: int = 16,
) -> tuple[Configuration, ShapeClaim]:
    """Weights making the lattice reach set at time t = n look like n·H_n.

    Case i (inf A = 0, sup A = ∞): H_n edges nearly free, everything
    around them costs more than n.  Case ii (inf A = 0, A bounded): the
    D_{n/sup A − N} core costs about sup A per edge, the rest of H_n is
    nearly free and a ring of width 2N around it is expensive.  Case iii
    (inf A > 0, sup A = ∞): H_n edges near inf A, exits costlier than n.
    """
    actual = _case_of(A)
    if case is None:
        case = actual
    if case != actual:
        raise CaseMismatch(f"A belongs to case {actual}, not {case}")
    cls = check_shape_class(K, A)
    if case in ("i", "ii") and not cls.in_K_A:
        raise ShapeNotInClass("shape must contain D_{1/sup A}")
    if case == "iii" and not cls.in_P_A:
        raise ShapeNotInClass("shape must be reachable within length below 1/inf A")
    c = CylinderConstraint.trivial(A) if c is None else c.bounded()
    k, C = c.k, c.cost_cap
    eps = Fraction(1, 2 * i)

    if case == "ii":
        N = max(k + 1, math.floor(C / A.sup) + 1, 1)
        excess = 2 * N
    elif case == "iii":
        N = max(math.floor(C / A.inf) + 1, 1)
        excess = N + k
    else:
        N = 0
        excess = k
    candidates = [n] if n is not None else [K.n * j for j in range(1, max_multiple + 1)]
    H = None
    for cand in candidates:
        if cand % K.n or Fraction(excess, cand) > eps or cand <= C:
            continue
        if case == "ii" and cand % A.sup.denominator:
            continue
        try:
            Hc = build_subgraph_approx(K, cand, A, eps, cap=cand)
        except NoValidN:
            continue
        if all(p in Hc.vertices for e in c.overrides for p in e.endpoints):
            H, n = Hc, cand
            break
    if H is None:
        if c.k and n is not None:
            raise ConstraintTooLarge("constraint edges do not fit inside n·H_n")
        raise NoValidN("no admissible resolution found for this tolerance")
    n = H.n
    H_edges = set(H.edges)
    lo, hi = Window.bounding(H.vertices).lo, Window.bounding(H.vertices).hi
    margin = 2 * N + 1 if case == "ii" else 1
    window = Window(lo, hi).expand(margin)

    weights = {}
    ov = c.overrides
    if case == "ii":
        R = math.floor(Fraction(n) / A.sup) - N
        core = {e for e in H_edges if all(l1_norm(p) <= R for p in e.endpoints)}
        cheap_edges = sorted(e for e in H_edges if e not in core and e not in ov)
        budget = (N * A.sup - C) / 2
        heavy = A.representative(Interval(A.sup - Fraction(1, 8 * n), A.sup, False, True), "high")
    else:
        cheap_edges = sorted(e for e in H_edges if e not in ov)
        if case == "i":
            budget = (n - C) / 2
        else:
            budget = (N * A.inf - C) / 2
        heavy = A.member_above(n)
    sched = EpsilonSchedule(budget, tuple(cheap_edges))
    smallest = min(sched.allocation.values()) if cheap_edges else budget
    cheap = _near_low(A, smallest)
    cheap_set = set(cheap_edges)
    for e in window_edges(window):
        if e in ov:
            weights[e] = A.representative(ov[e], "low")
        elif e in cheap_set:
            weights[e] = cheap
        else:
            weights[e] = heavy
    cfg = Configuration(window, weights, A, c)
    bound = eps + Fraction(excess, n)
    return cfg, ShapeClaim(case, i, n, H, N, k, excess, bound)


def hausdorff_directed(P: set, Q: set) -> Fraction:
    """max over p in P of the ℓ1 distance from p to Q (lattice points)."""
    if not P:
        return Fraction(0)
    dist, _ = cKDTree(np.array(sorted(Q))).query(np.array(sorted(P)), p=1)
    return Fraction(int(round(dist.max())))


def verify_shape_config(cfg: Configuration, K: ShapeSpec, claim: ShapeClaim) -> dict:
    """Engine checks for a shape configuration.

    Reports the certified reach set, the exact Hausdorff distance between
    K and B̃(t)/t, and the two one-sided containments of the claim.
    """
    d = K.d
    B = reach_set(cfg, (0,) * d, claim.t)
    Hv = set(claim.H.vertices)
    Bp = set(B.points)
    missing = hausdorff_directed(Hv - Bp, Bp)
    extra = hausdorff_directed(Bp - Hv, Hv)
    dh = hausdorff_distance(K, cells_to_points(Bp, claim.t))
    invariants = claim.H.check()
    return {
        "certified": B.certified,
        "hausdorff": dh,
        "hausdorff_ok": dh <= Fraction(1, claim.i),
        "within_claimed_bound": dh <= claim.bound,
        "H_covered": missing <= claim.excess,
        "B_near_H": extra <= claim.excess,
        "subgraph_invariants": invariants,
        "verdict": B.certified and dh <= Fraction(1, claim.i) and missing <= claim.excess and extra <= claim.excess and all(invariants.values()),
    }
