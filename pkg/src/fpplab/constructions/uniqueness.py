"""Geodesic uniqueness: the refinement argument and the isolated-point counterexample."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from ..engine import PathRecord, best_alternative_time, locality_radius, path_time, shortest_path_dag
from ..errors import AxisAligned, FPPError, IsolatedPoints, PreconditionError
from ..lattice import Configuration, CylinderConstraint, Edge, Window, l1_dist, window_edges
from ..values import Interval, ValueSet


def build_isolated_point_config(A: ValueSet, x: Sequence, y: Sequence, a=None) -> Configuration:
    """Every edge near [x, y] gets the isolated value a, so all ℓ1-optimal paths tie."""
    x, y = tuple(x), tuple(y)
    if sum(1 for p, q in zip(x, y) if p != q) < 2:
        raise AxisAligned("x and y must differ in at least two coordinates")
    if a is None:
        cands = [v for v in A.isolated_points if v > 0]
        if not cands:
            raise PreconditionError("A has no positive isolated point")
        a = cands[0]
    a = Fraction(a)
    if not A.is_isolated(a) or a <= 0:
        raise PreconditionError(f"{a} is not a positive isolated point of A")
    window = Window.bounding([x, y], l1_dist(x, y) + 1)
    return Configuration(window, {e: a for e in window_edges(window)}, A)


def monotone_path_count(x: Sequence, y: Sequence) -> int:
    """Number of ℓ1-optimal lattice paths: the multinomial of the coordinate gaps."""
    gaps = [abs(p - q) for p, q in zip(x, y)]
    out = math.factorial(sum(gaps))
    for g in gaps:
        out //= math.factorial(g)
    return out


def _cheap_value(A: ValueSet) -> Fraction:
    for comp in A.components:
        if comp.is_point or comp.hi <= 0:
            continue
        lo = max(comp.lo, Fraction(0))
        if math.isinf(comp.hi):
            return Fraction(lo + 1)
        return (lo + comp.hi) / 2
    raise PreconditionError("A has no positive non-degenerate component")


def _projection_inf(A: ValueSet, iv: Interval) -> Fraction:
    return A.restrict(iv)[0].lo


def _projection_sup(A: ValueSet, iv: Interval) -> Fraction:
    return A.restrict(iv)[-1].hi


def refine_to_unique_geodesic(
    c: CylinderConstraint,
    A: ValueSet,
    x: Sequence,
    y: Sequence,
) -> tuple[CylinderConstraint, PathRecord]:
    """Refine ``c`` to W such that every configuration of W has Γ0 as its unique x→y geodesic.

    Steps: pin every edge within the locality radius to (a − ε, a + ε),
    take the lexicographically first geodesic Γ0 for the interval-infimum
    weights, push up the lower end of every other tight edge, and finally
    squeeze Γ0's edges to within gap/(2m) of their infima.
    """
    if A.has_isolated_points:
        raise IsolatedPoints("uniqueness refinement needs A without isolated points")
    x, y = tuple(x), tuple(y)
    U = c.bounded()
    a = _cheap_value(A)
    eps = a / 2
    n = locality_radius(U, x, y, a, eps)
    window = Window.box(n + 1, len(x), x)
    star = {}
    for e in window_edges(window):
        if e in U.overrides:
            continue
        if all(l1_dist(p, x) <= n for p in e.endpoints):
            star[e] = Interval(a - eps, a + eps, False, False)
    V = U.refine(star)

    def infimum_config(W: CylinderConstraint) -> Configuration:
        w = {}
        for e in window_edges(window):
            iv = W.overrides.get(e)
            w[e] = _projection_inf(A, iv) if iv is not None else Fraction(A.inf)
        return Configuration(window, w, A, check=False)

    base = infimum_config(V)
    dag = shortest_path_dag(base, x, y)
    gamma0 = dag.geodesic
    on_gamma = set(gamma0.edges)
    raised = {}
    for e in dag.undirected_edges - on_gamma:
        iv = V.overrides[e]
        lo, hi = _projection_inf(A, iv), _projection_sup(A, iv)
        if lo == hi:
            raise FPPError(f"cannot separate geodesics through the degenerate projection on {e}")
        raised[e] = Interval((lo + hi) / 2, hi, False, iv.hi_closed)
    V2 = V.refine(raised)
    lifted = infimum_config(V2)
    tau0 = path_time(lifted, gamma0)
    alt = best_alternative_time(lifted, gamma0)
    # leaving E* costs at least this much, by the locality radius choice
    exit_bound = (n - U.k) * (a - eps)
    second = exit_bound if alt is None else min(alt, exit_bound)
    gap = second - tau0
    if gap <= 0:
        raise FPPError("refinement failed to separate the geodesic")
    m = len(gamma0)
    slack = gap / 2 / max(m, 1)
    squeeze = {}
    for e in gamma0.edges:
        lo = _projection_inf(A, V2.overrides[e])
        squeeze[e] = Interval(lo, lo + slack, False, False)
    return V2.refine(squeeze), gamma0


def refinement_window(W: CylinderConstraint) -> Window:
    """The sampling window for a refined constraint: its edges plus one layer."""
    return W.bounding_window(1)
