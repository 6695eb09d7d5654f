"""Negative weights: a long self-avoiding detour drives the passage time below -n."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from ..engine import PathRecord, path_time
from ..errors import DimensionTooLow, NoNegativeValue
from ..lattice import Configuration, CylinderConstraint, Window, l1_dist, window_edges
from ..values import ValueSet
from .claims import Claim


def negative_length(a, k: int, C, n, D: int, closed: bool = False) -> int:
    """Smallest usable length m with (m − k)(a/2) + C < −n.

    m is then raised to match the parity of D = |x − y| and to leave room
    for a detour (m ≥ D + 2, or m ≥ 4 for a loop).
    """
    a, C, n = Fraction(a), Fraction(C), Fraction(n)
    # (m - k) * a/2 < -n - C  <=>  m > k + (n + C) / (-a/2)
    m = max(0, math.floor(k + (n + C) / (-a / 2)) + 1)
    m = max(m, 4 if closed else D + 2)
    if (m - D) % 2:
        m += 1
    return m


def _detour_path(x: tuple, y: tuple, m: int) -> PathRecord:
    d = len(x)
    if x == y:
        # rectangle of width h and height 1 through x
        h = (m - 2) // 2
        vs = [x]
        for step in [(0, 1)] * h + [(1, 1)] + [(0, -1)] * h + [(1, -1)]:
            axis, sign = step
            p = list(vs[-1])
            p[axis] += sign
            vs.append(tuple(p))
        return PathRecord(tuple(vs))
    diff = [i for i in range(d) if x[i] != y[i]]
    i = diff[0]
    j = next(t for t in range(d) if t != i)
    sigma = -1 if y[j] > x[j] else 1
    h = (m - l1_dist(x, y)) // 2
    vs = [x]

    def move(axis, target):
        p = list(vs[-1])
        step = 1 if target > p[axis] else -1
        while p[axis] != target:
            p[axis] += step
            vs.append(tuple(p))

    move(j, x[j] + sigma * h)
    for t in range(d):
        if t != j:
            move(t, y[t])
    move(j, y[j] + sigma * h)
    move(j, y[j])
    return PathRecord(tuple(vs))


def build_negative_config(
    A: ValueSet,
    x: Sequence,
    y: Sequence,
    n,
    c: CylinderConstraint | None = None,
) -> tuple[Configuration, PathRecord]:
    """Configuration with a self-avoiding x→y path of passage time below −n."""
    x, y = tuple(x), tuple(y)
    if len(x) < 2:
        raise DimensionTooLow("in one dimension the only path between two points is the segment")
    if not A.inf < 0:
        raise NoNegativeValue("A has no negative member")
    a = A.inf if (A.inf_attained and not math.isinf(A.inf)) else A.member_below(0)
    c = CylinderConstraint.trivial(A) if c is None else c.bounded()
    k, C = c.k, c.cost_cap
    m = negative_length(a, k, C, n, l1_dist(x, y), x == y)
    witness = _detour_path(x, y, m)
    assert len(witness) == m and witness.self_avoiding
    pts = list(witness.vertices) + [p for e in c.overrides for p in e.endpoints]
    window = Window.bounding(pts, 1)
    filler = A.member_above(0) if A.sup > 0 else a
    on_path = set(witness.edges)
    weights = {}
    for e in window_edges(window):
        if e in c.overrides:
            weights[e] = A.representative(c.overrides[e], "high")
        elif e in on_path:
            weights[e] = a
        else:
            weights[e] = filler
    return Configuration(window, weights, A, c), witness


def negative_claim(cfg: Configuration, witness: PathRecord, n) -> Claim:
    return Claim(
        "negative",
        "path_time",
        True,
        {"n": str(n), "length": len(witness), "time": str(path_time(cfg, witness))},
    )
