"""Exact passage times, geodesic DAGs and reach sets on a finite window.

All weights of a configuration are rescaled by the lcm of their
denominators so that Dijkstra runs on Python ints; results are converted
back to :class:`~fractions.Fraction` before they leave this module.
"""
from __future__ import annotations

import heapq
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CyclicTightGraph, InvalidEpsilon, NegativeWeights, OutOfWindow, UncertifiedWindow
from .lattice import Configuration, CylinderConstraint, Edge, Window, l1_dist, window_edges
from .values import format_rational


@dataclass(frozen=True)
class PathRecord:
    """A lattice path given by its vertex sequence."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(tuple(v) for v in self.vertices)
        if not vs:
            raise ValueError("a path needs at least one vertex")
        object.__setattr__(self, "vertices", vs)
        for p, q in zip(vs, vs[1:]):
            if l1_dist(p, q) != 1:
                raise ValueError(f"{p} and {q} are not consecutive lattice neighbours")

    @classmethod
    def straight(cls, start: Sequence, axis: int, length: int, sign: int = 1) -> PathRecord:
        start = tuple(start)
        vs = [tuple(c + (sign * s if i == axis else 0) for i, c in enumerate(start)) for s in range(length + 1)]
        return cls(tuple(vs))

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(Edge.between(p, q) for p, q in zip(self.vertices, self.vertices[1:]))

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices) - 1

    @property
    def closed(self) -> bool:
        return len(self.vertices) > 1 and self.vertices[0] == self.vertices[-1]

    @property
    def self_avoiding(self) -> bool:
        vs = self.vertices
        inner = vs[:-1] if self.closed else vs
        return len(set(inner)) == len(inner)

    def reversed(self) -> PathRecord:
        return PathRecord(self.vertices[::-1])

    def subpath(self, i: int, j: int) -> PathRecord:
        return PathRecord(self.vertices[i : j + 1])

    def contains_segment(self, seg: PathRecord) -> bool:
        """True if every edge of ``seg`` lies on this path."""
        mine = set(self.edges)
        return all(e in mine for e in seg.edges)


def monotone_path(x: Sequence, y: Sequence) -> PathRecord:
    """The ℓ1-optimal path from x to y that fixes axis 0 first, then axis 1, ...

    Its sequence of step axes is lexicographically smallest among all
    ℓ1-optimal paths.
    """
    cur = list(x)
    vs = [tuple(cur)]
    for i in range(len(cur)):
        step = 1 if y[i] > cur[i] else -1
        while cur[i] != y[i]:
            cur[i] += step
            vs.append(tuple(cur))
    return PathRecord(tuple(vs))


def path_time(cfg: Configuration, path: PathRecord) -> Fraction:
    """Sum of the weights along ``path`` (negative weights allowed)."""
    total = Fraction(0)
    w = cfg.weights
    for e in path.edges:
        if e not in w:
            raise OutOfWindow(f"edge {e} is outside the configuration window")
        total += w[e]
    return total


class _Graph:
    """Integer-weighted adjacency of one box inside a configuration."""

    def __init__(self, cfg: Configuration, box: Window):
        self.box = box
        self.d = box.d
        shape = box.shape
        strides = [1] * self.d
        for i in range(self.d - 2, -1, -1):
            strides[i] = strides[i + 1] * shape[i + 1]
        self.strides = strides
        self.coords = list(box.points())
        edges = [e for e in window_edges(box)]
        weights = cfg.weights
        dens = {weights[e].denominator for e in edges}
        self.scale = math.lcm(*dens) if dens else 1
        L = self.scale
        adj: list[list[tuple[int, int]]] = [[] for _ in self.coords]
        self.negative = False
        for e in edges:
            w = weights[e]
            wi = w.numerator * (L // w.denominator)
            if wi < 0:
                self.negative = True
            u = self.index(e.base)
            v = u + strides[e.axis]
            adj[u].append((v, wi))
            adj[v].append((u, wi))
        self.adj = adj
        self.boundary = [i for i, p in enumerate(self.coords) if box.on_boundary(p)]

    def index(self, p: Sequence) -> int:
        return sum((c - a) * s for c, a, s in zip(p, self.box.lo, self.strides))

    def to_fraction(self, v: int) -> Fraction:
        return Fraction(v, self.scale)

    def to_int(self, t) -> int:
        """Largest integer-scaled value not exceeding t."""
        t = Fraction(t)
        return math.floor(t * self.scale)


def _graph(cfg: Configuration, box: Window | None = None) -> _Graph:
    box = box or cfg.window
    key = ("graph", box)
    g = cfg._cache.get(key)
    if g is None:
        if not cfg.window.contains_window(box):
            raise OutOfWindow(f"box {box} exceeds the configuration window")
        g = _Graph(cfg, box)
        cfg._cache[key] = g
    return g


def _dijkstra(g: _Graph, src: int, banned_vertices=frozenset(), banned_edge=None) -> list:
    inf = None
    dist: list = [inf] * len(g.coords)
    dist[src] = 0
    heap = [(0, src)]
    adj = g.adj
    while heap:
        du, u = heapq.heappop(heap)
        if du != dist[u]:
            continue
        for v, w in adj[u]:
            if v in banned_vertices or (banned_edge is not None and (u, v) == banned_edge):
                continue
            nd = du + w
            dv = dist[v]
            if dv is None or nd < dv:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _distances(cfg: Configuration, src: Sequence, box: Window | None = None) -> tuple[_Graph, list]:
    g = _graph(cfg, box)
    if g.negative:
        raise NegativeWeights("negative weights present; use path_time with an explicit witness path")
    src = tuple(src)
    if src not in g.box:
        raise OutOfWindow(f"{src} is outside the window")
    key = ("dist", g.box, src)
    dist = cfg._cache.get(key)
    if dist is None:
        dist = _dijkstra(g, g.index(src))
        cfg._cache[key] = dist
    return g, dist


@dataclass(frozen=True)
class Certificate:
    """Whether a window-relative optimum is the true lattice optimum.

    Any path that leaves the window first reaches its boundary, which costs
    at least ``boundary_exit_bound``; since weights are nonnegative the
    in-window optimum is global (and every global geodesic stays inside)
    when that bound is strictly larger.
    """

    certified: bool
    locality_radius: int
    boundary_exit_bound: Fraction | None
    in_window_optimum: Fraction

    def to_dict(self) -> dict:
        return {
            "certified": self.certified,
            "locality_radius": self.locality_radius,
            "boundary_exit_bound": None if self.boundary_exit_bound is None else format_rational(self.boundary_exit_bound),
            "in_window_optimum": format_rational(self.in_window_optimum),
        }


def _certificate(g: _Graph, dist: list, src: Sequence, value_int: int) -> Certificate:
    exits = [dist[i] for i in g.boundary if dist[i] is not None]
    bound = min(exits) if exits else None
    certified = bound is not None and bound > value_int
    return Certificate(
        certified=certified,
        locality_radius=g.box.margin_of(src),
        boundary_exit_bound=None if bound is None else g.to_fraction(bound),
        in_window_optimum=g.to_fraction(value_int),
    )


def t_distance(cfg: Configuration, x: Sequence, y: Sequence) -> tuple[Fraction, Certificate]:
    """Minimum passage time from x to y over paths inside the window."""
    y = tuple(y)
    if y not in cfg.window:
        raise OutOfWindow(f"{y} is outside the window")
    g, dist = _distances(cfg, x)
    v = dist[g.index(y)]
    if v is None:
        raise OutOfWindow(f"{y} is not reachable from {tuple(x)} inside the window")
    return g.to_fraction(v), _certificate(g, dist, x, v)


def t_distance_certified(cfg: Configuration, x: Sequence, y: Sequence) -> Fraction:
    """Like :func:`t_distance` but raises unless the value is the true T."""
    t, cert = t_distance(cfg, x, y)
    if not cert.certified:
        raise UncertifiedWindow(f"window does not certify T{tuple(x), tuple(y)}: {cert}")
    return t


@dataclass(frozen=True)
class GeodesicDag:
    """All shortest x→y paths inside the window, as a DAG of directed edges."""

    source: tuple
    target: tuple
    distance: Fraction
    edges: frozenset
    count: int
    geodesic: PathRecord
    certificate: Certificate

    @property
    def unique(self) -> bool:
        return self.count == 1

    @property
    def undirected_edges(self) -> frozenset:
        return frozenset(Edge.between(u, v) for u, v in self.edges)

    def successors(self, p) -> list:
        return sorted(v for u, v in self.edges if u == tuple(p))

    def contains_path(self, path: PathRecord) -> bool:
        if path.start != self.source or path.end != self.target:
            return False
        return all((u, v) in self.edges for u, v in zip(path.vertices, path.vertices[1:]))

    def paths(self, limit: int | None = None):
        """Enumerate geodesics (exponentially many in general)."""
        succ: dict = {}
        for u, v in self.edges:
            succ.setdefault(u, []).append(v)
        for vs in succ.values():
            vs.sort()
        out = []
        stack = [(self.source, (self.source,))]
        while stack:
            u, acc = stack.pop()
            if u == self.target:
                out.append(PathRecord(acc))
                if limit is not None and len(out) >= limit:
                    break
                continue
            for v in reversed(succ.get(u, [])):
                stack.append((v, acc + (v,)))
        return out


def _tight_successors(g: _Graph, dist: list) -> list[list[int]]:
    succ: list[list[int]] = [[] for _ in g.coords]
    for u, nbrs in enumerate(g.adj):
        du = dist[u]
        if du is None:
            continue
        for v, w in nbrs:
            if dist[v] is not None and du + w == dist[v]:
                succ[u].append(v)
    return succ


def _topological(vertices: Iterable[int], succ: list[list[int]]) -> list[int]:
    verts = set(vertices)
    indeg = {v: 0 for v in verts}
    for u in verts:
        for v in succ[u]:
            if v in verts:
                indeg[v] += 1
    queue = deque(sorted(v for v, k in indeg.items() if k == 0))
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in succ[u]:
            if v in verts:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
    if len(order) != len(verts):
        raise CyclicTightGraph("zero-weight cycle among tight edges; geodesics are not finite in number")
    return order


def shortest_path_dag(cfg: Configuration, x: Sequence, y: Sequence) -> GeodesicDag:
    """Geodesic DAG from x to y with an exact (big-integer) path count.

    The extracted geodesic takes, at each vertex, the lexicographically
    smallest successor that still lies on a geodesic.
    """
    x, y = tuple(x), tuple(y)
    if y not in cfg.window:
        raise OutOfWindow(f"{y} is outside the window")
    g, dist = _distances(cfg, x)
    s, t = g.index(x), g.index(y)
    if dist[t] is None:
        raise OutOfWindow(f"{y} is not reachable from {x}")
    succ = _tight_successors(g, dist)
    pred: list[list[int]] = [[] for _ in g.coords]
    for u, vs in enumerate(succ):
        for v in vs:
            pred[v].append(u)
    # vertices that can still reach y along tight edges
    on = {t}
    stack = [t]
    while stack:
        v = stack.pop()
        for u in pred[v]:
            if u not in on:
                on.add(u)
                stack.append(u)
    order = _topological(on, succ)
    count = {v: 0 for v in on}
    count[s] = 1
    for u in order:
        cu = count[u]
        if cu:
            for v in succ[u]:
                if v in on:
                    count[v] += cu
    coords = g.coords
    edges = frozenset((coords[u], coords[v]) for u in on for v in succ[u] if v in on)
    walk = [s]
    while walk[-1] != t:
        nxt = [v for v in succ[walk[-1]] if v in on]
        walk.append(min(nxt, key=lambda v: coords[v]))
    return GeodesicDag(
        source=x,
        target=y,
        distance=g.to_fraction(dist[t]),
        edges=edges,
        count=count[t],
        geodesic=PathRecord(tuple(coords[v] for v in walk)),
        certificate=_certificate(g, dist, x, dist[t]),
    )


@dataclass(frozen=True)
class LatticeSet:
    """A finite set of lattice points inside a window."""

    points: frozenset
    window: Window
    certified: bool = True

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(tuple(p) for p in self.points))

    def __contains__(self, p) -> bool:
        return tuple(p) in self.points

    def __iter__(self):
        return iter(sorted(self.points))

    def __len__(self) -> int:
        return len(self.points)

    def __le__(self, other: LatticeSet) -> bool:
        return self.points <= other.points


def reach_set(cfg: Configuration, source: Sequence, t) -> LatticeSet:
    """Lattice points reachable from ``source`` within time ``t``.

    ``certified`` is True when no path of cost ≤ t can touch the window
    boundary, so the set equals the one computed on the whole lattice.
    """
    t = Fraction(t)
    g, dist = _distances(cfg, source)
    ti = g.to_int(t)
    pts = frozenset(g.coords[i] for i, dv in enumerate(dist) if dv is not None and dv <= ti)
    certified = all(dist[i] is None or dist[i] > ti for i in g.boundary)
    return LatticeSet(pts, cfg.window, certified)


def locality_radius(c: CylinderConstraint, x: Sequence, y: Sequence, cheap_value, eps) -> int:
    """Smallest n with (n-k)(a-ε) > C·k + |x-y|(a+ε).

    With every edge within ℓ1 distance n of x (outside the constraint)
    weighted inside (a-ε, a+ε), any x→y path that leaves that edge set is
    more expensive than an ℓ1-optimal path.
    """
    a, eps = Fraction(cheap_value), Fraction(eps)
    if not (a > 0 and 0 < eps < a):
        raise InvalidEpsilon(f"need 0 < eps < a, got eps={eps}, a={a}")
    cb = c.bounded()
    k, C = cb.k, cb.cost_cap
    D = l1_dist(x, y)
    rhs = C * k + D * (a + eps)
    # (n - k)(a - eps) > rhs  <=>  n > k + rhs / (a - eps)
    bound = k + rhs / (a - eps)
    return max(1, math.floor(bound) + 1)


def best_alternative_time(cfg: Configuration, path: PathRecord) -> Fraction | None:
    """Minimum passage time over simple paths with the same ends other than ``path``.

    One round of Yen's spur-path search; returns None if ``path`` is the
    only simple path in the window.
    """
    g = _graph(cfg)
    if g.negative:
        raise NegativeWeights("best_alternative_time needs nonnegative weights")
    idx = [g.index(v) for v in path.vertices]
    target = idx[-1]
    w = cfg.weights
    best = None
    prefix = Fraction(0)
    for i in range(len(idx) - 1):
        banned = frozenset(idx[:i])
        dist = _dijkstra(g, idx[i], banned_vertices=banned, banned_edge=(idx[i], idx[i + 1]))
        if dist[target] is not None:
            cand = prefix + g.to_fraction(dist[target])
            if best is None or cand < best:
                best = cand
        prefix += w[Edge.between(path.vertices[i], path.vertices[i + 1])]
    return best


@dataclass
class VerificationReport:
    verdict: bool
    checked_pairs: int
    counterexample: dict | None = None
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "report": "forced-segments",
            "verdict": self.verdict,
            "checked_pairs": self.checked_pairs,
            "counterexample": self.counterexample,
            "certificate": self.certificate,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _box_boundary(w: Window) -> list:
    return w.boundary_points()


def verify_forced_segments(
    cfg: Configuration,
    inner: Window,
    outer: Window,
    segments: Sequence[PathRecord],
) -> VerificationReport:
    """Check that every geodesic from ∂inner to ∂outer traverses a whole segment.

    Paths are searched inside ``outer``.  That loses nothing: a lattice
    geodesic from x1 to x2 first meets ∂outer at some y2, and its piece up
    to y2 lies in ``outer`` and is a geodesic there, so if every in-box
    geodesic to y2 traverses a segment, so does the original one.
    """
    if not cfg.window.contains_window(outer):
        raise UncertifiedWindow("outer box is not inside the configuration window")
    if not all(a < b for a, b in zip(outer.lo, inner.lo)) or not all(a > b for a, b in zip(outer.hi, inner.hi)):
        raise UncertifiedWindow("inner box must lie strictly inside the outer box")
    g = _graph(cfg, outer)
    if g.negative:
        raise NegativeWeights("forced-segment verification needs nonnegative weights")

    # each oriented segment as a list of vertex indices
    oriented = []
    for j, seg in enumerate(segments):
        for v in seg.vertices:
            if v not in outer:
                raise UncertifiedWindow(f"segment {j} leaves the outer box")
        ids = [g.index(v) for v in seg.vertices]
        if len(ids) < 2:
            raise ValueError("segments need at least one edge")
        oriented.append(ids)
        oriented.append(ids[::-1])
    first_edge = {}
    for o, ids in enumerate(oriented):
        first_edge[(ids[0], ids[1])] = o

    sources = _box_boundary(inner)
    targets = [g.index(p) for p in _box_boundary(outer)]
    checked = 0
    for x1 in sources:
        dist = _dijkstra(g, g.index(x1))
        succ = _tight_successors(g, dist)
        order = _topological(range(len(g.coords)), succ)
        total = [0] * len(g.coords)
        total[g.index(x1)] = 1
        # bad[v]: state -> number of geodesics to v that have not yet
        # traversed a whole segment; state is None or (orientation, progress)
        bad: list[dict] = [dict() for _ in g.coords]
        bad[g.index(x1)][None] = 1
        for u in order:
            tu = total[u]
            states = bad[u]
            if not tu and not states:
                continue
            for v in succ[u]:
                total[v] += tu
                for st, cnt in states.items():
                    nxt = None
                    done = False
                    if st is not None:
                        o, p = st
                        ids = oriented[o]
                        if ids[p] == u and ids[p + 1] == v:
                            if p + 2 == len(ids):
                                done = True
                            else:
                                nxt = (o, p + 1)
                    if nxt is None and not done:
                        o2 = first_edge.get((u, v))
                        if o2 is not None:
                            if len(oriented[o2]) == 2:
                                done = True
                            else:
                                nxt = (o2, 1)
                    if not done:
                        bad[v][nxt] = bad[v].get(nxt, 0) + cnt
        for t in targets:
            checked += 1
            nbad = sum(bad[t].values())
            if nbad:
                return VerificationReport(
                    verdict=False,
                    checked_pairs=checked,
                    counterexample={
                        "x1": list(x1),
                        "x2": list(g.coords[t]),
                        "geodesics": total[t],
                        "avoiding_geodesics": nbad,
                        "distance": format_rational(g.to_fraction(dist[t])),
                    },
                    certificate=_report_cert(inner, outer, cfg),
                )
    return VerificationReport(True, checked, None, _report_cert(inner, outer, cfg))


def _report_cert(inner: Window, outer: Window, cfg: Configuration) -> dict:
    return {
        "inner": [list(inner.lo), list(inner.hi)],
        "outer": [list(outer.lo), list(outer.hi)],
        "window": [list(cfg.window.lo), list(cfg.window.hi)],
        "search_domain": "outer box (first-hit reduction)",
    }
