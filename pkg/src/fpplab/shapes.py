"""Voxelized shapes, exact ℓ1 Hausdorff distance and subgraph approximations.

A shape at resolution n is a finite set of integer points c, standing for
the points c/n of the grid (Z/n)^d.  The compact set it approximates is
the union of the closed grid cells (of any dimension) whose corners all
belong to the set.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, cKDTree
from scipy.spatial import QhullError

from .errors import EmptySet, NoValidN, PreconditionError, ResolutionTooCoarse, ShapeNotInClass
from .lattice import Edge, l1_norm
from .values import ValueSet, to_rational


def _face_neighbors(c: tuple):
    for i in range(len(c)):
        for s in (-1, 1):
            yield c[:i] + (c[i] + s,) + c[i + 1 :]


def _king_neighbors(c: tuple):
    for off in itertools.product((-1, 0, 1), repeat=len(c)):
        if any(off):
            yield tuple(a + b for a, b in zip(c, off))


def _components(cells: frozenset, neighbors) -> int:
    seen: set = set()
    count = 0
    for start in cells:
        if start in seen:
            continue
        count += 1
        seen.add(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for v in neighbors(u):
                if v in cells and v not in seen:
                    seen.add(v)
                    stack.append(v)
    return count


def bfs_lengths(cells: frozenset, source: tuple) -> dict:
    """Grid-graph distances (in steps) from ``source`` inside ``cells``."""
    dist = {source: 0}
    q = deque([source])
    while q:
        u = q.popleft()
        for v in _face_neighbors(u):
            if v in cells and v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


@dataclass(frozen=True)
class ShapeSpec:
    """A connected shape on the grid (Z/n)^d containing the origin.

    Connectivity is that of the closed cells, so two points touching
    diagonally count as connected; the grid graph on the same points may
    still be disconnected, which :func:`check_shape_class` reports as a
    resolution problem.
    """

    d: int
    n: int
    cells: frozenset

    def __post_init__(self):
        cells = frozenset(tuple(int(x) for x in c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        if self.n < 1:
            raise PreconditionError("resolution must be a positive integer")
        if not cells:
            raise EmptySet("a shape needs at least one voxel")
        if any(len(c) != self.d for c in cells):
            raise PreconditionError("voxel dimension mismatch")
        if (0,) * self.d not in cells:
            raise PreconditionError("shape must contain the origin")
        if _components(cells, _king_neighbors) != 1:
            raise PreconditionError("shape is not connected")

    def __contains__(self, c) -> bool:
        return tuple(c) in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def points(self) -> list:
        """The represented points c/n as exact rationals."""
        n = self.n
        return [tuple(Fraction(x, n) for x in c) for c in sorted(self.cells)]

    @property
    def radius(self) -> Fraction:
        """Largest ℓ1 norm of a point of the shape."""
        return Fraction(max(l1_norm(c) for c in self.cells), self.n)

    @property
    def connected(self) -> bool:
        return True

    @cached_property
    def grid_connected(self) -> bool:
        return _components(self.cells, _face_neighbors) == 1

    @cached_property
    def convex(self) -> bool:
        return _is_convex(self.cells, self.d)

    @cached_property
    def l1_star(self) -> bool:
        return _is_l1_star(self.cells)

    def union(self, other: ShapeSpec) -> ShapeSpec:
        if other.d != self.d:
            raise PreconditionError("dimension mismatch")
        n = math.lcm(self.n, other.n)
        a, b = self.refine(n // self.n), other.refine(n // other.n)
        return ShapeSpec(self.d, n, a.cells | b.cells)

    def refine(self, m: int) -> ShapeSpec:
        """The same compact set sampled at resolution n·m."""
        if m == 1:
            return self
        cells = self.cells
        out = set()
        lo = [min(c[i] for c in cells) * m for i in range(self.d)]
        hi = [max(c[i] for c in cells) * m for i in range(self.d)]
        for q in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            choices = []
            for x in q:
                f, r = divmod(x, m)
                choices.append((f,) if r == 0 else (f, f + 1))
            if all(corner in cells for corner in itertools.product(*choices)):
                out.add(q)
        return ShapeSpec(self.d, self.n * m, frozenset(out))


def l1_ball_shape(r, n: int, d: int = 2) -> ShapeSpec:
    """Grid points of the closed ℓ1 ball D_r at resolution n."""
    r = to_rational(r)
    if not r > 0:
        raise PreconditionError("radius must be positive")
    R = math.floor(r * n)
    cells = [c for c in itertools.product(range(-R, R + 1), repeat=d) if l1_norm(c) <= R]
    return ShapeSpec(d, n, frozenset(cells))


def segment_shape(start: Sequence, end: Sequence, n: int) -> ShapeSpec:
    """Grid points of an axis-parallel segment (endpoints multiples of 1/n).

    The segment must pass through the origin for the result to be a shape.
    """
    a = [to_rational(x) * n for x in start]
    b = [to_rational(x) * n for x in end]
    if any(x.denominator != 1 for x in a + b):
        raise PreconditionError("segment endpoints must lie on the grid")
    diff = [i for i in range(len(a)) if a[i] != b[i]]
    if len(diff) > 1:
        raise PreconditionError("only axis-parallel segments are supported")
    a = [int(x) for x in a]
    b = [int(x) for x in b]
    if not diff:
        return ShapeSpec(len(a), n, frozenset([tuple(a)]))
    i = diff[0]
    lo, hi = sorted((a[i], b[i]))
    cells = [tuple(a[:i]) + (s,) + tuple(a[i + 1 :]) for s in range(lo, hi + 1)]
    return ShapeSpec(len(a), n, frozenset(cells))


def _is_l1_star(cells: frozenset) -> bool:
    # a point is star-reachable if some coordinate step towards the origin
    # leads to a star-reachable point
    ok: set = set()
    for c in sorted(cells, key=l1_norm):
        if not any(c):
            ok.add(c)
            continue
        for i, x in enumerate(c):
            if x:
                prev = c[:i] + (x - (1 if x > 0 else -1),) + c[i + 1 :]
                if prev in ok:
                    ok.add(c)
                    break
    return len(ok) == len(cells)


def _is_convex(cells: frozenset, d: int) -> bool:
    pts = np.array(sorted(cells), dtype=float)
    lo = pts.min(axis=0).astype(int)
    hi = pts.max(axis=0).astype(int)
    box = itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))
    if len(pts) <= d or np.linalg.matrix_rank(pts - pts[0]) < d:
        # flat sets: only fully filled axis boxes are accepted
        return all(tuple(p) in cells for p in box)
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return False
    eq = hull.equations
    for p in box:
        if p in cells:
            continue
        if np.all(eq[:, :-1] @ np.array(p, dtype=float) + eq[:, -1] <= 1e-9):
            return False
    return True


def _as_int_points(points: Iterable[Sequence], scale: int) -> np.ndarray:
    out = []
    for p in points:
        row = []
        for x in p:
            v = Fraction(x) * scale
            if v.denominator != 1:
                raise ValueError("scale is not a common denominator")
            row.append(int(v))
        out.append(row)
    return np.array(out, dtype=np.int64)


def _normalize_set(S) -> list:
    if isinstance(S, ShapeSpec):
        return S.points()
    return [tuple(Fraction(x) for x in p) for p in S]


def hausdorff_distance(S1, S2) -> Fraction:
    """Exact ℓ1 Hausdorff distance between two finite point sets.

    Accepts ShapeSpec instances or iterables of rational points.  Points
    are rescaled to a common integer grid so the nearest-neighbour
    distances computed by the k-d tree are exact integers.
    """
    P, Q = _normalize_set(S1), _normalize_set(S2)
    if not P or not Q:
        raise EmptySet("Hausdorff distance needs nonempty sets")
    if len(P[0]) != len(Q[0]):
        raise PreconditionError("dimension mismatch")
    L = math.lcm(*{x.denominator for p in P + Q for x in p})
    a, b = _as_int_points(P, L), _as_int_points(Q, L)
    if max(np.abs(a).max(), np.abs(b).max()) * a.shape[1] >= 2**52:
        raise PreconditionError("coordinates too large for exact distance evaluation")
    da, _ = cKDTree(b).query(a, p=1)
    db, _ = cKDTree(a).query(b, p=1)
    return Fraction(int(round(max(da.max(), db.max()))), L)


def scaled_set(S: Iterable[Sequence], t, n: int) -> frozenset:
    """The points of S divided by t, rounded half-up onto (Z/n)^d.

    Returns integer cells c (meaning c/n).
    """
    t = to_rational(t)
    if not t > 0:
        raise PreconditionError("t must be positive")
    out = set()
    for p in S:
        out.add(tuple(math.floor(Fraction(x) * n / t + Fraction(1, 2)) for x in p))
    return frozenset(out)


def cells_to_points(cells: Iterable[Sequence], n: int) -> list:
    return [tuple(Fraction(x, n) for x in c) for c in sorted(cells)]


@dataclass(frozen=True)
class ShapeClass:
    in_K_A: bool
    l1_star: bool
    convex: bool
    in_P_A: bool
    alpha: Fraction | None
    max_path_length: Fraction
    radius: Fraction

    def to_dict(self) -> dict:
        from .values import format_rational

        return {
            "in_K_A": self.in_K_A,
            "l1_star": self.l1_star,
            "convex": self.convex,
            "in_P_A": self.in_P_A,
            "alpha": None if self.alpha is None else format_rational(self.alpha),
            "max_path_length": format_rational(self.max_path_length),
            "radius": format_rational(self.radius),
        }


def _core_cells(d: int, n: int, A: ValueSet) -> frozenset:
    """Grid points of D_{1/sup A} at resolution n ({0} when sup A is infinite)."""
    if math.isinf(A.sup):
        return frozenset([(0,) * d])
    if A.sup == 0:
        raise PreconditionError("sup A must be positive")
    R = math.floor(Fraction(n) / A.sup)
    return frozenset(c for c in itertools.product(range(-R, R + 1), repeat=d) if l1_norm(c) <= R)


def check_shape_class(K: ShapeSpec, A: ValueSet) -> ShapeClass:
    """Classify K with respect to the shape classes attached to A."""
    if not K.grid_connected:
        raise ResolutionTooCoarse(f"grid graph of the shape is disconnected at resolution {K.n}")
    n = K.n
    core = _core_cells(K.d, n, A)
    inside_outer = A.inf == 0 or all(Fraction(l1_norm(c), n) <= 1 / A.inf for c in K.cells)
    in_K = core <= K.cells and inside_outer
    dist = bfs_lengths(K.cells, (0,) * K.d)
    longest = Fraction(max(dist.values()), n)
    alpha = None
    if A.inf == 0:
        in_P = in_K
    else:
        margin = 1 / A.inf - longest
        alpha = margin if margin > 0 else None
        in_P = in_K and alpha is not None
    return ShapeClass(in_K, K.l1_star, K.convex, in_P, alpha, longest, K.radius)


def dilate_shape(K: ShapeSpec, r, A: ValueSet) -> ShapeSpec:
    """K(r): grid points within ℓ1 distance r of K, clipped to D_{1/inf A}."""
    r = to_rational(r)
    if not r > 0:
        raise PreconditionError("r must be positive")
    steps = math.floor(r * K.n)
    limit = None if A.inf == 0 else Fraction(K.n) / A.inf
    dist = {c: 0 for c in K.cells}
    q = deque(K.cells)
    while q:
        u = q.popleft()
        if dist[u] == steps:
            continue
        for v in _face_neighbors(u):
            if v in dist:
                continue
            if limit is not None and l1_norm(v) > limit:
                continue
            dist[v] = dist[u] + 1
            q.append(v)
    return ShapeSpec(K.d, K.n, frozenset(dist))


@dataclass(frozen=True)
class SubgraphApprox:
    """A connected subgraph H_n of the grid (Z/n)^d approximating a shape."""

    n: int
    vertices: frozenset
    edges: frozenset
    path_length: dict = field(compare=False)
    shape: ShapeSpec = field(compare=False)
    A: ValueSet = field(compare=False)
    eps: Fraction = Fraction(0)

    @property
    def d(self) -> int:
        return self.shape.d

    def points(self) -> list:
        return cells_to_points(self.vertices, self.n)

    def check(self) -> dict:
        """The four defining properties, each as a boolean."""
        adj: dict = {v: [] for v in self.vertices}
        for e in self.edges:
            p, q = e.endpoints
            adj[p].append(q)
            adj[q].append(p)
        origin = (0,) * self.d
        seen = {origin}
        stack = [origin]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        connected = origin in self.vertices and seen == set(self.vertices)
        core = _core_cells(self.d, self.n, self.A)
        core_edges = {
            Edge.between(c, v) for c in core for v in _face_neighbors(c) if v in core
        }
        core_ok = core <= self.vertices and core_edges <= self.edges
        # compare on a common grid: K sampled at the resolution of H
        dh = hausdorff_distance(self.shape.refine(self.n // self.shape.n), self.points())
        lengths = bfs_in_graph(adj, origin)
        if self.A.inf == 0:
            length_ok = True
        else:
            length_ok = all(Fraction(lv, self.n) < 1 / self.A.inf for lv in lengths.values())
        return {
            "connected": connected,
            "core_contained": core_ok,
            "hausdorff": dh < self.eps,
            "path_length": length_ok,
        }

    @property
    def valid(self) -> bool:
        return all(self.check().values())


def bfs_in_graph(adj: dict, source) -> dict:
    dist = {source: 0}
    q = deque([source])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def _subgraph_at(K: ShapeSpec, n: int, A: ValueSet, eps: Fraction) -> SubgraphApprox:
    Kn = K.refine(n // K.n)
    origin = (0,) * K.d
    dist = bfs_lengths(Kn.cells, origin)
    if A.inf == 0:
        keep = set(dist)
    else:
        keep = {v for v, L in dist.items() if Fraction(L, n) < 1 / A.inf}
    keep |= _core_cells(K.d, n, A)
    verts = frozenset(keep)
    edges = frozenset(
        Edge.between(u, v) for u in verts for v in _face_neighbors(u) if v in verts and u < v
    )
    adj: dict = {v: [] for v in verts}
    for e in edges:
        p, q = e.endpoints
        adj[p].append(q)
        adj[q].append(p)
    lengths = bfs_in_graph(adj, origin)
    return SubgraphApprox(n, verts, edges, lengths, K, A, eps)


def build_subgraph_approx(K: ShapeSpec, n: int, A: ValueSet, eps, cap: int | None = None) -> SubgraphApprox:
    """H_n for K: the in-shape grid graph cut to path length < 1/inf A, plus the D_{1/sup A} core.

    Tries n, 2n, 3n, ... up to ``cap`` (default 8n) and returns the first
    graph passing all four checks.
    """
    eps = to_rational(eps)
    if n % K.n:
        raise PreconditionError(f"n={n} is not a multiple of the shape resolution {K.n}")
    cls = check_shape_class(K, A)
    if not cls.in_P_A:
        raise ShapeNotInClass("shape is not in the reachable-shape class for this A")
    cap = cap or 8 * n
    m = n
    while m <= cap:
        H = _subgraph_at(K, m, A, eps)
        if H.valid:
            return H
        m += n
    raise NoValidN(f"no resolution up to {cap} reaches Hausdorff tolerance {eps}")
