"""Lattice points, edges, finite windows, cylinder constraints and configurations.

Points of Z^d are plain tuples of ints.  An :class:`Edge` is stored in
canonical form ``(base, axis)`` joining ``base`` and ``base + e_axis``.
"""
from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import CoverageError, EmptyIntersection, PreconditionError
from .values import Interval, ValueSet, to_rational

Point = tuple  # tuple[int, ...]


def l1_norm(p: Sequence) -> int:
    return sum(abs(c) for c in p)


def l1_dist(p: Sequence, q: Sequence):
    return sum(abs(a - b) for a, b in zip(p, q))


def floor_lattice_point(v: Sequence) -> Point:
    """The lattice point p with ``v in p + [0,1)^d``."""
    out = []
    for c in v:
        if isinstance(c, float) and not math.isfinite(c):
            raise PreconditionError("coordinates must be finite")
        out.append(math.floor(c))
    return tuple(out)


def unit(d: int, axis: int, sign: int = 1) -> Point:
    return tuple(sign if i == axis else 0 for i in range(d))


def add(p: Sequence, q: Sequence) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def sub(p: Sequence, q: Sequence) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def scale(p: Sequence, k) -> Point:
    return tuple(a * k for a in p)


@dataclass(frozen=True, order=True)
class Edge:
    base: Point
    axis: int

    @classmethod
    def between(cls, p: Sequence, q: Sequence) -> Edge:
        """Canonical edge joining two nearest neighbours (in either order)."""
        p, q = tuple(p), tuple(q)
        diff = [b - a for a, b in zip(p, q)]
        nz = [i for i, c in enumerate(diff) if c != 0]
        if len(nz) != 1 or abs(diff[nz[0]]) != 1:
            raise PreconditionError(f"{p} and {q} are not nearest neighbours")
        i = nz[0]
        return cls(p if diff[i] == 1 else q, i)

    @property
    def tip(self) -> Point:
        return tuple(c + (1 if i == self.axis else 0) for i, c in enumerate(self.base))

    @property
    def endpoints(self) -> tuple[Point, Point]:
        return self.base, self.tip

    def __str__(self) -> str:
        return f"{self.base}->{self.tip}"


@dataclass(frozen=True)
class Window:
    """Axis-aligned box ``[lo, hi]`` of lattice points (bounds inclusive)."""

    lo: Point
    hi: Point

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(int(c) for c in self.lo))
        object.__setattr__(self, "hi", tuple(int(c) for c in self.hi))
        if len(self.lo) != len(self.hi) or not self.lo:
            raise PreconditionError("window bounds must have the same positive dimension")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise PreconditionError(f"empty window {self.lo}..{self.hi}")

    @classmethod
    def box(cls, radius: int, d: int, center: Sequence | None = None) -> Window:
        c = tuple(center) if center is not None else (0,) * d
        return cls(tuple(x - radius for x in c), tuple(x + radius for x in c))

    @classmethod
    def bounding(cls, points: Iterable[Sequence], margin: int = 0) -> Window:
        pts = [tuple(p) for p in points]
        if not pts:
            raise PreconditionError("cannot bound an empty point set")
        d = len(pts[0])
        lo = tuple(min(p[i] for p in pts) - margin for i in range(d))
        hi = tuple(max(p[i] for p in pts) + margin for i in range(d))
        return cls(lo, hi)

    @property
    def d(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def __contains__(self, p) -> bool:
        return len(p) == self.d and all(a <= c <= b for a, c, b in zip(self.lo, p, self.hi))

    def contains_edge(self, e: Edge) -> bool:
        return e.base in self and e.tip in self

    def contains_window(self, other: Window) -> bool:
        return other.lo in self and other.hi in self

    def expand(self, margin: int) -> Window:
        return Window(tuple(c - margin for c in self.lo), tuple(c + margin for c in self.hi))

    def union(self, other: Window) -> Window:
        return Window(
            tuple(min(a, b) for a, b in zip(self.lo, other.lo)),
            tuple(max(a, b) for a, b in zip(self.hi, other.hi)),
        )

    def points(self) -> Iterator[Point]:
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def on_boundary(self, p: Sequence) -> bool:
        return any(c == a or c == b for a, c, b in zip(self.lo, p, self.hi))

    def boundary_points(self) -> list[Point]:
        return [p for p in self.points() if self.on_boundary(p)]

    def interior_contains(self, p: Sequence) -> bool:
        return all(a < c < b for a, c, b in zip(self.lo, p, self.hi))

    def margin_of(self, p: Sequence) -> int:
        """Lattice steps from ``p`` to the window boundary."""
        return min(min(c - a, b - c) for a, c, b in zip(self.lo, p, self.hi))


@functools.lru_cache(maxsize=32)
def window_edges(w: Window) -> tuple[Edge, ...]:
    """Every edge with both endpoints in ``w``, sorted by (base, axis)."""
    edges = []
    for p in w.points():
        for i in range(w.d):
            if p[i] < w.hi[i]:
                edges.append(Edge(p, i))
    return tuple(edges)


class CylinderConstraint:
    """Finitely many edge projections; all other edges range over all of A.

    ``overrides`` maps each constrained edge to a subinterval of the real
    line whose intersection with A is the projection.
    """

    def __init__(self, A: ValueSet, overrides: Mapping[Edge, Interval] | None = None):
        self.A = A
        ov = dict(overrides or {})
        for e, iv in ov.items():
            if not A.meets(iv):
                raise EmptyIntersection(f"override {iv} on {e} misses {A!r}")
        self.overrides: Mapping[Edge, Interval] = MappingProxyType(ov)

    @classmethod
    def trivial(cls, A: ValueSet) -> CylinderConstraint:
        return cls(A, {})

    @property
    def edges(self) -> frozenset:
        return frozenset(self.overrides)

    @property
    def k(self) -> int:
        return len(self.overrides)

    def bounded(self) -> CylinderConstraint:
        """Shrink every unbounded projection to a bounded one (still meeting A)."""
        return CylinderConstraint(self.A, {e: self.A.bounded_part(iv) for e, iv in self.overrides.items()})

    @property
    def cost_cap(self) -> Fraction:
        """C: upper bound on the summed weight of the constrained edges.

        Only meaningful once every projection is bounded; an unbounded one
        gives ``inf``.
        """
        total = Fraction(0)
        for iv in self.overrides.values():
            parts = self.A.restrict(iv)
            hi = parts[-1].hi
            if math.isinf(hi):
                return math.inf
            total += hi
        return total

    def projection(self, e: Edge) -> Interval | None:
        return self.overrides.get(e)

    def refine(self, updates: Mapping[Edge, Interval]) -> CylinderConstraint:
        """New constraint whose projections are intersected with ``updates``."""
        ov = dict(self.overrides)
        for e, iv in updates.items():
            ov[e] = ov[e].intersect(iv) if e in ov else iv
        return CylinderConstraint(self.A, ov)

    def refines(self, other: CylinderConstraint) -> bool:
        """True if every configuration of self is a configuration of other."""
        for e, iv in other.overrides.items():
            mine = self.overrides.get(e)
            if mine is None:
                return False
            for part in self.A.restrict(mine):
                if not _interval_within(part, iv):
                    return False
        return True

    def satisfied_by(self, weights: Mapping[Edge, Fraction]) -> bool:
        return all(weights[e] in iv for e, iv in self.overrides.items())

    def bounding_window(self, margin: int = 0) -> Window | None:
        if not self.overrides:
            return None
        pts = [p for e in self.overrides for p in e.endpoints]
        return Window.bounding(pts, margin)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CylinderConstraint)
            and self.A == other.A
            and dict(self.overrides) == dict(other.overrides)
        )

    def __repr__(self) -> str:
        return f"CylinderConstraint(k={self.k}, A={self.A!r})"


def _interval_within(inner: Interval, outer: Interval) -> bool:
    if inner.lo < outer.lo or inner.hi > outer.hi:
        return False
    if inner.lo == outer.lo and inner.lo_closed and not outer.lo_closed:
        return False
    if inner.hi == outer.hi and inner.hi_closed and not outer.hi_closed:
        return False
    return True


@dataclass(frozen=True)
class EpsilonSchedule:
    """Per-edge slack ε_e = ε·2^-(j+1) over an enumeration of targeted edges.

    The geometric allocation keeps the total strictly below ``total``.
    """

    total: Fraction
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "total", Fraction(self.total))
        if self.total <= 0:
            raise PreconditionError("epsilon budget must be positive")
        object.__setattr__(self, "edges", tuple(self.edges))

    @cached_property
    def allocation(self) -> Mapping[Edge, Fraction]:
        return MappingProxyType({e: self.total / (2 ** (j + 1)) for j, e in enumerate(self.edges)})

    def __getitem__(self, e: Edge) -> Fraction:
        return self.allocation[e]

    def spent(self) -> Fraction:
        if not self.edges:
            return Fraction(0)
        return self.total * (1 - Fraction(1, 2 ** len(self.edges)))


@dataclass(frozen=True)
class DefaultRule:
    """How unconstrained edges get a weight.

    ``fixed`` uses ``value``; ``choice`` draws from ``candidates`` with the
    sampling seed.
    """

    kind: str = "fixed"
    value: Fraction | None = None
    candidates: tuple = ()

    def __post_init__(self):
        if self.kind not in ("fixed", "choice"):
            raise PreconditionError(f"unknown default rule {self.kind!r}")
        if self.kind == "fixed":
            if self.value is None:
                raise PreconditionError("fixed default needs a value")
            object.__setattr__(self, "value", to_rational(self.value))
        else:
            if not self.candidates:
                raise PreconditionError("choice default needs candidates")
            object.__setattr__(self, "candidates", tuple(to_rational(c) for c in self.candidates))

    @classmethod
    def fixed(cls, value) -> DefaultRule:
        return cls("fixed", value)

    @classmethod
    def choice(cls, candidates: Iterable) -> DefaultRule:
        return cls("choice", None, tuple(candidates))

    @classmethod
    def infimum(cls, A: ValueSet) -> DefaultRule:
        """Fixed at inf A when attained, otherwise at a member just above it."""
        return cls.fixed(A.inf if A.inf_attained else A.representative(A.components[0], "low"))

    def draw(self, rng: random.Random):
        if self.kind == "fixed":
            return self.value
        return self.candidates[rng.randrange(len(self.candidates))]

    def to_dict(self) -> dict:
        from .values import format_rational

        if self.kind == "fixed":
            return {"rule": "fixed", "value": format_rational(self.value)}
        return {"rule": "choice", "candidates": [format_rational(c) for c in self.candidates]}

    @classmethod
    def from_dict(cls, d: dict) -> DefaultRule:
        if d["rule"] == "fixed":
            return cls.fixed(d["value"])
        return cls.choice(d["candidates"])


class Configuration:
    """Exact edge weights on every edge of a finite window.

    Instances are immutable; engine structures derived from the weights
    are cached on first use.
    """

    def __init__(
        self,
        window: Window,
        weights: Mapping[Edge, Fraction],
        A: ValueSet,
        source_constraint: CylinderConstraint | None = None,
        default: DefaultRule | None = None,
        check: bool = True,
    ):
        self.window = window
        self.A = A
        self._weights = MappingProxyType({e: w if type(w) is Fraction else Fraction(w) for e, w in weights.items()})
        self.source_constraint = source_constraint
        self.default = default
        self._cache: dict = {}
        if check:
            problems = self.violations()
            if problems:
                raise PreconditionError("invalid configuration: " + "; ".join(problems[:5]))

    @property
    def weights(self) -> Mapping[Edge, Fraction]:
        return self._weights

    @property
    def d(self) -> int:
        return self.window.d

    def __getitem__(self, e: Edge) -> Fraction:
        return self._weights[e]

    def weight(self, p, q) -> Fraction:
        return self._weights[Edge.between(p, q)]

    def violations(self) -> list[str]:
        """Human-readable list of invariant failures (empty when valid)."""
        out = []
        expected = window_edges(self.window)
        if len(expected) != len(self._weights):
            out.append(f"expected {len(expected)} weights, got {len(self._weights)}")
        member: dict = {}  # configurations reuse a handful of values
        for e in expected:
            w = self._weights.get(e)
            if w is None:
                out.append(f"missing weight on {e}")
                continue
            ok = member.get(w)
            if ok is None:
                ok = member[w] = w in self.A
            if not ok:
                out.append(f"weight {w} on {e} not in A")
        if self.source_constraint is not None:
            for e, iv in self.source_constraint.overrides.items():
                w = self._weights.get(e)
                if w is not None and w not in iv:
                    out.append(f"weight {w} on {e} outside override {iv}")
        return out

    @property
    def has_negative(self) -> bool:
        return any(w < 0 for w in self._weights.values())

    def with_weights(self, updates: Mapping[Edge, Fraction], check: bool = True) -> Configuration:
        w = dict(self._weights)
        w.update(updates)
        return Configuration(self.window, w, self.A, self.source_constraint, self.default, check)

    def scaled(self, c) -> Configuration:
        """All weights multiplied by ``c``; A is scaled to match."""
        c = Fraction(c)
        A = ValueSet(
            [Interval(iv.lo * c, iv.hi * c, iv.lo_closed, iv.hi_closed) for iv in self.A.components],
            self.A.allow_negative,
        )
        return Configuration(self.window, {e: w * c for e, w in self._weights.items()}, A, check=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Configuration)
            and self.window == other.window
            and self.A == other.A
            and dict(self._weights) == dict(other._weights)
        )

    def __repr__(self) -> str:
        return f"Configuration(window={self.window.lo}..{self.window.hi}, edges={len(self._weights)})"


def sample_configuration(
    c: CylinderConstraint,
    w: Window,
    default: DefaultRule | None = None,
    seed: int = 0,
) -> Configuration:
    """Realize one point of the cylinder set ``c`` on the window ``w``.

    Overridden edges get a seeded draw from their projection; every other
    edge follows ``default`` (inf A by default).
    """
    A = c.A
    if default is None:
        default = DefaultRule.infimum(A)
    if default.kind == "fixed" and default.value not in A:
        raise PreconditionError(f"default value {default.value} not in A")
    for e in c.overrides:
        if not w.contains_edge(e):
            raise CoverageError(f"override edge {e} lies outside the window")
    rng = random.Random(seed)
    weights = {}
    ov = c.overrides
    for e in window_edges(w):
        iv = ov.get(e)
        if iv is None:
            weights[e] = default.draw(rng)
        else:
            weights[e] = A.sample(iv, rng)
    return Configuration(w, weights, A, c, default)


def constant_configuration(w: Window, A: ValueSet, value) -> Configuration:
    value = to_rational(value)
    return Configuration(w, {e: value for e in window_edges(w)}, A, default=DefaultRule.fixed(value))


def random_configuration(w: Window, A: ValueSet, candidates: Sequence, seed: int = 0) -> Configuration:
    """Unconstrained configuration with i.i.d. seeded draws from ``candidates``."""
    return sample_configuration(CylinderConstraint.trivial(A), w, DefaultRule.choice(candidates), seed)
