"""Allowed passage-time sets and their subintervals.

A :class:`ValueSet` is a finite union of disjoint intervals, some of which
may be single points.  Endpoints are exact :class:`~fractions.Fraction`
values; an unbounded end is ``math.inf`` / ``-math.inf``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EmptyIntersection, InvalidValueSet

INF = math.inf


def to_rational(x) -> Fraction | float:
    """Coerce ints, strings like ``"3/2"`` and Fractions to Fraction.

    Infinite floats (and the strings ``"inf"``, ``"-inf"``) pass through.
    Finite floats are rejected: they would silently break exactness.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not passage times")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise TypeError(f"finite float {x!r} is not exact; use Fraction or 'p/q'")
    if isinstance(x, str):
        s = x.strip()
        if s in ("inf", "+inf", "oo"):
            return INF
        if s == "-inf":
            return -INF
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_rational(x) -> str:
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Interval:
    lo: Fraction | float
    hi: Fraction | float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", to_rational(self.lo))
        object.__setattr__(self, "hi", to_rational(self.hi))
        # infinite ends are never closed
        if math.isinf(self.lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi):
            object.__setattr__(self, "hi_closed", False)

    @classmethod
    def point(cls, x) -> Interval:
        return cls(x, x, True, True)

    @classmethod
    def closed(cls, lo, hi) -> Interval:
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo, hi) -> Interval:
        return cls(lo, hi, False, False)

    @property
    def is_empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi and not self.is_empty

    @property
    def bounded(self) -> bool:
        return not (math.isinf(self.lo) or math.isinf(self.hi))

    @property
    def width(self):
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def intersect(self, other: Interval) -> Interval:
        if self.lo > other.lo:
            lo, lo_c = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lo_c = other.lo, other.lo_closed
        else:
            lo, lo_c = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_c = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hi_c = other.hi, other.hi_closed
        else:
            hi, hi_c = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lo_c, hi_c)

    def __str__(self) -> str:
        if self.is_point:
            return "{" + format_rational(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_rational(self.lo)}, {format_rational(self.hi)}{right}"

    def to_dict(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Interval:
        return cls(d["lo"], d["hi"], bool(d["lo_closed"]), bool(d["hi_closed"]))


def _touch(a: Interval, b: Interval) -> bool:
    """True if a (left of b) overlaps or abuts b so their union is an interval."""
    if a.hi > b.lo:
        return True
    return a.hi == b.lo and (a.hi_closed or b.lo_closed)


def normalize(parts: Iterable[Interval]) -> tuple[Interval, ...]:
    """Sort, drop empties and merge touching intervals."""
    items = sorted((p for p in parts if not p.is_empty), key=lambda p: (p.lo, not p.lo_closed))
    out: list[Interval] = []
    for p in items:
        if out and _touch(out[-1], p):
            q = out[-1]
            if p.hi > q.hi:
                hi, hi_c = p.hi, p.hi_closed
            elif p.hi < q.hi:
                hi, hi_c = q.hi, q.hi_closed
            else:
                hi, hi_c = q.hi, q.hi_closed or p.hi_closed
            lo_c = q.lo_closed or (p.lo == q.lo and p.lo_closed)
            out[-1] = Interval(q.lo, hi, lo_c, hi_c)
        else:
            out.append(p)
    return tuple(out)


def _sample_open(lo: Fraction, hi: Fraction, rng: random.Random, bits: int = 8) -> Fraction:
    """A dyadic point strictly between lo and hi."""
    u = rng.randrange(1, 1 << bits)
    return lo + (hi - lo) * Fraction(u, 1 << bits)


class ValueSet:
    """The set A of admissible edge weights.

    >>> A = ValueSet.interval(1, 10)
    >>> A.inf, A.sup
    (Fraction(1, 1), Fraction(10, 1))
    >>> Fraction(3) in A, Fraction(11) in A
    (True, False)
    """

    def __init__(self, components: Iterable[Interval], allow_negative: bool = False):
        comps = normalize(components)
        if not comps:
            raise InvalidValueSet("value set is empty")
        if len(comps) == 1 and comps[0].is_point:
            raise InvalidValueSet("value set needs at least two elements")
        if not allow_negative and comps[0].lo < 0:
            raise InvalidValueSet("negative values require allow_negative=True")
        self.components = comps
        self.allow_negative = allow_negative

    # constructors
    @classmethod
    def finite(cls, values: Iterable, allow_negative: bool = False) -> ValueSet:
        return cls([Interval.point(v) for v in values], allow_negative)

    @classmethod
    def interval(cls, lo, hi, lo_closed=True, hi_closed=True, allow_negative=False) -> ValueSet:
        return cls([Interval(lo, hi, lo_closed, hi_closed)], allow_negative)

    @classmethod
    def union(cls, parts: Sequence[Interval], allow_negative=False) -> ValueSet:
        return cls(parts, allow_negative)

    # descriptors
    @property
    def kind(self) -> str:
        if all(c.is_point for c in self.components):
            return "finite-set"
        if len(self.components) == 1:
            return "interval"
        return "union-of-intervals"

    @property
    def inf(self):
        return self.components[0].lo

    @property
    def sup(self):
        return self.components[-1].hi

    @property
    def inf_attained(self) -> bool:
        return self.components[0].lo_closed

    @property
    def sup_attained(self) -> bool:
        return self.components[-1].hi_closed

    @property
    def diameter(self):
        return self.sup - self.inf

    @property
    def isolated_points(self) -> tuple[Fraction, ...]:
        return tuple(c.lo for c in self.components if c.is_point)

    @property
    def has_isolated_points(self) -> bool:
        return bool(self.isolated_points)

    def is_isolated(self, x) -> bool:
        return any(c.is_point and c.lo == x for c in self.components)

    def __contains__(self, x) -> bool:
        return any(x in c for c in self.components)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ValueSet)
            and self.components == other.components
            and self.allow_negative == other.allow_negative
        )

    def __hash__(self):
        return hash((self.components, self.allow_negative))

    def __repr__(self) -> str:
        return "ValueSet(" + " ∪ ".join(str(c) for c in self.components) + ")"

    # interval algebra
    def restrict(self, iv: Interval) -> tuple[Interval, ...]:
        """Components of ``A ∩ iv`` (possibly empty)."""
        return normalize(c.intersect(iv) for c in self.components)

    def meets(self, iv: Interval) -> bool:
        return bool(self.restrict(iv))

    def bounded_part(self, iv: Interval) -> Interval:
        """A bounded subinterval of ``iv`` that still meets A.

        This is the bounding step applied to every cylinder projection
        before a cost cap can be formed.
        """
        parts = self.restrict(iv)
        if not parts:
            raise EmptyIntersection(f"{iv} does not meet {self!r}")
        if iv.bounded:
            return iv
        p = parts[0]
        if p.bounded:
            return p
        if math.isinf(p.lo) and math.isinf(p.hi):
            return Interval(0, 1)
        if math.isinf(p.hi):
            return Interval(p.lo, p.lo + 1, p.lo_closed, True)
        return Interval(p.hi - 1, p.hi, True, p.hi_closed)

    def member_above(self, threshold) -> Fraction:
        """Deterministic member of A strictly above ``threshold``.

        A point component yields its point; an interval component yields
        ``threshold + 1`` when that lies inside it, otherwise the closest
        admissible point of that component.
        """
        t = to_rational(threshold)
        for c in self.components:
            if c.hi <= t:
                continue
            if c.is_point:
                return c.lo
            cand = t + 1
            if cand in c:
                return cand
            if cand <= c.lo:
                if c.lo_closed:
                    return c.lo
                return c.lo + 1 if math.isinf(c.hi) else (c.lo + c.hi) / 2
            return (max(c.lo, t) + c.hi) / 2
        raise EmptyIntersection(f"no member of {self!r} exceeds {t}")

    def member_below(self, threshold) -> Fraction:
        """Mirror image of :meth:`member_above`."""
        t = to_rational(threshold)
        for c in reversed(self.components):
            if c.lo >= t:
                continue
            if c.is_point:
                return c.lo
            cand = t - 1
            if cand in c:
                return cand
            if cand >= c.hi:
                if c.hi_closed:
                    return c.hi
                return c.hi - 1 if math.isinf(c.lo) else (c.lo + c.hi) / 2
            return (c.lo + min(c.hi, t)) / 2
        raise EmptyIntersection(f"no member of {self!r} lies below {t}")

    def representative(self, iv: Interval, side: str = "low") -> Fraction:
        """A deterministic member of ``A ∩ iv``.

        ``side="low"`` stays near the lower end (a closed endpoint is used
        as is, an open one is nudged inward by a quarter of the width),
        ``"high"`` mirrors it and ``"mid"`` takes a midpoint.
        """
        parts = self.restrict(iv)
        if not parts:
            raise EmptyIntersection(f"{iv} does not meet {self!r}")
        p = parts[0] if side in ("low", "mid") else parts[-1]
        if p.is_point:
            return p.lo
        if not p.bounded:
            if math.isinf(p.hi) and not math.isinf(p.lo):
                return p.lo if p.lo_closed else p.lo + 1
            if math.isinf(p.lo) and not math.isinf(p.hi):
                return p.hi if p.hi_closed else p.hi - 1
            return Fraction(0)
        if side == "mid":
            return (p.lo + p.hi) / 2
        if side == "low":
            return p.lo if p.lo_closed else p.lo + p.width / 4
        return p.hi if p.hi_closed else p.hi - p.width / 4

    def sample(self, iv: Interval, rng: random.Random) -> Fraction:
        """Seeded draw from ``A ∩ iv``; raises EmptyIntersection if none."""
        parts = self.restrict(iv)
        if not parts:
            raise EmptyIntersection(f"{iv} does not meet {self!r}")
        p = parts[rng.randrange(len(parts))]
        if p.is_point:
            return p.lo
        if not p.bounded:
            p = self.bounded_part(p)
            p = self.restrict(p)[0]
            if p.is_point:
                return p.lo
        return _sample_open(p.lo, p.hi, rng)

    # serialization
    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "components": [c.to_dict() for c in self.components],
            "allow_negative": self.allow_negative,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ValueSet:
        return cls([Interval.from_dict(c) for c in d["components"]], bool(d.get("allow_negative", False)))
