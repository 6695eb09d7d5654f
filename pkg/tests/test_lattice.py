from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fpplab.errors import CoverageError, EmptyIntersection
from fpplab.lattice import (
    CylinderConstraint,
    DefaultRule,
    Edge,
    EpsilonSchedule,
    Window,
    constant_configuration,
    floor_lattice_point,
    l1_norm,
    sample_configuration,
    window_edges,
)
from fpplab.values import Interval, ValueSet

F = Fraction
A12 = ValueSet.interval(1, 2)


@pytest.mark.parametrize("p,n", [((0, 0), 0), ((2, -3), 5), ((1, 1, 1), 3)])
def test_l1_norm(p, n):
    assert l1_norm(p) == n


@pytest.mark.parametrize(
    "v,p",
    [((F(5, 2), F(0)), (2, 0)), ((F(3), F(0)), (3, 0)), ((F(-3, 10), F(7, 10)), (-1, 0))],
)
def test_floor_lattice_point(v, p):
    assert floor_lattice_point(v) == p


@given(st.lists(st.fractions(min_value=-100, max_value=100, max_denominator=1000), min_size=1, max_size=4))
def test_floor_invariant(v):
    p = floor_lattice_point(v)
    assert all(0 <= x - q < 1 for x, q in zip(v, p))


@pytest.mark.parametrize(
    "w,count",
    [
        (Window((0, 0), (1, 1)), 4),
        (Window((3, 3), (3, 3)), 0),
        (Window((0, 0), (2, 2)), 12),
        (Window((0, 0, 0), (1, 1, 1)), 12),
    ],
)
def test_window_edge_counts(w, count):
    edges = window_edges(w)
    assert len(edges) == count == len(set(edges))
    assert edges == window_edges(w)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(0, 1))
def test_edge_canonicalization(x, y, axis):
    p = (x, y)
    q = list(p)
    q[axis] += 1
    q = tuple(q)
    assert Edge.between(p, q) == Edge.between(q, p) == Edge(p, axis)


def test_edge_between_rejects_non_neighbors():
    with pytest.raises(ValueError):
        Edge.between((0, 0), (1, 1))


def test_window_boundary():
    w = Window.box(2, 2)
    assert w.on_boundary((2, 0)) and not w.on_boundary((1, 1))
    assert len(w.boundary_points()) == 16


def test_cylinder_cap_and_k():
    e1, e2 = Edge((0, 0), 0), Edge((0, 0), 1)
    c = CylinderConstraint(A12, {e1: Interval.open(F(3, 2), 2), e2: Interval.closed(1, F(5, 4))})
    assert c.k == 2
    assert c.cost_cap == F(2) + F(5, 4)


def test_cylinder_rejects_empty_projection():
    with pytest.raises(EmptyIntersection):
        CylinderConstraint(A12, {Edge((0, 0), 0): Interval.closed(3, 4)})


def test_refine_refines():
    e = Edge((0, 0), 0)
    c = CylinderConstraint(A12, {e: Interval.closed(1, 2)})
    r = c.refine({e: Interval.open(F(3, 2), 2)})
    assert r.refines(c) and not c.refines(r)


def test_epsilon_schedule_budget():
    edges = [Edge((i, 0), 0) for i in range(30)]
    s = EpsilonSchedule(F(1, 2), edges)
    assert all(v > 0 for v in s.allocation.values())
    assert sum(s.allocation.values()) == s.spent() < F(1, 2)


def test_sample_default_infimum():
    cfg = sample_configuration(CylinderConstraint.trivial(ValueSet.finite([1, 2])), Window.box(2, 2))
    assert set(cfg.weights.values()) == {1}


def test_sample_respects_override():
    e = Edge((0, 0), 0)
    c = CylinderConstraint(A12, {e: Interval(F(3, 2), F(2), False, True)})
    for seed in range(20):
        cfg = sample_configuration(c, Window.box(2, 2), seed=seed)
        assert F(3, 2) < cfg.weights[e] <= 2
        assert cfg.violations() == []


def test_sample_deterministic():
    c = CylinderConstraint(A12, {Edge((0, 0), 0): Interval.open(1, 2)})
    w = Window.box(3, 2)
    rule = DefaultRule.choice([1, F(3, 2), 2])
    assert sample_configuration(c, w, rule, seed=7) == sample_configuration(c, w, rule, seed=7)


def test_sample_coverage_error():
    c = CylinderConstraint(A12, {Edge((10, 0), 0): Interval.closed(1, 2)})
    with pytest.raises(CoverageError):
        sample_configuration(c, Window.box(2, 2))


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_sampled_configs_pass_checker(seed, k):
    ov = {Edge((i, 0), 0): Interval.open(1, F(3, 2)) for i in range(k)}
    c = CylinderConstraint(A12, ov)
    cfg = sample_configuration(c, Window.box(3, 2), DefaultRule.choice([1, 2]), seed)
    assert cfg.violations() == []


def test_scaled_configuration():
    cfg = constant_configuration(Window.box(1, 2), A12, 1)
    s = cfg.scaled(F(7, 3))
    assert set(s.weights.values()) == {F(7, 3)}
