import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import simple_path_optimum
from fpplab.engine import (
    PathRecord,
    locality_radius,
    monotone_path,
    path_time,
    reach_set,
    shortest_path_dag,
    t_distance,
    verify_forced_segments,
)
from fpplab.errors import InvalidEpsilon, NegativeWeights, OutOfWindow, UncertifiedWindow
from fpplab.lattice import (
    CylinderConstraint,
    Edge,
    Window,
    constant_configuration,
    random_configuration,
)
from fpplab.values import Interval, ValueSet

F = Fraction
A12 = ValueSet.interval(1, 2)
CANDS = [1, F(3, 2), 2]


def line_config(weights):
    w = Window((0, 0), (len(weights), 0))
    cfg = constant_configuration(w, ValueSet.interval(0, 10), 1)
    return cfg.with_weights({Edge((i, 0), 0): F(x) for i, x in enumerate(weights)})


def test_path_time_simple():
    cfg = line_config([1, 2, 3])
    assert path_time(cfg, PathRecord.straight((0, 0), 0, 3)) == 6
    assert path_time(cfg, PathRecord(((1, 0),))) == 0


def test_path_time_out_of_window():
    cfg = line_config([1])
    with pytest.raises(OutOfWindow):
        path_time(cfg, PathRecord(((0, 0), (0, 1))))


def test_path_record_flags():
    loop = PathRecord(((0, 0), (1, 0), (1, 1), (0, 1), (0, 0)))
    assert loop.closed and loop.self_avoiding
    assert not PathRecord(((0, 0), (1, 0), (0, 0), (0, 1))).self_avoiding
    with pytest.raises(ValueError):
        PathRecord(((0, 0), (2, 0)))


def test_unit_weights_distance_certified():
    cfg = constant_configuration(Window.box(6, 2), A12, 1)
    T, cert = t_distance(cfg, (0, 0), (1, 1))
    assert T == 2 and cert.certified
    assert cert.boundary_exit_bound > cert.in_window_optimum


def test_small_window_is_not_certified():
    cfg = constant_configuration(Window.box(1, 2), A12, 1)
    T, cert = t_distance(cfg, (0, 0), (1, 1))
    assert T == 2 and not cert.certified


def test_negative_weights_rejected():
    A = ValueSet.interval(-1, 2, allow_negative=True)
    cfg = constant_configuration(Window.box(2, 2), A, -1)
    with pytest.raises(NegativeWeights):
        t_distance(cfg, (0, 0), (1, 0))


def test_dag_counts_trivial():
    cfg = constant_configuration(Window.box(6, 2), A12, 1)
    assert shortest_path_dag(cfg, (0, 0), (1, 1)).count == 2
    dag = shortest_path_dag(cfg, (0, 0), (4, 0))
    assert dag.count == 1 and dag.geodesic == PathRecord.straight((0, 0), 0, 4)


def test_dag_lexicographic_tie_break():
    cfg = constant_configuration(Window.box(4, 2), A12, 1)
    g = shortest_path_dag(cfg, (0, 0), (1, 1)).geodesic
    assert g.vertices == ((0, 0), (0, 1), (1, 1))


def test_dag_paths_enumeration_matches_count():
    cfg = random_configuration(Window.box(3, 2), A12, [1, 2], seed=3)
    dag = shortest_path_dag(cfg, (-2, -1), (2, 2))
    paths = list(dag.paths())
    assert len(paths) == dag.count
    assert all(path_time(cfg, p) == dag.distance for p in paths)


@pytest.mark.parametrize("seed", range(25))
def test_oracle_3x3(seed):
    cfg = random_configuration(Window((0, 0), (2, 2)), A12, CANDS, seed=seed)
    rng = random.Random(seed)
    pts = list(cfg.window.points())
    x, y = rng.choice(pts), rng.choice(pts)
    T, _ = t_distance(cfg, x, y)
    assert (T, shortest_path_dag(cfg, x, y).count) == simple_path_optimum(cfg, x, y)


def test_reach_set_examples():
    cfg = constant_configuration(Window.box(6, 2), A12, 1)
    B = reach_set(cfg, (0, 0), 2)
    assert len(B) == 13 and B.certified
    assert set(reach_set(cfg, (0, 0), 0)) == {(0, 0)}


def test_reach_set_uncertified_when_touching_boundary():
    cfg = constant_configuration(Window.box(2, 2), A12, 1)
    assert not reach_set(cfg, (0, 0), 2).certified


def test_locality_radius_examples():
    c = CylinderConstraint.trivial(A12)
    assert locality_radius(c, (0, 0), (4, 0), 1, F(1, 2)) == 13
    assert locality_radius(c, (0, 0), (0, 0), 1, F(1, 2)) == 1
    assert locality_radius(c, (0, 0), (8, 0), 1, F(1, 2)) >= 13


def test_locality_radius_with_constraint_satisfies_inequality():
    c = CylinderConstraint(A12, {Edge((0, 0), 0): Interval.closed(1, 2), Edge((0, 0), 1): Interval.closed(1, 2)})
    a, eps = F(3, 2), F(1, 4)
    n = locality_radius(c, (0, 0), (3, 2), a, eps)
    k, C = 2, c.cost_cap
    assert (n - k) * (a - eps) > C * k + 5 * (a + eps)


def test_locality_radius_bad_eps():
    with pytest.raises(InvalidEpsilon):
        locality_radius(CylinderConstraint.trivial(A12), (0, 0), (1, 0), 1, 1)


def test_forced_segments_false_on_flat_config():
    cfg = constant_configuration(Window.box(7, 2), A12, 1)
    seg = PathRecord.straight((2, 0), 0, 3)
    rep = verify_forced_segments(cfg, Window.box(2, 2), Window.box(5, 2), [seg])
    assert not rep.verdict
    cx = rep.counterexample
    assert cx is not None and cx["avoiding_geodesics"] >= 1


def test_forced_segments_window_too_small():
    cfg = constant_configuration(Window.box(5, 2), A12, 1)
    with pytest.raises(UncertifiedWindow):
        verify_forced_segments(cfg, Window.box(2, 2), Window.box(6, 2), [])


def test_forced_segments_true_on_planted_corridor():
    # cheap ring on both boxes and one cheap spoke, expensive elsewhere
    A = ValueSet.interval(1, 10)
    inner, outer = Window.box(2, 2), Window.box(6, 2)
    cfg = constant_configuration(Window.box(7, 2), A, 10)
    cheap = {}
    for w in (inner, outer):
        for e in cfg.weights:
            if all(w.on_boundary(p) for p in e.endpoints) and w.contains_edge(e):
                cheap[e] = F(1)
    seg = PathRecord.straight((2, 0), 0, 4)
    cheap.update({e: F(1) for e in seg.edges})
    cfg = cfg.with_weights(cheap)
    rep = verify_forced_segments(cfg, inner, outer, [seg])
    assert rep.verdict and rep.counterexample is None
    assert rep.checked_pairs == len(inner.boundary_points()) * len(outer.boundary_points())


# properties


configs = st.builds(
    lambda seed, r: random_configuration(Window.box(r, 2), A12, CANDS, seed=seed),
    st.integers(0, 10_000),
    st.integers(1, 3),
)


def _pt(cfg, draw):
    return draw(st.sampled_from(sorted(cfg.window.points())))


@settings(max_examples=60, deadline=None)
@given(configs, st.data())
def test_pseudometric(cfg, data):
    x, y, z = (_pt(cfg, data.draw) for _ in range(3))
    T = lambda p, q: t_distance(cfg, p, q)[0]  # noqa: E731
    assert T(x, x) == 0
    assert T(x, y) == T(y, x)
    assert T(x, z) <= T(x, y) + T(y, z)


@settings(max_examples=40, deadline=None)
@given(configs, st.data())
def test_scaling(cfg, data):
    x, y = _pt(cfg, data.draw), _pt(cfg, data.draw)
    c = F(7, 3)
    s = cfg.scaled(c)
    assert t_distance(s, x, y)[0] == c * t_distance(cfg, x, y)[0]
    d1, d2 = shortest_path_dag(cfg, x, y), shortest_path_dag(s, x, y)
    assert d1.edges == d2.edges and d1.count == d2.count


@settings(max_examples=40, deadline=None)
@given(configs, st.data())
def test_monotone_coupling(cfg, data):
    x, y = _pt(cfg, data.draw), _pt(cfg, data.draw)
    e = data.draw(st.sampled_from(sorted(cfg.weights)))
    raised = cfg.with_weights({e: F(2)})
    assert t_distance(raised, x, y)[0] >= t_distance(cfg, x, y)[0]


@settings(max_examples=40, deadline=None)
@given(configs, st.fractions(0, 6, max_denominator=4), st.fractions(0, 6, max_denominator=4))
def test_reach_nesting(cfg, s, t):
    s, t = min(s, t), max(s, t)
    assert reach_set(cfg, (0, 0), s) <= reach_set(cfg, (0, 0), t)


@settings(max_examples=40, deadline=None)
@given(configs, st.data())
def test_subpath_property(cfg, data):
    x, y = _pt(cfg, data.draw), _pt(cfg, data.draw)
    g = shortest_path_dag(cfg, x, y).geodesic
    n = len(g)
    i = data.draw(st.integers(0, n))
    j = data.draw(st.integers(i, n))
    sub = g.subpath(i, j)
    assert path_time(cfg, sub) == t_distance(cfg, sub.start, sub.end)[0]


def test_monotone_path_shape():
    p = monotone_path((0, 0), (2, -1))
    assert p.vertices == ((0, 0), (1, 0), (2, 0), (2, -1))
