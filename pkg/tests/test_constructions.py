import random
from fractions import Fraction

import pytest

from oracles import binomial_paths, path_sum, simple_path_optimum
from fpplab.constructions import (
    Claim,
    build_corridor,
    build_isolated_point_config,
    build_lambda_config,
    build_multi_corridor,
    build_negative_config,
    build_shape_config,
    corridor_p2,
    detour_witness_check,
    monotone_path_count,
    negative_length,
    ray_bound,
    refine_to_unique_geodesic,
    refinement_window,
    solve_split,
    spike_distance,
    verify_corridor,
    verify_lambda,
    verify_shape_config,
)
from fpplab.engine import PathRecord, path_time, shortest_path_dag, t_distance
from fpplab.errors import (
    AxisAligned,
    CaseMismatch,
    ConstraintTooLarge,
    DimensionTooLow,
    IsolatedPoints,
    LambdaOutOfRange,
    NoNegativeValue,
    NoSuitableA,
    RatioTooSmall,
)
from fpplab.lattice import CylinderConstraint, Edge, Window, constant_configuration, sample_configuration
from fpplab.shapes import l1_ball_shape, segment_shape
from fpplab.values import INF, Interval, ValueSet

F = Fraction
A110 = ValueSet.interval(1, 10)
A12 = ValueSet.interval(1, 2)


# corridors


def test_corridor_p2_scan():
    assert corridor_p2(1, F(1, 2), 2, 3) == 18


def _brute_p2(inf, eps, d, p1):
    # smallest p2 whose comparison holds for every longer excursion, scanned directly
    for p2 in range(p1 + 1, 1000):
        if all((4 * p2 + 4 * d * p1 + s) * inf + eps < 5 * s * (inf + eps) - eps for s in range(p2 - p1, p2 - p1 + 200)):
            return p2


@pytest.mark.parametrize("eps", [F(1, 2), F(1, 4), F(1, 3)])
@pytest.mark.parametrize("p1", [1, 2, 3])
def test_corridor_p2_matches_brute_scan(eps, p1):
    assert corridor_p2(1, eps, 2, p1) == _brute_p2(1, eps, 2, p1)


@pytest.fixture(scope="module")
def corridor():
    return build_corridor(A110, 2, 3, eps=F(1, 2), a=8)


def test_corridor_forces_segment(corridor):
    cfg, spec = corridor
    assert spec.p2 == 18
    rep = verify_corridor(cfg, spec)
    assert rep.verdict and rep.counterexample is None


def test_corridor_cheap_path_time(corridor):
    # the spoke plus its two ring neighbours, summed independently
    cfg, spec = corridor
    seg = spec.segments[0]
    verts = list(seg.vertices)
    assert len(seg) == 15
    assert path_time(cfg, seg) == path_sum(cfg, verts)
    assert path_time(cfg, seg) < 15 * (1 + spec.eps)


def test_corridor_default_epsilon():
    _, spec = build_corridor(A110, 2, 3)
    assert spec.eps == F(5, 12) and spec.p2 == 21


def test_corridor_undersized_has_counterexample():
    cfg, spec = build_corridor(A110, 2, 3, eps=F(1, 2), a=8, p2=4)
    rep = verify_corridor(cfg, spec)
    assert not rep.verdict
    assert rep.counterexample["avoiding_geodesics"] >= 1


def test_corridor_ratio_too_small():
    with pytest.raises(RatioTooSmall):
        build_corridor(ValueSet.finite([1, 4]), 2, 3)


def test_corridor_constraint_must_fit():
    c = CylinderConstraint(A110, {Edge((5, 0), 0): Interval.closed(2, 3)})
    with pytest.raises(ConstraintTooLarge):
        build_corridor(A110, 2, 3, c)


def test_corridor_respects_constraint():
    e = Edge((0, 0), 1)
    c = CylinderConstraint(A110, {e: Interval.closed(9, 10)})
    cfg, spec = build_corridor(A110, 2, 3, c, eps=F(1, 2), a=8)
    assert c.satisfied_by(cfg.weights)
    assert verify_corridor(cfg, spec).verdict


def test_corridor_seeded_sampling_is_deterministic():
    a = build_corridor(A110, 2, 1, seed=5)[0]
    b = build_corridor(A110, 2, 1, seed=5)[0]
    assert a == b and a.violations() == []


def test_multi_corridor_needs_large_value():
    with pytest.raises(NoSuitableA):
        build_multi_corridor(ValueSet.finite([1, F(11, 10)]), 2, 1, F(3, 2))


def test_ray_bound():
    assert ray_bound(2) == 16


# lambda targeting


@pytest.mark.parametrize(
    "a,b,lam,N,expect",
    [
        (1, 2, F(3, 2), 10, (5, 5, 0)),
        (1, 3, 2, 4, (2, 2, 0)),
        (1, 2, F(3, 2), 11, (6, 5, F(1, 22))),
    ],
)
def test_solve_split(a, b, lam, N, expect):
    s = solve_split(a, b, lam, N)
    assert (s.n1, s.n2, s.error) == expect


def test_solve_split_matches_scan():
    for N in range(2, 30):
        best = min(range(1, N), key=lambda n1: (abs(F(n1 + 2 * (N - n1), N) - F(7, 5)), -n1))
        assert solve_split(1, 2, F(7, 5), N).n1 == best


def test_solve_split_range():
    with pytest.raises(LambdaOutOfRange):
        solve_split(1, 2, 3, 10)


@pytest.fixture(scope="module")
def lam_config():
    return build_lambda_config(A12, 1, 2, F(3, 2), 10, (1, 0), 20)


def test_lambda_ratio(lam_config):
    cfg, spec = lam_config
    res = verify_lambda(cfg, spec)
    assert res["certified"] and res["within"]
    assert F(14, 10) <= res["ratio"] <= F(16, 10)
    assert spec.mu > 20 and spec.N1 + spec.N2 == spec.mu


def _random_simple_path(rng, p):
    # straight run with one rectangular excursion off the axis; always simple
    L = p[0]
    i = rng.randint(0, L - 1)
    j = rng.randint(i + 1, L)
    h = rng.randint(1, 4) * rng.choice([1, -1])
    s = 1 if h > 0 else -1
    verts = [(x, 0) for x in range(i + 1)]
    verts += [(i, s * t) for t in range(1, abs(h) + 1)]
    verts += [(x, h) for x in range(i + 1, j + 1)]
    verts += [(j, h - s * t) for t in range(1, abs(h) + 1)]
    verts += [(x, 0) for x in range(j + 1, L + 1)]
    return PathRecord(tuple(verts))


def test_lambda_bounds_on_alternatives(lam_config):
    cfg, spec = lam_config
    lo, hi = spec.interval
    mu = spec.mu
    assert path_time(cfg, spec.gamma0) <= mu * hi
    rng = random.Random(0)
    for _ in range(100):
        g = _random_simple_path(rng, spec.target)
        assert g.self_avoiding and g.end == spec.target
        assert path_time(cfg, g) >= mu * lo


def test_lambda_boundary_rejected():
    with pytest.raises(LambdaOutOfRange):
        build_lambda_config(A12, 1, 2, F(11, 10), 10)


# negative mode


AN = ValueSet.interval(-1, 2, allow_negative=True)


def test_negative_lengths():
    assert negative_length(-1, 0, 0, 10, 1) == 21
    assert negative_length(-1, 2, 5, 10, 1) == 33
    # an even endpoint distance forces an even length
    assert negative_length(-1, 0, 0, 10, 0) == 22


def test_negative_unconstrained():
    cfg, w = build_negative_config(AN, (0, 0), (3, 1), 10)
    assert w.self_avoiding and w.start == (0, 0) and w.end == (3, 1)
    assert path_time(cfg, w) < -10
    assert path_time(cfg, w) == path_sum(cfg, list(w.vertices))


def test_negative_with_constraint():
    A = ValueSet.interval(-1, 3, allow_negative=True)
    c = CylinderConstraint(A, {Edge((0, 0), 0): Interval.closed(2, 2), Edge((1, 0), 0): Interval.closed(3, 3)})
    assert (c.k, c.cost_cap) == (2, 5)
    cfg, w = build_negative_config(A, (0, 0), (3, 0), 10, c)
    assert c.satisfied_by(cfg.weights)
    assert w.self_avoiding and len(w) == 33
    assert path_time(cfg, w) < -10


def test_negative_loop():
    cfg, w = build_negative_config(AN, (0, 0), (0, 0), 10)
    assert w.closed and w.self_avoiding and path_time(cfg, w) < -10


def test_negative_errors():
    with pytest.raises(NoNegativeValue):
        build_negative_config(A12, (0, 0), (1, 0), 10)
    with pytest.raises(DimensionTooLow):
        build_negative_config(AN, (0,), (3,), 10)


# uniqueness


@pytest.mark.parametrize("y,count", [((2, 1), 3), ((2, 2), 6)])
def test_isolated_point_counts(y, count):
    A = ValueSet.finite([1, 2])
    cfg = build_isolated_point_config(A, (0, 0), y)
    dag = shortest_path_dag(cfg, (0, 0), y)
    assert dag.count == count == monotone_path_count((0, 0), y) == binomial_paths(*y)
    box = Window.bounding([(0, 0), y], 1)
    sub = constant_configuration(box, A, 1)
    assert simple_path_optimum(sub, (0, 0), y) == (sum(y), count)


def test_isolated_axis_aligned():
    with pytest.raises(AxisAligned):
        build_isolated_point_config(ValueSet.finite([1, 2]), (0, 0), (3, 0))


def test_refinement_gives_unique_geodesic():
    c = CylinderConstraint.trivial(A12)
    W, g = refine_to_unique_geodesic(c, A12, (0, 0), (1, 1))
    assert W.refines(c)
    win = refinement_window(W)
    for seed in range(50):
        cfg = sample_configuration(W, win, seed=seed)
        dag = shortest_path_dag(cfg, (0, 0), (1, 1))
        assert dag.certificate.certified and dag.count == 1 and dag.geodesic == g


def test_refinement_axis_aligned_is_segment():
    W, g = refine_to_unique_geodesic(CylinderConstraint.trivial(A12), A12, (0, 0), (3, 0))
    assert g == PathRecord.straight((0, 0), 0, 3)


def test_refinement_under_constraint():
    e = Edge((0, 1), 0)
    c = CylinderConstraint(A12, {e: Interval.closed(1, F(11, 10))})
    W, g = refine_to_unique_geodesic(c, A12, (0, 0), (2, 2))
    assert W.refines(c)
    win = refinement_window(W)
    for seed in range(10):
        cfg = sample_configuration(W, win, seed=seed)
        dag = shortest_path_dag(cfg, (0, 0), (2, 2))
        assert dag.count == 1 and dag.geodesic == g


def test_refinement_rejects_isolated_points():
    A = ValueSet.finite([1, 2])
    with pytest.raises(IsolatedPoints):
        refine_to_unique_geodesic(CylinderConstraint.trivial(A), A, (0, 0), (1, 1))


# shapes


SPIKE8 = l1_ball_shape(F(1, 2), 8).union(segment_shape((0, 0), (1, 0), 8))


def test_shape_case_i():
    A = ValueSet.interval(0, INF, hi_closed=False)
    K = l1_ball_shape(1, 4)
    cfg, claim = build_shape_config(A, K, 4)
    res = verify_shape_config(cfg, K, claim)
    assert res["certified"] and res["verdict"]
    assert res["hausdorff"] <= F(1, 4)


def test_shape_case_ii_spike():
    A = ValueSet.interval(0, 2)
    cfg, claim = build_shape_config(A, SPIKE8, 4)
    res = verify_shape_config(cfg, SPIKE8, claim)
    assert res["verdict"] and res["hausdorff"] <= claim.bound <= F(1, 4)


def test_shape_case_mismatch():
    with pytest.raises(CaseMismatch):
        build_shape_config(ValueSet.interval(0, 2), SPIKE8, 4, case="i")
    with pytest.raises(CaseMismatch):
        build_shape_config(A12, SPIKE8, 4)


# detour


def test_spike_distance():
    assert spike_distance((0, 0), 40) == 0
    assert spike_distance((30, 0), 40) == 0
    assert spike_distance((15, 15), 40) == 10


def test_detour_witnesses():
    cfg = constant_configuration(Window.box(46, 2), ValueSet.finite([1, 2]), 1)
    rep = detour_witness_check(cfg, 40, F(1, 8), 2)
    assert rep.verdict
    assert all(F(w["scaled_distance"]) >= F(1, 16) for w in rep.witnesses)
    assert not detour_witness_check(cfg, 40, 0, 2).witnesses


def test_claim_round_trip():
    c = Claim("corridor", "verify_forced_segments", True, {"p2": 18})
    assert Claim.from_dict(c.to_dict()) == c
