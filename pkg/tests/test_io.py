from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fpplab.errors import FormatError
from fpplab.io import (
    Scenario,
    Step,
    config_from_dict,
    config_to_dict,
    dump_config,
    dump_scenario,
    dump_shape,
    load_config,
    load_scenario,
    load_shape,
)
from fpplab.lattice import CylinderConstraint, Edge, Window, random_configuration, sample_configuration
from fpplab.shapes import ShapeSpec, l1_ball_shape, segment_shape
from fpplab.values import Interval, ValueSet

F = Fraction
A = ValueSet.interval(1, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_config_round_trip(seed, r):
    cfg = random_configuration(Window.box(r, 2), A, [1, F(4, 3), F(7, 5), 2], seed=seed)
    text = dump_config(cfg)
    back = load_config(text)
    assert back == cfg
    assert dump_config(back) == text


def test_config_with_constraint_round_trip():
    e = Edge((0, 0), 1)
    c = CylinderConstraint(A, {e: Interval(F(3, 2), F(2), False, True)})
    cfg = sample_configuration(c, Window.box(2, 2), seed=3)
    back = load_config(dump_config(cfg))
    assert back == cfg and back.source_constraint == c


def test_config_three_dimensional():
    cfg = random_configuration(Window.box(1, 3), A, [1, 2], seed=1)
    assert load_config(dump_config(cfg)) == cfg


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(format="nope"),
        lambda d: d.update(version=99),
        lambda d: d.pop("window"),
        lambda d: d["overrides"].append({"base": [99, 99], "axis": 0, "weight": "1"}),
    ],
)
def test_config_rejects_malformed(mutate):
    d = config_to_dict(random_configuration(Window.box(1, 2), A, [1, 2], seed=0))
    mutate(d)
    with pytest.raises(FormatError):
        config_from_dict(d)


def test_invalid_json():
    with pytest.raises(FormatError):
        load_config("{")


shapes = st.sampled_from(
    [
        l1_ball_shape(1, 3),
        l1_ball_shape(F(1, 2), 4).union(segment_shape((0, 0), (1, 0), 4)),
        ShapeSpec(2, 1, frozenset({(0, 0), (1, 0), (3, 0), (2, 1), (2, 0)})),
        l1_ball_shape(1, 2, d=3),
    ]
)


@given(shapes)
def test_shape_round_trip(K):
    text = dump_shape(K)
    assert load_shape(text) == K
    assert dump_shape(load_shape(text)) == text


def test_shape_with_classification_field():
    K = l1_ball_shape(1, 2)
    assert load_shape(dump_shape(K, {"l1_star": True})) == K


names = st.text("abcdefgh_", min_size=1, max_size=6)


@given(st.lists(names, min_size=1, max_size=4, unique=True), st.integers(0, 99))
def test_scenario_round_trip(step_names, seed):
    s = Scenario("demo", [Step(n, "corridor", {"p1": 3, "A": "[1,10]"}, {"verdict": True}, seed) for n in step_names])
    text = dump_scenario(s)
    assert load_scenario(text) == s
    assert dump_scenario(load_scenario(text)) == text


def test_scenario_duplicate_names():
    s = Scenario("demo", [Step("a", "corridor"), Step("a", "lambda")])
    with pytest.raises(FormatError):
        load_scenario(dump_scenario(s))
