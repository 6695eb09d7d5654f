import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from fpplab.constructions import build_corridor
from fpplab.engine import reach_set
from fpplab.errors import DimensionUnsupported
from fpplab.lattice import Window, constant_configuration
from fpplab.render import CHEAP, EXPENSIVE, NEUTRAL, render_2d
from fpplab.shapes import l1_ball_shape
from fpplab.values import ValueSet

A = ValueSet.interval(1, 10)


@pytest.fixture(scope="module")
def corridor():
    return build_corridor(A, 2, 1, eps=Fraction(1, 2), a=8)


def test_corridor_figure(corridor):
    cfg, spec = corridor
    svg = render_2d(cfg, segments=spec.segments, boxes=(spec.inner, spec.outer))
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert CHEAP in svg and EXPENSIVE in svg
    assert svg.count("stroke-dasharray") == 2


def test_byte_stable(corridor):
    cfg, spec = corridor
    assert render_2d(cfg, segments=spec.segments) == render_2d(cfg, segments=spec.segments)


def test_base_grid_only():
    cfg = constant_configuration(Window.box(2, 2), A, 1)
    svg = render_2d(cfg)
    assert svg.count("<line") == 2 * 5 * 4
    assert NEUTRAL in svg and CHEAP not in svg


def test_reach_set_and_shape():
    cfg = constant_configuration(Window.box(4, 2), A, 1)
    B = reach_set(cfg, (0, 0), 2)
    assert render_2d(B).count("<rect") == 1 + 13
    assert render_2d(l1_ball_shape(1, 2)).count("<rect") == 1 + 13


def test_other_dimensions_rejected():
    with pytest.raises(DimensionUnsupported):
        render_2d(constant_configuration(Window.box(1, 3), A, 1))
