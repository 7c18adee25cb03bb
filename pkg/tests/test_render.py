import re

import pytest

from speiser.errors import UnsupportedPeriodic
from speiser.fixtures import airy, all_fixtures, exp_ladder, exp_sin, fig4_b, unrolled, w4
from speiser.render import render, to_dot, to_svg

NODE = re.compile(r'^\s*"([^"]+)" \[kind=(\w+)', re.M)
EDGE = re.compile(r'^\s*"([^"]+)" -- "([^"]+)" \[class=edge, dart=(\d+), color=(\w+)', re.M)


def test_airy_svg():
    svg = to_svg(airy())
    assert svg.count('<circle') - svg.count('r="3.5"') == 1
    assert 'stroke="red"' in svg
    assert svg.count('stroke-dasharray="3,3"') == 3
    assert svg.count("(1,2)</text>") == 3


def test_ladder_is_all_black():
    svg = to_svg(exp_ladder())
    assert "red" not in svg
    assert svg.count('stroke-dasharray="3,3"') == 2
    assert "red" not in to_dot(exp_ladder())


def test_ray_widths_follow_bundles():
    svg = to_svg(airy())
    assert 'stroke-width="1.2"' in svg and 'stroke-width="2.4"' in svg


@pytest.mark.parametrize("name", sorted(all_fixtures()))
def test_dot_roundtrip_counts(name):
    g = all_fixtures()[name]()
    dot = to_dot(g)
    assert len(NODE.findall(dot)) == g.num_vertices
    assert len(EDGE.findall(dot)) == g.num_edges
    assert dot.count("class=end") == len(g.ends)


def test_unrolled_rungs_are_black():
    dot = to_dot(unrolled(airy(), 2))
    assert {c for *_, c in EDGE.findall(dot)} == {"black"}
    assert re.findall(r'xlabel="(\w+)", color=red', dot) == ["o"]
    assert "red" in {c for *_, c in EDGE.findall(to_dot(fig4_b()))}


def test_periodic_motif():
    dot = to_dot(exp_sin())
    assert "repeat" in dot
    with pytest.raises(UnsupportedPeriodic):
        to_svg(exp_sin(), motif=False)


def test_deterministic():
    assert render(w4(), fmt="svg") == render(w4(), fmt="svg")


def test_unknown_format():
    with pytest.raises(ValueError):
        render(airy(), fmt="png")
