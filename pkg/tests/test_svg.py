"""
Pytest test suite for the SVG pictures
"""

import pytest

from trigonal_knots.core.curvetrace import PolyMap, analyze_curve
from trigonal_knots.core.lscheme import Kind, parse_scheme
from trigonal_knots.core.twobridge import harmonic_diagram
from trigonal_knots.ui import svg


@pytest.fixture
def worked_curve():
    return analyze_curve(PolyMap.parse("cheb:3", "cheb:4@2/5"))


def test_worked_scheme_elements():
    """One dot, two crossings and two cusps."""
    text = svg.as_svg(parse_scheme("o1 <1 x2 x1 >1 v"))
    assert text.count('class="dot"') == 1
    assert text.count('class="crossing"') == 2
    assert text.count('class="cusp"') == 2
    assert text.count('class="terminal"') == 1


@pytest.mark.parametrize("text", [
    "v",
    "<2 x1 >2 v",
    "o1 o2 <2 x1 x1 x1 >2 ^",
    "<1 x2 >1 dn",
    "<2 x1 x1 x2 x2 >1 up",
])
def test_scheme_element_counts(text):
    """Every symbol is drawn once with its own class."""
    scheme = parse_scheme(text)
    picture = svg.as_svg(scheme)
    tangencies = sum(1 for s in scheme.body if s.kind in (Kind.MIN, Kind.MAX))
    assert picture.count('class="dot"') == scheme.solitary_count
    assert picture.count('class="crossing"') == scheme.crossing_count
    assert picture.count('class="cusp"') == tangencies


def test_braid_slots():
    """One slot per braid letter."""
    assert svg.as_svg((1, -2, 2, 1)).count('class="slot"') == 4


def test_curve_picture_marks_events(worked_curve):
    """The sampled curve is drawn with a marker per event."""
    picture = svg.as_svg(worked_curve)
    assert picture.count('class="strand"') == 1
    assert picture.count('class="event"') == len(worked_curve.events)


def test_knot_diagram_breaks(tmp_path):
    """Each crossing of the projection gets a gap and an over strand."""
    diagram = harmonic_diagram(3, 4, 5)
    path = svg.emit_svg(diagram, tmp_path / 'trefoil.svg')
    picture = path.read_text()
    assert picture.count('class="gap"') == diagram.crossing_count
    assert picture.count('class="over"') == diagram.crossing_count


def test_output_is_deterministic(worked_curve):
    """The same object always renders to the same bytes."""
    assert svg.as_svg(worked_curve) == svg.as_svg(worked_curve)
    scheme = parse_scheme("o1 <1 x2 x1 >1 v")
    assert svg.as_svg(scheme) == svg.as_svg(scheme)
