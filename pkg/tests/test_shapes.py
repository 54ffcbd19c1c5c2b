import json

import numpy as np
import pytest

from holext.errors import EmptySpec, ParseError
from holext.shapes import (Annulus, Circle, Disk, Scale, Segment, Spiral,
                           Translate, Union, parse_shape, shape_from_dict,
                           spiral_point, tangent_circles)


def test_round_trip_through_json():
    shape = Union((Disk(-1, 1.0), Translate(Circle(0, 2.0, 0.05), 2),
                   Scale(Segment(0, 1j, 0.05), 2), Annulus(3j, 0.5, 1.0),
                   Spiral("accessible", 20.0, 0.05)))
    again = parse_shape(shape.to_json())
    assert again.to_dict() == shape.to_dict()


@pytest.mark.parametrize("value, expected", [(1.5, 1.5), ([1, -2], 1 - 2j), ("1-2j", 1 - 2j)])
def test_complex_forms(value, expected):
    assert shape_from_dict({"type": "disk", "center": value, "r": 1}).center == expected


def test_malformed_json_reports_position():
    with pytest.raises(ParseError) as err:
        parse_shape('{"type": "disk",\n  "r": }')
    assert err.value.line == 2 and err.value.column is not None


@pytest.mark.parametrize("node, where", [
    ({"type": "blob"}, "$"),
    ({"type": "union", "children": [{"type": "disk"}]}, "$.children[0]"),
    ({"type": "disk", "r": 1, "radius": 2}, "$"),
    ({"type": "circle", "r": 1, "band": "wide"}, "$.band"),
])
def test_invalid_nodes_name_their_path(node, where):
    with pytest.raises(ParseError) as err:
        shape_from_dict(node)
    assert err.value.path == where


@pytest.mark.parametrize("text", ["", "{}", "null"])
def test_empty_input(text):
    with pytest.raises((EmptySpec, ParseError)):
        parse_shape(text)


def test_empty_union():
    with pytest.raises(EmptySpec):
        parse_shape(json.dumps({"type": "union", "children": []}))


@pytest.mark.parametrize("node", [
    {"type": "disk", "r": -1},
    {"type": "annulus", "r_in": 2, "r_out": 1},
    {"type": "circle", "r": 1, "band": 0},
    {"type": "spiral", "kind": "clustering", "t_max": -1, "band": 0.1},
    {"type": "spiral", "kind": "loose", "t_max": 10, "band": 0.1},
])
def test_invariants_rejected(node):
    with pytest.raises(ParseError):
        shape_from_dict(node)


def test_distances_match_geometry():
    z = np.array([0, 3, -1 + 0.5j])
    assert np.allclose(Disk(0, 1).distance(z), [0, 2, np.hypot(1, 0.5) - 1])
    # banded curves measure distance to the band of half-width band/2
    assert np.allclose(Circle(0, 1, 0.1).distance(z), [0.95, 1.95, np.hypot(1, 0.5) - 1.05])
    assert np.allclose(Segment(0, 1, 0.1).distance(np.array([0.5 + 1j, 2])), [0.95, 0.95])
    assert np.allclose(Annulus(0, 1, 2).distance(np.array([0, 1.5, 3])), [1, 0, 1])


def test_spiral_parametrizations():
    t = np.array([0.0, np.pi, 10.0])
    assert np.allclose(spiral_point("clustering", t), -1 + (1 + 1 / (1 + t)) * np.exp(1j * t))
    assert np.allclose(spiral_point("accessible", t), np.exp(1j * t) / (1 + t))
    s = Spiral("accessible", 10.0, 0.05)
    pts = spiral_point("accessible", np.linspace(0, 10, 50))
    assert s.distance(pts).max() < 1e-3


def test_thin_flags():
    assert tangent_circles(0.05).exact_thin
    assert not Union((Disk(0, 1), Circle(3, 1, 0.1))).exact_thin
    assert Segment(0, 1, 0.1).exact_thin and not Disk(0, 1).exact_thin


def test_samples_lie_on_the_set():
    for shape in (Disk(0, 1), Annulus(1j, 0.5, 1), Circle(2, 1, 0.1), Segment(0, 1 + 1j, 0.1)):
        pts = shape.samples(0.05)
        assert shape.distance(pts).max() < 1e-9


def test_scale_and_translate():
    s = Translate(Scale(Disk(0, 1), 2j), 1)
    assert np.isclose(s.distance(np.array([1 + 3j]))[0], 1.0)
    xmin, xmax, ymin, ymax = s.bbox()
    assert xmin <= -1 and xmax >= 3 and ymin <= -2 and ymax >= 2
