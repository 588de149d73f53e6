import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from planarfix import io, svg
from planarfix.geometry import build_closed_curve
from planarfix.untangle import decompose


def test_dumps_is_canonical():
    text = io.dumps({"b": np.float64(1.5), "a": np.arange(3), "c": (1, 2)})
    assert text == '{\n  "a": [\n    0,\n    1,\n    2\n  ],\n  "b": 1.5,\n  "c": [\n    1,\n    2\n  ]\n}\n'


def test_curve_schema(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"vertices": [[0, 0], [1, 0], [0, 1]], "tolerance": 1e-6}))
    curve = io.read_curve(path)
    assert curve.tolerance == 1e-6 and len(curve.vertices) == 3
    assert io.read_curve(path, tolerance=1e-3).tolerance == 1e-3


@pytest.mark.parametrize("bad", [{"vertices": [[0, 0, 0]]}, {"verts": []}, []])
def test_curve_schema_errors(bad):
    with pytest.raises(io.SchemaError):
        io.curve_from_dict(bad)


def test_family_schema():
    g, maps, seed = io.family_from_dict({"maps": [{"name": "rotation", "params": {"angle": 0.1}}],
                                         "seed": [1, 0]})
    assert g == [] and len(maps) == 1 and seed == (1.0, 0.0)
    with pytest.raises(io.SchemaError):
        io.family_from_dict({"maps": [{"name": "nope"}]})


def test_svg_flips_y(triangle_twice):
    rep = decompose(triangle_twice).to_dict()
    rep["curve"] = triangle_twice.to_dict()
    root = ET.fromstring(svg.decomposition_svg(rep))
    group = root.find("{http://www.w3.org/2000/svg}g")
    a, b, c, d, *_ = group.get("transform")[len("matrix("):-1].split()
    assert float(a) > 0 and float(d) == -float(a)


def test_render_any_rejects_unknown():
    with pytest.raises(ValueError):
        svg.render_any({"nothing": 1})


def test_point_labels_are_escaped_free_text():
    cv = svg.Canvas()
    cv.point((0, 0), "#000", "p", title="q")
    cv.polygon([(0, 0), (1, 0), (0, 1)], "#000", "curve", attrs={"data-note": 'a"b<c'})
    ET.fromstring(cv.render())
