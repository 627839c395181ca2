import math
import re

import numpy as np
import pytest

from osculant.errors import DomainError
from osculant.figures import MANIFEST, Element, Scene, build_figure, plot_graph, render_figure
from osculant.taitkneser import circles_nested


@pytest.fixture(scope="module")
def rendered(tmp_path_factory):
    d = tmp_path_factory.mktemp("figs")
    out = {}
    for k in MANIFEST["figures"]:
        path = d / f"fig{k}.svg"
        _, reports = render_figure(k, path, d / f"fig{k}.csv")
        out[k] = (path, reports)
    return out


def test_plot_graph_examples():
    (p,) = plot_graph("x^3", (-2, 2), 5)
    assert np.allclose(p, [(-2, -8), (-1, -1), (0, 0), (1, 1), (2, 8)])
    (p,) = plot_graph("sin(x)", (0, 2 * math.pi), 3)
    assert np.allclose(p, [(0, 0), (math.pi, 0), (2 * math.pi, 0)], atol=1e-15)
    parts = plot_graph("1/(x-2)", (0, 4), 400)
    assert len(parts) == 2
    assert parts[0][:, 0].max() < 2 < parts[1][:, 0].min()
    with pytest.raises(DomainError):
        plot_graph("log(x)", (-2, -1), 10)


def test_scene_rejects_outside_elements():
    s = Scene((0, 1, 0, 1))
    with pytest.raises(ValueError):
        s.add(Element("polyline", [np.array([[5.0, 5.0], [6.0, 6.0]])]))


def test_unknown_figure():
    with pytest.raises(ValueError):
        build_figure(7)


def test_verdicts_match_drawn_objects(rendered):
    verdicts = {k: [r.verdict for r in reps] for k, (_, reps) in rendered.items()}
    assert verdicts == {1: ["nested"], 2: ["disjoint"], 3: ["disjoint"], 4: ["disjoint"],
                        5: ["disjoint"], 6: ["intersecting"]}


def test_figure_one_circles_nested(rendered):
    text = rendered[1][0].read_text()
    circles = [((float(cx), float(cy)), float(r))
               for cx, cy, r in re.findall(r'<circle cx="([-\d.]+)" cy="([-\d.]+)" r="([-\d.]+)"', text)]
    assert len(circles) == MANIFEST["figures"][1]["samples"]
    for j in range(len(circles)):
        for i in range(j):
            assert circles_nested(circles[i], circles[j], tol=1e-6) == "nested"


def test_svg_structure_and_determinism(rendered, tmp_path):
    for k, (path, _) in rendered.items():
        text = path.read_text()
        assert text.startswith('<?xml version="1.0"') and 'version="1.1"' in text
        assert f"manifest v{MANIFEST['version']}" in text
        assert 'stroke-width="2"' in text and 'stroke-width="0.6"' in text
    again = tmp_path / "fig2.svg"
    render_figure(2, again)
    assert again.read_bytes() == rendered[2][0].read_bytes()


def test_csv_dump(rendered):
    path = rendered[2][0].with_suffix(".csv")
    rows = [r for r in path.read_text().splitlines() if r]
    assert all(len(r.split(",")) == 2 for r in rows)
    assert len(rows) > 16 * 100
