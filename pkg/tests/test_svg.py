from fractions import Fraction as F

import pytest

from hypervis.corpus import load_golden
from hypervis.geometry import Cube, OrthoScene, SceneError, StandardScene
from hypervis.svg import render_svg


def test_empty_scene():
    svg = render_svg(StandardScene(2, []))
    assert svg.startswith("<svg") and "<rect" not in svg


def test_two_visible_squares():
    svg = render_svg(StandardScene(2, [Cube(0, (0, 0)), Cube(1, (3, 0))]))
    assert svg.count("<rect") == 2 and svg.count('class="sightline"') == 1


def test_k15_figure():
    rep = load_golden("k1_5_orthogonal")
    svg = render_svg(rep.scene, rep.assignment)
    assert svg.count("<rect") == 6 and svg.count('class="sightline"') == 5


def test_bars_vertical_sightlines():
    scene = OrthoScene(1, [Cube(0, (0,), 0), Cube(1, (F(1, 2),), 1)])
    svg = render_svg(scene)
    line = [s for s in svg.splitlines() if "sightline" in s][0]
    x1 = line.split('x1="')[1].split('"')[0]
    x2 = line.split('x2="')[1].split('"')[0]
    assert x1 == x2


def test_deterministic():
    rep = load_golden("k1_8_standard")
    assert render_svg(rep.scene, rep.assignment) == render_svg(rep.scene, rep.assignment)


def test_unsupported():
    with pytest.raises(SceneError):
        render_svg(StandardScene(3, [Cube(0, (0, 0, 0))]))
    with pytest.raises(SceneError):
        render_svg(OrthoScene(3, []))
