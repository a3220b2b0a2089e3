"""Deterministic SVG drawings of small scenes."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .geometry import ORTHOGONAL, STANDARD, Scene, SceneError, extract_graph

SCALE = 100
MARGIN = Fraction(1)
BAR_THICKNESS = Fraction(1, 10)
# oblique offset per unit of height for stacked squares
SKEW = Fraction(3, 10)


def _num(x: Fraction) -> str:
    return f"{float(x) * SCALE:.2f}"


class _Canvas:
    def __init__(self, points: list[tuple[Fraction, Fraction]]):
        xs = [p[0] for p in points] or [Fraction(0)]
        ys = [p[1] for p in points] or [Fraction(0)]
        self.x0 = min(xs) - MARGIN
        self.y1 = max(ys) + MARGIN
        self.width = max(xs) + MARGIN - self.x0
        self.height = self.y1 - (min(ys) - MARGIN)
        self.items: list[str] = []

    def px(self, x, y):
        # flip y so that larger coordinates are drawn higher up
        return _num(x - self.x0), _num(self.y1 - y)

    def rect(self, x0, y0, x1, y1, cube_id):
        X, Y = self.px(x0, y1)
        self.items.append(
            f'<rect id="cube-{cube_id}" x="{X}" y="{Y}" width="{_num(x1 - x0)}" '
            f'height="{_num(y1 - y0)}" fill="#dde6f0" stroke="#000" stroke-width="1"/>'
        )

    def line(self, a, b, tag):
        (X1, Y1), (X2, Y2) = self.px(*a), self.px(*b)
        self.items.append(
            f'<line class="sightline" data-cubes="{tag}" x1="{X1}" y1="{Y1}" x2="{X2}" y2="{Y2}" '
            'stroke="#c00" stroke-width="1.5" stroke-dasharray="6,4"/>'
        )

    def text(self, x, y, label):
        X, Y = self.px(x, y)
        self.items.append(f'<text x="{X}" y="{Y}" font-size="14" text-anchor="middle">{label}</text>')

    def document(self) -> str:
        head = (
            '<svg xmlns="http://www.w3.org/2000/svg" '
            f'width="{_num(self.width)}" height="{_num(self.height)}" '
            f'viewBox="0 0 {_num(self.width)} {_num(self.height)}">'
        )
        return "\n".join([head, *self.items, "</svg>"]) + "\n"


def _label(cube_id: int, labels: Mapping[int, int] | None) -> str:
    if labels is None or cube_id not in labels:
        return str(cube_id)
    return str(labels[cube_id])


def render_svg(scene: Scene, labels: Mapping[int, int] | None = None) -> str:
    """SVG text: one rectangle per cube (ascending id) and a dashed segment per sightline.

    Supports standard squares (n=2), orthogonal bars (n=1) and orthogonal
    squares (n=2), the latter drawn obliquely so higher cubes sit up and to
    the right, annotated with their heights.
    """
    n = scene.dimension
    g = extract_graph(scene)
    half = Fraction(1, 2)
    if scene.model == STANDARD and n == 2:
        pts = [(c.center[0] + s, c.center[1] + s) for c in scene.cubes for s in (-half, half)]
        canvas = _Canvas(pts)
        for c in scene.cubes:
            x, y = c.center
            canvas.rect(x - half, y - half, x + half, y + half, c.id)
            canvas.text(x, y, _label(c.id, labels))
        for a, b in sorted(g.edges):
            line = g.edges[a, b]["sightline"]
            ca, cb = scene.cube(a), scene.cube(b)
            j, (w,) = line.axis, line.witness
            lo, hi = sorted((ca.center[j], cb.center[j]))
            s, e = lo + half, hi - half
            canvas.line((s, w) if j == 0 else (w, s), (e, w) if j == 0 else (w, e), f"{a} {b}")
        return canvas.document()
    if scene.model == ORTHOGONAL and n == 1:
        pts = [(c.center[0] + s, c.height) for c in scene.cubes for s in (-half, half)]
        canvas = _Canvas(pts)
        for c in scene.cubes:
            x, h = c.center[0], c.height
            canvas.rect(x - half, h - BAR_THICKNESS / 2, x + half, h + BAR_THICKNESS / 2, c.id)
            canvas.text(x, h + BAR_THICKNESS, _label(c.id, labels))
        for a, b in sorted(g.edges):
            line = g.edges[a, b]["sightline"]
            (w,) = line.witness
            lo, hi = sorted((scene.cube(a).height, scene.cube(b).height))
            canvas.line((w, lo + BAR_THICKNESS / 2), (w, hi - BAR_THICKNESS / 2), f"{a} {b}")
        return canvas.document()
    if scene.model == ORTHOGONAL and n == 2:

        def at(p, h):
            return p[0] + SKEW * h, p[1] + SKEW * h

        pts = []
        for c in scene.cubes:
            for s in (-half, half):
                pts.append(at((c.center[0] + s, c.center[1] + s), c.height))
        canvas = _Canvas(pts)
        for c in sorted(scene.cubes, key=lambda c: (c.height, c.id)):
            x, y = at(c.center, c.height)
            canvas.rect(x - half, y - half, x + half, y + half, c.id)
            canvas.text(x, y, f"{_label(c.id, labels)} @ {c.height}")
        for a, b in sorted(g.edges):
            w = g.edges[a, b]["sightline"].witness
            lo, hi = sorted((scene.cube(a).height, scene.cube(b).height))
            canvas.line(at(w, lo), at(w, hi), f"{a} {b}")
        return canvas.document()
    raise SceneError(f"cannot draw a {scene.model} scene of dimension {n}")
