"""Exact scenes of unit cubes in the standard and orthogonal visibility models.

Cubes are closed axis-aligned unit boxes given by their centers (and, in the
orthogonal model, a height along the extra axis).  All coordinates are
:class:`fractions.Fraction`; no predicate touches floating point.

Axes are 0-based: a standard scene of dimension ``n`` has axes ``0..n-1`` and
orthogonal sightlines run along axis ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .trees import Tree

HALF = Fraction(1, 2)

STANDARD = "standard"
ORTHOGONAL = "orthogonal"


class SceneError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise SceneError(f"refusing float coordinate {x!r}; use exact rationals")
    return Fraction(x)


@dataclass(frozen=True)
class Cube:
    id: int
    center: tuple[Fraction, ...]
    height: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(as_fraction(c) for c in self.center))
        if self.height is not None:
            object.__setattr__(self, "height", as_fraction(self.height))

    def moved(self, offset: Sequence[Fraction], dh: Fraction = Fraction(0), new_id: int | None = None) -> "Cube":
        center = tuple(c + o for c, o in zip(self.center, offset))
        height = None if self.height is None else self.height + dh
        return Cube(self.id if new_id is None else new_id, center, height)


@dataclass(frozen=True)
class SightLine:
    a: int
    b: int
    axis: int
    length: Fraction
    # a point of the open residual channel, in the coordinates transverse to ``axis``
    witness: tuple[Fraction, ...] = field(compare=False, default=())


class Scene:
    """Common base of :class:`StandardScene` and :class:`OrthoScene`."""

    model = ""

    def __init__(self, dimension: int, cubes: Iterable[Cube] = ()):
        if dimension < 1:
            raise SceneError(f"dimension must be >= 1, got {dimension}")
        self.dimension = dimension
        cubes = sorted(cubes, key=lambda c: c.id)
        self._index: dict[int, Cube] = {}
        for c in cubes:
            if c.id in self._index:
                raise SceneError(f"duplicate cube id {c.id}")
            if len(c.center) != dimension:
                raise SceneError(f"cube {c.id} has {len(c.center)} coordinates, expected {dimension}")
            self._check_height(c)
            self._index[c.id] = c
        self.cubes: tuple[Cube, ...] = tuple(cubes)

    def _check_height(self, cube: Cube) -> None:
        raise NotImplementedError

    def __len__(self):
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    def __eq__(self, other):
        return type(self) is type(other) and self.dimension == other.dimension and self.cubes == other.cubes

    def __repr__(self):
        return f"{type(self).__name__}(dimension={self.dimension}, cubes={len(self.cubes)})"

    @property
    def ids(self) -> list[int]:
        return [c.id for c in self.cubes]

    def cube(self, cube_id: int) -> Cube:
        try:
            return self._index[cube_id]
        except KeyError:
            raise SceneError(f"unknown cube id {cube_id}") from None

    def subscene(self, ids: Iterable[int]):
        return type(self)(self.dimension, [self.cube(i) for i in ids])

    def with_cubes(self, cubes: Iterable[Cube]):
        return type(self)(self.dimension, cubes)

    def touching(self, a: Cube, b: Cube) -> bool:
        raise NotImplementedError

    def overlapping_pairs(self) -> list[tuple[int, int]]:
        """Pairs of cubes whose closed boxes meet (disjointness violations)."""
        return [(a.id, b.id) for a, b in combinations(self.cubes, 2) if self.touching(a, b)]

    def validate(self) -> None:
        bad = self.overlapping_pairs()
        if bad:
            raise SceneError(f"cubes not disjoint: {bad[:5]}")

    def visible(self, a: int, b: int) -> SightLine | None:
        raise NotImplementedError


def _close(a: Fraction, b: Fraction) -> bool:
    return abs(a - b) <= 1


class StandardScene(Scene):
    model = STANDARD

    def _check_height(self, cube):
        if cube.height is not None:
            raise SceneError(f"cube {cube.id}: standard cubes have no height")

    def touching(self, a, b):
        return all(_close(x, y) for x, y in zip(a.center, b.center))

    def visible(self, a, b):
        return visible_standard(self, a, b)


class OrthoScene(Scene):
    model = ORTHOGONAL

    def _check_height(self, cube):
        if cube.height is None:
            raise SceneError(f"cube {cube.id}: orthogonal cubes need a height")

    def touching(self, a, b):
        return a.height == b.height and all(_close(x, y) for x, y in zip(a.center, b.center))

    def visible(self, a, b):
        return visible_ortho(self, a, b)


def empty_scene(model: str, dimension: int) -> Scene:
    return scene_class(model)(dimension, [])


def scene_class(model: str) -> type[Scene]:
    if model == STANDARD:
        return StandardScene
    if model == ORTHOGONAL:
        return OrthoScene
    raise SceneError(f"unknown model {model!r}")


# --------------------------------------------------------------------------
# residual region test


def _meets_open(box, window) -> bool:
    return all(blo < whi and bhi > wlo for (blo, bhi), (wlo, whi) in zip(box, window))


def _free_point(window, blockers):
    """A point in an open sub-box of ``window`` missed by every closed blocker.

    ``window`` is a list of open intervals, ``blockers`` closed boxes already
    known to meet it.  Cutting each axis at the blocker faces, every open cell
    is either inside a blocker or disjoint from it, so checking one point per
    cell decides whether the residual has interior.
    """
    if not window:
        return None if blockers else ()
    (wlo, whi), rest = window[0], window[1:]
    cuts = {wlo, whi}
    for box in blockers:
        for x in box[0]:
            if wlo < x < whi:
                cuts.add(x)
    cuts = sorted(cuts)
    for lo, hi in zip(cuts, cuts[1:]):
        covering = [box[1:] for box in blockers if box[0][0] <= lo and box[0][1] >= hi]
        sub = _free_point(rest, covering)
        if sub is not None:
            return ((lo + hi) / 2,) + sub
    return None


def _box(center: Sequence[Fraction], skip: int | None = None):
    return [(c - HALF, c + HALF) for i, c in enumerate(center) if i != skip]


def visible_standard(scene: StandardScene, a: int, b: int) -> SightLine | None:
    ca, cb = scene.cube(a), scene.cube(b)
    if a == b:
        raise SceneError("a cube does not see itself")
    d = [y - x for x, y in zip(ca.center, cb.center)]
    separated = [j for j, dj in enumerate(d) if abs(dj) > 1]
    # one separated axis, strict overlap on all others; never more than one axis qualifies
    if len(separated) != 1:
        return None
    j = separated[0]
    if any(abs(dj) >= 1 for i, dj in enumerate(d) if i != j):
        return None
    lo_face = min(ca.center[j], cb.center[j]) + HALF
    hi_face = max(ca.center[j], cb.center[j]) - HALF
    window = [
        (max(x, y) - HALF, min(x, y) + HALF)
        for i, (x, y) in enumerate(zip(ca.center, cb.center))
        if i != j
    ]
    blockers = []
    for c in scene.cubes:
        if c.id in (a, b):
            continue
        cj = c.center[j]
        if cj - HALF < hi_face and cj + HALF > lo_face:
            box = _box(c.center, skip=j)
            if _meets_open(box, window):
                blockers.append(box)
    point = _free_point(window, blockers)
    if point is None:
        return None
    return SightLine(min(a, b), max(a, b), j, hi_face - lo_face, point)


def visible_ortho(scene: OrthoScene, a: int, b: int) -> SightLine | None:
    ca, cb = scene.cube(a), scene.cube(b)
    if a == b:
        raise SceneError("a cube does not see itself")
    if ca.height == cb.height:
        return None
    if any(abs(y - x) >= 1 for x, y in zip(ca.center, cb.center)):
        return None
    low, high = sorted((ca.height, cb.height))
    window = [(max(x, y) - HALF, min(x, y) + HALF) for x, y in zip(ca.center, cb.center)]
    blockers = []
    for c in scene.cubes:
        if c.id in (a, b) or not low < c.height < high:
            continue
        box = _box(c.center)
        if _meets_open(box, window):
            blockers.append(box)
    point = _free_point(window, blockers)
    if point is None:
        return None
    return SightLine(min(a, b), max(a, b), scene.dimension, high - low, point)


def extract_graph(scene: Scene) -> nx.Graph:
    """Visibility graph on cube ids; each edge carries its ``sightline``."""
    g = nx.Graph()
    g.add_nodes_from(scene.ids)
    for x, y in combinations(scene.ids, 2):
        line = scene.visible(x, y)
        if line is not None:
            g.add_edge(x, y, sightline=line)
    return g


def components(scene: Scene, graph: nx.Graph | None = None) -> list[list[int]]:
    g = extract_graph(scene) if graph is None else graph
    comps = [sorted(c) for c in nx.connected_components(g)]
    return sorted(comps, key=lambda c: c[0])


# --------------------------------------------------------------------------
# multi-cube representations


@dataclass(frozen=True)
class MultiRep:
    """A scene plus the vertex owning each cube (``assignment``: cube id -> vertex)."""

    scene: Scene
    assignment: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))
        ids = set(self.scene.ids)
        if set(self.assignment) != ids:
            missing = sorted(ids - set(self.assignment))
            stray = sorted(set(self.assignment) - ids)
            raise SceneError(f"assignment mismatch: unassigned cubes {missing}, unknown cubes {stray}")

    @property
    def model(self) -> str:
        return self.scene.model

    @property
    def dimension(self) -> int:
        return self.scene.dimension

    def cubes_of(self, v: int) -> list[int]:
        return sorted(c for c, u in self.assignment.items() if u == v)

    def vertices(self) -> set[int]:
        return set(self.assignment.values())

    def cube_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for v in self.assignment.values():
            counts[v] = counts.get(v, 0) + 1
        return dict(sorted(counts.items()))

    def max_cubes(self) -> int:
        return max(self.cube_counts().values(), default=0)

    def restricted(self, ids: Iterable[int]) -> "MultiRep":
        ids = list(ids)
        return MultiRep(self.scene.subscene(ids), {i: self.assignment[i] for i in ids})

    def relabeled(self, vertex_map: Mapping[int, int]) -> "MultiRep":
        return MultiRep(self.scene, {c: vertex_map[v] for c, v in self.assignment.items()})


def quotient_edges(rep: MultiRep, graph: nx.Graph | None = None) -> set[tuple[int, int]]:
    g = extract_graph(rep.scene) if graph is None else graph
    out = set()
    for x, y in g.edges:
        u, v = rep.assignment[x], rep.assignment[y]
        if u != v:
            out.add((min(u, v), max(u, v)))
    return out


@dataclass
class VerificationReport:
    overlapping: list[tuple[int, int]]
    same_vertex_sightlines: list[tuple[int, int]]
    missing_edges: list[tuple[int, int]]
    extra_edges: list[tuple[int, int]]
    cube_counts: dict[int, int]

    @property
    def max_cubes(self) -> int:
        return max(self.cube_counts.values(), default=0)

    @property
    def passed(self) -> bool:
        return not (self.overlapping or self.same_vertex_sightlines or self.missing_edges or self.extra_edges)

    def __bool__(self):
        return self.passed

    def lines(self) -> list[str]:
        out = ["PASS" if self.passed else "FAIL"]
        for a, b in self.overlapping:
            out.append(f"overlap {a} {b}")
        for a, b in self.same_vertex_sightlines:
            out.append(f"same-vertex-sightline {a} {b}")
        for u, v in self.missing_edges:
            out.append(f"missing-edge {u} {v}")
        for u, v in self.extra_edges:
            out.append(f"extra-edge {u} {v}")
        out.append(f"max-cubes-per-vertex {self.max_cubes}")
        return out


def verify_multirep(rep: MultiRep, tree: Tree) -> VerificationReport:
    if rep.vertices() != set(tree.vertices):
        raise SceneError(
            f"assignment covers vertices {sorted(rep.vertices())}, tree has 0..{tree.vertex_count - 1}"
        )
    g = extract_graph(rep.scene)
    same = sorted(
        (min(x, y), max(x, y)) for x, y in g.edges if rep.assignment[x] == rep.assignment[y]
    )
    quotient = quotient_edges(rep, g)
    return VerificationReport(
        overlapping=rep.scene.overlapping_pairs(),
        same_vertex_sightlines=same,
        missing_edges=sorted(tree.edges - quotient),
        extra_edges=sorted(quotient - tree.edges),
        cube_counts=rep.cube_counts(),
    )


def _extent(scene: Scene, axis: int) -> tuple[Fraction, Fraction]:
    if axis == scene.dimension:
        vals = [c.height for c in scene.cubes]
    else:
        vals = [c.center[axis] for c in scene.cubes]
    return min(vals), max(vals)


def disjoint_union(rep_a: MultiRep, rep_b: MultiRep) -> MultiRep:
    """Place ``rep_b`` beside ``rep_a`` so that no cube of one sees the other.

    Standard scenes shift along axes 0 and 1 so every cross pair differs by
    more than 1 in two coordinates; orthogonal scenes shift along axis 0, which
    makes the projections disjoint.  Colliding cube ids in ``rep_b`` are
    renumbered past those of ``rep_a``.
    """
    if rep_a.model != rep_b.model or rep_a.dimension != rep_b.dimension:
        raise SceneError(
            f"cannot unite {rep_a.model}/{rep_a.dimension} with {rep_b.model}/{rep_b.dimension}"
        )
    if not len(rep_b.scene):
        return rep_a
    if not len(rep_a.scene):
        return rep_b
    n = rep_a.dimension
    axes = [0]
    if rep_a.model == STANDARD:
        if n < 2:
            raise SceneError("standard 1-cube scenes admit no disjoint union: all cubes are collinear")
        axes = [0, 1]
    offset = [Fraction(0)] * n
    for ax in axes:
        offset[ax] = _extent(rep_a.scene, ax)[1] - _extent(rep_b.scene, ax)[0] + 2
    ids_a = set(rep_a.scene.ids)
    shift = 0
    if ids_a & set(rep_b.scene.ids):
        shift = max(ids_a) + 1 - min(rep_b.scene.ids)
    moved = [c.moved(offset, new_id=c.id + shift) for c in rep_b.scene.cubes]
    scene = rep_a.scene.with_cubes(list(rep_a.scene.cubes) + moved)
    assignment = dict(rep_a.assignment)
    assignment.update({c + shift: v for c, v in rep_b.assignment.items()})
    return MultiRep(scene, assignment)


def union_all(reps: Iterable[MultiRep], model: str | None = None, dimension: int | None = None) -> MultiRep:
    out = None
    for r in reps:
        out = r if out is None else disjoint_union(out, r)
    if out is None:
        if model is None or dimension is None:
            raise SceneError("union of nothing needs a model and dimension")
        return MultiRep(empty_scene(model, dimension), {})
    return out


def perturb_distinct_heights(scene: OrthoScene) -> OrthoScene:
    """Break height ties without changing the visibility graph.

    Tied cubes have disjoint projections, so nudging them apart by less than
    half the smallest gap between distinct heights never lets one occlude a
    sightline it did not already cut.
    """
    if not isinstance(scene, OrthoScene):
        raise SceneError("height perturbation applies to orthogonal scenes")
    heights = sorted({c.height for c in scene.cubes})
    if len(heights) == len(scene.cubes):
        return scene
    gaps = [y - x for x, y in zip(heights, heights[1:])]
    delta = (min(gaps) if gaps else Fraction(1)) / (2 * len(scene.cubes))
    out = []
    rank: dict[Fraction, int] = {}
    for c in sorted(scene.cubes, key=lambda c: (c.height, c.id)):
        i = rank.get(c.height, 0)
        rank[c.height] = i + 1
        out.append(Cube(c.id, c.center, c.height + i * delta))
    return scene.with_cubes(out)


def perturb_rep(rep: MultiRep) -> MultiRep:
    return MultiRep(perturb_distinct_heights(rep.scene), rep.assignment)


def split_into_tree_components(rep: MultiRep, tree: Tree) -> MultiRep:
    """Separate every component holding two cubes of one vertex.

    Per tree edge a shortest sightline is kept (ties by cube-id pair); those
    sightlines form a spanning forest of the component whose pieces carry at
    most one cube per vertex, and all pieces are re-assembled by disjoint
    union.
    """
    report = verify_multirep(rep, tree)
    if not report.passed:
        raise SceneError("input representation does not verify: " + "; ".join(report.lines()[1:4]))
    if rep.model == ORTHOGONAL:
        rep = perturb_rep(rep)
    for _ in range(len(rep.scene) + 1):
        g = extract_graph(rep.scene)
        comps = components(rep.scene, g)
        if all(len({rep.assignment[c] for c in comp}) == len(comp) for comp in comps):
            return rep
        rep = _split_once(rep, tree, g, comps)
    raise SceneError("internal: component splitting did not converge")


def _split_once(rep: MultiRep, tree: Tree, g: nx.Graph, comps: list[list[int]]) -> MultiRep:
    pieces: list[list[int]] = []
    for comp in comps:
        owners = [rep.assignment[c] for c in comp]
        if len(set(owners)) == len(owners):
            pieces.append(comp)
            continue
        best: dict[tuple[int, int], tuple] = {}
        for x, y in g.subgraph(comp).edges:
            u, v = rep.assignment[x], rep.assignment[y]
            key = (min(u, v), max(u, v))
            cand = (g.edges[x, y]["sightline"].length, min(x, y), max(x, y))
            if key not in best or cand < best[key]:
                best[key] = cand
        forest = nx.Graph()
        forest.add_nodes_from(comp)
        forest.add_edges_from((x, y) for _, x, y in best.values())
        for part in nx.connected_components(forest):
            part = sorted(part)
            owners = [rep.assignment[c] for c in part]
            if len(set(owners)) != len(owners):
                raise SceneError(f"internal: spanning-forest piece {part} repeats a vertex")
            pieces.append(part)
    pieces.sort(key=lambda p: p[0])
    out = union_all((rep.restricted(p) for p in pieces), rep.model, rep.dimension)
    report = verify_multirep(out, tree)
    if not report.passed:
        raise SceneError("internal: split representation fails verification: " + "; ".join(report.lines()))
    return out
