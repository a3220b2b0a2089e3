"""Placement constructions: intersection representations, orthogonal stacks,
unit bar trees and n-cube scenes assembled from orthogonal forests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import networkx as nx

from .geometry import (
    Cube,
    MultiRep,
    OrthoScene,
    SceneError,
    StandardScene,
    perturb_rep,
    verify_multirep,
)
from .trees import (
    PathExpansion,
    Tree,
    bfs_order,
    bfs_parents,
    complete_expansions,
    expand_all,
    induced_subtree,
    max_degree,
    path_tree,
    recognize_caterpillar,
    star_tree,
    validate_tree,
)

THREE_QUARTERS = Fraction(3, 4)
THIRD = Fraction(1, 3)

BLUE = "blue"
RED = "red"


class ConstructionError(ValueError):
    pass


class DegreeBoundError(ConstructionError):
    """Raised when a tree's maximum degree rules out a single orthogonal forest."""


# --------------------------------------------------------------------------
# intersection representations


@dataclass(frozen=True)
class IntersectionRep:
    """Closed unit cubes that may overlap; ``assignment`` maps cube id -> vertex."""

    dimension: int
    centers: Mapping[int, tuple[Fraction, ...]]
    assignment: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(
            self, "centers", {i: tuple(Fraction(x) for x in c) for i, c in self.centers.items()}
        )
        object.__setattr__(self, "assignment", dict(self.assignment))
        if set(self.centers) != set(self.assignment):
            raise ConstructionError("intersection rep: centers and assignment disagree on cube ids")
        if len(set(self.assignment.values())) != len(self.assignment):
            raise ConstructionError("intersection rep: assignment is not a bijection")
        for i, c in self.centers.items():
            if len(c) != self.dimension:
                raise ConstructionError(f"intersection rep: cube {i} has the wrong dimension")

    def center_of(self, v: int) -> tuple[Fraction, ...]:
        for i, u in self.assignment.items():
            if u == v:
                return self.centers[i]
        raise ConstructionError(f"no cube for vertex {v}")

    def vertex_centers(self) -> dict[int, tuple[Fraction, ...]]:
        return {self.assignment[i]: c for i, c in self.centers.items()}

    def intersection_edges(self) -> set[tuple[int, int]]:
        pts = sorted(self.vertex_centers().items())
        out = set()
        for (u, cu), (v, cv) in itertools.combinations(pts, 2):
            if all(abs(x - y) <= 1 for x, y in zip(cu, cv)):
                out.add((min(u, v), max(u, v)))
        return out

    def overlap_width(self, u: int, v: int) -> Fraction:
        """Smallest per-coordinate overlap of two vertices' cubes (may be negative)."""
        cu, cv = self.center_of(u), self.center_of(v)
        return min((1 - abs(x - y) for x, y in zip(cu, cv)), default=Fraction(1))

    def represents(self, tree: Tree) -> bool:
        return set(self.assignment.values()) == set(tree.vertices) and self.intersection_edges() == set(tree.edges)


def _from_vertex_centers(dimension: int, centers: Mapping[int, Sequence[Fraction]]) -> IntersectionRep:
    return IntersectionRep(dimension, dict(centers), {v: v for v in centers})


def path_intersection_rep(t: int, dimension: int = 1) -> IntersectionRep:
    if t < 1:
        raise ConstructionError("a path needs at least one vertex")
    zeros = (Fraction(0),) * (dimension - 1)
    return _from_vertex_centers(dimension, {i: (i * THREE_QUARTERS,) + zeros for i in range(t)})


def star_intersection_rep(n: int, leaves: int | None = None) -> IntersectionRep:
    """K_{1,2^n} (or its first ``leaves`` leaves): center 0 at the origin, leaves at (3/4)s."""
    if n < 1:
        raise ConstructionError("dimension must be >= 1")
    signs = list(itertools.product((-1, 1), repeat=n))
    if leaves is None:
        leaves = len(signs)
    if not 0 <= leaves <= len(signs):
        raise ConstructionError(f"K_1,{leaves} is not a unit {n}-cube intersection star")
    centers = {0: (Fraction(0),) * n}
    for k, s in enumerate(signs[:leaves], start=1):
        centers[k] = tuple(THREE_QUARTERS * x for x in s)
    return _from_vertex_centers(n, centers)


def _side_of_edge(tree: Tree, u: int, v: int) -> set[int]:
    """Vertices on ``u``'s side of the edge ``uv``."""
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in tree.neighbors(x):
            if y not in seen and not (x == u and y == v):
                seen.add(y)
                stack.append(y)
    return seen


def epsilon_separate(rep: IntersectionRep, tree: Tree) -> tuple[IntersectionRep, Fraction]:
    """Thicken every touching intersection by sliding one side of the tree.

    Returns the new representation and ``eps`` such that every intersection of
    adjacent cubes has per-coordinate width at least ``2 * eps``.
    """
    if not rep.represents(tree):
        raise ConstructionError("intersection rep does not represent the tree")
    centers = {v: list(c) for v, c in rep.vertex_centers().items()}
    edges = tree.sorted_edges()
    target = set(tree.edges)

    def width(u, v):
        return min((1 - abs(x - y) for x, y in zip(centers[u], centers[v])), default=Fraction(1))

    for step in range(len(edges) + 1):
        degenerate = [(u, v) for u, v in edges if width(u, v) <= 0]
        if not degenerate:
            break
        if step == len(edges):
            raise ConstructionError("internal: more repairs than edges")
        u, v = degenerate[0]
        side = _side_of_edge(tree, u, v)
        delta = Fraction(1)
        for x in side:
            for y in tree.vertices:
                if y in side or (x, y) == (u, v):
                    continue
                gap = max(abs(a - b) for a, b in zip(centers[x], centers[y])) - 1
                delta = min(delta, gap)
        if delta <= 0:
            raise ConstructionError("internal: non-adjacent cubes across the cut intersect")
        shift = [delta / 2 * ((b > a) - (b < a)) for a, b in zip(centers[u], centers[v])]
        for x in side:
            centers[x] = [a + s for a, s in zip(centers[x], shift)]
        moved = _from_vertex_centers(rep.dimension, {w: tuple(c) for w, c in centers.items()})
        if moved.intersection_edges() != target:
            raise ConstructionError("internal: separation step changed the intersection graph")
    widths = [width(u, v) for u, v in edges]
    eps = min(widths, default=Fraction(1)) / 2
    inverse = {v: i for i, v in rep.assignment.items()}
    out = IntersectionRep(rep.dimension, {inverse[v]: tuple(c) for v, c in centers.items()}, rep.assignment)
    return out, eps


# --------------------------------------------------------------------------
# orthogonal representations from cubicity representations


@dataclass(frozen=True)
class EdgeTwoColoring:
    root: int
    color: Mapping[tuple[int, int], str]

    def of(self, u: int, v: int) -> str:
        return self.color[(min(u, v), max(u, v))]


def edge_two_color(
    base_tree: Tree, expansions: Mapping[int, PathExpansion] | None, root: int = 0
) -> EdgeTwoColoring:
    """Breadth-first blue/red coloring driven by the expansion partitions.

    At the root, edges to ``near`` neighbors are blue and edges to ``far``
    neighbors red.  Elsewhere the edges into the class holding the BFS
    predecessor copy the predecessor edge's color and the rest take the other.
    """
    exps = complete_expansions(base_tree, expansions)
    parents = bfs_parents(base_tree, root)
    color: dict[tuple[int, int], str] = {}
    for u in bfs_order(base_tree, root):
        e = exps[u]
        if u == root:
            same, first = e.near, BLUE
        else:
            p = parents[u]
            same = e.near if p in e.near else e.far
            first = color[(min(u, p), max(u, p))]
        other = RED if first == BLUE else BLUE
        for w in base_tree.neighbors(u):
            if w == parents[u]:
                continue
            color[(min(u, w), max(u, w))] = first if w in same else other
    return EdgeTwoColoring(root, color)


def _base_heights(base_tree: Tree, coloring: EdgeTwoColoring) -> dict[int, int]:
    # Blue steps count +1 and red -1, with the sign flipped below odd-depth
    # vertices: copying the predecessor's color onto its own class otherwise
    # sends the predecessor and its classmates to opposite sides of the stack.
    root = coloring.root
    parents = bfs_parents(base_tree, root)
    depth = {root: 0}
    height = {root: 0}
    for u in bfs_order(base_tree, root):
        for w in base_tree.neighbors(u):
            if w == parents[u]:
                continue
            depth[w] = depth[u] + 1
            step = 1 if coloring.of(u, w) == BLUE else -1
            height[w] = height[u] + (step if depth[u] % 2 == 0 else -step)
    return height


def ortho_from_cubicity(
    base_tree: Tree,
    rep: IntersectionRep,
    expansions: Mapping[int, PathExpansion] | None = None,
    root: int = 0,
) -> MultiRep:
    """Orthogonal scene for the expansion of ``base_tree``, one cube per vertex.

    Cube ids and vertices follow :func:`hypervis.trees.expand_all`.  Each base
    vertex sits at an integer height; a length-``k`` expansion becomes ``k+1``
    stacked cubes spread evenly over ``height +- 1/3``, with ``v_0`` on the
    end facing its ``near`` neighbors.
    """
    if not rep.represents(base_tree):
        raise ConstructionError("intersection rep does not represent the base tree")
    for u, v in base_tree.edges:
        if rep.overlap_width(u, v) <= 0:
            raise ConstructionError(f"intersection of {u} and {v} has empty interior; epsilon-separate first")
    exps = complete_expansions(base_tree, expansions)
    coloring = edge_two_color(base_tree, exps, root)
    height = _base_heights(base_tree, coloring)
    expanded, where = expand_all(base_tree, exps)
    ident = {key: i for i, key in where.items()}
    centers = rep.vertex_centers()
    cubes = []
    for u in base_tree.vertices:
        e = exps[u]
        near_up = _near_side_up(base_tree, height, e, u)
        k = e.length
        for pos in range(k + 1):
            if k == 0:
                h = Fraction(height[u])
            else:
                offset = -THIRD + pos * Fraction(2, 3) / k
                h = height[u] - offset if near_up else height[u] + offset
            cubes.append(Cube(ident[(u, pos)], centers[u], h))
    scene = OrthoScene(rep.dimension, cubes)
    return MultiRep(scene, {i: i for i in range(expanded.vertex_count)})


def _near_side_up(base_tree: Tree, height, e: PathExpansion, u: int) -> bool:
    sides = {w: height[w] > height[u] for w in base_tree.neighbors(u)}
    near = {sides[w] for w in e.near}
    far = {sides[w] for w in e.far}
    if len(near) > 1 or len(far) > 1 or (near and near == far):
        raise ConstructionError(f"internal: expansion classes at {u} straddle its stack")
    if near:
        return near.pop()
    if far:
        return not far.pop()
    return False


class ProjectionError(ConstructionError):
    pass


def project_to_intersection(rep: MultiRep, tree: Tree):
    """Undo :func:`ortho_from_cubicity`: drop heights and merge equal projections.

    Returns ``(base_tree, intersection_rep, expansions, vertex_map)`` where
    ``vertex_map`` sends each tree vertex to ``(base vertex, position)`` and
    position 0 is the lowest cube of its stack.
    """
    if rep.model != "orthogonal":
        raise ProjectionError("projection needs an orthogonal scene")
    counts = rep.cube_counts()
    if any(c != 1 for c in counts.values()):
        raise ProjectionError("projection needs one cube per vertex")
    groups: dict[tuple, list] = {}
    for c in rep.scene.cubes:
        groups.setdefault(c.center, []).append(c)
    stacks = sorted(
        ([rep.assignment[c.id] for c in sorted(g, key=lambda c: c.height)] for g in groups.values()),
        key=min,
    )
    base_of = {}
    vertex_map = {}
    for b, stack in enumerate(stacks):
        for pos, v in enumerate(stack):
            base_of[v] = b
            vertex_map[v] = (b, pos)
        for x, y in zip(stack, stack[1:]):
            if not tree.has_edge(x, y):
                raise ProjectionError(f"stacked cubes of {x} and {y} are not adjacent in the tree")
    base_edges = set()
    for u, v in tree.edges:
        bu, bv = base_of[u], base_of[v]
        if bu != bv:
            if (min(bu, bv), max(bu, bv)) in base_edges:
                raise ProjectionError("projection not tree-representable: parallel edges between stacks")
            base_edges.add((min(bu, bv), max(bu, bv)))
    try:
        base = validate_tree(len(stacks), base_edges)
    except ValueError as exc:
        raise ProjectionError(f"projection not tree-representable: {exc}") from exc
    centers = {b: rep.scene.cube(_cube_of(rep, stack[0])).center for b, stack in enumerate(stacks)}
    inter = _from_vertex_centers(rep.dimension, centers)
    if inter.intersection_edges() != set(base.edges):
        raise ProjectionError("projection not tree-representable: projected cubes meet off the tree")
    expansions = {}
    for b, stack in enumerate(stacks):
        near, far = set(), set()
        inner = set(stack[1:-1])
        for pos, v in enumerate(stack):
            for w in tree.neighbors(v):
                if base_of[w] == b:
                    continue
                if v in inner:
                    raise ProjectionError(f"vertex {w} attaches to the interior of stack {b}")
                (near if pos == 0 else far).add(base_of[w])
        expansions[b] = PathExpansion(b, len(stack) - 1, frozenset(near), frozenset(far))
    return base, inter, expansions, vertex_map


def _cube_of(rep: MultiRep, v: int) -> int:
    return rep.cubes_of(v)[0]


# --------------------------------------------------------------------------
# unit bars and general orthogonal trees


def unit_bar_tree_rep(tree: Tree) -> MultiRep:
    """Unit bar (1-cube orthogonal) representation, one bar per vertex."""
    witness = recognize_caterpillar(tree)
    if not witness:
        raise DegreeBoundError(f"not a subdivided caterpillar of maximum degree 3: {witness.reason}")
    base = witness.base_path
    inter, _ = epsilon_separate(path_intersection_rep(base.vertex_count), base)
    rep = ortho_from_cubicity(base, inter, witness.expansions, root=0)
    _, to_tree = witness.rebuild()
    out = rep.relabeled(to_tree)
    _require(out, tree, "unit bar")
    return out


def _require(rep: MultiRep, tree: Tree, what: str) -> None:
    report = verify_multirep(rep, tree)
    if not report.passed:
        raise ConstructionError(f"internal: {what} construction fails verification: {report.lines()}")


def star_ortho_rep(n: int, m: int) -> MultiRep:
    """K_{1,m} as an n-cube orthogonal scene; center 0, leaves 1..m."""
    if not 1 <= m <= 2**n + 1:
        raise DegreeBoundError(f"K_1,{m} needs 1 <= m <= 2^{n}+1")
    leaves = min(m, 2**n)
    base = star_tree(leaves)
    inter = star_intersection_rep(n, leaves)
    expansions = {}
    if m == 2**n + 1:
        expansions[0] = PathExpansion(0, 1, frozenset(base.neighbors(0)))
    rep = ortho_from_cubicity(base, inter, expansions, root=0)
    _require(rep, star_tree(m), "star")
    return rep


def check_single_forest_degree(tree: Tree, n: int) -> None:
    delta = max_degree(tree)
    if delta > 2**n + 1:
        raise DegreeBoundError(
            f"maximum degree {delta} exceeds 2^{n}+1 = {2**n + 1}: no unit {n}-cube orthogonal tree"
        )


def contract_for_expansion(tree: Tree, absorb_legs: bool = True):
    """Group vertices into expansion paths and return the contracted base tree.

    Every branch vertex swallows its longest pendant leg (``absorb_legs``) and
    every remaining run of degree-<=2 vertices collapses to one base vertex.
    Returns ``(base_tree, expansions, classes)`` with ``classes[b]`` the path
    of tree vertices replacing base vertex ``b`` (position order).
    """
    cls_of: dict[int, int] = {}
    classes: list[list[int]] = []

    def add(path):
        for v in path:
            cls_of[v] = len(classes)
        classes.append(path)

    if absorb_legs:
        for v in sorted(tree.vertices, key=lambda x: (-tree.degree(x), x)):
            if tree.degree(v) < 3 or v in cls_of:
                continue
            best = []
            for w in tree.neighbors(v):
                leg = _pendant_leg(tree, v, w)
                if leg and not any(x in cls_of for x in leg) and len(leg) > len(best):
                    best = leg
            add([v] + best)
    for v in bfs_order(tree, 0):
        if v in cls_of:
            continue
        if tree.degree(v) > 2:
            add([v])
            continue
        run = [v]
        for direction in (0, 1):
            while True:
                end = run[-1] if direction == 0 else run[0]
                nxt = [w for w in tree.neighbors(end) if w not in cls_of and w not in run and tree.degree(w) <= 2]
                if not nxt:
                    break
                if direction == 0:
                    run.append(nxt[0])
                else:
                    run.insert(0, nxt[0])
        add(run)
    base_edges = set()
    for u, v in tree.edges:
        a, b = cls_of[u], cls_of[v]
        if a != b:
            base_edges.add((min(a, b), max(a, b)))
    base = validate_tree(len(classes), base_edges)
    expansions = {}
    for b, path in enumerate(classes):
        near, far = set(), set()
        for pos, v in enumerate(path):
            for w in tree.neighbors(v):
                if cls_of[w] != b:
                    (near if pos == 0 else far).add(cls_of[w])
        expansions[b] = PathExpansion(b, len(path) - 1, frozenset(near), frozenset(far))
    return base, expansions, classes


def _pendant_leg(tree: Tree, v: int, w: int) -> list[int] | None:
    leg = [w]
    prev = v
    while True:
        x = leg[-1]
        nxt = [y for y in tree.neighbors(x) if y != prev]
        if not nxt:
            return leg
        if len(nxt) > 1:
            return None
        prev = x
        leg.append(nxt[0])


def _grid_offsets(n: int, step: Fraction) -> list[tuple[Fraction, ...]]:
    k = int(1 / step)
    vals = [i * step for i in range(-k + 1, k)]
    return [o for o in itertools.product(vals, repeat=n) if any(o)]


def cubicity_rep(tree: Tree, n: int, budget: int = 20000) -> IntersectionRep | None:
    """Unit n-cube intersection representation by backtracking on a grid, or None.

    Paths and stars with at most 2^n leaves are placed directly; anything
    else is searched with centers on a 1/8 (n=2) or 1/4 (n>=3) lattice,
    every adjacent pair overlapping by at least one lattice step.
    """
    t = tree.vertex_count
    delta = max_degree(tree)
    if delta > 2**n:
        return None
    if delta <= 2:
        order = bfs_order(tree, min(v for v in tree.vertices if tree.degree(v) <= 1))
        zeros = (Fraction(0),) * (n - 1)
        return _from_vertex_centers(n, {v: (i * THREE_QUARTERS,) + zeros for i, v in enumerate(order)})
    centers_deg = [v for v in tree.vertices if tree.degree(v) > 1]
    if len(centers_deg) == 1:
        c = centers_deg[0]
        star = star_intersection_rep(n, tree.degree(c))
        leaves = list(tree.neighbors(c))
        pos = {c: star.vertex_centers()[0]}
        for k, leaf in enumerate(leaves, start=1):
            pos[leaf] = star.vertex_centers()[k]
        return _from_vertex_centers(n, pos)
    root = max(tree.vertices, key=lambda v: (tree.degree(v), -v))
    order = bfs_order(tree, root)
    parents = bfs_parents(tree, root)
    step = Fraction(1, 8) if n <= 2 else Fraction(1, 4)
    offsets = _grid_offsets(n, step)
    pos: dict[int, tuple[Fraction, ...]] = {root: (Fraction(0),) * n}
    nodes = 0

    def clearance(p, placed):
        return min((max(abs(a - b) for a, b in zip(p, q)) for q in placed), default=Fraction(10))

    def place(k):
        nonlocal nodes
        if k == t:
            return True
        v = order[k]
        p = parents[v]
        anchor = pos[p]
        others = [q for u, q in pos.items() if u != p]
        cands = []
        for o in offsets:
            cand = tuple(a + b for a, b in zip(anchor, o))
            gap = clearance(cand, others)
            if gap > 1:
                cands.append((-gap, -max(abs(x) for x in o), o, cand))
        cands.sort()
        for _, _, _, cand in cands:
            nodes += 1
            if nodes > budget:
                return False
            pos[v] = cand
            if place(k + 1):
                return True
            del pos[v]
        return False

    if not place(1):
        return None
    rep = _from_vertex_centers(n, pos)
    return rep if rep.represents(tree) else None


def realize_ortho_tree(tree: Tree, n: int, budget: int = 20000) -> MultiRep:
    """Some unit n-cube orthogonal representation of ``tree``, one cube per vertex.

    Contracts expansion paths, searches a cubicity representation of the
    contracted tree and stacks it with :func:`ortho_from_cubicity`.  Raises
    :class:`DegreeBoundError` when the degree bound already rules the tree
    out and :class:`ConstructionError` when the search gives up.
    """
    check_single_forest_degree(tree, n)
    if tree.vertex_count == 1:
        return MultiRep(OrthoScene(n, [Cube(0, (Fraction(0),) * n, Fraction(0))]), {0: 0})
    if n == 1:
        return unit_bar_tree_rep(tree)
    for absorb in (True, False):
        base, expansions, classes = contract_for_expansion(tree, absorb_legs=absorb)
        inter = cubicity_rep(base, n, budget)
        if inter is None:
            continue
        inter, _ = epsilon_separate(inter, base)
        rep = ortho_from_cubicity(base, inter, expansions, root=0)
        _, where = expand_all(base, expansions)
        to_tree = {i: classes[b][pos] for i, (b, pos) in where.items()}
        out = rep.relabeled(to_tree)
        if verify_multirep(out, tree).passed:
            return out
    raise ConstructionError(f"no unit {n}-cube orthogonal representation found for this tree")


# --------------------------------------------------------------------------
# n-cube scenes from orthogonal forests


ComponentRealizer = Callable[[Tree, int], MultiRep]


def default_component_rep(subtree: Tree, dimension: int) -> MultiRep:
    if dimension == 1:
        return unit_bar_tree_rep(subtree)
    return realize_ortho_tree(subtree, dimension)


def forest_components(edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    g = nx.Graph()
    g.add_edges_from(edges)
    return sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])


def ncube_from_ortho_forests(
    tree: Tree,
    forests: Sequence[Iterable[tuple[int, int]]],
    component_rep: ComponentRealizer | None = None,
) -> MultiRep:
    """Unit n-cube visibility scene of ``tree`` from n orthogonal forests.

    ``forests[j]`` holds the edges whose sightlines run along axis ``j``.
    ``component_rep(subtree, n - 1)`` must return a verified (n-1)-cube
    orthogonal representation of each forest component (relabeled to
    ``0..s-1`` in ascending vertex order); by default unit bar trees are
    built directly and higher dimensions use :func:`realize_ortho_tree`.
    """
    n = len(forests)
    if n < 2:
        raise ConstructionError("need at least two forests (dimension >= 2)")
    realize = component_rep or default_component_rep
    forests = [sorted((min(u, v), max(u, v)) for u, v in f) for f in forests]
    owner: dict[tuple[int, int], int] = {}
    for j, f in enumerate(forests):
        for e in f:
            if e in owner:
                raise ConstructionError(f"edge {e} appears in forests {owner[e]} and {j}")
            if e not in tree.edges:
                raise ConstructionError(f"edge {e} is not a tree edge")
            owner[e] = j
    if set(owner) != set(tree.edges):
        raise ConstructionError(f"forests miss tree edges {sorted(set(tree.edges) - set(owner))}")

    t = tree.vertex_count
    spacing = 4 * t
    order = bfs_order(tree, 0)
    index = {v: i for i, v in enumerate(order)}
    jobs = []
    for j, f in enumerate(forests):
        for comp in forest_components(f):
            jobs.append((min(index[v] for v in comp), j, comp))
    jobs.sort(key=lambda job: (job[0], job[1]))

    pos: dict[int, list[Fraction]] = {order[0]: [Fraction(0)] * n}
    for i, j, comp in jobs:
        anchor = order[i]
        if anchor not in pos:
            raise ConstructionError(f"internal: anchor {anchor} of component {comp} not yet placed")
        sub, labels = induced_subtree(tree, comp)
        sub_rep = realize(sub, n - 1)
        _check_component(sub_rep, sub, n - 1)
        sub_rep = perturb_rep(sub_rep)
        cube_of = {sub_rep.assignment[c.id]: c for c in sub_rep.scene.cubes}
        a_local = labels.index(anchor)
        a_cube = cube_of[a_local]
        above = sorted((c for c in cube_of.values() if c.height > a_cube.height), key=lambda c: c.height)
        below = sorted((c for c in cube_of.values() if c.height < a_cube.height), key=lambda c: -c.height)
        coords_j = [p[j] for p in pos.values()]
        top, bottom = max(coords_j), min(coords_j)
        new_j = {}
        for k, c in enumerate(above, start=1):
            new_j[c.id] = top + k * spacing
        for k, c in enumerate(below, start=1):
            new_j[c.id] = bottom - k * spacing
        others = [k for k in range(n) if k != j]
        fresh = []
        for local, c in cube_of.items():
            v = labels[local]
            if v == anchor:
                continue
            if v in pos:
                raise ConstructionError(f"internal: vertex {v} placed twice")
            p = [Fraction(0)] * n
            p[j] = new_j[c.id]
            for k, coord, anchor_coord in zip(others, c.center, a_cube.center):
                p[k] = pos[anchor][k] + coord - anchor_coord
            pos[v] = p
            fresh.append(v)
        _audit_insertion(tree, pos, fresh, comp, anchor, j, t)

    if len(pos) != t:
        raise ConstructionError(f"vertices {sorted(set(tree.vertices) - set(pos))} never placed")
    scene = StandardScene(n, [Cube(v, tuple(p)) for v, p in pos.items()])
    rep = MultiRep(scene, {v: v for v in tree.vertices})
    _require(rep, tree, "n-cube from forests")
    return rep


def _check_component(rep: MultiRep, sub: Tree, dimension: int) -> None:
    if rep.model != "orthogonal" or rep.dimension != dimension:
        raise ConstructionError(f"component representation must be {dimension}-cube orthogonal")
    if rep.max_cubes() != 1:
        raise ConstructionError("component representation must use one cube per vertex")
    report = verify_multirep(rep, sub)
    if not report.passed:
        raise ConstructionError(f"component representation fails verification: {report.lines()}")


def _audit_insertion(tree, pos, fresh, comp, anchor, j, t) -> None:
    """Assert the two placement invariants for the cubes just inserted."""
    scene = StandardScene(len(pos[anchor]), [Cube(v, tuple(p)) for v, p in pos.items()])
    members = set(comp)
    slab = 2 * t
    for v in fresh:
        seen = {}
        for w in pos:
            if w != v:
                line = scene.visible(v, w)
                if line is not None:
                    seen[w] = line.axis
        expected = {w for w in tree.neighbors(v) if w in members and w in pos}
        if set(seen) != expected or any(ax != j for ax in seen.values()):
            raise ConstructionError(
                f"internal: cube {v} sees {sorted(seen)} but should see {sorted(expected)} along axis {j}"
            )
        for jp in range(len(pos[v])):
            if jp == j:
                continue
            for w, q in pos.items():
                if w == v:
                    continue
                if all(abs(a - b) <= slab for k, (a, b) in enumerate(zip(pos[v], q)) if k != jp):
                    raise ConstructionError(f"internal: cube {w} lies in the axis-{jp} slab of cube {v}")
