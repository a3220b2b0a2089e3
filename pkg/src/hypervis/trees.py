"""Labeled trees, path expansions and unit-bar (subdivided caterpillar) recognition."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class TreeError(ValueError):
    pass


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Tree:
    """A tree on the dense vertex set ``0 .. vertex_count - 1``.

    Build instances through :func:`validate_tree`; the constructor itself does
    not check the tree invariants.
    """

    vertex_count: int
    edges: frozenset[tuple[int, int]]
    _adj: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, hash=False, default=())

    def __post_init__(self):
        if not self._adj or len(self._adj) != self.vertex_count:
            adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __len__(self):
        return self.vertex_count


def validate_tree(vertex_count: int, edge_list: Iterable[tuple[int, int]]) -> Tree:
    if vertex_count < 1:
        raise TreeError(f"vertex_count must be positive, got {vertex_count}")
    seen: set[tuple[int, int]] = set()
    parent = list(range(vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edge_list:
        u, v = int(u), int(v)
        for w in (u, v):
            if not 0 <= w < vertex_count:
                raise TreeError(f"vertex {w} out of range in edge ({u}, {v})")
        if u == v:
            raise TreeError(f"self-loop at vertex {u}")
        e = _norm(u, v)
        if e in seen:
            raise TreeError(f"duplicate edge {e}")
        ru, rv = find(u), find(v)
        if ru == rv:
            raise TreeError(f"cycle detected at edge {e}")
        parent[ru] = rv
        seen.add(e)
    if len(seen) != vertex_count - 1:
        roots = sorted({find(x) for x in range(vertex_count)})
        stray = next(x for x in range(vertex_count) if find(x) != find(0))
        raise TreeError(f"disconnected: {len(roots)} components, vertex {stray} unreachable from 0")
    return Tree(vertex_count, frozenset(seen))


def path_tree(t: int) -> Tree:
    return validate_tree(t, [(i, i + 1) for i in range(t - 1)])


def star_tree(leaves: int) -> Tree:
    return validate_tree(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def max_degree(tree: Tree) -> int:
    return max(tree.degree(v) for v in tree.vertices)


def bfs_order(tree: Tree, root: int = 0) -> list[int]:
    if not 0 <= root < tree.vertex_count:
        raise TreeError(f"root {root} out of range")
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in tree.neighbors(v):  # neighbors are stored ascending
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def bfs_parents(tree: Tree, root: int = 0) -> dict[int, int | None]:
    parents: dict[int, int | None] = {root: None}
    for v in bfs_order(tree, root):
        for w in tree.neighbors(v):
            if w not in parents:
                parents[w] = v
    return parents


def tree_path(tree: Tree, a: int, b: int) -> list[int]:
    parents = bfs_parents(tree, a)
    path = [b]
    while path[-1] != a:
        path.append(parents[path[-1]])
    return path[::-1]


def induced_subtree(tree: Tree, vertices: Iterable[int]) -> tuple[Tree, list[int]]:
    """Relabel a connected vertex subset to a standalone tree.

    Returns the subtree and the list mapping new ids to original vertices
    (in ascending original order).
    """
    labels = sorted(set(vertices))
    index = {v: i for i, v in enumerate(labels)}
    edges = [(index[u], index[v]) for u, v in tree.edges if u in index and v in index]
    return validate_tree(len(labels), edges), labels


def canonical_form(tree: Tree) -> str:
    """AHU canonical string, rooted at the tree center(s)."""
    centers = tree_centers(tree)

    def encode(root, parent):
        kids = sorted(encode(w, root) for w in tree.neighbors(root) if w != parent)
        return "(" + "".join(kids) + ")"

    return min(encode(c, None) for c in centers)


def tree_centers(tree: Tree) -> list[int]:
    deg = [tree.degree(v) for v in tree.vertices]
    remaining = tree.vertex_count
    layer = [v for v in tree.vertices if deg[v] <= 1]
    removed = set()
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            removed.add(v)
            for w in tree.neighbors(v):
                if w not in removed:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    return sorted(v for v in tree.vertices if v not in removed)


def is_isomorphic(a: Tree, b: Tree) -> bool:
    return a.vertex_count == b.vertex_count and canonical_form(a) == canonical_form(b)


# --------------------------------------------------------------------------
# path expansions


@dataclass(frozen=True)
class PathExpansion:
    """Replace ``vertex`` by a path ``v_0 .. v_length``.

    Neighbors in ``near`` stay on ``v_0``; neighbors in ``far`` move to
    ``v_length``.
    """

    vertex: int
    length: int = 0
    near: frozenset[int] = frozenset()
    far: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "near", frozenset(self.near))
        object.__setattr__(self, "far", frozenset(self.far))
        if self.length < 0:
            raise TreeError(f"negative expansion length {self.length}")
        if self.length == 0 and self.far:
            raise TreeError("a length-0 expansion keeps every neighbor on endpoint 0")
        if self.near & self.far:
            raise TreeError(f"neighbors {sorted(self.near & self.far)} on both endpoints")

    @classmethod
    def trivial(cls, tree: Tree, v: int) -> "PathExpansion":
        return cls(v, 0, frozenset(tree.neighbors(v)))

    def check(self, tree: Tree) -> None:
        if not 0 <= self.vertex < tree.vertex_count:
            raise TreeError(f"expansion vertex {self.vertex} out of range")
        nbrs = set(tree.neighbors(self.vertex))
        if self.near | self.far != nbrs:
            raise TreeError(
                f"partition at {self.vertex} does not cover its neighbor set {sorted(nbrs)}"
            )


def complete_expansions(tree: Tree, expansions: Mapping[int, PathExpansion] | None) -> dict[int, PathExpansion]:
    """Fill in trivial expansions and check every supplied one."""
    out = {}
    expansions = expansions or {}
    for v in tree.vertices:
        e = expansions.get(v)
        if e is None:
            e = PathExpansion.trivial(tree, v)
        elif e.vertex != v:
            raise TreeError(f"expansion keyed {v} describes vertex {e.vertex}")
        e.check(tree)
        out[v] = e
    return out


def expand_all(
    tree: Tree, expansions: Mapping[int, PathExpansion] | None
) -> tuple[Tree, dict[int, tuple[int, int]]]:
    """Apply one expansion per vertex.

    Vertex ``v`` keeps its id as ``v_0``; the extra path vertices get fresh
    ids ``t, t+1, ...`` in (base vertex, position) order.  The returned map
    sends every new vertex to ``(base vertex, position)``.
    """
    exps = complete_expansions(tree, expansions)
    t = tree.vertex_count
    ident: dict[tuple[int, int], int] = {}
    nxt = t
    for v in tree.vertices:
        ident[(v, 0)] = v
        for pos in range(1, exps[v].length + 1):
            ident[(v, pos)] = nxt
            nxt += 1

    def endpoint(v, nbr):
        e = exps[v]
        return ident[(v, e.length)] if nbr in e.far else ident[(v, 0)]

    edges = []
    for v in tree.vertices:
        for pos in range(exps[v].length):
            edges.append((ident[(v, pos)], ident[(v, pos + 1)]))
    for u, v in tree.edges:
        edges.append((endpoint(u, v), endpoint(v, u)))
    expanded = validate_tree(nxt, edges)
    return expanded, {i: key for key, i in ident.items()}


def path_expand(tree: Tree, expansion: PathExpansion) -> tuple[Tree, dict[int, tuple[int, int]]]:
    expansion.check(tree)
    return expand_all(tree, {expansion.vertex: expansion})


# --------------------------------------------------------------------------
# unit bar trees


@dataclass(frozen=True)
class CaterpillarWitness:
    """Spine path plus per-spine-vertex expansions rebuilding the tree.

    ``vertex_map`` sends each vertex of the witnessed tree to
    ``(base path vertex, position on its expansion path)``.
    """

    base_path: Tree
    expansions: Mapping[int, PathExpansion]
    vertex_map: Mapping[int, tuple[int, int]]

    def __bool__(self):
        return True

    def rebuild(self) -> tuple[Tree, dict[int, int]]:
        """Expanded base path and the map from its ids to witnessed-tree ids."""
        expanded, where = expand_all(self.base_path, self.expansions)
        inverse = {key: v for v, key in self.vertex_map.items()}
        return expanded, {i: inverse[key] for i, key in where.items()}


@dataclass(frozen=True)
class NotCaterpillar:
    reason: str

    def __bool__(self):
        return False


def dv_violation(tree: Tree) -> str | None:
    """Why ``tree`` is not a subdivided caterpillar of max degree 3, or None."""
    delta = max_degree(tree)
    if delta > 3:
        return f"maximum degree {delta} > 3"
    branch = [v for v in tree.vertices if tree.degree(v) == 3]
    if len(branch) <= 1:
        return None
    a = branch[0]
    dist = _distances(tree, a)
    a = max(branch, key=lambda v: (dist[v], -v))
    dist = _distances(tree, a)
    b = max(branch, key=lambda v: (dist[v], -v))
    on_path = set(tree_path(tree, a, b))
    off = [v for v in branch if v not in on_path]
    if off:
        return f"degree-3 vertices {off} lie off the spine {a}..{b}"
    return None


def _distances(tree: Tree, src: int) -> dict[int, int]:
    dist = {src: 0}
    for v in bfs_order(tree, src):
        for w in tree.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
    return dist


def _walk_out(tree: Tree, start: int, prev: int) -> list[int]:
    """Follow a pendant path from ``start`` (entered from ``prev``) to its leaf."""
    path = [start]
    while True:
        nxt = [w for w in tree.neighbors(path[-1]) if w != prev]
        if not nxt:
            return path
        prev = path[-1]
        path.append(nxt[0])


def find_spine(tree: Tree) -> list[int]:
    """Maximal spine of a unit bar tree: all degree-3 vertices, each with one leg."""
    if tree.vertex_count == 1:
        return [0]
    branch = [v for v in tree.vertices if tree.degree(v) == 3]
    if not branch:
        leaf = min(v for v in tree.vertices if tree.degree(v) <= 1)
        return [leaf] + (_walk_out(tree, tree.neighbors(leaf)[0], leaf) if tree.vertex_count > 1 else [])
    dist = _distances(tree, branch[0])
    a = max(branch, key=lambda v: (dist[v], -v))
    dist = _distances(tree, a)
    b = max(branch, key=lambda v: (dist[v], -v))
    core = tree_path(tree, a, b)
    used = set(core)
    a_out = [w for w in tree.neighbors(a) if w not in used]
    head = _walk_out(tree, a_out[0], a)[::-1]
    used.update(head)
    b_out = [w for w in tree.neighbors(b) if w not in used]
    tail = _walk_out(tree, b_out[0], b)
    return head + core + tail


def recognize_caterpillar(tree: Tree) -> CaterpillarWitness | NotCaterpillar:
    reason = dv_violation(tree)
    if reason is not None:
        return NotCaterpillar(reason)
    spine = find_spine(tree)
    pos = {v: i for i, v in enumerate(spine)}
    m = len(spine)
    base = path_tree(m)
    expansions = {}
    vertex_map = {}
    for i, s in enumerate(spine):
        vertex_map[s] = (i, 0)
        legs = [w for w in tree.neighbors(s) if w not in pos]
        leg = _walk_out(tree, legs[0], s) if legs else []
        for p, w in enumerate(leg, start=1):
            vertex_map[w] = (i, p)
        expansions[i] = PathExpansion(i, len(leg), frozenset(base.neighbors(i)))
    return CaterpillarWitness(base, expansions, vertex_map)
