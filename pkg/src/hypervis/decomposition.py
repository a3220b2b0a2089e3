"""Forest decompositions, visibility numbers and the representations they witness."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx

from .constructors import (
    ConstructionError,
    DegreeBoundError,
    forest_components,
    ncube_from_ortho_forests,
    realize_ortho_tree,
    star_ortho_rep,
    unit_bar_tree_rep,
)
from .geometry import Cube, MultiRep, OrthoScene, StandardScene, union_all, verify_multirep
from .trees import Tree, bfs_order, bfs_parents, induced_subtree, max_degree, recognize_caterpillar

DEFAULT_SEARCH_LIMIT = 16


class DecompositionError(ValueError):
    pass


class SearchLimitError(DecompositionError):
    """The exact search was skipped; ``bounds`` still brackets the answer."""

    def __init__(self, message: str, bounds: tuple[int, int]):
        super().__init__(message)
        self.bounds = bounds


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _e(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class ForestDecomposition:
    tree: Tree
    forests: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "forests", tuple(tuple(sorted(_e(u, v) for u, v in f)) for f in self.forests)
        )

    def check(self) -> None:
        seen: dict[tuple[int, int], int] = {}
        for j, f in enumerate(self.forests):
            for e in f:
                if e not in self.tree.edges:
                    raise DecompositionError(f"forest {j} holds non-edge {e}")
                if e in seen:
                    raise DecompositionError(f"edge {e} in forests {seen[e]} and {j}")
                seen[e] = j
        missing = set(self.tree.edges) - set(seen)
        if missing:
            raise DecompositionError(f"edges {sorted(missing)} are in no forest")

    def multiplicity(self) -> dict[int, int]:
        counts = {v: 0 for v in self.tree.vertices}
        for f in self.forests:
            for v in {x for e in f for x in e}:
                counts[v] += 1
        return counts

    def max_multiplicity(self) -> int:
        if self.tree.vertex_count == 1:
            return 1
        return max(self.multiplicity().values())

    def components(self, j: int) -> list[list[int]]:
        return forest_components(self.forests[j])


@dataclass
class SubtreeMultiset:
    members: list[frozenset[int]]
    ell: int
    # index of the decomposition forest each member came from; None for padding
    origin: list[int | None] = field(default_factory=list)

    def check(self, tree: Tree) -> None:
        counts = {v: 0 for v in tree.vertices}
        covered = set()
        for m in self.members:
            sub, labels = induced_subtree(tree, m)
            covered.update(_e(labels[a], labels[b]) for a, b in sub.edges)
            for v in m:
                counts[v] += 1
        bad = [v for v, c in counts.items() if c != self.ell]
        if bad:
            raise DecompositionError(f"vertices {bad} are not in exactly {self.ell} members")
        if covered != set(tree.edges):
            raise DecompositionError("members do not cover every tree edge")


@dataclass(frozen=True)
class ChordalColoring:
    color: tuple[int, ...]
    order: tuple[int, ...]

    def classes(self) -> list[list[int]]:
        k = max(self.color, default=0)
        return [[i for i, c in enumerate(self.color) if c == col] for col in range(1, k + 1)]


# --------------------------------------------------------------------------
# star forests


def check_star_forest(edges: Iterable[tuple[int, int]], k: int) -> None:
    for comp in forest_components(edges):
        sub = [e for e in edges if e[0] in comp]
        deg: dict[int, int] = {}
        for u, v in sub:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        centers = [v for v, d in deg.items() if d > 1]
        if len(centers) > 1 or len(sub) > k:
            raise DecompositionError(f"component {comp} is not a star with at most {k} edges")


def star_forest_decompose(tree: Tree, k: int, budget: int = 200_000) -> ForestDecomposition:
    """At most ceil((Delta+1)/k) forests of vertex-disjoint stars with <= k edges.

    Backtracking over (forest, center) per edge in BFS order.  Not every tree
    meets the bound (a long path with k >= 3 already needs two forests), so
    failure raises :class:`DecompositionError`.
    """
    if k < 1:
        raise DecompositionError("k must be >= 1")
    delta = max_degree(tree)
    if delta == 0:
        return ForestDecomposition(tree, ((),))
    high = _ceil_div(delta + 1, k)
    for count in range(_ceil_div(delta, k), high + 1):
        forests = _star_search(tree, k, count, budget)
        if forests is not None:
            dec = ForestDecomposition(tree, forests)
            dec.check()
            for f in dec.forests:
                check_star_forest(f, k)
            return dec
    raise DecompositionError(f"no decomposition into {high} star forests with at most {k} edges per star")


def _star_search(tree: Tree, k: int, count: int, budget: int):
    order = bfs_order(tree, 0)
    parents = bfs_parents(tree, 0)
    edges = [(parents[v], v) for v in order[1:]]
    # role[f][v]: None, "c" (center) or "l" (leaf); load[f][v]: edges in f
    role = [dict() for _ in range(count)]
    load = [dict() for _ in range(count)]
    left = {v: tree.degree(v) for v in tree.vertices}
    assign: list[int] = []
    nodes = 0

    def room(v):
        total = 0
        for f in range(count):
            r = role[f].get(v)
            total += k if r is None else (k - load[f][v] if r == "c" else 0)
        return total

    def go(i, used):
        nonlocal nodes
        if i == len(edges):
            return True
        nodes += 1
        if nodes > budget:
            raise DecompositionError("star forest search budget exhausted")
        u, v = edges[i]
        for f in range(min(used + 1, count)):
            for c, leaf in ((u, v), (v, u)):
                if role[f].get(c) not in (None, "c") or load[f].get(c, 0) >= k:
                    continue
                if role[f].get(leaf) is not None:
                    continue
                old_c = role[f].get(c)
                role[f][c] = "c"
                role[f][leaf] = "l"
                load[f][c] = load[f].get(c, 0) + 1
                load[f][leaf] = 1
                left[u] -= 1
                left[v] -= 1
                assign.append(f)
                if left[u] <= room(u) and left[v] <= room(v) and go(i + 1, max(used, f + 1)):
                    return True
                assign.pop()
                left[u] += 1
                left[v] += 1
                load[f][c] -= 1
                del load[f][leaf], role[f][leaf]
                if old_c is None:
                    del role[f][c]
                    del load[f][c]
        return False

    if not go(0, 0):
        return None
    out = [[] for _ in range(count)]
    for (u, v), f in zip(edges, assign):
        out[f].append(_e(u, v))
    return out


# --------------------------------------------------------------------------
# unit bar forests and h^(1)-perp


def h1perp_bounds(tree: Tree) -> tuple[int, int]:
    delta = max_degree(tree)
    if delta == 0:
        return 1, 1
    if delta % 3:
        return _ceil_div(delta, 3), _ceil_div(delta, 3)
    return delta // 3, delta // 3 + 1


def spider_forests(tree: Tree, legs: int, count: int) -> ForestDecomposition | None:
    """Greedy split into ``count`` forests whose components are spiders.

    Each component has at most one vertex of degree above 2, and that vertex
    has at most ``legs`` neighbors.  Returns None when the greedy runs out of
    room, which cannot happen once ``legs * count >= Delta + 1``.
    """
    order = bfs_order(tree, 0)
    parents = bfs_parents(tree, 0)
    forest_of: dict[tuple[int, int], int] = {}
    root_of: dict[tuple[int, int], int] = {}  # (forest, vertex) -> component root
    centered: set[tuple[int, int]] = set()  # (forest, root) whose spider has its center
    for v in order:
        p = parents[v]
        fp = forest_of[_e(p, v)] if p is not None else None
        kids = [w for w in tree.neighbors(v) if w != p]
        caps = [(f, legs) for f in range(count) if f != fp]
        if fp is not None:
            caps.append((fp, 1 if (fp, root_of[(fp, v)]) in centered else legs - 1))
        slots = [f for f, c in caps for _ in range(c)]
        if len(slots) < len(kids):
            return None
        for w, f in zip(kids, slots):
            forest_of[_e(v, w)] = f
        for f in {forest_of[_e(v, w)] for w in kids}:
            root = root_of.setdefault((f, v), v)
            degree = sum(1 for w in kids if forest_of[_e(v, w)] == f) + (f == fp)
            if degree > 2:
                centered.add((f, root))
            for w in kids:
                if forest_of[_e(v, w)] == f:
                    root_of[(f, w)] = root
    forests = [[] for _ in range(count)]
    for e, f in forest_of.items():
        forests[f].append(e)
    return ForestDecomposition(tree, forests)


def check_unit_bar_forests(dec: ForestDecomposition) -> None:
    dec.check()
    for j, f in enumerate(dec.forests):
        for comp in forest_components(f):
            sub, _ = induced_subtree(dec.tree, comp)
            verdict = recognize_caterpillar(sub)
            if not verdict:
                raise DecompositionError(f"forest {j} component {comp}: {verdict.reason}")


def _dv_component_ok(adj: dict[int, set[int]], start: int) -> bool:
    """Whether the component of ``start`` has max degree 3 and its degree-3
    vertices all on one path (pruning non-branch leaves leaves a path)."""
    comp = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in comp:
                comp.add(y)
                stack.append(y)
    deg = {v: len(adj[v]) for v in comp}
    if max(deg.values()) > 3:
        return False
    branch = {v for v in comp if deg[v] == 3}
    if len(branch) <= 2:
        return True
    alive = set(comp)
    d = dict(deg)
    leaves = [v for v in comp if d[v] <= 1 and v not in branch]
    while leaves:
        x = leaves.pop()
        alive.discard(x)
        for y in adj[x]:
            if y in alive:
                d[y] -= 1
                if d[y] <= 1 and y not in branch:
                    leaves.append(y)
    return all(sum(1 for y in adj[v] if y in alive) <= 2 for v in alive)


def unit_bar_forest_search(tree: Tree, count: int, budget: int = 2_000_000) -> ForestDecomposition | None:
    """Branch and bound: split E(T) into ``count`` unit bar forests, or None."""
    order = bfs_order(tree, 0)
    parents = bfs_parents(tree, 0)
    edges = [(parents[v], v) for v in order[1:]]
    adj = [{v: set() for v in tree.vertices} for _ in range(count)]
    left = {v: tree.degree(v) for v in tree.vertices}
    assign: list[int] = []
    nodes = 0

    def room(v):
        return sum(3 - len(a[v]) for a in adj)

    def go(i, used):
        nonlocal nodes
        if i == len(edges):
            return True
        nodes += 1
        if nodes > budget:
            raise DecompositionError("unit bar forest search budget exhausted")
        u, v = edges[i]
        for f in range(min(used + 1, count)):
            a = adj[f]
            if len(a[u]) >= 3 or len(a[v]) >= 3:
                continue
            a[u].add(v)
            a[v].add(u)
            left[u] -= 1
            left[v] -= 1
            assign.append(f)
            if left[u] <= room(u) and left[v] <= room(v) and _dv_component_ok(a, u):
                if go(i + 1, max(used, f + 1)):
                    return True
            assign.pop()
            left[u] += 1
            left[v] += 1
            a[u].discard(v)
            a[v].discard(u)
        return False

    if not go(0, 0):
        return None
    forests = [[] for _ in range(count)]
    for (u, v), f in zip(edges, assign):
        forests[f].append(_e(u, v))
    return ForestDecomposition(tree, forests)


def search_limit() -> int:
    raw = os.environ.get("HYPERVIS_SEARCH_LIMIT")
    if raw is None:
        return DEFAULT_SEARCH_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise DecompositionError(f"HYPERVIS_SEARCH_LIMIT must be an integer, got {raw!r}") from None


def h1perp_exact(tree: Tree, limit: int | None = None) -> tuple[int, ForestDecomposition]:
    """Minimum number of unit bar forests covering the tree, with a witness."""
    low, high = h1perp_bounds(tree)
    delta = max_degree(tree)
    if delta == 0:
        return 1, ForestDecomposition(tree, ((),))
    witness = None
    if low < high:
        if delta == 3:
            if recognize_caterpillar(tree):
                witness = ForestDecomposition(tree, (tuple(tree.edges),))
        else:
            limit = search_limit() if limit is None else limit
            if tree.vertex_count > limit:
                raise SearchLimitError(
                    f"{tree.vertex_count} vertices exceed the search limit {limit}", (low, high)
                )
            witness = unit_bar_forest_search(tree, low)
    if witness is None:
        witness = spider_forests(tree, 3, high)
        if witness is None:
            witness = unit_bar_forest_search(tree, high)
        if witness is None:
            raise DecompositionError(f"internal: no {high} unit bar forests found")
    check_unit_bar_forests(witness)
    value = witness.max_multiplicity()
    if not low <= value <= high:
        raise DecompositionError(f"internal: witness multiplicity {value} outside [{low}, {high}]")
    return value, witness


# --------------------------------------------------------------------------
# chordal coloring and h^(2)


def pad_to_uniform(tree: Tree, witness: ForestDecomposition) -> SubtreeMultiset:
    members: list[frozenset[int]] = []
    origin: list[int | None] = []
    for j in range(len(witness.forests)):
        for comp in witness.components(j):
            members.append(frozenset(comp))
            origin.append(j)
    counts = {v: 0 for v in tree.vertices}
    for m in members:
        for v in m:
            counts[v] += 1
    ell = max(max(counts.values()), 1)
    for v in tree.vertices:
        for _ in range(ell - counts[v]):
            members.append(frozenset({v}))
            origin.append(None)
    out = SubtreeMultiset(members, ell, origin)
    out.check(tree)
    return out


def lex_bfs(graph: nx.Graph, nodes: Sequence[int]) -> list[int]:
    """Lexicographic BFS; ties go to the smallest node."""
    labels: dict[int, list[int]] = {v: [] for v in nodes}
    order: list[int] = []
    remaining = set(nodes)
    step = len(nodes)
    while remaining:
        v = max(remaining, key=lambda x: (labels[x], -x))
        order.append(v)
        remaining.discard(v)
        for w in graph.neighbors(v):
            if w in remaining:
                labels[w].append(step)
        step -= 1
    return order


def is_perfect_elimination(graph: nx.Graph, peo: Sequence[int]) -> bool:
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [w for w in graph.neighbors(v) if pos[w] > pos[v]]
        if not later:
            continue
        first = min(later, key=pos.__getitem__)
        if any(w != first and not graph.has_edge(first, w) for w in later):
            return False
    return True


def chordal_color(tree: Tree, multiset: SubtreeMultiset) -> ChordalColoring:
    multiset.check(tree)
    g = nx.Graph()
    idx = list(range(len(multiset.members)))
    g.add_nodes_from(idx)
    holders: dict[int, list[int]] = {}
    for i, m in enumerate(multiset.members):
        for v in m:
            holders.setdefault(v, []).append(i)
    for hs in holders.values():
        for a in range(len(hs)):
            for b in range(a + 1, len(hs)):
                g.add_edge(hs[a], hs[b])
    order = lex_bfs(g, idx)
    peo = order[::-1]
    if not is_perfect_elimination(g, peo):
        raise DecompositionError("member intersection graph failed the perfect elimination check")
    color = [0] * len(idx)
    for v in order:
        taken = {color[w] for w in g.neighbors(v)}
        c = 1
        while c in taken:
            c += 1
        color[v] = c
    if max(color, default=0) > multiset.ell:
        raise DecompositionError(f"internal: greedy coloring used more than {multiset.ell} colors")
    return ChordalColoring(tuple(color), tuple(peo))


def h2_exact(tree: Tree, limit: int | None = None) -> int:
    value, _ = h1perp_exact(tree, limit)
    h2 = _ceil_div(value, 2)
    delta = max_degree(tree)
    if delta and delta % 6 and h2 != _ceil_div(delta, 6):
        raise DecompositionError(f"internal: h2 {h2} disagrees with ceil({delta}/6)")
    return h2


def construct_h2_representation(tree: Tree, limit: int | None = None) -> MultiRep:
    """Unit square visibility scene with h2_exact(tree) squares per vertex at most."""
    if tree.vertex_count == 1:
        return MultiRep(StandardScene(2, [Cube(0, (Fraction(0), Fraction(0)))]), {0: 0})
    value, witness = h1perp_exact(tree, limit)
    multiset = pad_to_uniform(tree, witness)
    coloring = chordal_color(tree, multiset)
    classes = coloring.classes()
    parts = []
    for p in range(0, len(classes), 2):
        pair = classes[p:p + 2]
        forest_edges = []
        for cls in pair:
            edges = []
            for i in cls:
                sub, labels = induced_subtree(tree, multiset.members[i])
                edges.extend(_e(labels[a], labels[b]) for a, b in sub.edges)
            forest_edges.append(edges)
        while len(forest_edges) < 2:
            forest_edges.append([])
        for comp in forest_components(forest_edges[0] + forest_edges[1]):
            sub, labels = induced_subtree(tree, comp)
            local = {v: i for i, v in enumerate(labels)}
            forests = [[(local[u], local[v]) for u, v in f if u in local] for f in forest_edges]
            rep = ncube_from_ortho_forests(sub, forests, lambda s, d: unit_bar_tree_rep(s))
            parts.append(rep.relabeled(dict(enumerate(labels))))
    out = union_all(parts, "standard", 2)
    report = verify_multirep(out, tree)
    if not report.passed:
        raise DecompositionError("internal: h2 construction fails verification: " + "; ".join(report.lines()))
    return out


# --------------------------------------------------------------------------
# general dimensions


def hnperp_bounds(tree: Tree, n: int) -> tuple[int, int]:
    if n < 1:
        raise DecompositionError("n must be >= 1")
    delta = max_degree(tree)
    if delta == 0:
        return 1, 1
    k = 2**n + 1
    return _ceil_div(delta, k), _ceil_div(delta + 1, k)


def hn_bounds(tree: Tree, n: int) -> tuple[int, int]:
    if n < 1:
        raise DecompositionError("n must be >= 1")
    delta = max_degree(tree)
    if delta == 0:
        return 1, 1
    k = n * (2 ** (n - 1) + 1)
    return _ceil_div(delta, k), _ceil_div(delta + 1, k)


def degree_capped_forests(tree: Tree, cap: int, count: int) -> ForestDecomposition | None:
    """Split edges into ``count`` forests of maximum degree ``cap``, or None.

    Child edges are dealt round-robin, the parent edge's forest last, which
    keeps the components small.
    """
    order = bfs_order(tree, 0)
    parents = bfs_parents(tree, 0)
    forest_of: dict[tuple[int, int], int] = {}
    for v in order:
        p = parents[v]
        fp = forest_of[_e(p, v)] if p is not None else None
        kids = [w for w in tree.neighbors(v) if w != p]
        room = {f: cap - (f == fp) for f in range(count)}
        if sum(room.values()) < len(kids):
            return None
        ranked = sorted(room, key=lambda f: (f == fp, f))
        dealt: list[int] = []
        while len(dealt) < len(kids):
            for f in ranked:
                if room[f] and len(dealt) < len(kids):
                    dealt.append(f)
                    room[f] -= 1
        for w, f in zip(kids, dealt):
            forest_of[_e(v, w)] = f
    forests = [[] for _ in range(count)]
    for e, f in forest_of.items():
        forests[f].append(e)
    return ForestDecomposition(tree, forests)


def _star_component_rep(tree: Tree, comp: list[int], n: int) -> MultiRep:
    sub, labels = induced_subtree(tree, comp)
    center = max(sub.vertices, key=lambda v: (sub.degree(v), -v))
    leaves = list(sub.neighbors(center))
    rep = star_ortho_rep(n, len(leaves))
    mapping = {0: labels[center]}
    mapping.update({i: labels[w] for i, w in enumerate(leaves, start=1)})
    return rep.relabeled(mapping)


def _general_component_rep(tree: Tree, comp: list[int], n: int) -> MultiRep:
    sub, labels = induced_subtree(tree, comp)
    return realize_ortho_tree(sub, n).relabeled(dict(enumerate(labels)))


def _realize_forests(tree: Tree, dec: ForestDecomposition, n: int, component_rep) -> MultiRep:
    parts = []
    for j in range(len(dec.forests)):
        for comp in dec.components(j):
            parts.append(component_rep(tree, comp, n))
    out = union_all(parts, "orthogonal", n)
    report = verify_multirep(out, tree)
    if not report.passed:
        raise ConstructionError("internal: forest union fails verification: " + "; ".join(report.lines()))
    return out


def hnperp_upper_construct(tree: Tree, n: int) -> MultiRep:
    """Orthogonal n-cube scene with at most ceil((Delta+1)/(2^n+1)) cubes per vertex.

    Tries, for each forest count from the lower bound up: star forests
    realized by star scenes, then (n = 1) unit bar forests, then forests of
    maximum degree 2^n+1 realized component by component.
    """
    if n < 1:
        raise DecompositionError("n must be >= 1")
    if tree.vertex_count == 1:
        return MultiRep(OrthoScene(n, [Cube(0, (Fraction(0),) * n, Fraction(0))]), {0: 0})
    k = 2**n + 1
    low, high = hnperp_bounds(tree, n)
    failures = []
    for count in range(low, high + 1):
        try:
            dec = _star_search(tree, k, count, 200_000)
        except DecompositionError as exc:
            dec = None
            failures.append(str(exc))
        if dec is not None:
            return _realize_forests(tree, ForestDecomposition(tree, dec), n, _star_component_rep)
        if n == 1:
            found = unit_bar_forest_search(tree, count)
            if found is not None:
                return _realize_forests(tree, found, n, _general_component_rep)
            continue
        dec = degree_capped_forests(tree, k, count)
        if dec is None:
            continue
        try:
            return _realize_forests(tree, dec, n, _general_component_rep)
        except (ConstructionError, DegreeBoundError) as exc:
            failures.append(str(exc))
    raise DecompositionError(
        f"no orthogonal {n}-cube representation with at most {high} cubes per vertex found"
        + (f" ({failures[-1]})" if failures else "")
    )
