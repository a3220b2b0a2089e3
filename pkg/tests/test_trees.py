import json

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import to_tree, trees
from oracles import FROZEN, key
from hypervis.trees import (
    PathExpansion,
    TreeError,
    bfs_order,
    canonical_form,
    expand_all,
    induced_subtree,
    is_isomorphic,
    max_degree,
    path_expand,
    path_tree,
    recognize_caterpillar,
    star_tree,
    validate_tree,
)


def binary_tree(depth):
    g = nx.balanced_tree(2, depth)
    return to_tree(g)


def test_validate_path():
    t = validate_tree(3, [(0, 1), (1, 2)])
    assert t.sorted_edges() == [(0, 1), (1, 2)]


@pytest.mark.parametrize(
    "count,edges,message",
    [
        (3, [(0, 1), (1, 2), (0, 2)], "cycle"),
        (4, [(0, 1), (2, 3)], "disconnected"),
        (3, [(0, 1), (0, 1)], "duplicate"),
        (3, [(0, 1), (1, 5)], "out of range"),
        (2, [(1, 1)], "self-loop"),
    ],
)
def test_validate_rejects(count, edges, message):
    with pytest.raises(TreeError, match=message):
        validate_tree(count, edges)


def test_max_degree():
    assert max_degree(star_tree(5)) == 5
    assert max_degree(path_tree(7)) == 2
    assert max_degree(validate_tree(1, [])) == 0


def test_bfs_order():
    assert bfs_order(path_tree(3), 1) == [1, 0, 2]
    assert bfs_order(path_tree(3), 0) == [0, 1, 2]
    assert bfs_order(star_tree(4), 0) == [0, 1, 2, 3, 4]
    with pytest.raises(TreeError):
        bfs_order(path_tree(3), 3)


def test_expand_length_zero_is_identity():
    t = star_tree(3)
    out, _ = path_expand(t, PathExpansion.trivial(t, 0))
    assert out == t


def test_expand_star_all_near_gives_bigger_star():
    t = star_tree(4)
    out, where = path_expand(t, PathExpansion(0, 1, frozenset({1, 2, 3, 4})))
    assert is_isomorphic(out, star_tree(5))
    assert where[5] == (0, 1)


def test_expand_star_split_gives_double_broom():
    t = star_tree(4)
    out, _ = path_expand(t, PathExpansion(0, 1, frozenset({1, 2}), frozenset({3, 4})))
    broom = validate_tree(6, [(0, 1), (0, 2), (0, 5), (5, 3), (5, 4)])
    assert is_isomorphic(out, broom)


def test_expand_bad_partition():
    t = star_tree(3)
    with pytest.raises(TreeError):
        path_expand(t, PathExpansion(0, 1, frozenset({1}), frozenset({2})))


def test_caterpillar_examples():
    w = recognize_caterpillar(path_tree(5))
    assert w and w.base_path.vertex_count == 5
    assert all(e.length == 0 for e in w.expansions.values())
    assert not recognize_caterpillar(binary_tree(3))
    verdict = recognize_caterpillar(star_tree(4))
    assert not verdict and "4 > 3" in verdict.reason
    # spine a-r-b with two leaves on each of a and b
    cat = validate_tree(7, [(0, 1), (1, 2), (0, 3), (0, 4), (2, 5), (2, 6)])
    assert recognize_caterpillar(cat)


def test_caterpillar_matches_frozen_spine_enumeration():
    frozen = json.loads(FROZEN.read_text())["unit_bar"]
    graphs = [nx.empty_graph(1)] + [g for n in range(2, 11) for g in nx.nonisomorphic_trees(n)]
    for g in graphs:
        assert bool(recognize_caterpillar(to_tree(g))) == frozen[key(g)], key(g)


@given(trees(max_size=12))
def test_witness_rebuilds_tree(t):
    w = recognize_caterpillar(t)
    if w:
        rebuilt, to_t = w.rebuild()
        assert is_isomorphic(rebuilt, t)
        assert {(min(to_t[a], to_t[b]), max(to_t[a], to_t[b])) for a, b in rebuilt.edges} == set(t.edges)
        assert max_degree(t) <= 3
    else:
        assert w.reason


@given(trees(max_size=10), st.data())
def test_path_expand_adds_length(t, data):
    v = data.draw(st.integers(0, t.vertex_count - 1))
    k = data.draw(st.integers(0, 3))
    nbrs = list(t.neighbors(v))
    far = data.draw(st.sets(st.sampled_from(nbrs))) if nbrs and k else set()
    e = PathExpansion(v, k, frozenset(set(nbrs) - far), frozenset(far))
    out, _ = path_expand(t, e)
    assert out.vertex_count == t.vertex_count + k
    validate_tree(out.vertex_count, out.edges)


@given(trees(max_size=10), st.integers(0, 9))
def test_bfs_deterministic(t, root):
    root %= t.vertex_count
    assert bfs_order(t, root) == bfs_order(t, root)
    assert sorted(bfs_order(t, root)) == list(t.vertices)


@given(trees(max_size=12), st.randoms(use_true_random=False))
def test_canonical_form_is_invariant(t, rnd):
    perm = list(t.vertices)
    rnd.shuffle(perm)
    moved = validate_tree(t.vertex_count, [(perm[u], perm[v]) for u, v in t.edges])
    assert canonical_form(moved) == canonical_form(t)
    assert nx.is_isomorphic(nx.Graph(list(t.edges)), nx.Graph(list(moved.edges))) or t.vertex_count == 1


def test_induced_subtree_labels():
    t = path_tree(5)
    sub, labels = induced_subtree(t, [3, 1, 2])
    assert labels == [1, 2, 3]
    assert sub.sorted_edges() == [(0, 1), (1, 2)]


def test_expand_all_ids():
    t = path_tree(3)
    out, where = expand_all(t, {1: PathExpansion(1, 2, frozenset({0}), frozenset({2}))})
    assert out.vertex_count == 5
    assert where[3] == (1, 1) and where[4] == (1, 2)
    assert out.has_edge(4, 2) and out.has_edge(0, 1)
