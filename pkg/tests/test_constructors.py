from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import trees
from hypervis.constructors import (
    BLUE,
    RED,
    ConstructionError,
    DegreeBoundError,
    IntersectionRep,
    cubicity_rep,
    edge_two_color,
    epsilon_separate,
    ncube_from_ortho_forests,
    ortho_from_cubicity,
    path_intersection_rep,
    project_to_intersection,
    realize_ortho_tree,
    star_intersection_rep,
    star_ortho_rep,
    unit_bar_tree_rep,
)
from hypervis.geometry import Cube, MultiRep, OrthoScene, extract_graph, verify_multirep
from hypervis.trees import (
    PathExpansion,
    expand_all,
    is_isomorphic,
    max_degree,
    path_tree,
    star_tree,
    validate_tree,
)

CATERPILLAR = validate_tree(7, [(0, 1), (1, 2), (0, 3), (0, 4), (2, 5), (2, 6)])


def rep_of(dimension, centers):
    return IntersectionRep(dimension, dict(enumerate(centers)), {i: i for i in range(len(centers))})


def test_epsilon_fat_rep_unchanged():
    rep = path_intersection_rep(3)
    wide = rep_of(1, [(0,), (F(1, 2),), (1,)])
    # a genuinely fat P2: overlap 1/2
    fat = rep_of(1, [(0,), (F(1, 2),)])
    out, eps = epsilon_separate(fat, path_tree(2))
    assert out == fat and eps == F(1, 4)
    assert epsilon_separate(rep, path_tree(3))[1] == F(1, 8)
    with pytest.raises(ConstructionError):
        epsilon_separate(wide, path_tree(3))


def test_epsilon_point_intersection_p2():
    rep = rep_of(1, [(F(1, 2),), (F(3, 2),)])
    out, eps = epsilon_separate(rep, path_tree(2))
    assert eps > 0
    assert out.centers[0][0] > F(1, 2)
    assert out.intersection_edges() == {(0, 1)}


def test_epsilon_tangent_square_p3():
    rep = rep_of(2, [(-1, 0), (0, 0), (1, 0)])
    out, eps = epsilon_separate(rep, path_tree(3))
    assert eps > 0 and out.represents(path_tree(3))
    assert all(out.overlap_width(u, v) >= 2 * eps for u, v in [(0, 1), (1, 2)])


def test_path_intersection_rep():
    assert path_intersection_rep(1).intersection_edges() == set()
    two = path_intersection_rep(2)
    assert two.centers[1] == (F(3, 4),) and two.overlap_width(0, 1) == F(1, 4)
    assert path_intersection_rep(4).represents(path_tree(4))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_star_intersection_rep(n):
    rep = star_intersection_rep(n)
    assert rep.represents(star_tree(2**n))
    leaves = [rep.centers[i] for i in range(1, 2**n + 1)]
    for i, a in enumerate(leaves):
        for b in leaves[i + 1:]:
            assert max(abs(x - y) for x, y in zip(a, b)) == F(3, 2)


def test_star_intersection_rep_n1_centers():
    rep = star_intersection_rep(1)
    assert sorted(c[0] for c in rep.centers.values()) == [F(-3, 4), 0, F(3, 4)]


def test_two_coloring_examples():
    star = star_tree(4)
    all_near = edge_two_color(star, {0: PathExpansion(0, 1, frozenset({1, 2, 3, 4}))}, 0)
    assert set(all_near.color.values()) == {BLUE}
    split = edge_two_color(star, {0: PathExpansion(0, 1, frozenset({1, 2}), frozenset({3, 4}))}, 0)
    assert sorted(split.color.values()) == [BLUE, BLUE, RED, RED]
    p3 = path_tree(3)
    c = edge_two_color(p3, {1: PathExpansion(1, 1, frozenset({0}), frozenset({2}))}, 0)
    assert c.of(0, 1) != c.of(1, 2)


def test_ortho_path_bars():
    base = path_tree(5)
    rep = ortho_from_cubicity(base, epsilon_separate(path_intersection_rep(5), base)[0])
    assert rep.dimension == 1 and verify_multirep(rep, base).passed


def test_ortho_k15_from_k14():
    base = star_tree(4)
    e = {0: PathExpansion(0, 1, frozenset({1, 2, 3, 4}))}
    rep = ortho_from_cubicity(base, star_intersection_rep(2), e)
    assert verify_multirep(rep, star_tree(5)).passed


def test_ortho_k18_n3():
    rep = ortho_from_cubicity(star_tree(8), star_intersection_rep(3))
    assert verify_multirep(rep, star_tree(8)).passed


def test_ortho_rejects_thin_rep():
    with pytest.raises(ConstructionError):
        ortho_from_cubicity(path_tree(2), rep_of(1, [(0,), (1,)]))


def test_stack_with_predecessor_on_far_side():
    # P3 with the middle vertex stretched so its two neighbors hang off different ends
    base = path_tree(3)
    e = {1: PathExpansion(1, 1, frozenset({0}), frozenset({2}))}
    rep = ortho_from_cubicity(base, epsilon_separate(path_intersection_rep(3), base)[0], e)
    expanded, _ = expand_all(base, e)
    assert verify_multirep(rep, expanded).passed


def test_projection_roundtrip_k15():
    base = star_tree(4)
    e = {0: PathExpansion(0, 1, frozenset({1, 2, 3, 4}))}
    rep = ortho_from_cubicity(base, star_intersection_rep(2), e)
    back, inter, exps, _ = project_to_intersection(rep, star_tree(5))
    assert is_isomorphic(back, base)
    assert sorted(x.length for x in exps.values()) == [0, 0, 0, 0, 1]
    assert inter.represents(back)


def test_projection_staggered_path():
    scene = OrthoScene(1, [Cube(i, (F(3, 4) * i,), i % 2) for i in range(4)])
    rep = MultiRep(scene, {i: i for i in range(4)})
    assert verify_multirep(rep, path_tree(4)).passed
    back, _, exps, _ = project_to_intersection(rep, path_tree(4))
    assert back.vertex_count == 4 and all(x.length == 0 for x in exps.values())


def test_projection_single_stack():
    rep = MultiRep(OrthoScene(1, [Cube(0, (0,), 0), Cube(1, (0,), 1)]), {0: 0, 1: 1})
    back, _, exps, _ = project_to_intersection(rep, path_tree(2))
    assert back.vertex_count == 1 and exps[0].length == 1


def test_projection_not_tree_representable():
    # overlapping but unequal projections of non-adjacent cubes
    cubes = [Cube(0, (0,), 0), Cube(1, (F(1, 8),), 1), Cube(2, (F(1, 4),), 2)]
    rep = MultiRep(OrthoScene(1, cubes), {0: 0, 1: 1, 2: 2})
    assert verify_multirep(rep, path_tree(3)).passed
    with pytest.raises(ConstructionError, match="not tree-representable"):
        project_to_intersection(rep, path_tree(3))


def test_unit_bar_examples():
    assert len(unit_bar_tree_rep(path_tree(5)).scene) == 5
    assert verify_multirep(unit_bar_tree_rep(CATERPILLAR), CATERPILLAR).passed
    with pytest.raises(DegreeBoundError):
        unit_bar_tree_rep(star_tree(4))


def test_ncube_p3():
    rep = ncube_from_ortho_forests(path_tree(3), [[(0, 1)], [(1, 2)]])
    g = extract_graph(rep.scene)
    assert sorted(g.edges[e]["sightline"].axis for e in g.edges) == [0, 1]
    assert verify_multirep(rep, path_tree(3)).passed


def test_ncube_k16():
    rep = ncube_from_ortho_forests(star_tree(6), [[(0, 1), (0, 2), (0, 3)], [(0, 4), (0, 5), (0, 6)]])
    report = verify_multirep(rep, star_tree(6))
    assert report.passed and report.max_cubes == 1


def test_ncube_empty_second_forest():
    rep = ncube_from_ortho_forests(CATERPILLAR, [list(CATERPILLAR.edges), []])
    g = extract_graph(rep.scene)
    assert {g.edges[e]["sightline"].axis for e in g.edges} == {0}


def test_ncube_three_dimensions():
    t = star_tree(12)
    forests = [[(0, i) for i in range(1, 5)], [(0, i) for i in range(5, 9)], [(0, i) for i in range(9, 13)]]
    assert verify_multirep(ncube_from_ortho_forests(t, forests), t).passed


def test_ncube_rejects_bad_forests():
    with pytest.raises(ConstructionError):
        ncube_from_ortho_forests(path_tree(3), [[(0, 1)], [(0, 1), (1, 2)]])
    with pytest.raises(ConstructionError):
        ncube_from_ortho_forests(path_tree(3), [[(0, 1)], []])


@pytest.mark.parametrize("n,m", [(2, 5), (2, 4), (1, 3), (3, 9)])
def test_star_ortho(n, m):
    assert verify_multirep(star_ortho_rep(n, m), star_tree(m)).passed


def test_star_ortho_range():
    with pytest.raises(DegreeBoundError):
        star_ortho_rep(2, 6)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_single_forest_degree_guard(n):
    with pytest.raises(DegreeBoundError):
        realize_ortho_tree(star_tree(2**n + 2), n)


# --------------------------------------------------------------------------
# properties


@st.composite
def expansion_cases(draw):
    n = draw(st.sampled_from([1, 2]))
    base = draw(trees(max_size=8))
    assume(max_degree(base) <= 2**n)
    inter = cubicity_rep(base, n)
    assume(inter is not None)
    exps = {}
    for v in base.vertices:
        k = draw(st.integers(0, 2))
        nbrs = list(base.neighbors(v))
        far = set(draw(st.sets(st.sampled_from(nbrs)))) if nbrs and k else set()
        exps[v] = PathExpansion(v, k, frozenset(set(nbrs) - far), frozenset(far))
    root = draw(st.integers(0, base.vertex_count - 1))
    return base, inter, exps, root


@given(expansion_cases())
def test_ortho_from_cubicity_verifies(case):
    base, inter, exps, root = case
    inter, _ = epsilon_separate(inter, base)
    rep = ortho_from_cubicity(base, inter, exps, root)
    expanded, _ = expand_all(base, exps)
    assert verify_multirep(rep, expanded).passed


@given(expansion_cases())
def test_projection_is_left_inverse(case):
    base, inter, exps, root = case
    inter, _ = epsilon_separate(inter, base)
    rep = ortho_from_cubicity(base, inter, exps, root)
    expanded, where = expand_all(base, exps)
    back, inter2, exps2, vmap = project_to_intersection(rep, expanded)
    assert is_isomorphic(back, base)
    # same stacks, same stack lengths
    stacks = {}
    for v, (b, _) in where.items():
        stacks.setdefault(b, set()).add(v)
    recovered = {}
    for v, (b, _) in vmap.items():
        recovered.setdefault(b, set()).add(v)
    assert sorted(map(sorted, stacks.values())) == sorted(map(sorted, recovered.values()))
    assert sorted(e.length for e in exps2.values()) == sorted(e.length for e in exps.values())
    assert inter2.represents(back)
