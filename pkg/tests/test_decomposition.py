import json

import networkx as nx
import pytest
from hypothesis import given

from conftest import to_tree, trees
from oracles import FROZEN, key
from hypervis.decomposition import (
    DecompositionError,
    ForestDecomposition,
    SearchLimitError,
    SubtreeMultiset,
    check_star_forest,
    check_unit_bar_forests,
    chordal_color,
    construct_h2_representation,
    h1perp_bounds,
    h1perp_exact,
    h2_exact,
    hn_bounds,
    hnperp_bounds,
    hnperp_upper_construct,
    pad_to_uniform,
    star_forest_decompose,
)
from hypervis.geometry import components, verify_multirep
from hypervis.trees import max_degree, path_tree, star_tree, validate_tree


def binary_tree(depth):
    return to_tree(nx.balanced_tree(2, depth))


def double_star(a, b):
    edges = [(0, 1)] + [(0, i) for i in range(2, 2 + a)] + [(1, i) for i in range(2 + a, 2 + a + b)]
    return validate_tree(2 + a + b, edges)


def test_star_forests_k15():
    dec = star_forest_decompose(star_tree(5), 3)
    assert sorted(len(f) for f in dec.forests) == [2, 3]


def test_star_forests_degree5_with_parent():
    t = validate_tree(7, [(0, 1)] + [(1, i) for i in range(2, 7)])
    dec = star_forest_decompose(t, 3)
    assert len(dec.forests) == 2
    for f in dec.forests:
        check_star_forest(f, 3)


def test_long_path_needs_two_star_forests():
    # vertex-disjoint stars cannot cover P7 in one forest
    with pytest.raises(DecompositionError):
        star_forest_decompose(path_tree(7), 3)
    assert star_forest_decompose(path_tree(7), 1) is not None


def test_h1perp_bounds():
    assert h1perp_bounds(star_tree(4)) == (2, 2)
    assert h1perp_bounds(star_tree(6)) == (2, 3)
    assert h1perp_bounds(validate_tree(1, [])) == (1, 1)


def test_h1perp_examples():
    assert h1perp_exact(star_tree(4))[0] == 2
    assert h1perp_exact(path_tree(9))[0] == 1
    value, witness = h1perp_exact(binary_tree(3))
    assert value == 2
    check_unit_bar_forests(witness)


def test_h1perp_matches_frozen_brute_force():
    frozen = json.loads(FROZEN.read_text())["h1perp"]
    graphs = [nx.empty_graph(1)] + [g for n in range(2, 10) for g in nx.nonisomorphic_trees(n)]
    for g in graphs:
        assert h1perp_exact(to_tree(g))[0] == frozen[key(g)], key(g)


def test_h1perp_search_limit():
    big = star_tree(6)
    with pytest.raises(SearchLimitError) as info:
        h1perp_exact(big, limit=5)
    assert info.value.bounds == (2, 3)


def test_pad_examples():
    dec = ForestDecomposition(path_tree(2), [[(0, 1)]])
    assert pad_to_uniform(path_tree(2), dec).members == [frozenset({0, 1})]
    star = star_tree(4)
    ms = pad_to_uniform(star, ForestDecomposition(star, [[(0, 1), (0, 2)], [(0, 3), (0, 4)]]))
    assert ms.ell == 2 and sorted(len(m) for m in ms.members) == [1, 1, 1, 1, 3, 3]
    p3 = path_tree(3)
    ms = pad_to_uniform(p3, ForestDecomposition(p3, [[(0, 1)], [(1, 2)]]))
    ms.check(p3)
    assert ms.ell == 2


def test_chordal_examples():
    p = path_tree(4)
    disjoint = SubtreeMultiset([frozenset({0, 1}), frozenset({2, 3})], 1)
    with pytest.raises(DecompositionError):
        # members must cover every tree edge
        chordal_color(p, disjoint)
    covering = SubtreeMultiset([frozenset({0}), frozenset({1}), frozenset({2}), frozenset({3})], 1)
    with pytest.raises(DecompositionError):
        chordal_color(p, covering)
    one = validate_tree(1, [])
    clique = SubtreeMultiset([frozenset({0})] * 3, 3)
    assert sorted(chordal_color(one, clique).color) == [1, 2, 3]
    star = star_tree(4)
    ms = pad_to_uniform(star, ForestDecomposition(star, [[(0, 1), (0, 2)], [(0, 3), (0, 4)]]))
    coloring = chordal_color(star, ms)
    assert max(coloring.color) == 2
    for cls in coloring.classes():
        seen = set()
        for i in cls:
            assert not seen & ms.members[i]
            seen |= ms.members[i]


def test_chordal_disjoint_members_one_color():
    t = validate_tree(2, [(0, 1)])
    ms = SubtreeMultiset([frozenset({0, 1})], 1)
    assert chordal_color(t, ms).color == (1,)


def test_h2_examples():
    spider = validate_tree(8, [(0, i) for i in range(1, 8)])
    assert h2_exact(spider) == 2
    assert h1perp_exact(star_tree(8))[0] == 3 and h2_exact(star_tree(8)) == 2
    assert h2_exact(path_tree(2)) == 1


def test_h2_rep_k18():
    rep = construct_h2_representation(star_tree(8))
    report = verify_multirep(rep, star_tree(8))
    assert report.passed and report.max_cubes == 2
    assert len(components(rep.scene)) <= 2


def test_h2_rep_path_single_component():
    rep = construct_h2_representation(path_tree(6))
    assert verify_multirep(rep, path_tree(6)).max_cubes == 1
    assert len(components(rep.scene)) == 1


def test_hn_bounds_examples():
    assert hnperp_bounds(star_tree(8), 2) == (2, 2)
    assert hn_bounds(star_tree(5), 2) == (1, 1)
    assert hn_bounds(validate_tree(1, []), 3) == (1, 1)
    assert hnperp_bounds(validate_tree(1, []), 3) == (1, 1)


def test_hnperp_upper_k1_10():
    rep = hnperp_upper_construct(star_tree(10), 2)
    report = verify_multirep(rep, star_tree(10))
    assert report.passed and report.max_cubes == 2


def test_hnperp_upper_star_one_cube():
    assert verify_multirep(hnperp_upper_construct(star_tree(5), 2), star_tree(5)).max_cubes == 1


def test_hnperp_upper_p4_n1():
    report = verify_multirep(hnperp_upper_construct(path_tree(4), 1), path_tree(4))
    assert report.passed and report.max_cubes == 1


def test_double_star_beats_star_forests():
    # two adjacent degree-7 centers: star forests need 3 at k=5, the bound is 2
    t = double_star(6, 6)
    with pytest.raises(DecompositionError):
        star_forest_decompose(t, 5)
    report = verify_multirep(hnperp_upper_construct(t, 2), t)
    assert report.passed and report.max_cubes <= hnperp_bounds(t, 2)[1]


# --------------------------------------------------------------------------
# properties


@given(trees(max_size=12))
def test_h1perp_in_bounds(t):
    low, high = h1perp_bounds(t)
    value, witness = h1perp_exact(t)
    assert low <= value <= high
    if max_degree(t) % 3:
        assert value == low
    check_unit_bar_forests(witness)
    assert witness.max_multiplicity() == value


@given(trees(max_size=12))
def test_star_forest_witness_is_sound(t):
    try:
        dec = star_forest_decompose(t, 3)
    except DecompositionError:
        return
    dec.check()
    assert len(dec.forests) <= -(-(max_degree(t) + 1) // 3)
    for f in dec.forests:
        check_star_forest(f, 3)


@given(trees(max_size=12))
def test_coloring_of_padded_witness(t):
    _, witness = h1perp_exact(t)
    ms = pad_to_uniform(t, witness)
    coloring = chordal_color(t, ms)
    assert max(coloring.color) == ms.ell
    for cls in coloring.classes():
        seen = set()
        for i in cls:
            assert not seen & ms.members[i]
            seen |= ms.members[i]


@given(trees(max_size=10))
def test_h2_representation_matches_h2(t):
    report = verify_multirep(construct_h2_representation(t), t)
    assert report.passed and report.max_cubes == h2_exact(t)


@given(trees(max_size=10))
def test_hnperp_upper_meets_bound(t):
    for n in (1, 2):
        report = verify_multirep(hnperp_upper_construct(t, n), t)
        assert report.passed and report.max_cubes <= hnperp_bounds(t, n)[1]
