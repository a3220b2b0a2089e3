"""Deterministic test corpora of trees and the golden figure scenes."""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Iterator

import networkx as nx

from .constructors import ncube_from_ortho_forests, star_ortho_rep
from .decomposition import construct_h2_representation, hnperp_upper_construct
from .geometry import MultiRep
from .io import dump_scene, load_scene_text
from .trees import Tree, star_tree, validate_tree


@dataclass(frozen=True)
class CorpusSpec:
    max_exhaustive_vertices: int = 9
    random_count: int = 0
    random_size_range: tuple[int, int] = (10, 14)
    seed: int = 0


def _from_nx(g: nx.Graph) -> Tree:
    return validate_tree(g.number_of_nodes(), list(g.edges()))


def random_tree(rng: random.Random, size: int) -> Tree:
    if size == 1:
        return validate_tree(1, [])
    if size == 2:
        return validate_tree(2, [(0, 1)])
    return _from_nx(nx.from_prufer_sequence([rng.randrange(size) for _ in range(size - 2)]))


def corpus_trees(spec: CorpusSpec = CorpusSpec()) -> Iterator[tuple[str, Tree]]:
    """All trees up to the exhaustive size (one per isomorphism class), then random ones."""
    for size in range(1, spec.max_exhaustive_vertices + 1):
        graphs = [nx.empty_graph(1)] if size == 1 else nx.nonisomorphic_trees(size)
        for k, g in enumerate(graphs):
            yield f"t{size}-{k}", _from_nx(g)
    rng = random.Random(spec.seed)
    lo, hi = spec.random_size_range
    for k in range(spec.random_count):
        size = rng.randint(lo, hi)
        yield f"r{k}-{size}", random_tree(rng, size)


# --------------------------------------------------------------------------
# golden scenes


@dataclass(frozen=True)
class Golden:
    name: str
    tree: Tree
    model: str
    max_cubes: int
    components: int | None
    build: Callable[[], MultiRep]


def _k16() -> MultiRep:
    forests = [[(0, 1), (0, 2), (0, 3)], [(0, 4), (0, 5), (0, 6)]]
    return ncube_from_ortho_forests(star_tree(6), forests)


GOLDEN = {
    g.name: g
    for g in (
        Golden("k1_5_orthogonal", star_tree(5), "orthogonal", 1, 1, lambda: star_ortho_rep(2, 5)),
        Golden("k1_6_standard", star_tree(6), "standard", 1, 1, _k16),
        Golden("k1_8_standard", star_tree(8), "standard", 2, 2, lambda: construct_h2_representation(star_tree(8))),
        Golden("k1_10_orthogonal", star_tree(10), "orthogonal", 2, 2, lambda: hnperp_upper_construct(star_tree(10), 2)),
    )
}


def write_golden(directory) -> list[Path]:
    out = []
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, g in GOLDEN.items():
        path = directory / f"{name}.json"
        path.write_text(dump_scene(g.build()), encoding="utf-8")
        out.append(path)
    return out


def load_golden(name: str) -> MultiRep:
    text = resources.files("hypervis").joinpath("data", "golden", f"{name}.json").read_text(encoding="utf-8")
    return load_scene_text(text)[0]
