"""Unit hypercube visibility representations of trees."""

from .geometry import (
    ORTHOGONAL,
    STANDARD,
    Cube,
    MultiRep,
    OrthoScene,
    SceneError,
    StandardScene,
    SightLine,
    components,
    disjoint_union,
    extract_graph,
    perturb_distinct_heights,
    split_into_tree_components,
    verify_multirep,
    visible_ortho,
    visible_standard,
)
from .trees import (
    PathExpansion,
    Tree,
    TreeError,
    bfs_order,
    max_degree,
    path_expand,
    recognize_caterpillar,
    validate_tree,
)

__version__ = "0.1.0"
