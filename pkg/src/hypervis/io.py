"""Tree, scene and decomposition file formats."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .geometry import ORTHOGONAL, STANDARD, Cube, MultiRep, SceneError, scene_class
from .trees import Tree, TreeError, validate_tree

INTERSECTION = "intersection"

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class FormatError(ValueError):
    pass


def parse_rational(text: Any, where: str = "") -> Fraction:
    if isinstance(text, bool):
        raise FormatError(f"{where}: expected a rational, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise FormatError(f"{where}: expected a \"p/q\" string, got {text!r}")
    m = _RATIONAL.match(text)
    if not m:
        raise FormatError(f"{where}: malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise FormatError(f"{where}: zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# trees


def parse_tree(text: str) -> Tree:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise FormatError("empty tree file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "tree" or not parts[1].isdigit():
        raise FormatError(f"line {lineno}: expected 'tree <vertex_count>', got {header!r}")
    count = int(parts[1])
    edges = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
            raise FormatError(f"line {lineno}: expected '<u> <v>', got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    try:
        return validate_tree(count, edges)
    except TreeError as exc:
        raise FormatError(str(exc)) from exc


def format_tree(tree: Tree) -> str:
    out = [f"tree {tree.vertex_count}"]
    out.extend(f"{u} {v}" for u, v in tree.sorted_edges())
    return "\n".join(out) + "\n"


def read_tree(path) -> Tree:
    return parse_tree(Path(path).read_text(encoding="utf-8"))


def write_tree(tree: Tree, path) -> None:
    Path(path).write_text(format_tree(tree), encoding="utf-8")


# --------------------------------------------------------------------------
# scenes


def scene_to_dict(rep: MultiRep) -> dict:
    cubes = []
    for c in rep.scene.cubes:
        entry: dict[str, Any] = {
            "id": c.id,
            "vertex": rep.assignment.get(c.id),
            "center": [format_rational(x) for x in c.center],
        }
        if c.height is not None:
            entry["height"] = format_rational(c.height)
        cubes.append(entry)
    return {"model": rep.model, "dimension": rep.dimension, "cubes": cubes}


def scene_from_dict(data: Any) -> tuple[MultiRep, bool]:
    """Parse a scene document.

    Returns the representation and whether every cube carried a vertex; cubes
    with ``"vertex": null`` are assigned to themselves (cube id as vertex).
    """
    if not isinstance(data, dict):
        raise FormatError("scene: top level must be an object")
    model = data.get("model")
    if model not in (STANDARD, ORTHOGONAL):
        raise FormatError(f"scene.model: expected 'standard' or 'orthogonal', got {model!r}")
    dim = data.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FormatError(f"scene.dimension: expected a positive integer, got {dim!r}")
    raw = data.get("cubes")
    if not isinstance(raw, list):
        raise FormatError("scene.cubes: expected a list")
    cubes = []
    assignment = {}
    complete = True
    for k, entry in enumerate(raw):
        where = f"scene.cubes[{k}]"
        if not isinstance(entry, dict):
            raise FormatError(f"{where}: expected an object")
        cid = entry.get("id")
        if not isinstance(cid, int) or isinstance(cid, bool):
            raise FormatError(f"{where}.id: expected an integer, got {cid!r}")
        center = entry.get("center")
        if not isinstance(center, list) or len(center) != dim:
            raise FormatError(f"{where}.center: expected {dim} rationals")
        center = [parse_rational(x, f"{where}.center[{i}]") for i, x in enumerate(center)]
        height = None
        if model == ORTHOGONAL:
            if "height" not in entry:
                raise FormatError(f"{where}.height: required in the orthogonal model")
            height = parse_rational(entry["height"], f"{where}.height")
        elif "height" in entry:
            raise FormatError(f"{where}.height: not allowed in the standard model")
        vertex = entry.get("vertex")
        if vertex is None:
            complete = False
            vertex = cid
        elif not isinstance(vertex, int) or isinstance(vertex, bool):
            raise FormatError(f"{where}.vertex: expected an integer or null, got {vertex!r}")
        cubes.append(Cube(cid, tuple(center), height))
        assignment[cid] = vertex
    try:
        scene = scene_class(model)(dim, cubes)
        return MultiRep(scene, assignment), complete
    except SceneError as exc:
        raise FormatError(f"scene: {exc}") from exc


def read_scene(path) -> MultiRep:
    return load_scene_text(Path(path).read_text(encoding="utf-8"))[0]


def load_scene_text(text: str) -> tuple[MultiRep, bool]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return scene_from_dict(data)


def dump_scene(rep: MultiRep) -> str:
    return json.dumps(scene_to_dict(rep), indent=1) + "\n"


def write_scene(rep: MultiRep, path) -> None:
    Path(path).write_text(dump_scene(rep), encoding="utf-8")


def intersection_to_dict(rep) -> dict:
    return {
        "model": INTERSECTION,
        "dimension": rep.dimension,
        "cubes": [
            {"id": i, "vertex": rep.assignment[i], "center": [format_rational(x) for x in c]}
            for i, c in sorted(rep.centers.items())
        ],
    }


def intersection_from_dict(data: Any):
    from .constructors import IntersectionRep

    if not isinstance(data, dict) or data.get("model") != INTERSECTION:
        raise FormatError("intersection: expected an object with model 'intersection'")
    dim = data.get("dimension")
    if not isinstance(dim, int) or dim < 1:
        raise FormatError(f"intersection.dimension: expected a positive integer, got {dim!r}")
    centers = {}
    assignment = {}
    for k, entry in enumerate(data.get("cubes", [])):
        where = f"intersection.cubes[{k}]"
        center = entry.get("center")
        if not isinstance(center, list) or len(center) != dim:
            raise FormatError(f"{where}.center: expected {dim} rationals")
        cid = entry.get("id")
        centers[cid] = tuple(parse_rational(x, f"{where}.center[{i}]") for i, x in enumerate(center))
        vertex = entry.get("vertex")
        assignment[cid] = cid if vertex is None else vertex
    return IntersectionRep(dim, centers, assignment)


# --------------------------------------------------------------------------
# decompositions


def decomposition_to_dict(forests) -> dict:
    return {"forests": [[[u, v] for u, v in sorted(f)] for f in forests]}


def decomposition_from_dict(data: Any) -> list[list[tuple[int, int]]]:
    if not isinstance(data, dict) or not isinstance(data.get("forests"), list):
        raise FormatError("decomposition: expected {\"forests\": [...]}")
    out = []
    for i, forest in enumerate(data["forests"]):
        if not isinstance(forest, list):
            raise FormatError(f"decomposition.forests[{i}]: expected a list of edges")
        edges = []
        for k, e in enumerate(forest):
            if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
                raise FormatError(f"decomposition.forests[{i}][{k}]: expected [u, v]")
            u, v = e
            edges.append((min(u, v), max(u, v)))
        out.append(edges)
    return out


def read_decomposition(path) -> list[list[tuple[int, int]]]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return decomposition_from_dict(data)


def write_decomposition(forests, path) -> None:
    Path(path).write_text(json.dumps(decomposition_to_dict(forests)) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# path expansions


def expansions_from_dict(data: Any, tree: Tree) -> dict:
    """``{"expansions": [{"vertex": v, "length": k, "far": [...]}, ...]}``; the
    neighbors not listed in ``far`` stay on endpoint 0."""
    from .trees import PathExpansion

    if not isinstance(data, dict) or not isinstance(data.get("expansions"), list):
        raise FormatError("expansions: expected {\"expansions\": [...]}")
    out = {}
    for k, entry in enumerate(data["expansions"]):
        where = f"expansions[{k}]"
        if not isinstance(entry, dict):
            raise FormatError(f"{where}: expected an object")
        v, length, far = entry.get("vertex"), entry.get("length", 0), entry.get("far", [])
        if not isinstance(v, int) or not 0 <= v < tree.vertex_count:
            raise FormatError(f"{where}.vertex: expected a vertex of the base tree, got {v!r}")
        if not isinstance(length, int) or length < 0:
            raise FormatError(f"{where}.length: expected a nonnegative integer, got {length!r}")
        if not isinstance(far, list) or not all(isinstance(x, int) for x in far):
            raise FormatError(f"{where}.far: expected a list of vertices")
        near = set(tree.neighbors(v)) - set(far)
        try:
            e = PathExpansion(v, length, frozenset(near), frozenset(far))
            e.check(tree)
        except TreeError as exc:
            raise FormatError(f"{where}: {exc}") from exc
        out[v] = e
    return out


def read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
