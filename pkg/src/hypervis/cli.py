"""The ``hypervis`` command line."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .constructors import (
    ConstructionError,
    cubicity_rep,
    epsilon_separate,
    ncube_from_ortho_forests,
    ortho_from_cubicity,
    star_ortho_rep,
    unit_bar_tree_rep,
)
from .corpus import GOLDEN, CorpusSpec, corpus_trees, write_golden
from .decomposition import (
    DecompositionError,
    SearchLimitError,
    construct_h2_representation,
    h1perp_bounds,
    h1perp_exact,
    hn_bounds,
    hnperp_bounds,
    hnperp_upper_construct,
    star_forest_decompose,
)
from .geometry import SceneError, extract_graph, verify_multirep
from .svg import render_svg
from .trees import TreeError, expand_all, max_degree, star_tree

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

CONSTRUCT_KINDS = ("unit-bar", "ortho-from-cubicity", "ncube-from-forests", "h2", "star-ortho", "hnperp-upper")


class InputError(Exception):
    pass


class DomainError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _need(value, flag):
    if value is None:
        raise InputError(f"missing {flag}")
    return value


def cmd_extract(args) -> int:
    rep, _ = io.load_scene_text(Path(args.scene).read_text(encoding="utf-8"))
    g = extract_graph(rep.scene)
    lines = [f"{g.number_of_nodes()} {g.number_of_edges()}"]
    lines += [f"{a} {b}" for a, b in sorted((min(e), max(e)) for e in g.edges)]
    print("\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = io.read_scene(args.scene)
    tree = io.read_tree(args.tree)
    report = verify_multirep(rep, tree)
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_construct(args) -> int:
    kind = args.kind
    if kind == "star-ortho":
        n, m = _need(args.n, "--n"), _need(args.m, "--m")
        rep, target = star_ortho_rep(n, m), star_tree(m)
    else:
        tree = io.read_tree(_need(args.tree, "a tree file"))
        target = tree
        if kind == "unit-bar":
            rep = unit_bar_tree_rep(tree)
        elif kind == "h2":
            rep = construct_h2_representation(tree)
        elif kind == "hnperp-upper":
            rep = hnperp_upper_construct(tree, args.n or 2)
        elif kind == "ncube-from-forests":
            forests = io.read_decomposition(_need(args.forests, "--forests"))
            rep = ncube_from_ortho_forests(tree, forests)
        else:
            expansions = {}
            if args.expansions:
                expansions = io.expansions_from_dict(io.read_json(args.expansions), tree)
            if args.intersection:
                inter = io.intersection_from_dict(io.read_json(args.intersection))
            else:
                inter = cubicity_rep(tree, args.n or 1)
                if inter is None:
                    raise DomainError(f"no unit {args.n or 1}-cube intersection representation found")
            inter, _ = epsilon_separate(inter, tree)
            rep = ortho_from_cubicity(tree, inter, expansions, root=args.root)
            target, _ = expand_all(tree, expansions)
    report = verify_multirep(rep, target)
    if not report.passed:
        raise DomainError("constructed scene fails verification: " + "; ".join(report.lines()))
    _emit(io.dump_scene(rep), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    tree = io.read_tree(args.tree)
    if args.kind == "star":
        dec = star_forest_decompose(tree, args.k)
    else:
        _, dec = h1perp_exact(tree)
    _emit(json.dumps(io.decomposition_to_dict(dec.forests)) + "\n", args.out)
    return EXIT_OK


def cmd_h_number(args) -> int:
    tree = io.read_tree(args.tree)
    n = args.n or (1 if args.model == "orthogonal" else 2)
    exact = None
    witness = None
    if args.model == "orthogonal":
        low, high = hnperp_bounds(tree, n)
        if n == 1:
            try:
                exact, witness = h1perp_exact(tree)
            except SearchLimitError:
                pass
    else:
        low, high = hn_bounds(tree, n)
        if n == 2:
            try:
                value, witness = h1perp_exact(tree)
                exact = -(-value // 2)
            except SearchLimitError:
                pass
        elif n == 1:
            raise DomainError("standard 1-cube scenes are not supported")
    if exact is None and low == high:
        exact = low
    fields = [str(low), str(high), "?" if exact is None else str(exact)]
    if exact is not None and witness is not None and args.out:
        io.write_decomposition(witness.forests, args.out)
        fields.append(args.out)
    print(" ".join(fields))
    return EXIT_OK


def cmd_render(args) -> int:
    rep = io.read_scene(args.scene)
    try:
        text = render_svg(rep.scene, rep.assignment)
    except SceneError as exc:
        raise DomainError(str(exc)) from exc
    _emit(text, args.out)
    return EXIT_OK


def corpus_row(name, tree) -> tuple[str, bool]:
    delta = max_degree(tree)
    low, high = h1perp_bounds(tree)
    ok = True
    try:
        value, _ = h1perp_exact(tree)
        h2 = -(-value // 2)
        ok &= low <= value <= high and (delta % 3 == 0 or value == low)
        report = verify_multirep(construct_h2_representation(tree), tree)
        h2_ok = report.passed and report.max_cubes == h2
        up = verify_multirep(hnperp_upper_construct(tree, 2), tree)
        hn_ok = up.passed and up.max_cubes <= hnperp_bounds(tree, 2)[1]
    except (ConstructionError, DecompositionError, SceneError) as exc:
        return f"{name} n={tree.vertex_count} delta={delta} ERROR {exc}", False
    ok &= h2_ok and hn_ok
    row = (
        f"{name} n={tree.vertex_count} delta={delta} h1perp={value} in [{low},{high}] "
        f"h2={h2} h2-scene={'PASS' if h2_ok else 'FAIL'} h2perp-upper={'PASS' if hn_ok else 'FAIL'}"
    )
    return row, ok


def cmd_corpus(args) -> int:
    spec = CorpusSpec(args.max_exhaustive, args.random_count, (args.min_size, args.max_size), args.seed)
    failures = 0
    for name, tree in corpus_trees(spec):
        row, ok = corpus_row(name, tree)
        print(row)
        failures += not ok
    print("ALL PASS" if not failures else f"FAILED {failures}")
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_golden(args) -> int:
    for path in write_golden(args.out):
        rep = io.read_scene(path)
        spec = GOLDEN[path.stem]
        report = verify_multirep(rep, spec.tree)
        print(f"{path} {report.lines()[0]} max-cubes-per-vertex {report.max_cubes}")
        if not report.passed:
            return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypervis", description="Unit hypercube visibility representations of trees.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("extract", help="print the visibility graph of a scene")
    s.add_argument("scene")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("verify", help="check a scene against a tree")
    s.add_argument("scene")
    s.add_argument("tree")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("construct", help="build a verified scene")
    s.add_argument("kind", choices=CONSTRUCT_KINDS)
    s.add_argument("tree", nargs="?")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--forests", help="decomposition JSON (ncube-from-forests)")
    s.add_argument("--intersection", help="intersection JSON (ortho-from-cubicity)")
    s.add_argument("--expansions", help="expansions JSON (ortho-from-cubicity)")
    s.add_argument("--root", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("decompose", help="forest decomposition of a tree")
    s.add_argument("tree")
    s.add_argument("--kind", choices=("unit-bar", "star"), default="unit-bar")
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--out")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("h-number", help="print 'low high exact' for a visibility number")
    s.add_argument("tree")
    s.add_argument("--model", choices=("standard", "orthogonal"), default="orthogonal")
    s.add_argument("--n", type=int)
    s.add_argument("--out", help="where to write the witness decomposition")
    s.set_defaults(func=cmd_h_number)

    s = sub.add_parser("render", help="draw a scene as SVG")
    s.add_argument("scene")
    s.add_argument("--out")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("corpus", help="run the full pipeline over a tree corpus")
    s.add_argument("--max-exhaustive", type=int, default=9)
    s.add_argument("--random-count", type=int, default=0)
    s.add_argument("--min-size", type=int, default=10)
    s.add_argument("--max-size", type=int, default=14)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_corpus)

    s = sub.add_parser("golden", help="regenerate the figure scenes")
    s.add_argument("--out", default=str(Path(__file__).parent / "data" / "golden"))
    s.set_defaults(func=cmd_golden)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, io.FormatError, TreeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SceneError as exc:
        # scene errors reach here only from malformed inputs (domain mismatch, bad cubes)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ConstructionError, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
