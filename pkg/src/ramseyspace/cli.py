"""Command-line front end.

Exit codes: 0 success or found, 1 not found / obstruction / failed check,
2 invalid input.  JSON goes to standard output (or ``--output``) with sorted
keys, so a fixed seed always reproduces the same bytes.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from itertools import combinations

from . import formats
from .copysearch import FoundCopy, greedy_find_copy, oracle_find_copy
from .core import (
    InvalidSpace,
    check_coloring,
    find_metric_violation,
    find_ultrametric_violation,
    format_rational,
    isosceles_witness,
    parse_rational,
    validate_metric,
    validate_ultrametric,
)
from .dot import to_dot
from .generators import generate_random_ultrametric
from .katetov import RequestError, extend_one_point, saturate, validate_katetov
from .treeramsey import mono_subtree
from .treespace import regularize, tree_to_space, ultrametric_to_tree
from .universal import (
    IsometricCopy,
    auto_multiplicity,
    build_universal_tree,
    find_mono_isometric_copy,
    match_subtree,
    random_coloring,
    region_colorings,
    required_height,
)

EXHAUSTIVE_LIMIT = 2**20


class UsageError(Exception):
    pass


def _palette(text: str):
    try:
        return [parse_rational(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _seed(args) -> int:
    env = os.environ.get("RAMSEY_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"RAMSEY_SEED must be an integer, got {env!r}") from None
    return args.seed


def _space(path):
    return formats.space_from_json(formats.load(path), path)


def cmd_validate(args):
    points, matrix = formats.parse_space(formats.load(args.space), args.space)
    violation = find_metric_violation(matrix, points)
    out = {"points": len(points), "metric": violation is None}
    if violation is not None:
        out["violation"] = {"axiom": violation.axiom, "witness": list(violation.witness), "message": violation.message}
        return 1, out
    space = validate_metric(matrix, points)
    triple = find_ultrametric_violation(space)
    out["ultrametric"] = triple is None
    out["diameter"] = format_rational(space.diameter)
    if triple is not None:
        out["ultrametric_violation"] = list(triple)
    return (1 if args.ultrametric and triple is not None else 0), out


def cmd_isosceles(args):
    space = validate_ultrametric(_space(args.space))
    triples = [tuple(args.triple.split(","))] if args.triple else list(combinations(space.points, 3))
    rows = []
    for t in triples:
        (a, b), c = isosceles_witness(space, t)
        rows.append({"base": [a, b], "apex": c, "base_length": format_rational(space.d(a, b)),
                     "leg_length": format_rational(space.d(a, c))})
    return 0, {"triangles": rows}


def cmd_to_tree(args):
    w = ultrametric_to_tree(_space(args.space))
    if args.regular:
        w = regularize(w)
    return 0, formats.witness_to_json(w)


def cmd_tree_metric(args):
    tree, leaf_map = formats.tree_from_json(formats.load(args.tree), args.tree)
    return 0, formats.space_to_json(tree_to_space(tree, leaf_map or None))


def cmd_extend(args):
    space = _space(args.space)
    reqs = formats.requests_from_json(formats.load(args.requests), args.requests)
    if args.no_reuse:
        for i, (rid, support, values) in enumerate(reqs):
            try:
                space = extend_one_point(validate_katetov(space, support, values), rid)
            except ValueError as exc:
                raise RequestError(i, exc) from exc
    else:
        space = saturate(space, [(s, v) for _, s, v in reqs], [rid for rid, _, _ in reqs])
    return 0, formats.space_to_json(space)


def cmd_find_copy(args):
    X = _space(args.space)
    K = _space(args.target)
    coloring = formats.coloring_from_json(formats.load(args.coloring), args.coloring)
    check_coloring(coloring, X.points)
    if args.mode == "oracle":
        found = oracle_find_copy(X, coloring, K)
        if found is None:
            return 1, {"found": False}
    else:
        found = greedy_find_copy(X, coloring, K)
        if not isinstance(found, FoundCopy):
            return 1, {"found": False, **formats.obstruction_to_json(found)}
    return 0, {"found": True, **formats.copy_cert_to_json(found.color, found.cert)}


def cmd_mono_subtree(args):
    tree = formats.branching_tree_from_json(formats.load(args.tree), args.tree)
    coloring = formats.coloring_from_json(formats.load(args.coloring), args.coloring)
    chi = check_coloring(coloring, tree.leaves)
    cert = mono_subtree(tree, chi, args.branching)
    if cert is None:
        return 1, {"found": False}
    return 0, {"found": True, **formats.mono_cert_to_json(cert)}


def cmd_universal(args):
    palette = _palette(args.distances)
    X = validate_ultrametric(_space(args.target))
    mult = auto_multiplicity(X, args.colors) if args.multiplicity == "auto" else int(args.multiplicity)
    height = required_height(X, palette) if args.height == "auto" else int(args.height)
    M = build_universal_tree(palette, height, mult)
    base = {"multiplicity": mult, "height": height, "nodes": len(M.tree)}
    if args.adversary == "exhaustive":
        sub = match_subtree(M, X.distance_set()) if len(X) > 1 else None
        leaves = sub.leaves if sub is not None else list(M.leaves)
        if args.colors ** len(leaves) > EXHAUSTIVE_LIMIT:
            raise UsageError(f"{args.colors}^{len(leaves)} colorings exceed the exhaustive limit")
        total = found = 0
        rest = {v: 0 for v in M.leaves}
        for region in region_colorings(sub, args.colors) if sub is not None else ({v: c} for v in leaves[:1] for c in range(args.colors)):
            chi = dict(rest)
            chi.update(region)
            total += 1
            found += isinstance(find_mono_isometric_copy(M, chi, X), IsometricCopy)
        return (0 if found == total else 1), {**base, "cases": total, "found": found}
    if args.adversary:
        if not args.adversary.startswith("random:"):
            raise UsageError("--adversary must be 'exhaustive' or 'random:SEED'")
        chi = random_coloring(M, args.colors, random.Random(int(args.adversary.split(":", 1)[1])))
    elif args.coloring:
        chi = formats.coloring_from_json(formats.load(args.coloring), args.coloring)
    else:
        raise UsageError("give --coloring or --adversary")
    result = find_mono_isometric_copy(M, chi, X)
    if not isinstance(result, IsometricCopy):
        return 1, {**base, "found": False, "k": result.k, "colors": result.colors, "required": result.required}
    out = {**base, "found": True, "color": result.color, "embedding": dict(result.embedding)}
    if result.subtree is not None:
        sub = match_subtree(M, X.distance_set())
        out["dot"] = to_dot(sub, {v: chi[v] for v in sub.leaves}, result.subtree.nodes, name="mono")
    return 0, out


def cmd_export_dot(args):
    tree, _ = formats.tree_from_json(formats.load(args.tree), args.tree)
    colors, highlight = None, None
    if args.coloring:
        colors = formats.coloring_from_json(formats.load(args.coloring), args.coloring)
    if args.certificate:
        cert = formats.mono_cert_from_json(formats.load(args.certificate), args.certificate)
        highlight = cert.nodes
    return 0, to_dot(tree, colors, highlight)


def cmd_generate(args):
    space = generate_random_ultrametric(_seed(args), args.points, _palette(args.palette))
    return 0, formats.space_to_json(space)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ramseyspace", description=__doc__.splitlines()[0])
    parser.add_argument("--output", "-o", help="write to this file instead of standard output")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("validate", help="check the metric (and ultrametric) axioms")
    p.add_argument("--space", required=True)
    p.add_argument("--ultrametric", action="store_true", help="fail unless the space is ultrametric")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("isosceles", help="base and apex of every triangle of an ultrametric space")
    p.add_argument("--space", required=True)
    p.add_argument("--triple", help="comma-separated three points; default is all triples")
    p.set_defaults(func=cmd_isosceles)

    p = sub.add_parser("to-tree", help="tree space realizing an ultrametric space")
    p.add_argument("--space", required=True)
    p.add_argument("--regular", action="store_true", help="uniform height, level-constant h")
    p.set_defaults(func=cmd_to_tree)

    p = sub.add_parser("tree-metric", help="leaf metric of a tree file")
    p.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_tree_metric)

    p = sub.add_parser("extend", help="add points realizing distance profiles")
    p.add_argument("--space", required=True)
    p.add_argument("--requests", required=True)
    p.add_argument("--no-reuse", action="store_true", help="always add a fresh point")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("find-copy", help="monochromatic scaled copy of a target space")
    p.add_argument("--space", required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--mode", choices=["greedy", "oracle"], default="oracle")
    p.set_defaults(func=cmd_find_copy)

    p = sub.add_parser("mono-subtree", help="monochromatic k-branching subtree")
    p.add_argument("--tree", required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--branching", type=int, required=True)
    p.set_defaults(func=cmd_mono_subtree)

    p = sub.add_parser("universal", help="monochromatic isometric copy in a universal tree")
    p.add_argument("--distances", required=True, help="palette, e.g. 1,3/2,2")
    p.add_argument("--height", default="auto")
    p.add_argument("--colors", type=int, default=2)
    p.add_argument("--multiplicity", default="auto")
    p.add_argument("--target", required=True)
    p.add_argument("--coloring")
    p.add_argument("--adversary", help="'exhaustive' or 'random:SEED'")
    p.set_defaults(func=cmd_universal)

    p = sub.add_parser("export-dot", help="Graphviz DOT for a tree file")
    p.add_argument("--tree", required=True)
    p.add_argument("--coloring")
    p.add_argument("--certificate", help="mono-subtree certificate to highlight")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("generate", help="random ultrametric space")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--palette", default="1,3/2,2")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if not getattr(args, "func", None):
        parser.print_usage(stderr)
        return 2
    try:
        code, out = args.func(args)
    except (UsageError, formats.FormatError, InvalidSpace, RequestError, ValueError, KeyError, OSError) as exc:
        print(f"{parser.prog} {args.command}: {exc}", file=stderr)
        return 2
    text = out if isinstance(out, str) else formats.dumps(out)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
