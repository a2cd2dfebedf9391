"""JSON documents for spaces, colorings, trees, requests and certificates.

Every rational is written as ``"p/q"`` (or ``"n"`` for integers) and parsed
back exactly; floats are refused.  :func:`dumps` sorts keys so equal inputs
always give byte-identical output.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .core import MetricSpace, ScaledCopyCert, format_rational, parse_rational, validate_metric
from .copysearch import Obstruction, Stage
from .treeramsey import BranchingTree, MonoSubtreeCert
from .treespace import RegularWitness, TreeSpace


class FormatError(ValueError):
    pass


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), path)


def _rational(token, where: str) -> Fraction:
    if isinstance(token, float):
        raise FormatError(f"{where}: floating-point value {token!r} is not allowed")
    try:
        return parse_rational(token)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


def _field(doc, key: str, kind, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"{where}: missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise FormatError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return value


def space_to_json(space: MetricSpace) -> dict:
    return {
        "points": list(space.points),
        "distances": [[format_rational(v) for v in row] for row in space.dist],
    }


def parse_space(doc, where: str = "space") -> tuple[list[str], list[list[Fraction]]]:
    """Read points and matrix without checking the metric axioms."""
    points = _field(doc, "points", list, where)
    rows = _field(doc, "distances", list, where)
    for i, p in enumerate(points):
        if not isinstance(p, str):
            raise FormatError(f"{where}.points[{i}]: point names must be strings")
    matrix = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise FormatError(f"{where}.distances[{i}]: expected a list")
        matrix.append([_rational(v, f"{where}.distances[{i}][{j}]") for j, v in enumerate(row)])
    return points, matrix


def space_from_json(doc, where: str = "space") -> MetricSpace:
    points, matrix = parse_space(doc, where)
    return validate_metric(matrix, points)


def coloring_to_json(coloring: Mapping[str, int]) -> dict:
    return {"colors": dict(coloring)}


def coloring_from_json(doc, where: str = "coloring") -> dict[str, int]:
    colors = _field(doc, "colors", dict, where)
    for p, c in colors.items():
        if isinstance(c, bool) or not isinstance(c, int) or c < 0:
            raise FormatError(f"{where}.colors[{p!r}]: expected a nonnegative integer")
    return dict(colors)


def tree_to_json(tree: TreeSpace, leaf_map: Mapping[str, str] | None = None, level_values=None) -> dict:
    doc: dict[str, Any] = {
        "nodes": [
            {"id": v, "parent": tree.parent(v), "h": format_rational(tree.h[v])} for v in tree.nodes
        ],
        "leaf_map": dict(leaf_map or {}),
    }
    if level_values is not None:
        doc["level_values"] = [format_rational(v) for v in level_values]
    return doc


def witness_to_json(w) -> dict:
    return tree_to_json(w.tree, w.leaf_map, w.level_values if isinstance(w, RegularWitness) else None)


def _tree_nodes(doc, where: str, need_h: bool):
    nodes = _field(doc, "nodes", list, where)
    parent: dict[str, str | None] = {}
    h: dict[str, Fraction] = {}
    for i, node in enumerate(nodes):
        at = f"{where}.nodes[{i}]"
        nid = _field(node, "id", str, at)
        if nid in parent:
            raise FormatError(f"{at}: duplicate node id {nid!r}")
        p = node.get("parent")
        if p is not None and not isinstance(p, str):
            raise FormatError(f"{at}.parent: expected a string or null")
        parent[nid] = p
        if "h" in node:
            h[nid] = _rational(node["h"], f"{at}.h")
        elif need_h:
            raise FormatError(f"{at}: missing field 'h'")
    leaf_map = doc.get("leaf_map") or {}
    if not isinstance(leaf_map, dict):
        raise FormatError(f"{where}.leaf_map: expected an object")
    return parent, h, dict(leaf_map)


def tree_from_json(doc, where: str = "tree") -> tuple[TreeSpace, dict[str, str]]:
    parent, h, leaf_map = _tree_nodes(doc, where, need_h=True)
    try:
        tree = TreeSpace(parent, h)
    except (ValueError, KeyError) as exc:
        raise FormatError(f"{where}: {exc}") from None
    for x, leaf in leaf_map.items():
        if leaf not in tree or not tree.is_leaf(leaf):
            raise FormatError(f"{where}.leaf_map[{x!r}]: {leaf!r} is not a leaf")
    return tree, leaf_map


def branching_tree_from_json(doc, where: str = "tree") -> BranchingTree:
    parent, _, _ = _tree_nodes(doc, where, need_h=False)
    roots = [v for v, p in parent.items() if p is None]
    if len(roots) != 1:
        raise FormatError(f"{where}: expected exactly one root, found {len(roots)}")
    children: dict[str, list[str]] = {v: [] for v in parent}
    for v, p in parent.items():
        if p is not None:
            if p not in children:
                raise FormatError(f"{where}: node {v!r} has unknown parent {p!r}")
            children[p].append(v)
    try:
        return BranchingTree(children, roots[0])
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


def requests_from_json(doc, where: str = "requests") -> list[tuple[str, list[str], dict[str, Fraction]]]:
    if not isinstance(doc, list):
        raise FormatError(f"{where}: expected a list of requests")
    out = []
    for i, req in enumerate(doc):
        at = f"{where}[{i}]"
        rid = _field(req, "id", str, at)
        support = _field(req, "support", list, at)
        values = _field(req, "values", dict, at)
        vals = {p: _rational(v, f"{at}.values[{p!r}]") for p, v in values.items()}
        out.append((rid, list(support), vals))
    return out


def copy_cert_to_json(color: int, cert: ScaledCopyCert) -> dict:
    return {"color": color, "scale": format_rational(cert.factor), "embedding": dict(cert.embedding)}


def copy_cert_from_json(doc, where: str = "certificate") -> tuple[int, ScaledCopyCert]:
    color = _field(doc, "color", int, where)
    scale = _rational(_field(doc, "scale", (str, int), where), f"{where}.scale")
    emb = _field(doc, "embedding", dict, where)
    return color, ScaledCopyCert(dict(emb), scale)


def _profile(values: Mapping[str, Fraction]) -> dict:
    return {p: format_rational(v) for p, v in values.items()}


def obstruction_to_json(ob: Obstruction) -> dict:
    return {
        "obstruction": {
            "support": list(ob.support),
            "values": _profile(ob.values),
            "stages": [
                {
                    "stage": st.stage,
                    "support": list(st.support),
                    "values": _profile(st.values),
                    "partial_copy": list(st.partial_copy),
                    "scale": format_rational(st.scale),
                    "failed_at": st.failed_at,
                }
                for st in ob.stages
            ],
        }
    }


def obstruction_from_json(doc, where: str = "obstruction") -> Obstruction:
    body = _field(doc, "obstruction", dict, where)
    stages = []
    for i, st in enumerate(_field(body, "stages", list, where)):
        at = f"{where}.stages[{i}]"
        stages.append(
            Stage(
                _field(st, "stage", int, at),
                tuple(_field(st, "support", list, at)),
                {p: _rational(v, at) for p, v in _field(st, "values", dict, at).items()},
                tuple(_field(st, "partial_copy", list, at)),
                _rational(_field(st, "scale", (str, int), at), f"{at}.scale"),
                _field(st, "failed_at", int, at),
            )
        )
    values = {p: _rational(v, where) for p, v in _field(body, "values", dict, where).items()}
    return Obstruction(tuple(stages), tuple(_field(body, "support", list, where)), values)


def mono_cert_to_json(cert: MonoSubtreeCert) -> dict:
    return {"color": cert.color, "k": cert.k, "nodes": list(cert.nodes)}


def mono_cert_from_json(doc, where: str = "certificate") -> MonoSubtreeCert:
    return MonoSubtreeCert(
        tuple(_field(doc, "nodes", list, where)), _field(doc, "color", int, where), _field(doc, "k", int, where)
    )
