"""Graphviz DOT text for trees."""
from __future__ import annotations

from typing import Iterable, Mapping

from .core import format_rational
from .treeramsey import BranchingTree
from .treespace import TreeSpace

FILLS = ["lightblue", "salmon", "palegreen", "gold", "plum", "lightgray", "orange", "cyan"]


def _q(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def to_dot(
    tree: TreeSpace | BranchingTree,
    colors: Mapping[str, int] | None = None,
    highlight: Iterable[str] | None = None,
    name: str = "tree",
) -> str:
    """Render ``tree`` top-down.

    Nodes are labelled with their id and, for a :class:`TreeSpace`, their
    ``h`` value.  Leaves listed in ``colors`` are filled by color index;
    nodes in ``highlight`` are drawn bold.
    """
    colors = colors or {}
    bold = set(highlight or ())
    nodes = list(tree.nodes)
    lines = [f"digraph {_q(name)} {{", "  node [shape=box, fontname=\"Helvetica\"];"]
    for v in nodes:
        label = v
        if isinstance(tree, TreeSpace):
            label = f"{v}\\nh={format_rational(tree.h[v])}"
        attrs = [f"label={_q(label)}"]
        if v in colors and not tree.children(v):
            attrs.append(f"style=filled, fillcolor={_q(FILLS[colors[v] % len(FILLS)])}")
        if v in bold:
            attrs.append("penwidth=2")
        lines.append(f"  {_q(v)} [{', '.join(attrs)}];")
    for v in nodes:
        for c in tree.children(v):
            style = " [penwidth=2]" if v in bold and c in bold else ""
            lines.append(f"  {_q(v)} -> {_q(c)}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
