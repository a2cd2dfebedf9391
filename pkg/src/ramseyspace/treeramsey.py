"""Monochromatic k-branching subtrees of leaf-colored uniform trees.

For a node ``s`` and color ``col`` the rank predicate ``G(s, col)`` holds when
at least ``k`` children of ``s`` carry it: at the last internal level that
means ``k`` leaf children of color ``col``, higher up ``k`` children that
themselves satisfy ``G(., col)``.  ``G(root, col)`` is exactly the existence
of a ``col``-monochromatic k-branching subtree, and by pigeonhole on every
level it holds for some color once each node has ``c(k-1)+1`` children.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import Coloring, check_coloring


def required_branching(colors: int, k: int) -> int:
    """Branching that forces a monochromatic k-branching subtree for ``colors`` colors."""
    if colors < 1 or k < 1:
        raise ValueError("need colors >= 1 and k >= 1")
    return colors * (k - 1) + 1


class BranchingTree:
    """Rooted tree with every leaf at the same depth.

    Height 0 (a lone root that is its own leaf) is allowed as a degenerate case.
    """

    def __init__(self, children: Mapping[str, Sequence[str]], root: str):
        self.root = root
        self._children = {v: tuple(cs) for v, cs in children.items()}
        self._depth = {root: 0}
        self.nodes: list[str] = []
        queue = deque([root])
        while queue:
            v = queue.popleft()
            self.nodes.append(v)
            for c in self._children.get(v, ()):
                if c in self._depth:
                    raise ValueError(f"node {c!r} reached twice")
                self._depth[c] = self._depth[v] + 1
                queue.append(c)
        for v in self.nodes:
            self._children.setdefault(v, ())
        unreachable = set(self._children) - set(self._depth)
        if unreachable:
            raise ValueError(f"nodes not below the root: {sorted(unreachable)}")
        depths = {self._depth[v] for v in self.nodes if not self._children[v]}
        if len(depths) != 1:
            raise ValueError(f"leaves must share one depth, found {sorted(depths)}")
        self.height = depths.pop()

    @classmethod
    def complete(cls, branching: int, height: int, prefix: str = "r") -> "BranchingTree":
        """The ``branching``-ary tree of the given height; node ``r.i.j`` is child ``j`` of ``r.i``."""
        children: dict[str, list[str]] = {}
        level = [prefix]
        for _ in range(height):
            nxt = []
            for v in level:
                children[v] = [f"{v}.{i}" for i in range(branching)]
                nxt.extend(children[v])
            level = nxt
        return cls(children, prefix)

    def children(self, node: str) -> tuple[str, ...]:
        return self._children[node]

    def depth(self, node: str) -> int:
        return self._depth[node]

    def __contains__(self, node) -> bool:
        return node in self._depth

    @property
    def leaves(self) -> list[str]:
        return [v for v in self.nodes if not self._children[v]]

    def min_branching(self) -> int:
        return min(len(self._children[v]) for v in self.nodes if self._children[v])


@dataclass(frozen=True)
class MonoSubtreeCert:
    nodes: tuple[str, ...]
    color: int
    k: int


def rank_table(tree: BranchingTree, coloring: Coloring, k: int) -> dict[tuple[str, int], bool]:
    """``G(s, col)`` for every internal node ``s`` and every color used on the leaves."""
    chi = check_coloring(coloring, tree.leaves)
    colors = sorted(set(chi.values()))
    table: dict[tuple[str, int], bool] = {}
    for v in sorted(tree.nodes, key=tree.depth, reverse=True):
        kids = tree.children(v)
        if not kids:
            continue
        for col in colors:
            if tree.depth(v) == tree.height - 1:
                hits = sum(chi[c] == col for c in kids)
            else:
                hits = sum(table[c, col] for c in kids)
            table[v, col] = hits >= k
    return table


def mono_subtree(tree: BranchingTree, coloring: Coloring, k: int) -> MonoSubtreeCert | None:
    """Smallest color with ``G(root, col)``, and the subtree built from the first ``k`` qualifying children."""
    if k < 1:
        raise ValueError("k must be positive")
    chi = check_coloring(coloring, tree.leaves)
    if tree.height == 0:
        return MonoSubtreeCert((tree.root,), chi[tree.root], k)
    table = rank_table(tree, chi, k)
    color = next((col for col in sorted(set(chi.values())) if table[tree.root, col]), None)
    if color is None:
        return None

    def good(v: str) -> bool:
        return chi[v] == color if not tree.children(v) else table[v, color]

    chosen = [tree.root]
    frontier = [tree.root]
    while frontier:
        nxt = []
        for v in frontier:
            picked = [c for c in tree.children(v) if good(c)][:k]
            nxt.extend(c for c in picked if tree.children(c))
            chosen.extend(picked)
        frontier = nxt
    cert = MonoSubtreeCert(tuple(chosen), color, k)
    assert verify_mono_subtree(tree, chi, cert)
    return cert


def verify_mono_subtree(tree: BranchingTree, coloring: Coloring, cert: MonoSubtreeCert) -> bool:
    """Walk the certificate: a full-height k-branching subtree whose leaves all have its color."""
    S = set(cert.nodes)
    if len(S) != len(cert.nodes) or tree.root not in S:
        return False
    for v in S:
        if v not in tree:
            return False
        kids = [c for c in tree.children(v) if c in S]
        if tree.children(v):
            if len(kids) != cert.k:
                return False
        elif coloring[v] != cert.color:
            return False
    # downward closure: every certificate node hangs from a certificate node
    reached = {tree.root}
    stack = [tree.root]
    while stack:
        v = stack.pop()
        for c in tree.children(v):
            if c in S:
                reached.add(c)
                stack.append(c)
    return reached == S


def refutation_path(tree: BranchingTree, coloring: Coloring, k: int) -> list[str]:
    """Descend from a root where no color has ``G`` through children where still none does.

    Requires that no color satisfies ``G(root, .)``.  Each step exists
    whenever the node has at least ``required_branching`` children, so at
    that bound the path reaches the last internal level, where fewer than
    ``k`` leaves of each color is impossible.  Below the bound the path may
    stop early at a node all of whose children have some ``G``.
    """
    chi = check_coloring(coloring, tree.leaves)
    colors = sorted(set(chi.values()))
    if tree.height == 0:
        raise ValueError("a single leaf is always monochromatic")
    table = rank_table(tree, chi, k)
    if any(table[tree.root, col] for col in colors):
        raise ValueError("some color already has a monochromatic subtree")
    path = [tree.root]
    while tree.depth(path[-1]) < tree.height - 1:
        nxt = next(
            (c for c in tree.children(path[-1]) if not any(table[c, col] for col in colors)),
            None,
        )
        if nxt is None:
            break
        path.append(nxt)
    return path
