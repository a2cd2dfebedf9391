"""Rational tree spaces and the conversion of finite ultrametrics into them.

A tree space is a rooted tree with a level value ``h`` that never increases
going away from the root.  Two distinct leaves are at distance ``h`` of their
meet (deepest common ancestor), which always gives an ultrametric.  The
converse direction, :func:`ultrametric_to_tree` followed by
:func:`regularize`, realizes any finite rational ultrametric on the leaves of
a uniform-height tree whose ``h`` is constant on each level.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .core import MetricSpace, UltrametricSpace, parse_rational, validate_metric, validate_ultrametric


class TreeSpace:
    """Finite rooted tree with level values.

    ``parent`` maps every node to its parent (``None`` for the single root);
    the key order is the canonical node order and children are listed in it.
    ``h`` must be nonnegative, nonincreasing from parent to child, and
    positive at every node with two or more children (those are the only
    nodes that can be meets of distinct leaves).
    """

    def __init__(self, parent: Mapping[str, str | None], h: Mapping[str, object]):
        self.nodes: tuple[str, ...] = tuple(parent)
        self._parent = dict(parent)
        self.h: dict[str, Fraction] = {}
        for v in self.nodes:
            if v not in h:
                raise ValueError(f"node {v!r} has no h value")
            self.h[v] = parse_rational(h[v])
        roots = [v for v in self.nodes if self._parent[v] is None]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        self.root = roots[0]
        self._children: dict[str, list[str]] = {v: [] for v in self.nodes}
        for v in self.nodes:
            p = self._parent[v]
            if p is not None:
                if p not in self._children:
                    raise ValueError(f"node {v!r} has unknown parent {p!r}")
                self._children[p].append(v)
        self._depth: dict[str, int] = {self.root: 0}
        stack = [self.root]
        while stack:
            v = stack.pop()
            for c in self._children[v]:
                self._depth[c] = self._depth[v] + 1
                stack.append(c)
        if len(self._depth) != len(self.nodes):
            raise ValueError("parent map has a cycle")
        for v in self.nodes:
            if self.h[v] < 0:
                raise ValueError(f"h({v}) = {self.h[v]} is negative")
            p = self._parent[v]
            if p is not None and self.h[v] > self.h[p]:
                raise ValueError(f"h increases from {p!r} ({self.h[p]}) to child {v!r} ({self.h[v]})")
            if len(self._children[v]) >= 2 and self.h[v] <= 0:
                raise ValueError(f"branching node {v!r} needs h > 0")

    def __contains__(self, node) -> bool:
        return node in self._parent

    def __len__(self) -> int:
        return len(self.nodes)

    def _check(self, node: str) -> None:
        if node not in self._parent:
            raise KeyError(f"unknown node {node!r}")

    def parent(self, node: str) -> str | None:
        self._check(node)
        return self._parent[node]

    def children(self, node: str) -> tuple[str, ...]:
        self._check(node)
        return tuple(self._children[node])

    def depth(self, node: str) -> int:
        self._check(node)
        return self._depth[node]

    @property
    def height(self) -> int:
        return max(self._depth.values())

    @property
    def leaves(self) -> tuple[str, ...]:
        return tuple(v for v in self.nodes if not self._children[v])

    def is_leaf(self, node: str) -> bool:
        self._check(node)
        return not self._children[node]

    def path(self, node: str) -> list[str]:
        """Root-to-node path."""
        self._check(node)
        out = [node]
        while self._parent[out[-1]] is not None:
            out.append(self._parent[out[-1]])
        return out[::-1]

    def parent_map(self) -> dict[str, str | None]:
        return dict(self._parent)

    def meet(self, x: str, y: str) -> str:
        """Deepest common ancestor; ``meet(x, x) == x``."""
        self._check(x)
        self._check(y)
        while self._depth[x] > self._depth[y]:
            x = self._parent[x]
        while self._depth[y] > self._depth[x]:
            y = self._parent[y]
        while x != y:
            x, y = self._parent[x], self._parent[y]
        return x

    def tree_metric(self, x: str, y: str) -> Fraction:
        for v in (x, y):
            if not self.is_leaf(v):
                raise ValueError(f"{v!r} is not a leaf")
        if x == y:
            return Fraction(0)
        # h never increases downwards, so the minimum over common ancestors sits at the meet
        return self.h[self.meet(x, y)]

    def leaf_space(self, leaves: Sequence[str] | None = None) -> UltrametricSpace:
        leaves = list(self.leaves if leaves is None else leaves)
        matrix = [[self.tree_metric(x, y) for y in leaves] for x in leaves]
        return validate_ultrametric(validate_metric(matrix, leaves))


@dataclass(frozen=True)
class BranchWitness:
    """Tree whose leaf metric reproduces ``space`` through ``leaf_map``."""

    space: MetricSpace
    tree: TreeSpace
    leaf_map: Mapping[str, str]

    def check(self) -> bool:
        images = list(self.leaf_map.values())
        if set(self.leaf_map) != set(self.space.points):
            raise AssertionError("leaf_map must cover exactly the points of the space")
        if len(set(images)) != len(images):
            raise AssertionError("leaf_map is not injective")
        for x, y in combinations(self.space.points, 2):
            got = self.tree.tree_metric(self.leaf_map[x], self.leaf_map[y])
            if got != self.space.d(x, y):
                raise AssertionError(f"tree distance {got} != {self.space.d(x, y)} for ({x}, {y})")
        return True


@dataclass(frozen=True)
class RegularWitness(BranchWitness):
    """Branch witness on a uniform-height tree with ``h`` constant per level.

    Nodes at depth ``j < n`` carry ``level_values[j]``; the mapped leaves sit
    at depth ``n = len(level_values)`` and carry 0.
    """

    level_values: tuple[Fraction, ...] = ()

    def check(self) -> bool:
        super().check()
        lv = self.level_values
        n = len(lv)
        if any(a <= b for a, b in zip(lv, lv[1:])):
            raise AssertionError("level values must strictly decrease")
        for v in self.tree.nodes:
            d = self.tree.depth(v)
            want = lv[d] if d < n else Fraction(0)
            if d > n or self.tree.h[v] != want:
                raise AssertionError(f"node {v!r} at depth {d} has h = {self.tree.h[v]}, level wants {want}")
        for v in self.tree.leaves:
            if self.tree.depth(v) != n:
                raise AssertionError(f"leaf {v!r} at depth {self.tree.depth(v)}, expected {n}")
        return True


def below_order(X: MetricSpace, x: str, y: str) -> bool:
    """``x <=_0 y``: every other point is at least as far from ``x`` as from ``y``."""
    return all(X.d(x, z) >= X.d(y, z) for z in X.points if z != x)


def _namer(taken: Iterable[str], prefix: str = "n"):
    taken = set(taken)
    while any(t.startswith(prefix) for t in taken):
        prefix = "_" + prefix
    count = 0

    def fresh() -> str:
        nonlocal count
        count += 1
        return f"{prefix}{count - 1}"

    return fresh


def _ancestors(parent: dict, v: str) -> list[str]:
    out = [v]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out


def _meet(parent: dict, x: str, y: str) -> str | None:
    above_x = set(_ancestors(parent, x))
    for v in _ancestors(parent, y):
        if v in above_x:
            return v
    return None


def _child_towards(parent: dict, top: str | None, v: str) -> str:
    path = _ancestors(parent, v)
    if top is None:
        return path[-1]
    return path[path.index(top) - 1]


def _order_tree(parent: dict, h: dict, leaf_key) -> TreeSpace:
    """Rebuild with nodes in preorder, children sorted by their least leaf key."""
    children: dict[str, list[str]] = {v: [] for v in parent}
    root = None
    for v, p in parent.items():
        if p is None:
            root = v
        else:
            children[p].append(v)
    key: dict[str, tuple] = {}

    def least(v):
        if v not in key:
            key[v] = leaf_key(v) if not children[v] else min(least(c) for c in children[v])
        return key[v]

    order: list[str] = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(sorted(children[v], key=least, reverse=True))
    return TreeSpace({v: parent[v] for v in order}, {v: h[v] for v in order})


def ultrametric_to_tree(X: MetricSpace, trace: list | None = None) -> BranchWitness:
    """Represent a finite rational ultrametric space on the leaves of a tree space.

    Orders the points by ``<=_0``, breaking ties inside each equivalence
    class by canonical order; sets ``h(s)`` to the largest distance from
    ``s`` to a point above it; then repeatedly repairs the incomparable pair
    with the smallest distance whose tree distance is still too big by adding
    a node between their meet and the two branches.  Going up in distance
    keeps every earlier repair node at or below the current value.  Finally every point
    gets a leaf of its own and edges between equal-``h`` internal nodes are
    contracted.  The result is checked before it is returned.

    If ``trace`` is a list, one ``(a, b, rho)`` entry is appended per repair.
    """
    X = validate_ultrametric(X)
    pts = list(X.points)
    idx = {p: i for i, p in enumerate(pts)}
    le0 = {(x, y): below_order(X, x, y) for x in pts for y in pts}

    def le(a: str, b: str) -> bool:
        if a == b:
            return True
        if le0[a, b] and le0[b, a]:
            return idx[a] < idx[b]
        return le0[a, b]

    parent: dict[str, str | None] = {}
    for y in pts:
        below = [a for a in pts if a != y and le(a, y)]
        for a, b in combinations(below, 2):
            if not (le(a, b) or le(b, a)):
                raise AssertionError(f"predecessors {a}, {b} of {y} are incomparable")
        top = [a for a in below if all(le(b, a) for b in below)]
        parent[y] = top[0] if top else None
    h: dict[str, Fraction] = {s: max(X.d(s, t) for t in pts if le(s, t)) for s in pts}

    def tree_dist(x: str, y: str) -> Fraction | None:
        m = _meet(parent, x, y)
        return None if m is None else h[m]

    fresh = _namer(pts, "c")
    pairs = list(combinations(pts, 2))
    for _ in range(len(pairs) + 1):
        bad = []
        for a, b in pairs:
            rho = X.d(a, b)
            m = _meet(parent, a, b)
            d = None if m is None else h[m]
            if d is not None and d < rho:
                raise AssertionError(f"tree distance {d} < {rho} for ({a}, {b})")
            if m in (a, b):
                if d != rho:
                    raise AssertionError(f"comparable pair ({a}, {b}) has tree distance {d} != {rho}")
                continue
            if d is None or rho < d:
                bad.append((rho, idx[a], idx[b], a, b))
        if not bad:
            break
        _, _, _, a, b = min(bad)
        rho = X.d(a, b)
        m = _meet(parent, a, b)
        ca, cb = _child_towards(parent, m, a), _child_towards(parent, m, b)
        p = fresh()
        parent[p] = m
        parent[ca] = p
        parent[cb] = p
        h[p] = rho
        if (m is not None and h[m] < rho) or h[ca] > rho or h[cb] > rho:
            raise AssertionError(f"repair node for ({a}, {b}) breaks monotonicity of h")
        if trace is not None:
            trace.append((a, b, rho))
    else:
        raise AssertionError("repair loop did not terminate within the number of pairs")

    # give every point its own leaf; a point with descendants leaves an anonymous copy behind
    has_children = {v for v in parent.values() if v is not None}
    anon = _namer(list(parent), "n")
    rename = {}
    for x in pts:
        if x in has_children:
            rename[x] = anon()
    tree_parent: dict[str, str | None] = {}
    tree_h: dict[str, Fraction] = {}
    for v, p in parent.items():
        tree_parent[rename.get(v, v)] = rename.get(p, p) if p is not None else None
        tree_h[rename.get(v, v)] = h[v]
    for x, inner in rename.items():
        tree_parent[x] = inner
        tree_h[x] = Fraction(0)
    _contract_equal_levels(tree_parent, tree_h)

    leaf_key = {x: (idx[x],) for x in pts}
    tree = _order_tree(tree_parent, tree_h, lambda v: leaf_key.get(v, (len(pts), v)))
    witness = BranchWitness(X, tree, {x: x for x in pts})
    witness.check()
    return witness


def _contract_equal_levels(parent: dict, h: dict) -> None:
    """Merge internal nodes into a parent with the same ``h``; meets keep their values."""
    changed = True
    while changed:
        changed = False
        kids: dict[str, list[str]] = {}
        for v, p in parent.items():
            if p is not None:
                kids.setdefault(p, []).append(v)
        for v, p in list(parent.items()):
            if p is not None and v in kids and h[v] == h[p]:
                for c in kids[v]:
                    parent[c] = p
                del parent[v], h[v]
                changed = True
                break


def _prune(parent: dict, h: dict, keep_leaves: set) -> None:
    """Drop unmapped leaves and contract unary internal nodes (metric on kept leaves unchanged)."""
    changed = True
    while changed:
        changed = False
        kids: dict[str, list[str]] = {v: [] for v in parent}
        for v, p in parent.items():
            if p is not None:
                kids[p].append(v)
        for v in list(parent):
            if not kids[v] and v not in keep_leaves:
                del parent[v], h[v]
                changed = True
                break
            if len(kids[v]) == 1 and v not in keep_leaves:
                (c,) = kids[v]
                parent[c] = parent[v]
                del parent[v], h[v]
                changed = True
                break


def regularize(w: BranchWitness) -> RegularWitness:
    """Pad a branch witness to a tree of uniform height with level-constant ``h``.

    Level ``j`` carries the ``j``-th largest distance of the space and every
    mapped leaf ends at depth equal to the number of distinct distances.
    Unmapped leaves, unary nodes and equal-``h`` edges are removed first.
    """
    space = w.space
    levels = tuple(space.distance_set())
    n = len(levels)
    level_of = {v: j for j, v in enumerate(levels)}
    parent = w.tree.parent_map()
    h = dict(w.tree.h)
    leaves = set(w.leaf_map.values())
    _prune(parent, h, leaves)
    _contract_equal_levels(parent, h)
    kids: dict[str, list[str]] = {v: [] for v in parent}
    for v, p in parent.items():
        if p is not None:
            kids[p].append(v)

    fresh = _namer(list(parent), "r")
    new_parent: dict[str, str | None] = {}
    new_h: dict[str, Fraction] = {}

    def target(v: str) -> int:
        if not kids[v]:
            return n
        if h[v] not in level_of:
            raise AssertionError(f"internal node {v!r} has h = {h[v]} outside the distance set")
        return level_of[h[v]]

    root = next(v for v, p in parent.items() if p is None)
    if kids[root] and target(root) != 0:
        raise AssertionError("root value is not the diameter")
    stack = [root]
    new_parent[root] = None
    new_h[root] = levels[0] if kids[root] else Fraction(0)
    while stack:
        u = stack.pop()
        for v in kids[u]:
            top = u
            lo, hi = target(u), target(v)
            if hi <= lo:
                raise AssertionError(f"edge {u!r} -> {v!r} does not descend a level")
            for depth in range(lo + 1, hi):
                pad = fresh()
                new_parent[pad] = top
                new_h[pad] = levels[depth]
                top = pad
            new_parent[v] = top
            new_h[v] = levels[hi] if hi < n else Fraction(0)
            stack.append(v)
    inverse = {leaf: x for x, leaf in w.leaf_map.items()}
    leaf_key = lambda v: (space.index(inverse[v]),) if v in inverse else (len(space), v)  # noqa: E731
    tree = _order_tree(new_parent, new_h, leaf_key)
    out = RegularWitness(space, tree, dict(w.leaf_map), levels)
    out.check()
    return out


def tree_to_space(tree: TreeSpace, leaf_map: Mapping[str, str] | None = None) -> MetricSpace:
    """Leaf metric, on the mapped points when ``leaf_map`` is given."""
    if leaf_map is None:
        return tree.leaf_space()
    names = list(leaf_map)
    matrix = [[tree.tree_metric(leaf_map[x], leaf_map[y]) for y in names] for x in names]
    return validate_ultrametric(validate_metric(matrix, names))
