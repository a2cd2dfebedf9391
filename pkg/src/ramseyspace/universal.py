"""A finite universal leveled tree and monochromatic isometric copies in it.

The tree's root carries ``2 max(Q)``; below a node with value ``h`` there
are ``multiplicity`` children for every ``q`` in ``Q ∪ {0}`` with ``q < h``.
Nodes with value 0 are leaves, as are nodes at the height cap.  Any finite
ultrametric space with distances in ``Q`` lives on the leaves of such a tree,
and with enough multiplicity it survives every leaf coloring in one color.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .core import Coloring, MetricSpace, check_coloring, parse_rational, validate_ultrametric
from .treeramsey import BranchingTree, MonoSubtreeCert, mono_subtree, required_branching
from .treespace import RegularWitness, TreeSpace, regularize, ultrametric_to_tree

MAX_NODES = 10**7


def universal_size(palette: Iterable, height: int, multiplicity: int) -> int:
    """Node count of :func:`build_universal_tree` without building it."""
    Q = sorted({parse_rational(q) for q in palette})
    values = [Fraction(0)] + Q
    top = 2 * Q[-1]
    count = {v: 1 for v in values + [top]}
    for _ in range(height):
        count = {v: 1 + multiplicity * sum(count[q] for q in values if q < v) for v in values + [top]}
    return count[top]


class UniversalTree:
    def __init__(self, palette: Iterable, height: int, multiplicity: int):
        Q = sorted({parse_rational(q) for q in palette}, reverse=True)
        if not Q or Q[-1] <= 0:
            raise ValueError("palette must be a nonempty set of positive rationals")
        if height < 1 or multiplicity < 1:
            raise ValueError("height and multiplicity must be positive")
        size = universal_size(Q, height, multiplicity)
        if size > MAX_NODES:
            raise ValueError(f"universal tree would have {size} nodes (limit {MAX_NODES})")
        self.palette = tuple(Q)
        self.height = height
        self.multiplicity = multiplicity
        values = list(Q) + [Fraction(0)]
        root = "L0.0"
        parent: dict[str, str | None] = {root: None}
        h: dict[str, Fraction] = {root: 2 * Q[0]}
        level = [root]
        for depth in range(1, height + 1):
            nxt = []
            for v in level:
                for q in values:
                    if q < h[v]:
                        for _ in range(multiplicity):
                            name = f"L{depth}.{len(nxt)}"
                            parent[name] = v
                            h[name] = q
                            nxt.append(name)
            level = nxt
        self.tree = TreeSpace(parent, h)

    @property
    def root(self) -> str:
        return self.tree.root

    @property
    def leaves(self) -> tuple[str, ...]:
        return self.tree.leaves

    def check(self) -> bool:
        t = self.tree
        values = list(self.palette) + [Fraction(0)]
        if t.h[t.root] <= self.palette[0]:
            raise AssertionError("root value must exceed the palette")
        for v in t.nodes:
            if t.depth(v) >= self.height:
                continue
            kids = t.children(v)
            for q in values:
                if q < t.h[v] and sum(t.h[c] == q for c in kids) < self.multiplicity:
                    raise AssertionError(f"node {v!r} has too few children with h = {q}")
        return True


def build_universal_tree(palette: Iterable, height: int, multiplicity: int) -> UniversalTree:
    return UniversalTree(palette, height, multiplicity)


def match_subtree(M: UniversalTree, level_values) -> BranchingTree:
    """The part of ``M`` whose levels follow ``level_values`` and then drop to leaves.

    Its root is the root of ``M`` when ``level_values[0]`` is the root's own
    value, and otherwise the first child of the root carrying
    ``level_values[0]``.  Relative depth ``j`` then carries
    ``level_values[j]`` and depth ``len(level_values)`` holds value-0 leaves
    of ``M``, so two of its leaves are at distance ``level_values[j]`` when
    they meet at relative depth ``j``.
    """
    t = M.tree
    lv = [parse_rational(v) for v in level_values]
    if not lv:
        return BranchingTree({}, t.root)
    if any(a <= b for a, b in zip(lv, lv[1:])):
        raise ValueError("level values must strictly decrease")
    for v in lv:
        if v not in M.palette and v != t.h[t.root]:
            raise ValueError(f"level value {v} is not in the palette")
    if lv[0] == t.h[t.root]:
        top = t.root
    else:
        top = next(c for c in t.children(t.root) if t.h[c] == lv[0])
    if t.depth(top) + len(lv) > M.height:
        raise ValueError(
            f"universal tree of height {M.height} is too shallow for {len(lv)} levels below depth {t.depth(top)}"
        )
    children: dict[str, list[str]] = {}
    frontier = [top]
    for j in range(len(lv)):
        want = lv[j + 1] if j + 1 < len(lv) else Fraction(0)
        nxt = []
        for v in frontier:
            kids = [c for c in t.children(v) if t.h[c] == want]
            assert len(kids) == M.multiplicity, (v, len(kids))
            children[v] = kids
            nxt.extend(kids)
        frontier = nxt
    return BranchingTree(children, top)


def witness_branching(w: RegularWitness) -> int:
    """Largest number of children of any node of the witness tree."""
    return max((len(w.tree.children(v)) for v in w.tree.nodes), default=0)


def embed_witness(sub: BranchingTree, w: RegularWitness, allowed: Iterable[str] | None = None) -> dict[str, str]:
    """Order-embed the witness tree into ``sub`` level by level; returns point -> leaf of ``sub``.

    With ``allowed`` only those nodes of ``sub`` are used (a certificate's node set).
    """
    ok = set(sub.nodes if allowed is None else allowed)
    image = {w.tree.root: sub.root}
    stack = [w.tree.root]
    while stack:
        u = stack.pop()
        targets = [c for c in sub.children(image[u]) if c in ok]
        kids = w.tree.children(u)
        if len(kids) > len(targets):
            raise ValueError(f"witness node {u!r} needs {len(kids)} children, only {len(targets)} available")
        for c, target in zip(kids, targets):
            image[c] = target
            stack.append(c)
    return {x: image[leaf] for x, leaf in w.leaf_map.items()}


@dataclass(frozen=True)
class IsometricCopy:
    color: int
    embedding: Mapping[str, str]
    subtree: MonoSubtreeCert | None = None


@dataclass(frozen=True)
class NoCopy:
    """No monochromatic copy; ``required`` is the multiplicity that would have forced one."""

    k: int
    colors: int
    multiplicity: int
    required: int


def verify_isometric_copy(M: UniversalTree, coloring: Coloring, X: MetricSpace, found: IsometricCopy) -> bool:
    emb = found.embedding
    if set(emb) != set(X.points) or len(set(emb.values())) != len(emb):
        return False
    if any(coloring[v] != found.color for v in emb.values()):
        return False
    return all(M.tree.tree_metric(emb[x], emb[y]) == X.d(x, y) for x, y in combinations(X.points, 2))


def find_mono_isometric_copy(M: UniversalTree, coloring: Coloring, X: MetricSpace) -> IsometricCopy | NoCopy:
    """Find an exact isometric copy of ``X`` among leaves of one color.

    Converts ``X`` to a regular witness, cuts out the part of ``M`` that
    follows its level values, extracts a monochromatic subtree branching as
    much as the witness does, and maps the witness into it level by level.
    """
    X = validate_ultrametric(X)
    outside = [d for d in X.distance_set() if d not in M.palette]
    if outside:
        raise ValueError(f"distances {outside} are not in the palette")
    if len(X) == 1:
        colored = [v for v in M.leaves if v in coloring]
        if not colored:
            raise ValueError("no leaf of the universal tree is colored")
        chi = check_coloring(coloring, colored)
        color = min(chi.values())
        leaf = next(v for v in colored if chi[v] == color)
        return IsometricCopy(color, {X.points[0]: leaf})
    w = regularize(ultrametric_to_tree(X))
    sub = match_subtree(M, w.level_values)
    chi = check_coloring(coloring, sub.leaves)
    k = witness_branching(w)
    cert = mono_subtree(sub, chi, k)
    if cert is None:
        colors = len(set(chi.values()))
        return NoCopy(k, colors, M.multiplicity, required_branching(colors, k))
    found = IsometricCopy(cert.color, embed_witness(sub, w, cert.nodes), cert)
    if not verify_isometric_copy(M, coloring, X, found):
        raise AssertionError("embedding failed verification")
    return found


def auto_multiplicity(X: MetricSpace, colors: int) -> int:
    """Multiplicity that guarantees a copy of ``X`` for every ``colors``-coloring."""
    X = validate_ultrametric(X)
    if len(X) == 1:
        return 1
    k = witness_branching(regularize(ultrametric_to_tree(X)))
    return required_branching(colors, k)


def required_height(X: MetricSpace, palette: Iterable) -> int:
    """Smallest height at which :func:`match_subtree` fits the levels of ``X``."""
    levels = X.distance_set()
    top = 2 * max(parse_rational(q) for q in palette)
    if not levels:
        return 1
    return len(levels) + (0 if levels[0] == top else 1)


def region_colorings(sub: BranchingTree, colors: int) -> Iterator[dict[str, int]]:
    """Every coloring of the leaves of ``sub``."""
    leaves = sub.leaves
    for combo in itertools.product(range(colors), repeat=len(leaves)):
        yield dict(zip(leaves, combo))


def random_coloring(M: UniversalTree, colors: int, rng: random.Random) -> dict[str, int]:
    return {v: rng.randrange(colors) for v in M.leaves}
