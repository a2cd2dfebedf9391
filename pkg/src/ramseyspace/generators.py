"""Seeded random spaces, profiles and colorings for tests, demos and the CLI."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .core import MetricSpace, UltrametricSpace, parse_rational, validate_metric
from .treespace import TreeSpace

MAX_POINTS = 10**4


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_tree_space(seed, count: int, palette: Iterable) -> tuple[TreeSpace, dict[str, str]]:
    """Random tree space with ``count`` leaves and internal values drawn from ``palette``.

    Each block of two or more points takes a random value, strictly below
    its parent's, and splits into at least two random sub-blocks; when no
    smaller value is left it splits into singletons.  Points ``p0 ..`` are
    shuffled onto the leaves so canonical order says nothing about the tree.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if count > MAX_POINTS:
        raise ValueError(f"count {count} exceeds {MAX_POINTS}")
    values = sorted({parse_rational(q) for q in palette}, reverse=True)
    if not values or values[-1] <= 0:
        raise ValueError("palette must be a nonempty set of positive rationals")
    rng = _rng(seed)
    points = [f"p{i}" for i in range(count)]
    rng.shuffle(points)
    parent: dict[str, str | None] = {}
    h: dict[str, Fraction] = {}
    leaf_map: dict[str, str] = {}
    counter = 0

    def node(p, val):
        nonlocal counter
        name = f"t{counter}"
        counter += 1
        parent[name] = p
        h[name] = val
        return name

    stack = [(None, points, values)]
    while stack:
        up, block, allowed = stack.pop()
        if len(block) == 1:
            leaf = node(up, Fraction(0))
            leaf_map[block[0]] = leaf
            continue
        v = rng.choice(allowed)
        me = node(up, v)
        smaller = [q for q in allowed if q < v]
        if not smaller:
            parts = [[p] for p in block]
        else:
            n_parts = rng.randint(2, len(block))
            while True:
                labels = [rng.randrange(n_parts) for _ in block]
                if len(set(labels)) > 1:
                    break
            groups: dict[int, list[str]] = {}
            for p, lab in zip(block, labels):
                groups.setdefault(lab, []).append(p)
            parts = [groups[k] for k in sorted(groups)]
        for part in reversed(parts):
            stack.append((me, part, smaller))
    return TreeSpace(parent, h), {p: leaf_map[p] for p in sorted(leaf_map, key=lambda s: int(s[1:]))}


def generate_random_ultrametric(seed, count: int, palette: Iterable) -> UltrametricSpace:
    """Leaf metric of :func:`random_tree_space`, points ``p0 .. p{count-1}`` in order."""
    tree, leaf_map = random_tree_space(seed, count, palette)
    names = list(leaf_map)
    matrix = [[tree.tree_metric(leaf_map[x], leaf_map[y]) for y in names] for x in names]
    # the tree metric is ultrametric by construction; only the metric axioms are re-checked
    space = validate_metric(matrix, names)
    return UltrametricSpace(space.points, space.dist)


def shortest_path_closure(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Floyd-Warshall; turns any positive symmetric matrix into a metric."""
    D = [[Fraction(v) for v in row] for row in matrix]
    n = len(D)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if D[i][k] + D[k][j] < D[i][j]:
                    D[i][j] = D[i][k] + D[k][j]
    return D


def random_metric(seed, count: int, values: Sequence = (1, 2, 3, 4)) -> MetricSpace:
    """Random symmetric matrix over ``values`` closed under shortest paths."""
    rng = _rng(seed)
    vals = [parse_rational(v) for v in values]
    M = [[Fraction(0)] * count for _ in range(count)]
    for i in range(count):
        for j in range(i + 1, count):
            M[i][j] = M[j][i] = rng.choice(vals)
    return validate_metric(shortest_path_closure(M), [f"x{i}" for i in range(count)])


def random_coloring(seed, points: Sequence[str], colors: int) -> dict[str, int]:
    rng = _rng(seed)
    return {p: rng.randrange(colors) for p in points}


def random_katetov_values(seed, space: MetricSpace, support: Sequence[str]) -> dict[str, Fraction]:
    """A random admissible profile on ``support``.

    Takes ``f(y) = min_z (d(y, z) + r_z)`` over random centers ``z`` with
    radii bumped until ``r_z + r_w >= d(z, w)``; such an ``f`` is 1-Lipschitz
    and ``f(x) + f(y) >= d(x, y)``, which is exactly admissibility.
    """
    rng = _rng(seed)
    centers = rng.sample(list(space.points), rng.randint(1, len(space)))
    radii: dict[str, Fraction] = {}
    for z in centers:
        r = Fraction(rng.randint(1, 8), rng.choice([1, 2, 4]))
        for w, rw in radii.items():
            r = max(r, space.d(z, w) - rw)
        radii[z] = r
    return {y: min(space.d(y, z) + r for z, r in radii.items()) for y in support}
