"""Brute-force reference implementations used only by the tests.

Nothing here calls into the search code it is checking: every answer comes
from enumerating definitions directly.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product

from ramseyspace import MetricSpace


def is_ultrametric_matrix(D) -> bool:
    n = len(D)
    return all(D[x][z] <= max(D[x][y], D[y][z]) for x in range(n) for y in range(n) for z in range(n))


def labelled_ultrametrics(n: int, palette):
    """Every ultrametric matrix on n labelled points with off-diagonal values in palette."""
    palette = [Fraction(q) for q in palette]

    def rec(D):
        m = len(D)
        if m == n:
            yield D
            return
        for row in product(palette, repeat=m):
            # a new point only adds triangles through itself
            if all(
                row[i] <= max(row[j], D[i][j]) and D[i][j] <= max(row[i], row[j])
                for i in range(m)
                for j in range(m)
                if i != j
            ):
                E = [list(r) + [row[i]] for i, r in enumerate(D)]
                E.append(list(row) + [Fraction(0)])
                yield from rec(E)

    yield from rec([[Fraction(0)]])


def iso_key(D) -> tuple:
    n = len(D)
    return min(tuple(D[p[i]][p[j]] for i in range(n) for j in range(i + 1, n)) for p in permutations(range(n)))


def ultrametrics_up_to_isometry(max_points: int, palette):
    """One representative matrix per isometry class, for 1..max_points points."""
    out = []
    for n in range(1, max_points + 1):
        seen = set()
        for D in labelled_ultrametrics(n, palette):
            key = iso_key(D)
            if key not in seen:
                seen.add(key)
                out.append(D)
    return out


def as_space(D, prefix="p") -> MetricSpace:
    pts = tuple(f"{prefix}{i}" for i in range(len(D)))
    return MetricSpace(pts, tuple(tuple(Fraction(v) for v in row) for row in D))


def all_scaled_copies(X, coloring, K):
    """Every (color, embedding, factor) with a monochromatic scaled copy, by trying all injections."""
    found = []
    kp = K.points
    for imgs in permutations(X.points, len(kp)):
        if len({coloring[p] for p in imgs}) != 1:
            continue
        if len(kp) == 1:
            found.append((coloring[imgs[0]], dict(zip(kp, imgs)), Fraction(1)))
            continue
        ratios = {X.d(imgs[i], imgs[j]) / K.d(kp[i], kp[j]) for i, j in combinations(range(len(kp)), 2)}
        if len(ratios) == 1:
            found.append((coloring[imgs[0]], dict(zip(kp, imgs)), ratios.pop()))
    return found


def k_subtrees(tree, v, k):
    """Every k-branching full-height subtree hanging from v, as a frozenset of nodes."""
    kids = tree.children(v)
    if not kids:
        yield frozenset([v])
        return
    for chosen in combinations(kids, k):
        for parts in product(*(list(k_subtrees(tree, c, k)) for c in chosen)):
            yield frozenset([v]).union(*parts)


def has_mono_subtree(tree, coloring, k, color) -> bool:
    return any(
        all(coloring[x] == color for x in S if not tree.children(x)) for S in k_subtrees(tree, tree.root, k)
    )


def tree_paths_meet(parent, x, y):
    """Deepest common element of the two root paths."""
    def path(v):
        out = []
        while v is not None:
            out.append(v)
            v = parent[v]
        return out[::-1]

    px, py = path(x), path(y)
    common = None
    for a, b in zip(px, py):
        if a != b:
            break
        common = a
    return common
