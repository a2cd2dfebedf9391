"""Exact finite metric and ultrametric spaces.

All distances are :class:`fractions.Fraction`; nothing in this package ever
touches a float.  Points are opaque strings and the order in which they are
listed is the canonical order used for every tie-break.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

Rational = Fraction
Coloring = Mapping[str, int]

_INT_RE = re.compile(r"^[+-]?\d+$")
_FRAC_RE = re.compile(r"^([+-]?\d+)/(\d+)$")


def parse_rational(token) -> Fraction:
    """Parse an integer literal or a ``"p/q"`` string in lowest terms.

    Python ints and Fractions pass through.  Floats, decimals and anything
    else are rejected, since they cannot be read exactly.
    """
    if isinstance(token, bool):
        raise ValueError(f"not a rational: {token!r}")
    if isinstance(token, Fraction):
        return token
    if isinstance(token, int):
        return Fraction(token)
    if not isinstance(token, str):
        raise ValueError(f"not a rational: {token!r}")
    s = token.strip()
    if _INT_RE.match(s):
        return Fraction(int(s))
    m = _FRAC_RE.match(s)
    if not m:
        raise ValueError(f"not a rational: {token!r}")
    num, den = int(m.group(1)), int(m.group(2))
    if den == 0:
        raise ValueError(f"zero denominator: {token!r}")
    value = Fraction(num, den)
    if value.numerator != num or value.denominator != den:
        raise ValueError(f"not in lowest terms: {token!r}")
    return value


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Violation:
    """First broken axiom of a candidate distance matrix.

    ``witness`` holds point indices (pair or triple) in canonical order.
    """

    axiom: str
    witness: tuple[int, ...]
    message: str


class InvalidSpace(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(violation.message)
        self.violation = violation


class NotUltrametric(InvalidSpace):
    pass


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """A validated finite metric space.

    Build instances with :func:`validate_metric` (or :meth:`from_function`);
    the constructor itself trusts its input.
    """

    points: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point) -> bool:
        return point in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricSpace):
            return NotImplemented
        return self.points == other.points and self.dist == other.dist

    def __hash__(self) -> int:
        return hash((self.points, self.dist))

    def index(self, point: str) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise KeyError(f"unknown point {point!r}") from None

    def d(self, x: str, y: str) -> Fraction:
        return self.dist[self.index(x)][self.index(y)]

    @property
    def diameter(self) -> Fraction:
        return max((v for row in self.dist for v in row), default=Fraction(0))

    def distance_set(self) -> list[Fraction]:
        """Distinct nonzero distances in decreasing order."""
        return sorted({v for row in self.dist for v in row if v}, reverse=True)

    def restrict(self, subset: Iterable[str]) -> "MetricSpace":
        keep = set(subset)
        pts = tuple(p for p in self.points if p in keep)
        if len(pts) != len(keep):
            raise KeyError(f"unknown points {sorted(keep - set(pts))}")
        idx = [self.index(p) for p in pts]
        dist = tuple(tuple(self.dist[i][j] for j in idx) for i in idx)
        return type(self)(pts, dist)

    @classmethod
    def from_function(cls, points: Sequence[str], d) -> "MetricSpace":
        pts = list(points)
        matrix = [[Fraction(0) if p == q else Fraction(d(p, q)) for q in pts] for p in pts]
        space = validate_metric(matrix, pts)
        return space if cls is MetricSpace else validate_ultrametric(space)


class UltrametricSpace(MetricSpace):
    """A metric space that also satisfies the strong triangle inequality."""


def _default_points(n: int) -> list[str]:
    return [f"p{i}" for i in range(n)]


def find_metric_violation(matrix: Sequence[Sequence], points: Sequence[str] | None = None) -> Violation | None:
    """Return the first metric-axiom violation, or ``None``.

    Checks run in this order: shape, then pairs ``(i, j)`` in lexicographic
    order (diagonal, positivity, symmetry), then ordered triples
    ``(x, y, z)`` of distinct indices for ``d(x,z) <= d(x,y) + d(y,z)``.
    """
    n = len(matrix)
    if n == 0:
        return Violation("nonempty", (), "empty point set")
    for i, row in enumerate(matrix):
        if len(row) != n:
            return Violation("square", (i,), f"row {i} has length {len(row)}, expected {n}")
    if points is not None and len(points) != n:
        return Violation("square", (), f"{len(points)} point names for a {n}x{n} matrix")
    names = list(points) if points is not None else _default_points(n)
    for i in range(n):
        for j in range(n):
            v = matrix[i][j]
            if i == j:
                if v != 0:
                    return Violation("zero_diagonal", (i,), f"d({names[i]},{names[i]}) = {v} != 0")
                continue
            if v <= 0:
                return Violation(
                    "positivity", (i, j), f"d({names[i]},{names[j]}) = {v} must be > 0 for distinct points"
                )
            if v != matrix[j][i]:
                return Violation(
                    "symmetry", (i, j), f"d({names[i]},{names[j]}) = {v} != {matrix[j][i]} = d({names[j]},{names[i]})"
                )
    for x in range(n):
        for y in range(n):
            if y == x:
                continue
            for z in range(n):
                if z == x or z == y:
                    continue
                if matrix[x][z] > matrix[x][y] + matrix[y][z]:
                    return Violation(
                        "triangle",
                        (x, y, z),
                        f"d({names[x]},{names[z]}) = {matrix[x][z]} > "
                        f"d({names[x]},{names[y]}) + d({names[y]},{names[z]}) = {matrix[x][y] + matrix[y][z]}",
                    )
    return None


def validate_metric(matrix: Sequence[Sequence], points: Sequence[str] | None = None) -> MetricSpace:
    """Validate a square matrix of rationals and wrap it as a :class:`MetricSpace`.

    Raises :class:`InvalidSpace` carrying the first :class:`Violation`.
    """
    rows = [[parse_rational(v) for v in row] for row in matrix]
    names = list(points) if points is not None else _default_points(len(rows))
    if len(set(names)) != len(names):
        raise InvalidSpace(Violation("distinct_points", (), "duplicate point identifiers"))
    violation = find_metric_violation(rows, names)
    if violation is not None:
        raise InvalidSpace(violation)
    return MetricSpace(tuple(names), tuple(tuple(r) for r in rows))


def find_ultrametric_violation(space: MetricSpace) -> tuple[str, str, str] | None:
    """Lexicographically first ordered triple with ``d(x,z) > max(d(x,y), d(y,z))``."""
    D, n = space.dist, len(space)
    for x in range(n):
        for y in range(n):
            if y == x:
                continue
            for z in range(n):
                if z == x or z == y:
                    continue
                if D[x][z] > max(D[x][y], D[y][z]):
                    return space.points[x], space.points[y], space.points[z]
    return None


def validate_ultrametric(space: MetricSpace) -> UltrametricSpace:
    if isinstance(space, UltrametricSpace):
        return space
    triple = find_ultrametric_violation(space)
    if triple is not None:
        x, y, z = triple
        i, j, k = (space.index(p) for p in triple)
        raise NotUltrametric(
            Violation(
                "strong_triangle",
                (i, j, k),
                f"d({x},{z}) = {space.d(x, z)} > max(d({x},{y}), d({y},{z})) = "
                f"{max(space.d(x, y), space.d(y, z))}",
            )
        )
    return UltrametricSpace(space.points, space.dist)


def isosceles_witness(space: MetricSpace, triple: Sequence[str]) -> tuple[tuple[str, str], str]:
    """Split a triangle into its base pair and apex.

    Returns ``((a, b), c)`` with ``d(a,b) <= d(a,c) == d(b,c)``.  Bases are
    tried in canonical order, so an equilateral triangle gets the first two
    of its points as base.  Raises :class:`NotUltrametric` if the triangle
    has no such split, which can only happen outside an ultrametric space.
    """
    if len(set(triple)) != 3:
        raise ValueError(f"need three distinct points, got {tuple(triple)}")
    p0, p1, p2 = sorted(triple, key=space.index)
    for (a, b), c in (((p0, p1), p2), ((p0, p2), p1), ((p1, p2), p0)):
        if space.d(a, b) <= space.d(a, c) == space.d(b, c):
            return (a, b), c
    # no base fits: the longest side beats both others, so the triple breaks
    # the strong triangle inequality with that side's endpoints outermost
    sides = {(p0, p2, p1): space.d(p0, p2), (p0, p1, p2): space.d(p0, p1), (p1, p2, p0): space.d(p1, p2)}
    x, z, y = max(sides, key=sides.get)
    raise NotUltrametric(
        Violation(
            "strong_triangle",
            tuple(space.index(p) for p in (x, y, z)),
            f"triangle {p0},{p1},{p2} is not isosceles with a short base: "
            f"d({x},{z}) = {space.d(x, z)} > max(d({x},{y}), d({y},{z}))",
        )
    )


@dataclass(frozen=True)
class ScaledCopyCert:
    """An embedding of K into X that multiplies every distance by ``factor``."""

    embedding: Mapping[str, str]
    factor: Fraction


def verify_scaled_copy(K: MetricSpace, X: MetricSpace, cert: ScaledCopyCert) -> bool:
    emb = cert.embedding
    if cert.factor <= 0:
        raise ValueError(f"scale factor must be positive, got {cert.factor}")
    if set(emb) != set(K.points):
        raise ValueError("embedding must be defined on exactly the points of K")
    if len(set(emb.values())) != len(emb):
        raise ValueError("embedding is not injective")
    for v in emb.values():
        if v not in X:
            raise ValueError(f"image point {v!r} is not in X")
    c = Fraction(cert.factor)
    return all(X.d(emb[x], emb[y]) == c * K.d(x, y) for x, y in combinations(K.points, 2))


def scale_space(K: MetricSpace, c) -> MetricSpace:
    c = parse_rational(c)
    if c <= 0:
        raise ValueError(f"scale factor must be positive, got {c}")
    dist = tuple(tuple(c * v for v in row) for row in K.dist)
    return type(K)(K.points, dist)


def check_coloring(coloring: Coloring, points: Iterable[str]) -> dict[str, int]:
    """Restrict ``coloring`` to ``points``, insisting it is total there."""
    out = {}
    for p in points:
        if p not in coloring:
            raise ValueError(f"point {p!r} has no color")
        col = coloring[p]
        if isinstance(col, bool) or not isinstance(col, int) or col < 0:
            raise ValueError(f"color of {p!r} must be a nonnegative integer, got {col!r}")
        out[p] = col
    return out


def color_classes(coloring: Coloring, points: Sequence[str]) -> dict[int, list[str]]:
    """Color -> points of that color, each list in the given order."""
    classes: dict[int, list[str]] = {}
    for p, col in check_coloring(coloring, points).items():
        classes.setdefault(col, []).append(p)
    return dict(sorted(classes.items()))


def canonical_form(space: MetricSpace) -> tuple:
    """Isometry-invariant key: lexicographically least upper triangle over relabelings.

    Exponential in the number of points; meant for enumerating small spaces.
    """
    n = len(space)
    D = space.dist
    best = None
    for perm in permutations(range(n)):
        key = tuple(D[perm[i]][perm[j]] for i in range(n) for j in range(i + 1, n))
        if best is None or key < best:
            best = key
    return (n, best)
