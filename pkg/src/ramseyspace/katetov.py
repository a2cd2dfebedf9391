"""One-point extensions of finite metric spaces.

A distance profile ``f`` on a support ``Y`` can be realized by a new point
exactly when it is *admissible*: for all ``x, y`` in ``Y``

    f(x) + f(y) >= d(x, y)   and   f(x) + d(x, y) >= f(y).

Such a profile is extended to the whole space by the shortest-path rule
``d(p, x) = min_y (d(x, y) + f(y))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import MetricSpace, UltrametricSpace, parse_rational, validate_metric


class KatetovViolation(ValueError):
    """Admissibility fails on the pair ``(x, y)``; ``inequality`` names which half."""

    def __init__(self, x: str, y: str, inequality: str, message: str):
        super().__init__(message)
        self.pair = (x, y)
        self.inequality = inequality


class RequestError(ValueError):
    def __init__(self, index: int, cause: Exception):
        super().__init__(f"request {index}: {cause}")
        self.index = index
        self.cause = cause


@dataclass(frozen=True)
class KatetovFunction:
    base: MetricSpace
    values: Mapping[str, Fraction]

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(p for p in self.base.points if p in self.values)

    def __call__(self, point: str) -> Fraction:
        return self.values[point]


def validate_katetov(base: MetricSpace, support: Iterable[str], values: Mapping) -> KatetovFunction:
    """Check a distance profile and return it as a :class:`KatetovFunction`.

    Pairs are scanned in canonical order; the first failing pair raises
    :class:`KatetovViolation`.
    """
    support = list(support)
    for y in support:
        if y not in base:
            raise ValueError(f"support point {y!r} is not in the base space")
    if len(set(support)) != len(support):
        raise ValueError("support lists a point twice")
    extra = set(values) - set(support)
    if extra:
        raise ValueError(f"values given outside the support: {sorted(extra)}")
    vals = {}
    for y in support:
        if y not in values:
            raise ValueError(f"no value for support point {y!r}")
        v = parse_rational(values[y])
        if v <= 0:
            raise ValueError(f"value at {y!r} must be positive, got {v}")
        vals[y] = v
    ordered = sorted(support, key=base.index)
    for x in ordered:
        for y in ordered:
            if x == y:
                continue
            d = base.d(x, y)
            if vals[x] + vals[y] < d:
                raise KatetovViolation(
                    x, y, "sum", f"f({x}) + f({y}) = {vals[x] + vals[y]} < {d} = d({x},{y})"
                )
            if vals[x] + d < vals[y]:
                raise KatetovViolation(
                    x, y, "difference", f"f({x}) + d({x},{y}) = {vals[x] + d} < {vals[y]} = f({y})"
                )
    return KatetovFunction(base, {y: vals[y] for y in ordered})


def realizers(f: KatetovFunction) -> list[str]:
    """Points of the base already at distance ``f(y)`` from every ``y`` in the support."""
    base = f.base
    return [p for p in base.points if all(base.d(p, y) == v for y, v in f.values.items())]


def extension_distances(f: KatetovFunction) -> dict[str, Fraction]:
    """Distance from a fresh realizing point to every base point."""
    if not f.values:
        raise ValueError("cannot extend over an empty support")
    base = f.base
    return {x: min(base.d(x, y) + v for y, v in f.values.items()) for x in base.points}


def extend_one_point(f: KatetovFunction, new_id: str, reuse_existing: bool = False) -> MetricSpace:
    """Add a point realizing ``f``.

    With ``reuse_existing`` the base is returned unchanged when some point
    already realizes ``f``.  The returned matrix is re-validated, so a broken
    profile can never produce a pseudometric.
    """
    base = f.base
    if new_id in base:
        raise ValueError(f"point {new_id!r} already exists")
    if not f.values:
        raise ValueError("cannot extend over an empty support")
    if reuse_existing and realizers(f):
        return base
    row = extension_distances(f)
    for y, v in f.values.items():
        # min over the support equals f(y) itself by admissibility
        assert row[y] == v, (y, row[y], v)
    points = list(base.points) + [new_id]
    matrix = [list(r) + [row[p]] for p, r in zip(base.points, base.dist)]
    matrix.append([row[p] for p in base.points] + [Fraction(0)])
    space = validate_metric(matrix, points)
    if isinstance(base, UltrametricSpace) and is_ultrametric_profile(f):
        return UltrametricSpace(space.points, space.dist)
    return space


def is_ultrametric_profile(f: KatetovFunction) -> bool:
    """Whether a full-support profile keeps an ultrametric base ultrametric.

    Needs ``f(x) <= max(f(y), d(x,y))`` and ``d(x,y) <= max(f(x), f(y))``
    for all support pairs; the second half is not implied by the first.
    """
    base = f.base
    if set(f.values) != set(base.points):
        return False
    vals = f.values
    for x in base.points:
        for y in base.points:
            if x == y:
                continue
            d = base.d(x, y)
            if vals[x] > max(vals[y], d) or d > max(vals[x], vals[y]):
                return False
    return True


def saturate(
    base: MetricSpace,
    requests: Sequence[tuple[Iterable[str], Mapping]],
    ids: Sequence[str],
) -> MetricSpace:
    """Realize each ``(support, values)`` request in order.

    A request already realized by an existing point adds nothing; its id
    then names that realizer, so later requests may still refer to it.
    """
    if len(requests) != len(ids):
        raise ValueError(f"{len(requests)} requests but {len(ids)} ids")
    space = base
    alias: dict[str, str] = {}
    for i, ((support, values), new_id) in enumerate(zip(requests, ids)):
        try:
            support = [alias.get(p, p) for p in support]
            values = {alias.get(p, p): v for p, v in values.items()}
            f = validate_katetov(space, support, values)
            if new_id in alias or new_id in space:
                raise ValueError(f"point {new_id!r} already exists")
            found = realizers(f)
            if found:
                alias[new_id] = found[0]
                continue
            space = extend_one_point(f, new_id)
        except ValueError as exc:
            raise RequestError(i, exc) from exc
    return space
