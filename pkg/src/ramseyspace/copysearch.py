"""Monochromatic scaled copies of a finite space inside a colored space.

Two searches live here.  :func:`oracle_find_copy` is exhaustive backtracking
and decides the question exactly.  :func:`greedy_find_copy` replays the
stage-by-stage construction that accumulates a distance profile ``(Y_n, f_n)``
and, in each color class in turn, tries to build a copy inside the sphere
set ``B(Y_n, f_n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Collection, Mapping, Sequence

from .core import Coloring, MetricSpace, ScaledCopyCert, color_classes, verify_scaled_copy
from .katetov import KatetovFunction, validate_katetov


@dataclass(frozen=True)
class FoundCopy:
    color: int
    cert: ScaledCopyCert


def ball_set(X: MetricSpace, f: KatetovFunction) -> list[str]:
    """``B(Y, f)``: the points at exact distance ``f(y)`` from every ``y`` in ``Y``.

    Empty ``Y`` gives every point.  Returned in canonical order.
    """
    return [p for p in X.points if all(X.d(p, y) == v for y, v in f.values.items())]


def candidate_scales(X: MetricSpace, K: MetricSpace, pool: Sequence[str] | None = None) -> list[Fraction]:
    """Every factor a copy could have: the first K-pair must land on some X-pair."""
    if len(K) < 2:
        return [Fraction(1)]
    base = K.dist[0][1]
    pool = X.points if pool is None else pool
    return sorted({X.d(p, q) / base for p, q in combinations(pool, 2)})


def _search_class(X: MetricSpace, K: MetricSpace, pool: list[str], scales: Collection[Fraction] | None):
    """Lexicographically first injection of K into ``pool`` with a uniform factor."""
    kpts = K.points
    m = len(kpts)
    img: list[str] = []
    used: set[str] = set()

    def extend(i: int, c: Fraction | None):
        if i == m:
            return dict(zip(kpts, img)), c
        for p in pool:
            if p in used:
                continue
            cc = c
            if i == 1:
                cc = X.d(img[0], p) / K.dist[0][1]
                if scales is not None and cc not in scales:
                    continue
            elif i > 1 and any(X.d(img[j], p) != cc * K.dist[j][i] for j in range(i)):
                continue
            img.append(p)
            used.add(p)
            found = extend(i + 1, cc)
            if found:
                return found
            img.pop()
            used.discard(p)
        return None

    return extend(0, None)


def oracle_find_copy(
    X: MetricSpace,
    coloring: Coloring,
    K: MetricSpace,
    scales: Collection | None = None,
) -> FoundCopy | None:
    """Exhaustively look for a monochromatic scaled copy of ``K`` in ``X``.

    Colors are tried in increasing order and, inside a color class,
    embeddings in lexicographic order of their image indices, so the answer
    is the least one in (color, embedding) order.  ``None`` means no color
    class holds a copy at any factor (or at any factor in ``scales``).
    """
    if len(K) > len(X):
        return None
    scale_set = None if scales is None else {Fraction(s) for s in scales}
    for color, pool in color_classes(coloring, X.points).items():
        if len(pool) < len(K):
            continue
        if len(K) == 1:
            if scale_set is not None and Fraction(1) not in scale_set:
                continue
            return FoundCopy(color, ScaledCopyCert({K.points[0]: pool[0]}, Fraction(1)))
        found = _search_class(X, K, pool, scale_set)
        if found:
            emb, c = found
            cert = ScaledCopyCert(emb, c)
            assert verify_scaled_copy(K, X, cert)
            return FoundCopy(color, cert)
    return None


@dataclass(frozen=True)
class Stage:
    """One color's attempt.

    ``support``/``values`` are ``(Y_n, f_n)`` on entry; ``partial_copy`` is
    the prefix ``z'_0 .. z'_{k-1}`` built before the search got stuck at
    index ``failed_at``.
    """

    stage: int
    support: tuple[str, ...]
    values: Mapping[str, Fraction]
    partial_copy: tuple[str, ...]
    scale: Fraction
    failed_at: int


@dataclass(frozen=True)
class Obstruction:
    """Every color failed.  ``support``/``values`` are the final accumulated profile."""

    stages: tuple[Stage, ...]
    support: tuple[str, ...]
    values: Mapping[str, Fraction]

    @property
    def stage(self) -> int:
        return self.stages[-1].stage if self.stages else 0

    @property
    def partial_copy(self) -> tuple[str, ...]:
        return self.stages[-1].partial_copy if self.stages else ()

    @property
    def scale(self) -> Fraction:
        return self.stages[-1].scale if self.stages else Fraction(1)

    def check(self, X: MetricSpace, coloring: Coloring, K: MetricSpace, enumeration: Sequence[str] | None = None):
        """Re-verify every stage invariant; raises ``AssertionError`` on failure."""
        order = list(enumeration) if enumeration is not None else list(K.points)
        validate_katetov(X, self.support, self.values)
        final = KatetovFunction(X, dict(self.values))
        final_ball = set(ball_set(X, final))
        classes = color_classes(coloring, X.points)
        for st in self.stages:
            f = validate_katetov(X, st.support, st.values)
            assert all(self.values[y] == v for y, v in st.values.items()), "f_n is not a restriction of f"
            ball = set(ball_set(X, f))
            assert final_ball <= ball, "B(Y, f) escapes B(Y_n, f_n)"
            cls = set(classes.get(st.stage, ()))
            for i, p in enumerate(st.partial_copy):
                assert p in ball and p in cls, f"z'_{i} outside B(Y_n, f_n) or its color class"
                for j in range(i):
                    want = st.scale * K.d(order[j], order[i])
                    assert X.d(st.partial_copy[j], p) == want, f"d(z'_{j}, z'_{i}) != c*d"
        return True


def _stage_scale(values: Mapping[str, Fraction], K: MetricSpace) -> Fraction:
    if not values:
        return Fraction(1)
    return min(values.values()) / (2 * max(Fraction(1), K.diameter))


def greedy_find_copy(
    X: MetricSpace,
    coloring: Coloring,
    K: MetricSpace,
    enumeration: Sequence[str] | None = None,
) -> FoundCopy | Obstruction:
    """Run the stage construction: one color per stage, no backtracking.

    At stage ``n`` the scale is ``c_n = min f_n / (2 max(1, diam K))`` (and
    1 while the profile is empty).  Points ``z'_i`` are taken greedily, first
    eligible in canonical order, from ``B(Y_n, f_n)`` within color ``n`` and
    at distance ``c_n d(z_j, z_i)`` from earlier picks.  When index ``k``
    cannot be filled, the picks join the support with
    ``f_{n+1}(z'_i) = c_n d(z_i, z_k)`` and the next color is tried.
    """
    order = list(enumeration) if enumeration is not None else list(K.points)
    if sorted(order, key=K.index) != list(K.points):
        raise ValueError("enumeration must list every point of K exactly once")
    classes = color_classes(coloring, X.points)
    n_colors = max(classes, default=-1) + 1
    values: dict[str, Fraction] = {}
    stages: list[Stage] = []
    for n in range(n_colors):
        f = validate_katetov(X, list(values), values)
        c = _stage_scale(values, K)
        ball = ball_set(X, f)
        members = set(classes.get(n, ()))
        eligible = [p for p in ball if p in members]
        picks: list[str] = []
        for i, z in enumerate(order):
            nxt = next(
                (
                    p
                    for p in eligible
                    if p not in picks and all(X.d(q, p) == c * K.d(order[j], z) for j, q in enumerate(picks))
                ),
                None,
            )
            if nxt is None:
                break
            picks.append(nxt)
        if len(picks) == len(order):
            cert = ScaledCopyCert(dict(zip(order, picks)), c)
            assert verify_scaled_copy(K, X, cert)
            return FoundCopy(n, cert)
        k = len(picks)
        stages.append(Stage(n, tuple(f.support), dict(f.values), tuple(picks), c, k))
        new_values = dict(values)
        for i, p in enumerate(picks):
            new_values[p] = c * K.d(order[i], order[k])
        old_min = min(values.values(), default=None)
        if old_min is not None:
            assert all(new_values[p] <= old_min for p in picks)
        # re-proves the isosceles argument: the enlarged profile stays admissible
        values = dict(validate_katetov(X, new_values, new_values).values)
    return Obstruction(tuple(stages), tuple(p for p in X.points if p in values), values)

