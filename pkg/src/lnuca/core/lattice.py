"""Points and finite subsets of Z^d, as tuples and sorted tuples."""

from __future__ import annotations

import itertools
from typing import Iterable

Point = tuple[int, ...]


def add(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def neg(a: Point) -> Point:
    return tuple(-x for x in a)


def origin(d: int) -> Point:
    return (0,) * d


def norm_inf(a: Point) -> int:
    return max((abs(x) for x in a), default=0)


def minkowski(a: Iterable[Point], b: Iterable[Point]) -> tuple[Point, ...]:
    b = list(b)
    return tuple(sorted({add(x, y) for x in a for y in b}))


def minkowski_power(m: Iterable[Point], n: int, d: int) -> tuple[Point, ...]:
    m = tuple(m)
    out: tuple[Point, ...] = (origin(d),)
    for _ in range(n):
        out = minkowski(out, m)
    return out


def symmetric_hull(points: Iterable[Point], d: int) -> tuple[Point, ...]:
    """Smallest set containing the points, their negatives and the origin."""
    s = {origin(d)}
    for p in points:
        s.add(tuple(p))
        s.add(neg(p))
    return tuple(sorted(s))


def box(d: int, r: int) -> tuple[Point, ...]:
    return tuple(itertools.product(range(-r, r + 1), repeat=d))


def translate(points: Iterable[Point], g: Point) -> tuple[Point, ...]:
    return tuple(sorted(add(x, g) for x in points))
