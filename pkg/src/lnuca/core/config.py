"""Finitely supported configurations over the zero background."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from ..errors import SpecError
from .lattice import Point, add

Vec = tuple[int, ...]


@dataclass(frozen=True)
class PatternConfig:
    p: int
    k: int
    d: int
    cells: tuple[tuple[Point, Vec], ...] = ()

    @classmethod
    def from_dict(cls, values: Mapping | Iterable, p: int, k: int, d: int) -> "PatternConfig":
        items = values.items() if isinstance(values, Mapping) else values
        acc: dict[Point, Vec] = {}
        for g, v in items:
            g = tuple(int(c) for c in g)
            if len(g) != d:
                raise SpecError(f"cell {g} is not a point of Z^{d}")
            v = tuple(int(c) % p for c in np.ravel(v))
            if len(v) != k:
                raise SpecError(f"value at {g} has length {len(v)}, expected {k}")
            if g in acc:
                v = tuple((a + b) % p for a, b in zip(acc[g], v))
            acc[g] = v
        return cls(p, k, d, tuple(sorted((g, v) for g, v in acc.items() if any(v))))

    @classmethod
    def zero(cls, p: int, k: int, d: int) -> "PatternConfig":
        return cls(p, k, d)

    @classmethod
    def delta(cls, p: int, k: int, g: Point, value: Iterable[int] | None = None) -> "PatternConfig":
        value = tuple(value) if value is not None else (1,) + (0,) * (k - 1)
        return cls.from_dict({tuple(g): value}, p, k, len(g))

    def as_dict(self) -> dict[Point, Vec]:
        return dict(self.cells)

    @property
    def support(self) -> tuple[Point, ...]:
        return tuple(g for g, _ in self.cells)

    def get(self, g: Point) -> Vec:
        return self.as_dict().get(tuple(g), (0,) * self.k)

    def is_zero(self) -> bool:
        return not self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def _same(self, other: "PatternConfig") -> None:
        if (self.p, self.k, self.d) != (other.p, other.k, other.d):
            raise ValueError("configurations over different alphabets or lattices")

    def __add__(self, other: "PatternConfig") -> "PatternConfig":
        self._same(other)
        return PatternConfig.from_dict(list(self.cells) + list(other.cells), self.p, self.k, self.d)

    def scale(self, c: int) -> "PatternConfig":
        return PatternConfig.from_dict({g: [c * x for x in v] for g, v in self.cells}, self.p, self.k, self.d)

    def __sub__(self, other: "PatternConfig") -> "PatternConfig":
        return self + other.scale(-1)

    def restrict(self, sites: Iterable[Point]) -> "PatternConfig":
        keep = set(map(tuple, sites))
        return PatternConfig(self.p, self.k, self.d, tuple((g, v) for g, v in self.cells if g in keep))

    def window(self, sites: Iterable[Point]) -> np.ndarray:
        """Flattened values at ``sites`` (site-major, component-minor)."""
        vals = self.as_dict()
        zero = (0,) * self.k
        return np.array([c for g in sites for c in vals.get(tuple(g), zero)], dtype=np.int64)

    @classmethod
    def from_window(cls, sites: Iterable[Point], flat, p: int, k: int, d: int) -> "PatternConfig":
        flat = np.asarray(flat, dtype=np.int64).reshape(-1, k)
        return cls.from_dict(zip(sites, flat.tolist()), p, k, d)


def shift_config(x: PatternConfig, g: Point) -> PatternConfig:
    """(g x)(h) = x(h - g): the support moves by +g."""
    return PatternConfig(x.p, x.k, x.d, tuple(sorted((add(h, g), v) for h, v in x.cells)))


def pairing(x: PatternConfig, y: PatternConfig) -> int:
    """sum_g x(g) . y(g) mod p."""
    x._same(y)
    yd = y.as_dict()
    total = 0
    for g, v in x.cells:
        w = yd.get(g)
        if w is not None:
            total += sum(a * b for a, b in zip(v, w))
    return total % x.p


def random_config(
    rng: np.random.Generator, p: int, k: int, d: int, radius: int = 3, density: float = 0.6
) -> PatternConfig:
    """Random configuration supported in the box of the given radius."""
    side = 2 * radius + 1
    vals = {}
    for idx in np.ndindex(*(side,) * d):
        if rng.random() < density:
            vals[tuple(i - radius for i in idx)] = rng.integers(0, p, size=k)
    return PatternConfig.from_dict(vals, p, k, d)
