"""Endomorphisms of finite carriers and their dynamical classification.

A carrier is either a subspace of GF(p)^n (linear mode) or an explicitly
enumerated set of window patterns (table mode).  Classification reports
whether some power is zero, whether the map is a bijection, and the least
(preperiod, period) with phi^(m+n) = phi^m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

import numpy as np

from ..errors import CarrierClosureError
from .linalg import Subspace, image_basis, matmul, rank

DEFAULT_PERIOD_CAP = 1_000_000


@dataclass(frozen=True)
class EndoClass:
    nilpotent_to_zero: bool
    bijective: bool
    preperiod: int
    period: int | None
    nilpotency_index: int | None = None
    period_capped: bool = False


class FiniteEndo:
    """phi : carrier -> carrier.

    Linear mode: ``carrier`` is a Subspace of GF(p)^n and ``matrix`` an n x n
    map with matrix(carrier) inside carrier.  Table mode: ``states`` lists
    hashable patterns and ``images[i]`` is the index of phi(states[i]).
    """

    def __init__(
        self,
        *,
        carrier: Subspace | None = None,
        matrix: np.ndarray | None = None,
        states: Sequence[Hashable] | None = None,
        images: Sequence[int] | None = None,
        zero_index: int | None = None,
    ):
        if carrier is not None:
            self.mode = "linear"
            self.carrier = carrier
            self.matrix = np.asarray(matrix, dtype=np.int64) % carrier.p
            self.restricted = self._restrict()
        else:
            self.mode = "table"
            self.states = list(states)
            self.images = [int(i) for i in images]
            self.zero_index = zero_index
            n = len(self.states)
            if len(self.images) != n or any(not 0 <= i < n for i in self.images):
                raise CarrierClosureError("table map leaves its carrier")

    @classmethod
    def from_function(cls, states: Sequence[Hashable], fn: Callable, zero=None) -> "FiniteEndo":
        index = {s: i for i, s in enumerate(states)}
        images = []
        for s in states:
            t = fn(s)
            if t not in index:
                raise CarrierClosureError(f"phi maps {s!r} to {t!r}, outside the carrier")
            images.append(index[t])
        return cls(states=states, images=images, zero_index=index.get(zero) if zero is not None else None)

    def _restrict(self) -> np.ndarray:
        c = self.carrier
        if c.dim == 0:
            return np.zeros((0, 0), dtype=np.int64)
        out = matmul(c.basis, self.matrix.T, c.p)  # rows: phi(b_i)
        if not c.contains_all(out):
            raise CarrierClosureError("linear map does not preserve its carrier")
        # row i holds the coordinates of phi(b_i); transpose to act on column vectors
        return c.coords(out).T.copy()

    @property
    def size(self) -> int:
        return self.carrier.size() if self.mode == "linear" else len(self.states)

    def apply(self, state):
        if self.mode == "linear":
            return matmul(self.matrix, state, self.carrier.p)
        return self.states[self.images[self.states.index(state)]]


def endo_classify(e: FiniteEndo, period_cap: int = DEFAULT_PERIOD_CAP) -> EndoClass:
    if e.mode == "linear":
        return _classify_linear(e.restricted, e.carrier.p, period_cap)
    return _classify_table(e.images, e.zero_index)


def _classify_linear(R: np.ndarray, p: int, period_cap: int) -> EndoClass:
    dim = R.shape[0]
    ranks = [dim]
    power = np.eye(dim, dtype=np.int64)
    while True:
        power = matmul(power, R, p)
        ranks.append(rank(power, p))
        if ranks[-1] == ranks[-2]:
            break
    preperiod = len(ranks) - 2
    nilpotent = ranks[-1] == 0
    bijective = ranks[0] == ranks[1]
    if nilpotent:
        return EndoClass(True, dim == 0, preperiod, 1, nilpotency_index=preperiod)
    # restrict to the eventual image, where the map is invertible
    eventual = image_basis(power, p)
    image_rows = matmul(eventual.basis, R.T, p)
    Q = eventual.coords(image_rows).T.copy()
    period = _linear_order(Q, p, period_cap)
    return EndoClass(
        False, bijective, preperiod, period, period_capped=period is None
    )


def _linear_order(Q: np.ndarray, p: int, cap: int) -> int | None:
    ident = np.eye(Q.shape[0], dtype=np.int64)
    power = Q.copy()
    for n in range(1, cap + 1):
        if np.array_equal(power, ident):
            return n
        power = matmul(power, Q, p)
    return None


def _classify_table(images: Sequence[int], zero_index: int | None) -> EndoClass:
    n = len(images)
    # tail length and cycle length of every point of the functional graph
    tail = [-1] * n
    cycle_len = [0] * n
    for start in range(n):
        if tail[start] >= 0:
            continue
        path, pos = [], {}
        x = start
        while tail[x] < 0 and x not in pos:
            pos[x] = len(path)
            path.append(x)
            x = images[x]
        if tail[x] < 0:
            # new cycle found at x
            c0 = pos[x]
            length = len(path) - c0
            for y in path[c0:]:
                tail[y], cycle_len[y] = 0, length
            path = path[:c0]
        for y in reversed(path):
            nxt = images[y]
            tail[y], cycle_len[y] = tail[nxt] + 1, cycle_len[nxt]
    preperiod = max(tail, default=0)
    period = 1
    for c in set(cycle_len):
        if c:
            period = period * c // math.gcd(period, c)
    bijective = sorted(images) == list(range(n))
    nilpotent = zero_index is not None and images[zero_index] == zero_index and set(cycle_len) <= {1} and all(
        _reaches(i, zero_index, images) for i in range(n)
    )
    return EndoClass(
        nilpotent,
        bijective,
        preperiod,
        period,
        nilpotency_index=preperiod if nilpotent else None,
    )


def _reaches(i: int, target: int, images: Sequence[int]) -> bool:
    seen = set()
    while i != target and i not in seen:
        seen.add(i)
        i = images[i]
    return i == target
