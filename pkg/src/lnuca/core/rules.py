"""Local rules: linear (one k x k matrix per memory offset) or table-valued.

A window is the list of the k-vectors read at each memory offset, in memory
order.  Table rules index their output by the base-p digits of the window,
site-major and component-minor, most significant digit first.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ResourceLimit, SpecError

Point = tuple[int, ...]

DEFAULT_TABLE_CAP = 1 << 18


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class LinearRule:
    kind = "linear"
    is_linear = True

    def __init__(self, p: int, k: int, memory: Sequence[Point], mats):
        self.p, self.k = p, k
        self.memory = tuple(tuple(int(c) for c in m) for m in memory)
        mats = np.asarray(mats, dtype=np.int64).reshape(len(self.memory), k, k) % p
        self.mats = _frozen(mats)
        self._terms = [
            (i, tuple(tuple(int(v) for v in row) for row in mats[i]))
            for i in range(len(self.memory))
            if mats[i].any()
        ]

    @classmethod
    def from_offsets(cls, p: int, k: int, coeffs: dict) -> "LinearRule":
        memory = sorted(tuple(m) for m in coeffs)
        return cls(p, k, memory, [coeffs[m] for m in memory] if memory else np.zeros((0, k, k)))

    @classmethod
    def zero(cls, p: int, k: int, memory: Sequence[Point]) -> "LinearRule":
        return cls(p, k, memory, np.zeros((len(memory), k, k)))

    @classmethod
    def projection(cls, p: int, k: int, memory: Sequence[Point]) -> "LinearRule":
        d = len(memory[0])
        mats = np.zeros((len(memory), k, k), dtype=np.int64)
        mats[list(memory).index((0,) * d)] = np.eye(k, dtype=np.int64)
        return cls(p, k, memory, mats)

    def offsets(self) -> dict[Point, np.ndarray]:
        return {m: self.mats[i] for i, m in enumerate(self.memory) if self.mats[i].any()}

    def block(self) -> np.ndarray:
        """k x (k |M|) matrix acting on the flattened window."""
        if not self.memory:
            return np.zeros((self.k, 0), dtype=np.int64)
        return np.hstack(list(self.mats))

    def used_offsets(self) -> list[Point]:
        return [self.memory[i] for i, _ in self._terms]

    def is_zero(self) -> bool:
        return not self._terms

    def apply_window(self, window: Sequence[Sequence[int]]) -> tuple[int, ...]:
        k, p = self.k, self.p
        out = [0] * k
        for i, mat in self._terms:
            v = window[i]
            if not any(v):
                continue
            for r in range(k):
                row = mat[r]
                out[r] += sum(row[c] * v[c] for c in range(k))
        return tuple(x % p for x in out)

    def evaluate_batch(self, windows: np.ndarray) -> np.ndarray:
        """windows: (B, |M|, k) -> (B, k)."""
        return np.einsum("mij,bmj->bi", self.mats, windows) % self.p

    def on_memory(self, memory: Sequence[Point]) -> "LinearRule":
        memory = tuple(memory)
        pos = {m: i for i, m in enumerate(memory)}
        mats = np.zeros((len(memory), self.k, self.k), dtype=np.int64)
        for i, m in enumerate(self.memory):
            if self.mats[i].any():
                if m not in pos:
                    raise SpecError(f"offset {m} is read but missing from memory")
                mats[pos[m]] = self.mats[i]
        return LinearRule(self.p, self.k, memory, mats)

    def as_table(self, cap: int = DEFAULT_TABLE_CAP) -> "TableRule":
        return TableRule.from_batch_function(self.p, self.k, self.memory, self.evaluate_batch, cap)

    def __eq__(self, other) -> bool:
        if isinstance(other, TableRule):
            return other == self
        if not isinstance(other, LinearRule):
            return NotImplemented
        if (self.p, self.k) != (other.p, other.k):
            return False
        a, b = self.offsets(), other.offsets()
        return a.keys() == b.keys() and all(np.array_equal(a[m], b[m]) for m in a)

    def __hash__(self) -> int:
        return hash(("linear", self.p, self.k, tuple((m, a.tobytes()) for m, a in self.offsets().items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{m}: {a.tolist()}" for m, a in self.offsets().items())
        return f"LinearRule({{{body}}})"


class TableRule:
    kind = "table"
    is_linear = False

    def __init__(self, p: int, k: int, memory: Sequence[Point], table):
        self.p, self.k = p, k
        self.memory = tuple(tuple(int(c) for c in m) for m in memory)
        n = p ** (k * len(self.memory))
        table = np.asarray(table, dtype=np.int64).reshape(-1, k) % p
        if table.shape[0] != n:
            raise SpecError(f"table has {table.shape[0]} entries, expected p^(k|M|) = {n}")
        self.table = _frozen(table)
        self._weights = _frozen(p ** np.arange(k * len(self.memory) - 1, -1, -1, dtype=np.int64))

    @classmethod
    def from_function(cls, p: int, k: int, memory: Sequence[Point], fn, cap: int = DEFAULT_TABLE_CAP):
        """Tabulate ``fn(window) -> k-vector`` over every window."""
        memory = tuple(memory)
        patterns = all_patterns(p, k * len(memory), cap)
        out = [fn([tuple(int(v) for v in row) for row in pat.reshape(len(memory), k)]) for pat in patterns]
        return cls(p, k, memory, np.asarray(out, dtype=np.int64).reshape(-1, k))

    @classmethod
    def from_batch_function(cls, p: int, k: int, memory: Sequence[Point], fn, cap: int = DEFAULT_TABLE_CAP):
        memory = tuple(memory)
        patterns = all_patterns(p, k * len(memory), cap)
        return cls(p, k, memory, fn(patterns.reshape(-1, len(memory), k)))

    def index(self, window: Sequence[Sequence[int]]) -> int:
        idx = 0
        for v in window:
            for c in v:
                idx = idx * self.p + c
        return idx

    def apply_window(self, window: Sequence[Sequence[int]]) -> tuple[int, ...]:
        return tuple(int(v) for v in self.table[self.index(window)])

    def evaluate_batch(self, windows: np.ndarray) -> np.ndarray:
        flat = windows.reshape(windows.shape[0], -1)
        return self.table[flat @ self._weights]

    def is_zero_quiescent(self) -> bool:
        return not self.table[0].any()

    def used_offsets(self) -> list[Point]:
        n = len(self.memory)
        if n == 0:
            return []
        q = self.p**self.k
        T = self.table.reshape((q,) * n + (self.k,))
        used = []
        for i, m in enumerate(self.memory):
            base = np.take(T, [0], axis=i)
            if not np.array_equal(T, np.broadcast_to(base, T.shape)):
                used.append(m)
        return used

    def on_memory(self, memory: Sequence[Point], cap: int = DEFAULT_TABLE_CAP) -> "TableRule":
        memory = tuple(memory)
        if memory == self.memory:
            return self
        used = set(self.used_offsets())
        missing = used - set(memory)
        if missing:
            raise SpecError(f"offsets {sorted(missing)} are read but missing from memory")
        old_pos = {m: i for i, m in enumerate(self.memory)}
        n_new = len(memory)
        q = self.p**self.k
        total = q**n_new
        if total > cap:
            raise ResourceLimit(f"table over {n_new} sites needs {total} entries (cap {cap})")
        new_idx = np.arange(total, dtype=np.int64)
        old_idx = np.zeros(total, dtype=np.int64)
        n_old = len(self.memory)
        for j, m in enumerate(memory):
            if m not in old_pos:
                continue
            digit = (new_idx // q ** (n_new - 1 - j)) % q
            old_idx += digit * q ** (n_old - 1 - old_pos[m])
        return TableRule(self.p, self.k, memory, self.table[old_idx])

    def __eq__(self, other) -> bool:
        if isinstance(other, LinearRule):
            if (self.p, self.k) != (other.p, other.k):
                return False
            try:
                lin = other.on_memory(self.memory)
            except SpecError:
                return False
            return np.array_equal(lin.as_table().table, self.table)
        if not isinstance(other, TableRule):
            return NotImplemented
        if (self.p, self.k) != (other.p, other.k):
            return False
        if self.memory != other.memory:
            union = sorted(set(self.memory) | set(other.memory))
            return self.on_memory(union).table.tobytes() == other.on_memory(union).table.tobytes()
        return np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(("table", self.p, self.k, self.memory, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"TableRule(memory={list(self.memory)}, entries={self.table.shape[0]})"


Rule = LinearRule | TableRule


def all_patterns(p: int, length: int, cap: int = DEFAULT_TABLE_CAP) -> np.ndarray:
    """Every vector of GF(p)^length, in index order (first digit most significant)."""
    total = p**length
    if total > cap:
        raise ResourceLimit(f"enumerating {total} patterns exceeds cap {cap}")
    idx = np.arange(total, dtype=np.int64)
    out = np.empty((total, length), dtype=np.int64)
    for j in range(length):
        out[:, j] = (idx // p ** (length - 1 - j)) % p
    return out
