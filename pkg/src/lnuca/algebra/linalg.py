"""Exact dense linear algebra over GF(p).

Matrices are 2-D ``int64`` numpy arrays with entries in ``[0, p)``; the modulus
travels alongside as a plain int.  Subspaces are kept in canonical reduced
row-echelon form so that equality is a grid comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools
from typing import Iterator

import numpy as np

from .gf2 import rref_gf2

# below this many entries the packing overhead is not worth it
GF2_PACK_THRESHOLD = 1024


def rref_generic(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan elimination mod p, numpy row operations."""
    R = np.array(a, dtype=np.int64) % p
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        below = np.flatnonzero(R[r:, c])
        if below.size == 0:
            continue
        piv = r + int(below[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        lead = int(R[r, c])
        if lead != 1:
            R[r, c:] = R[r, c:] * pow(lead, -1, p) % p
        col = R[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit, c:] = (R[hit, c:] - np.outer(col[hit], R[r, c:])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rref(a: np.ndarray, p: int, method: str = "auto") -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns.

    ``method`` is ``"auto"``, ``"generic"`` or ``"gf2"``; auto picks the
    bit-packed kernel for p = 2 once the matrix is large enough.
    """
    a = np.asarray(a, dtype=np.int64)
    if method == "gf2" or (method == "auto" and p == 2 and a.size >= GF2_PACK_THRESHOLD):
        if p != 2:
            raise ValueError("gf2 method needs p = 2")
        return rref_gf2(a)
    return rref_generic(a, p)


def rank(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of GF(p)^ambient given by its canonical RREF basis."""

    p: int
    ambient: int
    basis: np.ndarray

    def __post_init__(self):
        self.basis.setflags(write=False)

    @classmethod
    def span(cls, vectors, ambient: int, p: int) -> "Subspace":
        m = np.asarray(vectors, dtype=np.int64)
        if ambient == 0 or m.size == 0:
            return cls.zero(ambient, p)
        m = m.reshape(-1, ambient) % p
        if m.shape[0] == 0:
            return cls.zero(ambient, p)
        R, piv = rref(m, p)
        return cls(p, ambient, np.ascontiguousarray(R[: len(piv)]))

    @classmethod
    def zero(cls, ambient: int, p: int) -> "Subspace":
        return cls(p, ambient, np.zeros((0, ambient), dtype=np.int64))

    @classmethod
    def full(cls, ambient: int, p: int) -> "Subspace":
        return cls(p, ambient, np.eye(ambient, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> list[int]:
        return [int(np.flatnonzero(row)[0]) for row in self.basis]

    def size(self) -> int:
        return self.p ** self.dim

    def coords(self, v) -> np.ndarray:
        """Coordinates of ``v`` in the canonical basis (``v`` assumed inside)."""
        v = np.asarray(v, dtype=np.int64)
        return v[..., self.pivots] % self.p

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.p
        if v.shape[-1] != self.ambient:
            raise ValueError(f"vector length {v.shape[-1]} != ambient dimension {self.ambient}")
        if self.dim == 0:
            return not v.any()
        residue = (v - self.coords(v) @ self.basis) % self.p
        return not residue.any()

    def contains_all(self, vectors) -> bool:
        m = np.asarray(vectors, dtype=np.int64).reshape(-1, self.ambient) % self.p
        if m.shape[0] == 0:
            return True
        if self.dim == 0:
            return not m.any()
        residue = (m - self.coords(m) @ self.basis) % self.p
        return not residue.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.p, self.ambient) == (other.p, other.ambient) and np.array_equal(
            self.basis, other.basis
        )

    def __hash__(self) -> int:
        return hash((self.p, self.ambient, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, ambient={self.ambient}, dim={self.dim})"

    def elements(self) -> Iterator[np.ndarray]:
        """Enumerate all p**dim vectors (small subspaces only)."""
        for c in itertools.product(range(self.p), repeat=self.dim):
            yield (np.asarray(c, dtype=np.int64).reshape(1, -1) @ self.basis)[0] % self.p


def rref_kernel(m, p: int) -> Subspace:
    """Right null space {v : m v = 0} as a canonical subspace."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return Subspace.full(cols, p)
    R, piv = rref(m, p)
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    if not free:
        return Subspace.zero(cols, p)
    vecs = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        vecs[i, f] = 1
        for row, pc in enumerate(piv):
            vecs[i, pc] = -R[row, f] % p
    return Subspace.span(vecs, cols, p)


def image_basis(m, p: int) -> Subspace:
    """Column space of m."""
    m = np.asarray(m, dtype=np.int64)
    return Subspace.span(m.T, m.shape[0], p)


def subspace_contains(s: Subspace, v) -> bool:
    return s.contains(v)


def solve(a, b, p: int) -> np.ndarray | None:
    """One solution X of a @ X = b (mod p), or None when inconsistent."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    n = a.shape[1]
    R, piv = rref(np.hstack([a, b]), p)
    if piv and piv[-1] >= n:
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for row, c in enumerate(piv):
        x[c] = R[row, n:]
    return x[:, 0] if vector else x


def matmul(a, b, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def matpow(a, n: int, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64) % p
    result = np.eye(a.shape[0], dtype=np.int64)
    while n:
        if n & 1:
            result = matmul(result, a, p)
        a = matmul(a, a, p)
        n >>= 1
    return result

