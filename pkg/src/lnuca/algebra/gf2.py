"""Bit-packed row reduction over GF(2).

Rows are stored as arrays of uint64 words, column ``c`` living in bit
``c % 64`` of word ``c // 64``.  Eliminating a pivot is a single vectorised
XOR of the pivot row into every row that has the pivot bit set.
"""

from __future__ import annotations

import numpy as np

_SHIFTS = np.arange(64, dtype=np.uint64)


def pack_rows(a: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix (rows x cols) into (rows x ceil(cols/64)) uint64 words."""
    a = np.asarray(a)
    rows, cols = a.shape
    nwords = max(1, -(-cols // 64))
    padded = np.zeros((rows, nwords * 64), dtype=np.uint64)
    padded[:, :cols] = a & 1
    blocks = padded.reshape(rows, nwords, 64)
    return np.bitwise_or.reduce(blocks << _SHIFTS, axis=2)


def unpack_rows(words: np.ndarray, cols: int) -> np.ndarray:
    rows, nwords = words.shape
    bits = (words[:, :, None] >> _SHIFTS) & np.uint64(1)
    return bits.reshape(rows, nwords * 64)[:, :cols].astype(np.int64)


def rref_gf2(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over GF(2); returns (R, pivot columns)."""
    a = np.asarray(a, dtype=np.int64) & 1
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return a.copy(), []
    w = pack_rows(a)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        word, bit = c >> 6, np.uint64(c & 63)
        column = (w[:, word] >> bit) & np.uint64(1)
        below = np.flatnonzero(column[r:])
        if below.size == 0:
            continue
        piv = r + int(below[0])
        if piv != r:
            w[[r, piv]] = w[[piv, r]]
            column[[r, piv]] = column[[piv, r]]
        column[r] = 0
        hit = np.flatnonzero(column)
        if hit.size:
            # columns left of `word` are already cleared in the pivot row
            w[hit, word:] ^= w[r, word:]
        pivots.append(c)
        r += 1
    return unpack_rows(w, cols), pivots
