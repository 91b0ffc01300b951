"""Deliberately plain GF(p) elimination on lists of ints.

Kept apart from the numpy code in lnuca.algebra so that oracle verdicts do
not share an implementation with the procedures they check.
"""

from __future__ import annotations


def reduce_rows(rows: list[list[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row-echelon form; returns nonzero rows and pivot columns."""
    m = [[v % p for v in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: list[list[int]], ncols: int, p: int) -> int:
    return len(reduce_rows(rows, ncols, p)[1])


def nullspace(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {v : rows . v = 0}."""
    red, piv = reduce_rows(rows, ncols, p) if rows else ([], [])
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(red, piv):
            v[c] = -row[f] % p
        basis.append(v)
    return basis


def span_basis(vectors: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    return reduce_rows(vectors, ncols, p)[0] if vectors else []


def annihilator(basis: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Rows C with C v = 0 exactly for v in span(basis)."""
    return nullspace(basis, ncols, p) if basis else [[int(i == j) for j in range(ncols)] for i in range(ncols)]


def project(vectors: list[list[int]], cols: list[int]) -> list[list[int]]:
    return [[v[c] for c in cols] for v in vectors]
