"""Square matrices over the Laurent ring GF(p)[x_1^+-1, ..., x_d^+-1].

A constant linear CA reading ``A_m x(g + m)`` at each offset ``m`` has symbol
``sum_m A_m x^m``; composition of CA is the matrix product of symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .laurent import Exponent, LaurentPoly, laurent_is_unit


@dataclass(frozen=True)
class SymbolMatrix:
    entries: tuple[tuple[LaurentPoly, ...], ...]
    p: int
    d: int

    def __post_init__(self):
        k = len(self.entries)
        for row in self.entries:
            if len(row) != k:
                raise ValueError("symbol matrix must be square")
            for f in row:
                if (f.p, f.d) != (self.p, self.d):
                    raise ValueError("entries over different rings")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[LaurentPoly]], p: int, d: int) -> "SymbolMatrix":
        return cls(tuple(tuple(r) for r in rows), p, d)

    @classmethod
    def identity(cls, k: int, p: int, d: int) -> "SymbolMatrix":
        one, zero = LaurentPoly.one(p, d), LaurentPoly.zero(p, d)
        return cls(tuple(tuple(one if i == j else zero for j in range(k)) for i in range(k)), p, d)

    @classmethod
    def zeros(cls, k: int, p: int, d: int) -> "SymbolMatrix":
        zero = LaurentPoly.zero(p, d)
        return cls(tuple((zero,) * k for _ in range(k)), p, d)

    @classmethod
    def from_offsets(cls, coeffs: dict[Exponent, Sequence[Sequence[int]]], k: int, p: int, d: int):
        """Symbol of the rule reading ``coeffs[m] @ x(g + m)``."""
        terms = [[{} for _ in range(k)] for _ in range(k)]
        for m, mat in coeffs.items():
            for i in range(k):
                for j in range(k):
                    c = int(mat[i][j]) % p
                    if c:
                        terms[i][j][tuple(m)] = c
        return cls(tuple(tuple(LaurentPoly(p, d, terms[i][j]) for j in range(k)) for i in range(k)), p, d)

    def offsets(self) -> dict[Exponent, list[list[int]]]:
        """Inverse of :meth:`from_offsets`: offset -> k x k integer matrix."""
        k = self.k
        out: dict[Exponent, list[list[int]]] = {}
        for i in range(k):
            for j in range(k):
                for e, c in self.entries[i][j].items():
                    out.setdefault(e, [[0] * k for _ in range(k)])[i][j] = c
        return dict(sorted(out.items()))

    @property
    def k(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def _same(self, other: "SymbolMatrix") -> None:
        if (self.p, self.d, self.k) != (other.p, other.d, other.k):
            raise ValueError("incompatible symbol matrices")

    def __add__(self, other: "SymbolMatrix") -> "SymbolMatrix":
        self._same(other)
        return SymbolMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.p,
            self.d,
        )

    def __sub__(self, other: "SymbolMatrix") -> "SymbolMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "SymbolMatrix":
        """Multiply every entry by an int or a LaurentPoly."""
        return SymbolMatrix(tuple(tuple(f * c for f in r) for r in self.entries), self.p, self.d)

    def __matmul__(self, other: "SymbolMatrix") -> "SymbolMatrix":
        self._same(other)
        k = self.k
        zero = LaurentPoly.zero(self.p, self.d)
        rows = []
        for i in range(k):
            row = []
            for j in range(k):
                acc = zero
                for t in range(k):
                    a, b = self.entries[i][t], other.entries[t][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return SymbolMatrix(tuple(rows), self.p, self.d)

    def __pow__(self, n: int) -> "SymbolMatrix":
        if n < 0:
            inv = symbol_inverse(self)
            if inv is None:
                raise ValueError("negative power of a non-invertible symbol")
            return inv ** (-n)
        result = SymbolMatrix.identity(self.k, self.p, self.d)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def transpose(self) -> "SymbolMatrix":
        return SymbolMatrix(tuple(zip(*self.entries)), self.p, self.d)

    def reflect(self) -> "SymbolMatrix":
        return SymbolMatrix(tuple(tuple(f.reflect() for f in r) for r in self.entries), self.p, self.d)

    def is_zero(self) -> bool:
        return all(not f for r in self.entries for f in r)

    def is_identity(self) -> bool:
        return self == SymbolMatrix.identity(self.k, self.p, self.d)

    def exponents(self) -> list[Exponent]:
        return sorted({e for r in self.entries for f in r for e in f.exponents()})

    def __repr__(self) -> str:
        return "[" + "; ".join(", ".join(repr(f) for f in r) for r in self.entries) + "]"


@dataclass(frozen=True)
class CharPoly:
    """det(zI - m) = z^k + c_{k-1} z^{k-1} + ... + c_0, leading 1 implicit."""

    coeffs: tuple[LaurentPoly, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def low_order_zeros(self) -> int:
        """Largest j with z^j dividing the polynomial."""
        j = 0
        while j < self.degree and self.coeffs[j].is_zero():
            j += 1
        return j

    def evaluate(self, m: SymbolMatrix) -> SymbolMatrix:
        """m^k + sum c_i m^i, by Horner's rule."""
        k = self.degree
        acc = SymbolMatrix.identity(m.k, m.p, m.d)
        ident = acc
        for i in range(k - 1, -1, -1):
            acc = acc @ m + ident.scale(self.coeffs[i])
        return acc

    def __repr__(self) -> str:
        parts = [f"z^{self.degree}" if self.degree > 1 else "z" if self.degree == 1 else "1"]
        for i in range(self.degree - 1, -1, -1):
            c = self.coeffs[i]
            if c:
                z = "" if i == 0 else ("*z" if i == 1 else f"*z^{i}")
                parts.append(f"({c!r}){z}")
        return " + ".join(parts)


def char_poly(m: SymbolMatrix) -> CharPoly:
    """Characteristic polynomial by Berkowitz's division-free algorithm.

    Works bottom-up over the trailing principal submatrices: with
    ``A = [[a, R], [C, A1]]`` the coefficient vector of ``A`` is a lower
    triangular Toeplitz matrix with first column
    ``(1, -a, -R C, -R A1 C, -R A1^2 C, ...)`` applied to that of ``A1``.
    """
    k = m.k
    p, d = m.p, m.d
    zero, one = LaurentPoly.zero(p, d), LaurentPoly.one(p, d)
    if k == 0:
        return CharPoly(())
    A = m.entries
    # coefficients highest degree first
    vec = [one, -A[k - 1][k - 1]]
    for i in range(k - 2, -1, -1):
        size = k - i - 1
        a = A[i][i]
        R = [A[i][j] for j in range(i + 1, k)]
        C = [A[j][i] for j in range(i + 1, k)]
        sub = [[A[r][c] for c in range(i + 1, k)] for r in range(i + 1, k)]
        column = [one, -a]
        v = C
        for _ in range(size):
            s = zero
            for r, x in zip(R, v):
                if r and x:
                    s = s + r * x
            column.append(-s)
            v = [_dot(sub[r], v, zero) for r in range(size)]
        new = []
        for r in range(size + 2):
            s = zero
            for c in range(min(r, size) + 1):
                t, x = column[r - c], vec[c]
                if t and x:
                    s = s + t * x
            new.append(s)
        vec = new
    # vec = [1, c_{k-1}, ..., c_0]
    return CharPoly(tuple(reversed(vec[1:])))


def _dot(row, v, zero):
    s = zero
    for a, b in zip(row, v):
        if a and b:
            s = s + a * b
    return s


def determinant(m: SymbolMatrix) -> LaurentPoly:
    cp = char_poly(m)
    if m.k == 0:
        return LaurentPoly.one(m.p, m.d)
    return cp.coeffs[0] * (-1 if m.k % 2 else 1)


def adjugate(m: SymbolMatrix) -> SymbolMatrix:
    """adj(m) = (-1)^(k+1) (m^(k-1) + c_{k-1} m^(k-2) + ... + c_1 I)."""
    k = m.k
    cp = char_poly(m)
    ident = SymbolMatrix.identity(k, m.p, m.d)
    acc = ident
    for i in range(k - 1, 0, -1):
        acc = acc @ m + ident.scale(cp.coeffs[i])
    return acc.scale(-1) if k % 2 == 0 else acc


def symbol_inverse(m: SymbolMatrix) -> SymbolMatrix | None:
    """m^-1 when det(m) is a Laurent unit, else None."""
    det = determinant(m)
    unit = laurent_is_unit(det)
    if unit is None:
        return None
    c, a = unit
    det_inv = LaurentPoly.monomial(m.p, m.d, tuple(-x for x in a), pow(c, -1, m.p))
    return adjugate(m).scale(det_inv)
