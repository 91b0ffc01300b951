"""Sparse multivariate Laurent polynomials over GF(p).

A polynomial is a mapping from exponent vectors in Z^d to nonzero residues.
The zero coefficient is never stored, so two polynomials are equal exactly
when their term maps are equal.
"""

from __future__ import annotations

from typing import Iterable, Mapping

Exponent = tuple[int, ...]

_VAR_NAMES = "xyzw"


class LaurentPoly:
    __slots__ = ("p", "d", "_terms", "_hash")

    def __init__(self, p: int, d: int, terms: Mapping[Exponent, int] | Iterable = ()):
        self.p = p
        self.d = d
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, int] = {}
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != d:
                raise ValueError(f"exponent {exp} has wrong length for d={d}")
            acc[exp] = (acc.get(exp, 0) + int(c)) % p
        self._terms = {e: c for e, c in sorted(acc.items()) if c}
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, p: int, d: int) -> "LaurentPoly":
        return cls(p, d)

    @classmethod
    def constant(cls, p: int, d: int, c: int) -> "LaurentPoly":
        return cls(p, d, {(0,) * d: c})

    @classmethod
    def one(cls, p: int, d: int) -> "LaurentPoly":
        return cls.constant(p, d, 1)

    @classmethod
    def monomial(cls, p: int, d: int, exp: Exponent, c: int = 1) -> "LaurentPoly":
        return cls(p, d, {tuple(exp): c})

    @classmethod
    def var(cls, p: int, d: int, i: int = 0, power: int = 1) -> "LaurentPoly":
        exp = [0] * d
        exp[i] = power
        return cls(p, d, {tuple(exp): 1})

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def exponents(self) -> list[Exponent]:
        return list(self._terms)

    def coeff(self, exp: Exponent) -> int:
        return self._terms.get(tuple(exp), 0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        """True for the zero polynomial and for c * x^0."""
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.d, 0)

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "LaurentPoly") -> None:
        if (self.p, self.d) != (other.p, other.d):
            raise ValueError("Laurent polynomials over different rings")

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.p, self.d, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly(self.p, self.d, acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.p, self.d, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(self.p, self.d, {e: c * other for e, c in self._terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPoly(self.p, self.d, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            unit = laurent_is_unit(self)
            if unit is None:
                raise ValueError("negative power of a non-unit")
            c, a = unit
            return LaurentPoly.monomial(self.p, self.d, tuple(x * n for x in a), pow(c, n, self.p))
        result = LaurentPoly.one(self.p, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def reflect(self) -> "LaurentPoly":
        """Substitute every variable by its inverse."""
        return LaurentPoly(self.p, self.d, {tuple(-x for x in e): c for e, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(self.p, self.d, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (self.p, self.d) == (other.p, other.d) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.d, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        names = _VAR_NAMES if self.d <= len(_VAR_NAMES) else None
        parts = []
        for e, c in self._terms.items():
            factors = []
            for i, x in enumerate(e):
                if x == 0:
                    continue
                name = names[i] if names else f"x{i}"
                factors.append(name if x == 1 else f"{name}^{x}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def laurent_is_unit(f: LaurentPoly) -> tuple[int, Exponent] | None:
    """Units of GF(p)[x^+-1] are exactly the monomials c * x^a with c != 0."""
    if len(f) != 1:
        return None
    (exp, c), = f.items()
    return c, exp
