"""Verdicts for constant linear CA, read off the symbol matrix.

Criteria, with ``char_poly(m) = z^k + c_{k-1} z^{k-1} + ... + c_0``:

* nilpotent iff every c_i is zero (the Laurent ring is reduced);
* periodic only if every c_i is constant; then all powers of ``m`` lie in a
  set of at most p^k constant combinations of I, m, ..., m^{k-1}, so the
  first repetition among m^0, m^1, ... decides;
* eventually periodic iff ``char_poly = z^j g`` with ``g`` having constant
  coefficients; powers from m^j on then take at most p^{deg g} values;
* invertible iff the determinant is a monomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra.symbol import CharPoly, SymbolMatrix, char_poly, determinant, symbol_inverse
from .algebra.laurent import laurent_is_unit


@dataclass(frozen=True)
class CaVerdict:
    prop: str
    verdict: bool
    certificate: dict = field(default_factory=dict)
    # data explaining a negative answer, e.g. two distinct equal powers
    witness: dict = field(default_factory=dict)
    char_poly: CharPoly | None = None


def _first_repeat(m: SymbolMatrix, start: int, limit: int) -> tuple[int, int] | None:
    """First (a, b), a < b, with m^a = m^b among exponents start..start+limit."""
    seen: dict[SymbolMatrix, int] = {}
    power = m**start
    for t in range(start, start + limit + 1):
        if power in seen:
            return seen[power], t
        seen[power] = t
        power = power @ m
    return None


def ca_nilpotent(m: SymbolMatrix) -> CaVerdict:
    cp = char_poly(m)
    k = m.k
    if any(not c.is_zero() for c in cp.coeffs):
        return CaVerdict("nilpotent", False, char_poly=cp)
    if not (m**k).is_zero():
        raise ArithmeticError("characteristic polynomial z^k but m^k != 0")
    index = next(n for n in range(k + 1) if (m**n).is_zero())
    return CaVerdict("nilpotent", True, {"n0": k, "index": index}, char_poly=cp)


def ca_periodic(m: SymbolMatrix) -> CaVerdict:
    cp = char_poly(m)
    if not all(c.is_constant() for c in cp.coeffs):
        return CaVerdict("periodic", False, witness={"reason": "non-constant characteristic coefficient"}, char_poly=cp)
    rep = _first_repeat(m, 0, m.p**m.k)
    if rep is None:  # pragma: no cover - excluded by the counting argument
        raise ArithmeticError("no repetition among constant-span powers")
    a, b = rep
    if a != 0:
        return CaVerdict("periodic", False, witness={"equal_powers": (a, b)}, char_poly=cp)
    if not (m**b).is_identity():
        raise ArithmeticError("period certificate failed re-verification")
    return CaVerdict("periodic", True, {"period": b}, char_poly=cp)


def ca_eventually_periodic(m: SymbolMatrix) -> CaVerdict:
    cp = char_poly(m)
    j = cp.low_order_zeros()
    if not all(c.is_constant() for c in cp.coeffs[j:]):
        return CaVerdict(
            "eventually-periodic", False, witness={"reason": "non-constant coefficient after z^j"}, char_poly=cp
        )
    rep = _first_repeat(m, 0, j + m.p ** (m.k - j))
    if rep is None:  # pragma: no cover
        raise ArithmeticError("no repetition within the derived bound")
    a, b = rep
    if m**b != m**a:
        raise ArithmeticError("(preperiod, period) failed re-verification")
    return CaVerdict("eventually-periodic", True, {"preperiod": a, "period": b - a}, char_poly=cp)


def ca_invertible(m: SymbolMatrix) -> CaVerdict:
    det = determinant(m)
    if laurent_is_unit(det) is None:
        return CaVerdict("invertible", False, witness={"determinant": repr(det)})
    inv = symbol_inverse(m)
    ident = SymbolMatrix.identity(m.k, m.p, m.d)
    if not (m @ inv == ident and inv @ m == ident):
        raise ArithmeticError("symbol inverse failed re-verification")
    return CaVerdict("invertible", True, {"inverse": inv, "memory": inv.exponents()})
