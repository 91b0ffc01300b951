"""Exact arithmetic: GF(p) linear algebra, Laurent polynomials, symbol
matrices and finite endomorphisms."""

from .endo import EndoClass, FiniteEndo, endo_classify
from .field import check_prime, inv_mod, is_prime
from .laurent import LaurentPoly, laurent_is_unit
from .linalg import Subspace, image_basis, matmul, matpow, rank, rref, rref_kernel, solve, subspace_contains
from .symbol import CharPoly, SymbolMatrix, adjugate, char_poly, determinant, symbol_inverse

__all__ = [
    "CharPoly",
    "EndoClass",
    "FiniteEndo",
    "LaurentPoly",
    "Subspace",
    "SymbolMatrix",
    "adjugate",
    "char_poly",
    "check_prime",
    "determinant",
    "endo_classify",
    "image_basis",
    "inv_mod",
    "is_prime",
    "laurent_is_unit",
    "matmul",
    "matpow",
    "rank",
    "rref",
    "rref_kernel",
    "solve",
    "subspace_contains",
    "symbol_inverse",
]
