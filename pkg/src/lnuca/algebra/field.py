"""Prime-field helpers.  Scalars are plain Python ints reduced mod p."""

from __future__ import annotations

from functools import lru_cache

from ..errors import SpecError

# keeps every product of two residues inside int64
MAX_MODULUS = 1 << 31


@lru_cache(maxsize=256)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int):
        raise SpecError(f"modulus must be an integer, got {p!r}")
    if not is_prime(p):
        raise SpecError(f"modulus {p} is not prime")
    if p >= MAX_MODULUS:
        raise SpecError(f"modulus {p} exceeds the supported range (< 2^31)")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse mod p")
    return pow(a, -1, p)
