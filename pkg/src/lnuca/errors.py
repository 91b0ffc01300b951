"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class NucaError(Exception):
    """Base class for all errors raised by lnuca."""


class SpecError(NucaError, ValueError):
    """Malformed or unsupported input (bad modulus, shapes, unknown keys, ...)."""


class UnsupportedError(SpecError):
    """A property or operation was requested on a spec that cannot carry it,
    e.g. injectivity of a spec with table rules."""


class ResourceLimit(NucaError):
    """A configured size or iteration cap was exceeded."""


class CarrierClosureError(NucaError):
    """A finite endomorphism maps its carrier outside itself."""


class ReductionError(NucaError):
    """A window reduction failed one of its internal consistency checks.

    This signals an implementation defect, never a property verdict.
    """


class PlacementUnresolved(NucaError):
    """A rule was requested at a cell whose sparse placement is only promised."""


class RadiusExhausted(NucaError):
    """Inverse search ran out of radius before finding an inverse."""
