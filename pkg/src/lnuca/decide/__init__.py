"""Decision procedures for perturbed linear NUCA."""

from __future__ import annotations

from ..core.spec import NucaSpec
from .dynamical import (
    annihilator,
    decide_cayley_hamilton,
    decide_eventually_periodic,
    decide_nilpotent,
    decide_periodic,
)
from .injective import construct_inverse, decide_injective, decide_post_surjective
from .reduction import PhiReduction, base_exponent, reduce_phi
from .report import PROPERTIES, DecisionReport

_DISPATCH = {
    "nilpotent": decide_nilpotent,
    "periodic": decide_periodic,
    "eventually-periodic": decide_eventually_periodic,
    "cayley-hamilton": decide_cayley_hamilton,
    "injective": decide_injective,
    "post-surjective": decide_post_surjective,
}


def decide(spec: NucaSpec, prop: str) -> DecisionReport:
    """Decide one property; sparse specs go through the cluster decomposition."""
    if prop not in _DISPATCH:
        raise ValueError(f"unknown property {prop!r}; expected one of {', '.join(PROPERTIES)}")
    if spec.sparse is not None:
        from .sparse import decide_sparse

        return decide_sparse(spec, prop)
    return _DISPATCH[prop](spec)


from .sparse import decide_sparse  # noqa: E402

__all__ = [
    "DecisionReport",
    "PROPERTIES",
    "PhiReduction",
    "annihilator",
    "base_exponent",
    "construct_inverse",
    "decide",
    "decide_cayley_hamilton",
    "decide_eventually_periodic",
    "decide_injective",
    "decide_nilpotent",
    "decide_periodic",
    "decide_post_surjective",
    "decide_sparse",
    "reduce_phi",
]
