"""NUCA specs, configurations and exact dynamics."""

from .config import PatternConfig, pairing, random_config, shift_config
from .dynamics import (
    InducedMap,
    apply_step,
    apply_steps,
    compose_specs,
    dual_spec,
    identity_like,
    induced_map,
    power_spec,
    shift_spec,
)
from .lattice import Point, minkowski, minkowski_power, symmetric_hull
from .rules import LinearRule, Rule, TableRule, all_patterns
from .spec import (
    ClusterType,
    NucaSpec,
    Placement,
    SparseLayout,
    build_spec,
    identity_spec,
    local_rule_at,
    zero_spec,
)

validate_spec = build_spec

__all__ = [
    "ClusterType",
    "InducedMap",
    "LinearRule",
    "NucaSpec",
    "PatternConfig",
    "Placement",
    "Point",
    "Rule",
    "SparseLayout",
    "TableRule",
    "all_patterns",
    "apply_step",
    "apply_steps",
    "build_spec",
    "compose_specs",
    "dual_spec",
    "identity_like",
    "identity_spec",
    "induced_map",
    "local_rule_at",
    "minkowski",
    "minkowski_power",
    "pairing",
    "power_spec",
    "random_config",
    "shift_config",
    "shift_spec",
    "symmetric_hull",
    "validate_spec",
    "zero_spec",
]
