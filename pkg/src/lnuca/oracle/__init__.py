"""Independent oracles: naive simulation, enumeration and d = 1 kernel windows."""

from .procedures import (
    KernelWindow,
    TailSubspace,
    finite_support_kernel,
    half_line_kernel,
    kernel_window_d1,
    oracle_annihilator,
    oracle_base,
    oracle_certificate_check,
    oracle_dual_agreement,
    oracle_injective,
    oracle_inverse_agreement,
    oracle_power_agreement,
    oracle_sampled_pair,
    oracle_trapped_enumeration,
    tail_subspace,
)
from .simulate import NaiveSystem

__all__ = [
    "KernelWindow",
    "NaiveSystem",
    "TailSubspace",
    "finite_support_kernel",
    "half_line_kernel",
    "kernel_window_d1",
    "oracle_annihilator",
    "oracle_base",
    "oracle_certificate_check",
    "oracle_dual_agreement",
    "oracle_injective",
    "oracle_inverse_agreement",
    "oracle_power_agreement",
    "oracle_sampled_pair",
    "oracle_trapped_enumeration",
    "tail_subspace",
]
