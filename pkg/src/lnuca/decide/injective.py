"""Injectivity, inverse construction and post-surjectivity for linear specs.

If the base CA is invertible with inverse memory N', any x with sigma_s(x) = 0
has sigma_c(x) supported in E, hence x = sigma_c^{-1}(sigma_c x) is supported
in D = E - N'.  Injectivity is then one finite homogeneous solve.  A
non-invertible base is never injective after a finite perturbation.
"""

from __future__ import annotations

import numpy as np

from ..algebra.linalg import rref_kernel, solve
from ..ca_decide import ca_invertible
from ..core.config import PatternConfig
from ..core.dynamics import apply_step, compose_specs, dual_spec, identity_like, induced_map
from ..core.lattice import box, minkowski, symmetric_hull
from ..core.rules import LinearRule
from ..core.spec import NucaSpec, build_spec
from ..errors import RadiusExhausted, UnsupportedError
from .reduction import _cols
from .report import DecisionReport


def _require_linear(spec: NucaSpec, what: str) -> None:
    if spec.sparse is not None:
        raise UnsupportedError(f"{what} is not available for sparse specs")
    if not spec.is_linear:
        raise UnsupportedError(f"{what} needs linear rules, but table rules are present")


def _base_witness(spec: NucaSpec) -> dict:
    from ..oracle import finite_support_kernel, kernel_window_d1

    if spec.d == 1:
        kw = kernel_window_d1(spec, 0)
        if kw.dim:
            return {
                "kind": "kernel-window",
                "window": [list(g) for g in kw.sites],
                "restriction": PatternConfig.from_window(kw.sites, kw.space.basis[0], spec.p, spec.k, spec.d),
            }
    w = finite_support_kernel(spec, 1)
    if w is not None:
        return {"kind": "finite-support", "config": w}
    return {}


def decide_injective(spec: NucaSpec) -> DecisionReport:
    _require_linear(spec, "injectivity")
    p, k, M = spec.p, spec.k, spec.memory
    inv = ca_invertible(spec.symbol())
    if not inv.verdict:
        diag = {"reason": "base symbol determinant is not a unit", "determinant": inv.witness["determinant"]}
        return DecisionReport("injective", False, {"witness": _base_witness(spec)}, diag)
    nprime = inv.certificate["memory"]
    D = tuple(sorted({tuple(e - n for e, n in zip(c, m)) for c in spec.cells for m in nprime}))
    diag = {"inverse_memory": [list(m) for m in nprime], "support_bound": len(D)}
    if not D:
        return DecisionReport("injective", True, {}, diag)
    H = minkowski(D, M)
    dom = minkowski(H, M)
    F = induced_map(spec, H, dom)
    A = F.body[:, _cols(D, dom, k)]
    ker = rref_kernel(A, p)
    diag["kernel_dim"] = ker.dim
    if ker.dim == 0:
        return DecisionReport("injective", True, {}, diag)
    w = PatternConfig.from_window(D, ker.basis[0], p, k, spec.d)
    if not apply_step(spec, w).is_zero():
        raise ArithmeticError("kernel witness failed re-verification")
    return DecisionReport("injective", False, {"witness": {"kind": "finite-support", "config": w}}, diag)


def construct_inverse(spec: NucaSpec, max_radius: int = 4) -> NucaSpec:
    """Spec t with sigma_t o sigma_s = sigma_s o sigma_t = id.

    Every perturbed cell g of t solves T_g F_g = Pi_g on its own, where F_g is
    the induced map of s on g + N_r and Pi_g reads the centre.
    """
    _require_linear(spec, "inversion")
    rep = decide_injective(spec)
    if not rep.verdict:
        raise UnsupportedError("precondition violated: the map is not injective")
    p, k, d, M = spec.p, spec.k, spec.d, spec.memory
    inv = ca_invertible(spec.symbol())
    nprime = inv.certificate["memory"]
    base = LinearRule.from_offsets(p, k, inv.certificate["inverse"].offsets())
    ident = identity_like(spec)
    for r in range(max_radius + 1):
        Nr = symmetric_hull(list(nprime) + list(box(d, r)), d)
        perts = []
        for g in minkowski(spec.cells, Nr):
            read = tuple(tuple(a + b for a, b in zip(g, n)) for n in Nr)
            dom = minkowski(read, M)
            F = induced_map(spec, read, dom)
            target = np.zeros((k, k * len(dom)), dtype=np.int64)
            target[:, _cols([g], dom, k)] = np.eye(k, dtype=np.int64)
            sol = solve(F.body.T, target.T, p)
            if sol is None:
                break
            mats = sol.T.reshape(k, len(Nr), k).transpose(1, 0, 2)
            perts.append((g, LinearRule(p, k, Nr, mats)))
        else:
            t = build_spec(p, k, d, base, perts)
            if compose_specs(t, spec) == ident and compose_specs(spec, t) == ident:
                return t
    raise RadiusExhausted(f"no inverse with perturbation memory of radius <= {max_radius}")


def decide_post_surjective(spec: NucaSpec) -> DecisionReport:
    _require_linear(spec, "post-surjectivity")
    dual = dual_spec(spec)
    inner = decide_injective(dual)
    return DecisionReport(
        "post-surjective",
        inner.verdict,
        {"dual_injective": inner.certificate},
        {"dual": inner.diagnostics},
    )

