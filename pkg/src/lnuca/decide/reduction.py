"""Reduction of a perturbed NUCA to an endomorphism of a finite carrier.

Let t describe sigma_s^n0 for a suitable n0 given by the base CA.

nilpotent   base of t is zero, so sigma_t(x) lives on the window EN.  The
            carrier is W = im f+_{EN,t} and phi(w) = sigma_t(w extended by 0)|EN.
periodic    base of t is the identity, so sigma_t only rewrites EN, reading
            EN^2.  phi acts on all of V^{EN^2}: f+ on EN, identity elsewhere.
eventual    base of t is an idempotent pi.  With P the perturbed cells of t,
            Q = P + N and A = Q + N, cells outside Q are frozen after one step
            of sigma_t, so phi acts on W = im f+_{A,t} by f+ on Q and the
            identity on A minus Q.  sigma_t^(j+1)(x)|A = phi^j(sigma_t(x)|A).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra.endo import FiniteEndo
from ..algebra.linalg import Subspace, image_basis
from ..ca_decide import CaVerdict, ca_eventually_periodic, ca_nilpotent, ca_periodic
from ..core.dynamics import induced_map, power_spec
from ..core.lattice import Point, add, minkowski, symmetric_hull
from ..core.rules import LinearRule, all_patterns
from ..core.spec import NucaSpec, local_rule_at
from ..errors import CarrierClosureError, ReductionError, ResourceLimit

CARRIER_CAP = 1 << 16
MODES = ("nilpotent", "periodic", "eventual")


@dataclass(frozen=True, eq=False)
class PhiReduction:
    mode: str
    n0: int
    power: NucaSpec
    N: tuple[Point, ...]
    window: tuple[Point, ...]
    updated: tuple[Point, ...]
    carrier: Subspace | None
    phi: FiniteEndo
    far_rules_checked: bool
    diagnostics: dict = field(default_factory=dict)

    @property
    def carrier_size(self) -> int:
        return self.phi.size


def base_exponent(spec: NucaSpec, mode: str) -> tuple[CaVerdict, int | None]:
    """Base verdict and the exponent n0 it supplies (None when the verdict is false)."""
    m = spec.symbol()
    if mode == "nilpotent":
        v = ca_nilpotent(m)
        return v, (v.certificate["n0"] if v.verdict else None)
    if mode == "periodic":
        v = ca_periodic(m)
        return v, (v.certificate["period"] if v.verdict else None)
    if mode == "eventual":
        v = ca_eventually_periodic(m)
        if not v.verdict:
            return v, None
        m0, nb = v.certificate["preperiod"], v.certificate["period"]
        return v, nb * -(-max(m0, 1) // nb)
    raise ValueError(f"unknown reduction mode {mode!r}")


def _cols(sites, domain, k: int) -> np.ndarray:
    pos = {g: i for i, g in enumerate(domain)}
    return np.array([pos[g] * k + c for g in sites for c in range(k)], dtype=np.int64)


def _patterns(p: int, length: int) -> np.ndarray:
    try:
        return all_patterns(p, length, CARRIER_CAP)
    except ResourceLimit as exc:
        raise ResourceLimit(f"table-mode carrier enumeration: {exc}") from None


def _table_endo(states: np.ndarray, images: np.ndarray) -> FiniteEndo:
    keys = [tuple(r) for r in states.tolist()]
    index = {s: i for i, s in enumerate(keys)}
    try:
        img = [index[tuple(r)] for r in images.tolist()]
    except KeyError:
        raise ReductionError("reduction-precondition-violated: phi escapes its carrier") from None
    zero = tuple([0] * states.shape[1])
    return FiniteEndo(states=keys, images=img, zero_index=index.get(zero))


def _unique_rows(a: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.unique(a, axis=0)


def _linear_endo(carrier: Subspace, matrix: np.ndarray) -> FiniteEndo:
    try:
        return FiniteEndo(carrier=carrier, matrix=matrix)
    except CarrierClosureError as exc:
        raise ReductionError(f"reduction-precondition-violated: {exc}") from None


def reduce_phi(spec: NucaSpec, mode: str, n0: int | None = None) -> PhiReduction:
    if mode not in MODES:
        raise ValueError(f"unknown reduction mode {mode!r}")
    if n0 is None:
        verdict, n0 = base_exponent(spec, mode)
        if n0 is None:
            raise ReductionError(f"reduction-precondition-violated: base CA is not {verdict.prop}")
    t = power_spec(spec, n0)
    if mode == "nilpotent":
        return _reduce_nilpotent(spec, t, n0)
    if mode == "periodic":
        return _reduce_periodic(spec, t, n0)
    return _reduce_eventual(spec, t, n0)


def window_memory(spec: NucaSpec, t: NucaSpec, n0: int) -> tuple[Point, ...]:
    """Symmetric memory covering every M^j, j <= n0, and the memory of t.

    Cells perturbed in t lie in E - M^j for some j < n0, so EN contains them
    even when 0 is not in M.
    """
    pts = set(t.memory)
    layer: tuple[Point, ...] = (tuple([0] * spec.d),)
    for _ in range(n0):
        layer = minkowski(layer, spec.memory)
        pts.update(layer)
    return symmetric_hull(pts, spec.d)


def _reduce_nilpotent(spec: NucaSpec, t: NucaSpec, n0: int) -> PhiReduction:
    p, k = t.p, t.k
    N = window_memory(spec, t, n0)
    if not t.base.is_zero():
        raise ReductionError("reduction-precondition-violated: base power is not zero")
    EN = minkowski(spec.cells, N)
    outside = set(t.cells) - set(EN)
    if outside:
        raise ReductionError(f"reduction-precondition-violated: perturbed cells {sorted(outside)} outside EN")
    if not t.is_linear:
        # sigma_t(x) is supported on the cells t perturbs; enumerate only those
        EN = tuple(t.cells)
        N = t.memory
    dom = minkowski(EN, N)
    F = induced_map(t, EN, dom)
    cols = _cols(EN, dom, k)
    if F.is_linear:
        carrier = image_basis(F.body, p)
        phi = _linear_endo(carrier, F.body[:, cols])
    else:
        carrier = None
        images = _unique_rows(F.apply_batch(_patterns(p, k * len(dom))))
        lifted = np.zeros((images.shape[0], k * len(dom)), dtype=np.int64)
        lifted[:, cols] = images
        phi = _table_endo(images, F.apply_batch(lifted))
    diag = {"window": len(EN), "domain": len(dom), "carrier_size": phi.size}
    return PhiReduction("nilpotent", n0, t, N, EN, EN, carrier, phi, True, diag)


def _reduce_periodic(spec: NucaSpec, t: NucaSpec, n0: int) -> PhiReduction:
    p, k = t.p, t.k
    N = window_memory(spec, t, n0)
    proj = LinearRule.projection(p, k, t.memory)
    if t.base != proj:
        raise ReductionError("reduction-precondition-violated: base power is not the identity")
    EN = minkowski(spec.cells, N)
    EN2 = minkowski(EN, N)
    outside = set(t.cells) - set(EN)
    if outside:
        raise ReductionError(f"reduction-precondition-violated: perturbed cells {sorted(outside)} outside EN")
    for g in set(minkowski(EN2, N)) - set(EN):
        if local_rule_at(t, g) != proj:
            raise ReductionError(f"reduction-precondition-violated: far rule at {g} is not the projection")
    if t.is_linear:
        window, updated = EN2, EN
    else:
        # phi fixes every coordinate outside the cells t rewrites, so the
        # read set of those cells carries the same bijectivity and order
        updated = tuple(t.cells)
        window = minkowski(updated, t.memory)
    F = induced_map(t, updated, window)
    rows = _cols(updated, window, k)
    n = k * len(window)
    if F.is_linear:
        matrix = np.eye(n, dtype=np.int64)
        matrix[rows] = F.body
        carrier = Subspace.full(n, p)
        phi = _linear_endo(carrier, matrix)
    else:
        carrier = None
        states = _patterns(p, n)
        images = states.copy()
        images[:, rows] = F.apply_batch(states)
        phi = _table_endo(states, images)
    diag = {"window": len(window), "updated": len(updated), "carrier_size": phi.size}
    return PhiReduction("periodic", n0, t, N, window, updated, carrier, phi, True, diag)


def _check_frozen_band(t: NucaSpec, band, limit: int) -> bool:
    """For g outside the core, pi(sigma_t z)(g) must equal sigma_t(z)(g)."""
    p, k, N = t.p, t.k, t.memory
    N2 = minkowski(N, N)
    checked = True
    for g in band:
        rule = local_rule_at(t, g)
        read = tuple(add(g, m) for m in N)
        dom = tuple(add(g, m) for m in N2)
        inner = induced_map(t, read, dom)
        cols = _cols(read, dom, k)
        if rule.is_linear and inner.is_linear:
            lhs = (rule.block() @ inner.body) % p
            rhs = np.zeros_like(lhs)
            rhs[:, cols] = rule.block()
            ok = np.array_equal(lhs, rhs)
        elif p ** (k * len(dom)) <= limit:
            U = all_patterns(p, k * len(dom), limit)
            lhs = rule.evaluate_batch(inner.apply_batch(U).reshape(-1, len(N), k))
            rhs = rule.evaluate_batch(U[:, cols].reshape(-1, len(N), k))
            ok = np.array_equal(lhs, rhs)
        else:
            checked = False
            continue
        if not ok:
            raise ReductionError(f"reduction-precondition-violated: cell {g} is not frozen on the image")
    return checked


def _reduce_eventual(spec: NucaSpec, t: NucaSpec, n0: int) -> PhiReduction:
    p, k = t.p, t.k
    N = t.memory
    sym = t.symbol()
    if sym @ sym != sym:
        raise ReductionError("reduction-precondition-violated: base power is not idempotent")
    P = t.cells
    Q = minkowski(P, N)
    A = minkowski(Q, N)
    dom = minkowski(A, N)
    band = tuple(sorted(set(A) - set(Q)))
    checked = _check_frozen_band(t, band, CARRIER_CAP)
    FA = induced_map(t, A, dom)
    FQ = induced_map(t, Q, A)
    rows = _cols(Q, A, k)
    n = k * len(A)
    if FA.is_linear:
        carrier = image_basis(FA.body, p)
        matrix = np.eye(n, dtype=np.int64)
        matrix[rows] = FQ.body
        phi = _linear_endo(carrier, matrix)
    else:
        carrier = None
        states = _unique_rows(FA.apply_batch(_patterns(p, k * len(dom))))
        images = states.copy()
        if len(Q):
            images[:, rows] = FQ.apply_batch(states)
        phi = _table_endo(states, images)
    diag = {"window": len(A), "updated": len(Q), "domain": len(dom), "carrier_size": phi.size}
    return PhiReduction("eventual", n0, t, N, A, Q, carrier, phi, checked, diag)
