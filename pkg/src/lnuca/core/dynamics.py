"""One-step dynamics, induced local maps, and spec-level operations.

``apply_step`` works site by site on a :class:`PatternConfig`.  ``InducedMap``
is the same computation restricted to a finite window and expressed as a
matrix (all rules linear) or as a batch of rule lookups (some table rule).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import ResourceLimit, UnsupportedError
from .config import PatternConfig
from .lattice import Point, add, minkowski, minkowski_power, neg
from .rules import DEFAULT_TABLE_CAP, LinearRule, Rule, TableRule, all_patterns
from .spec import NucaSpec, SparseLayout, build_spec, local_rule_at

DEFAULT_MEMORY_CAP = 4096


def apply_step(spec: NucaSpec, x: PatternConfig) -> PatternConfig:
    """sigma_s(x)(g) = s(g)(x(g + m) for m in M)."""
    vals = x.as_dict()
    zero = (0,) * spec.k
    sites = {add(h, m) for h in vals for m in spec.memory}
    out = {}
    for g in sorted(sites):
        rule = local_rule_at(spec, g)
        window = [vals.get(add(g, m), zero) for m in spec.memory]
        v = rule.apply_window(window)
        if any(v):
            out[g] = v
    return PatternConfig(x.p, x.k, x.d, tuple(sorted(out.items())))


def apply_steps(spec: NucaSpec, x: PatternConfig, n: int) -> PatternConfig:
    for _ in range(n):
        x = apply_step(spec, x)
    return x


@dataclass(frozen=True, eq=False)
class InducedMap:
    """f+ : V^domain -> V^codomain, flattened site-major, component-minor."""

    p: int
    k: int
    codomain: tuple[Point, ...]
    domain: tuple[Point, ...]
    rules: tuple[Rule, ...]
    gather: np.ndarray  # (|codomain|, |M|) positions into the domain
    body: np.ndarray | None

    @property
    def is_linear(self) -> bool:
        return self.body is not None

    @property
    def shape(self) -> tuple[int, int]:
        return self.k * len(self.codomain), self.k * len(self.domain)

    def apply(self, u) -> np.ndarray:
        return self.apply_batch(np.asarray(u, dtype=np.int64).reshape(1, -1))[0]

    def apply_batch(self, U: np.ndarray) -> np.ndarray:
        U = np.asarray(U, dtype=np.int64)
        if self.body is not None:
            return (U @ self.body.T) % self.p
        B = U.shape[0]
        U3 = U.reshape(B, len(self.domain), self.k)
        out = np.empty((B, len(self.codomain), self.k), dtype=np.int64)
        for i, rule in enumerate(self.rules):
            out[:, i, :] = rule.evaluate_batch(U3[:, self.gather[i], :])
        return out.reshape(B, -1)


def induced_map(spec: NucaSpec, sites: Iterable[Point], domain: Sequence[Point] | None = None) -> InducedMap:
    """Induced map on the window ``sites``; the domain defaults to sites + M, sorted."""
    sites = tuple(tuple(g) for g in sites)
    if domain is None:
        domain = minkowski(sites, spec.memory)
    domain = tuple(tuple(g) for g in domain)
    pos = {g: i for i, g in enumerate(domain)}
    k = spec.k
    rules = tuple(local_rule_at(spec, g) for g in sites)
    gather = np.zeros((len(sites), len(spec.memory)), dtype=np.int64)
    for i, g in enumerate(sites):
        for j, m in enumerate(spec.memory):
            h = add(g, m)
            if h not in pos:
                raise ValueError(f"site {h} read by {g} is outside the given domain")
            gather[i, j] = pos[h]
    body = None
    if all(r.is_linear for r in rules):
        body = np.zeros((k * len(sites), k * len(domain)), dtype=np.int64)
        for i, rule in enumerate(rules):
            for j in range(len(spec.memory)):
                c = gather[i, j]
                body[i * k:(i + 1) * k, c * k:(c + 1) * k] += rule.mats[j]
        body %= spec.p
        body.setflags(write=False)
    gather.setflags(write=False)
    return InducedMap(spec.p, k, sites, domain, rules, gather, body)


def _require_plain(*specs: NucaSpec) -> None:
    for s in specs:
        if s.sparse is not None:
            raise UnsupportedError("operation needs a spec with finitely many perturbations")


def compose_specs(a: NucaSpec, b: NucaSpec, table_cap: int = DEFAULT_TABLE_CAP) -> NucaSpec:
    """Spec of sigma_a o sigma_b."""
    _require_plain(a, b)
    if (a.p, a.k, a.d) != (b.p, b.k, b.d):
        raise UnsupportedError("cannot compose specs over different alphabets or lattices")
    p, k, d = a.p, a.k, a.d
    mab = minkowski(a.memory, b.memory)
    base_sym = a.symbol() @ b.symbol()
    base = LinearRule.from_offsets(p, k, base_sym.offsets())
    cells = sorted(set(a.cells) | set(minkowski(b.cells, a.memory)))
    perts = []
    for g in cells:
        window = tuple(add(g, m) for m in a.memory)
        domain = tuple(add(g, m) for m in mab)
        F = induced_map(b, window, domain)
        ra = local_rule_at(a, g)
        if ra.is_linear and F.is_linear:
            C = (ra.block() @ F.body) % p
            mats = C.reshape(k, len(mab), k).transpose(1, 0, 2)
            perts.append((g, LinearRule(p, k, mab, mats)))
        else:
            U = all_patterns(p, k * len(mab), table_cap)
            V = F.apply_batch(U)
            out = ra.evaluate_batch(V.reshape(-1, len(a.memory), k))
            perts.append((g, TableRule(p, k, mab, out)))
    return build_spec(p, k, d, base, perts, table_cap=table_cap)


def power_spec(
    spec: NucaSpec, n: int, memory_cap: int = DEFAULT_MEMORY_CAP, table_cap: int = DEFAULT_TABLE_CAP
) -> NucaSpec:
    """Spec t with sigma_t = sigma_s^n."""
    if n < 1:
        raise ValueError("power must be at least 1")
    _require_plain(spec)
    size = len(minkowski_power(spec.memory, n, spec.d))
    if size > memory_cap:
        raise ResourceLimit(f"memory of the {n}-th power has {size} offsets (cap {memory_cap})")
    t = spec
    for _ in range(n - 1):
        t = compose_specs(spec, t, table_cap)
    return t


def shift_spec(spec: NucaSpec, g: Point) -> NucaSpec:
    """Spec of g s, i.e. (g s)(h) = s(h - g)."""
    g = tuple(g)
    perts = [(add(c, g), r) for c, r in spec.perturbations]
    layout = None
    if spec.sparse is not None:
        layout = SparseLayout(spec.sparse.clusters, spec.sparse.placement.shifted(g))
    return build_spec(spec.p, spec.k, spec.d, spec.base, perts, layout)


def dual_spec(spec: NucaSpec) -> NucaSpec:
    """Adjoint NUCA for the pairing sum_g x(g).y(g)."""
    _require_plain(spec)
    if not spec.is_linear:
        raise UnsupportedError("the dual is defined for linear specs only")
    p, k, M = spec.p, spec.k, spec.memory
    index = {m: i for i, m in enumerate(M)}

    def dual_rule(h: Point | None) -> LinearRule:
        mats = np.zeros((len(M), k, k), dtype=np.int64)
        for i, m in enumerate(M):
            src = spec.base if h is None else local_rule_at(spec, add(h, m))
            mats[i] = src.mats[index[neg(m)]].T
        return LinearRule(p, k, M, mats)

    cells = minkowski(spec.cells, M)
    perts = [(h, dual_rule(h)) for h in cells]
    return build_spec(p, k, spec.d, dual_rule(None), perts)


def identity_like(spec: NucaSpec) -> NucaSpec:
    return build_spec(spec.p, spec.k, spec.d, {(0,) * spec.d: np.eye(spec.k, dtype=np.int64)})
