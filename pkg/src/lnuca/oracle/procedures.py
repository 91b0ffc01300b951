"""Brute-force and semi-analytic checks of the decision procedures.

Everything here works from impulse responses, explicit enumeration and the
plain elimination in :mod:`lnuca.oracle.naive`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..algebra.linalg import Subspace
from ..core.config import PatternConfig, random_config
from ..core.dynamics import power_spec
from ..core.lattice import Point, add, box, minkowski, minkowski_power
from ..core.rules import LinearRule
from ..core.spec import NucaSpec, build_spec, local_rule_at
from ..errors import ResourceLimit, UnsupportedError
from . import naive
from .simulate import NaiveSystem, base_system, combine, impulse

CARRIER_CAP = 4096
# windows of table-mode enumerations; linear windows only cost elimination time
WINDOW_CAP = 24
LINEAR_WINDOW_CAP = 512


def _cfg(x: PatternConfig) -> dict:
    return {g: list(v) for g, v in x.cells}


def _to_config(spec: NucaSpec, x: dict) -> PatternConfig:
    return PatternConfig.from_dict(x, spec.p, spec.k, spec.d)


def _flat(x: dict, sites, k: int) -> list[int]:
    z = [0] * k
    return [c for g in sites for c in x.get(g, z)]


# ---------------------------------------------------------------- base CA


def _impulse_powers(spec: NucaSpec, n: int) -> list[list[dict]]:
    """responses[t][i] = sigma_c^t(delta_0 e_i) for t = 0..n."""
    sys = base_system(spec)
    o = (0,) * spec.d
    cur = [impulse(o, i, spec.k) for i in range(spec.k)]
    out = [cur]
    for _ in range(n):
        cur = [sys.step(x) for x in cur]
        out.append(cur)
    return out


def oracle_base(spec: NucaSpec, prop: str) -> tuple[bool, dict]:
    """Base CA verdict from impulse responses, with the exponents found."""
    k, p = spec.k, spec.p
    if prop == "nilpotent":
        resp = _impulse_powers(spec, k)
        for t in range(1, k + 1):
            if all(not x for x in resp[t]):
                return True, {"n0": t}
        return False, {}
    if prop == "periodic":
        bound = p**k
        resp = _impulse_powers(spec, bound)
        for t in range(1, bound + 1):
            if resp[t] == resp[0]:
                return True, {"period": t}
        return False, {}
    if prop == "eventual":
        bound = k + p**k
        resp = _impulse_powers(spec, bound)
        seen: dict = {}
        for t, r in enumerate(resp):
            key = tuple(_key(x) for x in r)
            if key in seen:
                a = seen[key]
                return True, {"preperiod": a, "period": t - a}
            seen[key] = t
        return False, {}
    raise ValueError(prop)


# ---------------------------------------------------------------- trapped windows


def _check_window(n_sites: int, linear: bool) -> None:
    cap = LINEAR_WINDOW_CAP if linear else WINDOW_CAP
    if n_sites > cap:
        raise ResourceLimit(f"oracle window of {n_sites} sites exceeds cap {cap}")


def _patterns(spec: NucaSpec, sites) -> list[dict]:
    total = spec.p ** (spec.k * len(sites))
    if total > CARRIER_CAP:
        raise ResourceLimit(f"oracle enumeration of {total} patterns exceeds cap {CARRIER_CAP}")
    out = []
    for digits in itertools.product(range(spec.p), repeat=spec.k * len(sites)):
        x = {}
        for j, g in enumerate(sites):
            v = list(digits[j * spec.k:(j + 1) * spec.k])
            if any(v):
                x[g] = v
        out.append(x)
    return out


def _key(x: dict) -> tuple:
    return tuple(sorted((g, tuple(v)) for g, v in x.items()))


def _trapped_sets(spec: NucaSpec, n0: int):
    """Wd = E + M^(n0-1) (sites touched after n0 steps) and R = Wd + M^n0 (sites read)."""
    Mn1 = minkowski_power(spec.memory, max(n0 - 1, 0), spec.d)
    Wd = minkowski(spec.cells, Mn1)
    R = minkowski(Wd, minkowski_power(spec.memory, n0, spec.d))
    return Wd, R


def oracle_trapped_enumeration(spec: NucaSpec, prop: str) -> bool:
    """Independent verdict for nilpotent / periodic / eventually-periodic."""
    spec = _finite_version(spec)
    mode = {"eventually-periodic": "eventual", "cayley-hamilton": "eventual"}.get(prop, prop)
    ok, info = oracle_base(spec, mode)
    if not ok:
        return False
    if mode == "eventual":
        # on a finite trapped carrier every map is eventually periodic
        return True
    n0 = info["n0"] if mode == "nilpotent" else info["period"]
    Wd, R = _trapped_sets(spec, n0)
    if not Wd:
        return True
    sys = NaiveSystem(spec)
    linear = spec.is_linear
    _check_window(len(R), linear)
    k, p = spec.k, spec.p
    if mode == "nilpotent":
        if linear:
            gens = []
            for h in R:
                for i in range(k):
                    y = sys.steps(impulse(h, i, k), n0)
                    if not set(y) <= set(Wd):
                        raise AssertionError("image escapes the trapped window")
                    gens.append(_flat(y, Wd, k))
            basis = naive.span_basis(gens, k * len(Wd), p)
            for b in basis:
                x = {g: b[j * k:(j + 1) * k] for j, g in enumerate(Wd) if any(b[j * k:(j + 1) * k])}
                x = sys.steps(x, n0 * (len(basis) + 1))
                if x:
                    return False
            return True
        carrier = {_key(sys.steps(x, n0)) for x in _patterns(spec, R)}
        for start in carrier:
            x = {g: list(v) for g, v in start}
            for _ in range(len(carrier)):
                if not x:
                    break
                x = sys.steps(x, n0)
            if x:
                return False
        return True
    # periodic: sigma^n0 fixes everything outside Wd and maps V^R to itself
    if linear:
        cols = []
        for h in R:
            for i in range(k):
                y = sys.steps(impulse(h, i, k), n0)
                cols.append(_flat(y, R, k))
        return naive.rank(cols, k * len(R), p) == k * len(R)
    images = {_key({g: v for g, v in sys.steps(x, n0).items() if g in set(R)}) for x in _patterns(spec, R)}
    return len(images) == p ** (k * len(R))


def oracle_certificate_check(spec: NucaSpec, m: int, n: int | None) -> bool:
    """Exact check of sigma^(m+n) = sigma^m (or sigma^m = 0 when n is None) on impulses."""
    spec = _finite_version(spec)
    if not spec.is_linear:
        return oracle_sampled_pair(spec, m, n, trials=50)
    sys = NaiveSystem(spec)
    steps = m + (n or 0)
    span = minkowski_power(spec.memory, steps, spec.d)
    reach = max((abs(c) for m in span for c in m), default=0)
    far = tuple([max((abs(c) for g in spec.cells for c in g), default=0) + 2 * reach + 1] * spec.d)
    sources = set(minkowski(spec.cells, span)) | {far, (0,) * spec.d}
    for h in sorted(sources):
        for i in range(spec.k):
            a = sys.steps(impulse(h, i, spec.k), m)
            if n is None:
                if a:
                    return False
            elif sys.steps(a, n) != a:
                return False
    return True


def oracle_sampled_pair(spec: NucaSpec, m: int, n: int | None, trials: int = 50, seed: int = 0) -> bool:
    spec = _finite_version(spec)
    rng = np.random.default_rng(seed)
    sys = NaiveSystem(spec)
    for _ in range(trials):
        x = _cfg(random_config(rng, spec.p, spec.k, spec.d, radius=2))
        a = sys.steps(x, m)
        if (n is None and a) or (n is not None and sys.steps(a, n) != a):
            return False
    return True


# ---------------------------------------------------------------- powers and annihilators


def oracle_power_agreement(
    spec: NucaSpec, n: int, trials: int = 20, candidate: NucaSpec | None = None, seed: int = 0
) -> bool:
    """apply_step^n agrees with one step of the power spec on random configurations."""
    cand = candidate if candidate is not None else power_spec(spec, n)
    rng = np.random.default_rng(seed)
    s1, sn = NaiveSystem(spec), NaiveSystem(cand)
    for _ in range(trials):
        x = _cfg(random_config(rng, spec.p, spec.k, spec.d, radius=2))
        if s1.steps(x, n) != sn.step(x):
            return False
    return True


def oracle_inverse_agreement(spec: NucaSpec, candidate: NucaSpec, trials: int = 20, seed: int = 0) -> bool:
    """Both compositions of spec and candidate fix random configurations."""
    rng = np.random.default_rng(seed)
    a, b = NaiveSystem(spec), NaiveSystem(candidate)
    for _ in range(trials):
        x = _cfg(random_config(rng, spec.p, spec.k, spec.d, radius=2))
        if a.step(b.step(x)) != x or b.step(a.step(x)) != x:
            return False
    return True


def _pair(p: int, x: dict, y: dict) -> int:
    return sum(sum(a * b for a, b in zip(v, y[g])) for g, v in x.items() if g in y) % p


def oracle_dual_agreement(spec: NucaSpec, candidate: NucaSpec, trials: int = 20, seed: int = 0) -> bool:
    """<sigma(x), y> == <x, candidate(y)> for random finitely supported pairs."""
    rng = np.random.default_rng(seed)
    a, b = NaiveSystem(spec), NaiveSystem(candidate)
    for _ in range(trials):
        x = _cfg(random_config(rng, spec.p, spec.k, spec.d, radius=2))
        y = _cfg(random_config(rng, spec.p, spec.k, spec.d, radius=2))
        if _pair(spec.p, a.step(x), y) != _pair(spec.p, x, b.step(y)):
            return False
    return True


def oracle_annihilator(spec: NucaSpec, coeffs, trials: int = 50, seed: int = 0) -> bool:
    """P(sigma)(x) == 0 for random x, P given by coefficients (constant term first)."""
    spec = _finite_version(spec)
    rng = np.random.default_rng(seed)
    sys = NaiveSystem(spec)
    for _ in range(trials):
        x = _cfg(random_config(rng, spec.p, spec.k, spec.d, radius=2))
        terms = []
        cur = x
        for i, c in enumerate(coeffs):
            if i:
                cur = sys.step(cur)
            if c % spec.p:
                terms.append((int(c), cur))
        if combine(spec.p, terms):
            return False
    return True


# ---------------------------------------------------------------- kernels


def _equations(spec: NucaSpec, sites) -> list[list[int]]:
    """Rows expressing sigma_s(x)(h) = 0 for every h whose nonzero reads stay inside ``sites``."""
    k, p = spec.k, spec.p
    pos = {g: j for j, g in enumerate(sites)}
    cand = minkowski(sites, spec.memory)
    rows = []
    for h in cand:
        rule = local_rule_at(spec, h)
        terms = [(add(h, m), a.tolist()) for m, a in rule.offsets().items()]
        if not terms or any(g not in pos for g, _ in terms):
            continue
        for r in range(k):
            row = [0] * (k * len(sites))
            for g, a in terms:
                for c in range(k):
                    row[pos[g] * k + c] = (row[pos[g] * k + c] + a[r][c]) % p
            rows.append(row)
    return rows


def finite_support_kernel(spec: NucaSpec, radius: int) -> PatternConfig | None:
    """A nonzero x supported in the box of the given radius with sigma_s(x) = 0, if any."""
    if not spec.is_linear:
        raise UnsupportedError("kernel search needs linear rules")
    sites = tuple(sorted(box(spec.d, radius)))
    pos = {g: j for j, g in enumerate(sites)}
    k, p = spec.k, spec.p
    rows = []
    for h in minkowski(sites, spec.memory):
        rule = local_rule_at(spec, h)
        for r in range(k):
            row = [0] * (k * len(sites))
            for m, a in rule.offsets().items():
                g = add(h, m)
                if g in pos:
                    for c in range(k):
                        row[pos[g] * k + c] = (row[pos[g] * k + c] + int(a[r][c])) % p
            if any(row):
                rows.append(row)
    basis = naive.nullspace(rows, k * len(sites), p)
    if not basis:
        return None
    w = PatternConfig.from_window(sites, basis[0], p, k, spec.d)
    if _cfg(w) and NaiveSystem(spec).step(_cfg(w)):
        raise AssertionError("finite kernel witness is not in the kernel")
    return w


@dataclass(frozen=True)
class TailSubspace:
    side: str
    width: int
    space: Subspace


def _base_span(rule: LinearRule) -> tuple[int, int, int]:
    offs = [m[0] for m in rule.offsets()]
    if not offs:
        return 0, 0, 1
    lo, hi = min(offs), max(offs)
    return lo, hi, max(hi - lo, 1)


def _base_rows(rule: LinearRule, length: int) -> list[list[int]]:
    """Base equations on a segment 0..length-1 whose reads fit inside it."""
    k, p = rule.k, rule.p
    offs = rule.offsets()
    if not offs:
        return []
    lo, hi, _ = _base_span(rule)
    rows = []
    for g in range(-lo, length - hi):
        for r in range(k):
            row = [0] * (k * length)
            for m, a in offs.items():
                j = g + m[0]
                for c in range(k):
                    row[j * k + c] = (row[j * k + c] + int(a[r][c])) % p
            rows.append(row)
    return rows


def tail_subspace(base: LinearRule | NucaSpec, side: str) -> TailSubspace:
    """Boundary windows of one-sided infinite kernel configurations of the base CA (d = 1).

    Iterates L -> {windows extendable by one more site into L} from the full
    window space until it stops shrinking.
    """
    rule = base.base if isinstance(base, NucaSpec) else base
    if any(len(m) != 1 for m in rule.memory):
        raise UnsupportedError("tail subspaces are implemented for d = 1")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    k, p = rule.k, rule.p
    _, _, w = _base_span(rule)
    n = k * w
    eqs = _base_rows(rule, w + 1)
    # window kept: right tails keep sites 0..w-1, left tails keep 1..w
    keep = list(range(n)) if side == "right" else list(range(k, k * (w + 1)))
    inner = list(range(k, k * (w + 1))) if side == "right" else list(range(n))
    L = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(n + 2):
        C = naive.annihilator(L, n, p)
        rows = list(eqs)
        for c in C:
            row = [0] * (k * (w + 1))
            for j, col in enumerate(inner):
                row[col] = c[j]
            rows.append(row)
        sol = naive.nullspace(rows, k * (w + 1), p)
        nxt = naive.span_basis(naive.project(sol, keep), n, p)
        if nxt == naive.span_basis(L, n, p):
            return TailSubspace(side, w, Subspace.span(nxt, n, p) if nxt else Subspace.zero(n, p))
        L = nxt
    raise AssertionError("tail iteration did not stabilize within its dimension bound")


def half_line_kernel(spec: NucaSpec) -> bool:
    """Whether the base CA has a nonzero kernel element supported on a half-line (d = 1)."""
    rule = spec.base
    k, p = rule.k, rule.p
    _, _, w = _base_span(rule)
    eqs = _base_rows(rule, 2 * w)
    n = k * w
    for side, tail in (("left", tail_subspace(rule, "left")), ("right", tail_subspace(rule, "right"))):
        # windows u with (u, 0^w) resp. (0^w, u) satisfying the equations they carry
        zero_part = range(n, 2 * n) if side == "left" else range(0, n)
        rows = list(eqs)
        for j in zero_part:
            rows.append([int(i == j) for i in range(2 * n)])
        sol = naive.nullspace(rows, 2 * n, p)
        own = list(range(0, n)) if side == "left" else list(range(n, 2 * n))
        S = naive.project(sol, own)
        T = tail.space.basis.tolist()
        # S and T intersect nontrivially iff dim S + dim T > dim(S + T)
        dS, dT = naive.rank(S, n, p) if S else 0, len(T)
        if dS + dT > (naive.rank(S + T, n, p) if S or T else 0):
            return True
    return False


@dataclass(frozen=True)
class KernelWindow:
    sites: tuple[Point, ...]
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim


def kernel_window_d1(spec: NucaSpec, r: int) -> KernelWindow:
    """Restrictions to a central window Z of kernel elements of sigma_s (d = 1)."""
    if spec.d != 1:
        raise UnsupportedError("the kernel window is implemented for d = 1")
    if not spec.is_linear or spec.sparse is not None:
        raise UnsupportedError("the kernel window needs a linear spec with finitely many perturbations")
    k, p = spec.k, spec.p
    _, _, w = _base_span(spec.base)
    lo = min(m[0] for m in spec.memory)
    hi = max(m[0] for m in spec.memory)
    cells = [c[0] for c in spec.cells] or [0]
    a, b = min(cells) + lo - w - r, max(cells) + hi + w + r
    sites = tuple((i,) for i in range(a, b + 1))
    n = k * len(sites)
    rows = _equations(spec, sites)
    left, right = tail_subspace(spec.base, "left"), tail_subspace(spec.base, "right")
    for tail, offset in ((left, 0), (right, len(sites) - w)):
        for c in naive.annihilator(tail.space.basis.tolist(), k * w, p):
            row = [0] * n
            for j, v in enumerate(c):
                row[offset * k + j] = v
            rows.append(row)
    sol = naive.nullspace(rows, n, p)
    space = Subspace.span(sol, n, p) if sol else Subspace.zero(n, p)
    return KernelWindow(sites, space)


def oracle_injective(spec: NucaSpec, r: int | None = None) -> bool:
    """d = 1 injectivity from the kernel window and the half-line test."""
    if r is None:
        radius = max((abs(m[0]) for m in spec.memory), default=0)
        r = 2 * spec.k * radius + 2
    if half_line_kernel(spec):
        return False
    return kernel_window_d1(spec, r).dim == 0


# ---------------------------------------------------------------- sparse specs


def _finite_version(spec: NucaSpec, copies: int | None = None) -> NucaSpec:
    """Finite truncation of a sparse spec: explicit cells plus some cluster copies."""
    if spec.sparse is None:
        return spec
    layout = spec.sparse
    ncl = len(layout.clusters)
    perts = list(spec.perturbations)
    pl = layout.placement
    if pl.generated:
        count = copies if copies is not None else 2 * ncl + 2
        for n in range(count):
            anchor = pl.position(n)
            perts += [(add(anchor, off), rule) for off, rule in layout.clusters[n % ncl].cells]
    else:
        # one far copy of every cluster type stands in for the promised ones
        spread = 4 * (1 + max((abs(c) for g in spec.cells for c in g), default=0)) + 8 * len(spec.memory)
        for t, cl in enumerate(layout.clusters):
            anchor = tuple([(t + 1) * spread] + [0] * (spec.d - 1))
            perts += [(add(anchor, off), rule) for off, rule in cl.cells]
    return build_spec(spec.p, spec.k, spec.d, spec.base, perts)
