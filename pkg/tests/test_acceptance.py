"""Acceptance criteria. Each test prints one PASS/FAIL line and asserts it."""

from __future__ import annotations

import time

import numpy as np
import pytest

from lnuca.algebra import LaurentPoly, SymbolMatrix, char_poly
from lnuca.algebra.linalg import rref
from lnuca.core import (
    apply_step,
    apply_steps,
    build_spec,
    compose_specs,
    dual_spec,
    identity_like,
    pairing,
    power_spec,
    random_config,
    shift_config,
    shift_spec,
)
from lnuca.core.lattice import box
from lnuca.core.rules import LinearRule
from lnuca.decide import PROPERTIES, construct_inverse, decide
from lnuca.errors import RadiusExhausted, UnsupportedError
from lnuca.oracle import (
    finite_support_kernel,
    kernel_window_d1,
    oracle_annihilator,
    oracle_certificate_check,
    oracle_dual_agreement,
    oracle_injective,
    oracle_inverse_agreement,
    oracle_power_agreement,
    oracle_sampled_pair,
    oracle_trapped_enumeration,
    tail_subspace,
)
from lnuca.suite import curated_suite, random_spec, random_suite

CURATED = curated_suite()
RANDOM = random_suite(100, seed=0)
SUITE = [c.spec for c in CURATED] + RANDOM
DYNAMICAL = ("nilpotent", "periodic", "eventually-periodic")


def verdict(spec, prop):
    try:
        return decide(spec, prop).verdict
    except UnsupportedError:
        return None


def random_linear_specs(count: int, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        s = random_spec(rng)
        if s.is_linear:
            out.append((s, rng))
    return out


# ---------------------------------------------------------------- 1


def test_curated_decision_suite(criterion):
    t0 = time.perf_counter()
    bad = []
    for case in CURATED:
        for prop in PROPERTIES:
            got = verdict(case.spec, prop)
            if got != case.expected[prop]:
                bad.append(f"{case.name}/{prop}: {got} != {case.expected[prop]}")
        for prop, want in case.certificates.items():
            cert = decide(case.spec, prop).certificate
            bad += [f"{case.name}/{prop}/{k}" for k, v in want.items() if cert.get(k) != v]
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60 and len(CURATED) >= 12
    detail = f"{len(CURATED)} specs x {len(PROPERTIES)} properties, {len(bad)} mismatches, {elapsed:.2f}s (< 60s)"
    assert criterion(1, ok, detail), bad


# ---------------------------------------------------------------- 2


def test_verdicts_agree_with_oracles(criterion):
    t0 = time.perf_counter()
    bad, checked = [], 0
    for i, spec in enumerate(SUITE):
        for prop in DYNAMICAL:
            checked += 1
            if decide(spec, prop).verdict != oracle_trapped_enumeration(spec, prop):
                bad.append((i, prop))
        if spec.is_linear and spec.sparse is None and spec.d == 1:
            checked += 1
            if decide(spec, "injective").verdict != oracle_injective(spec):
                bad.append((i, "injective"))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 300
    detail = f"{len(SUITE)} specs, {checked} comparisons, {len(bad)} disagreements, {elapsed:.1f}s (< 300s)"
    assert criterion(2, ok, detail), bad


# ---------------------------------------------------------------- 3


def test_equivariance(criterion):
    rng = np.random.default_rng(3)
    fails = 0
    for _ in range(200):
        spec = random_spec(rng)
        g = (int(rng.integers(-6, 7)),)
        n = int(rng.integers(0, 4))
        x = random_config(rng, spec.p, spec.k, 1, radius=3)
        if apply_steps(shift_spec(spec, g), shift_config(x, g), n) != shift_config(apply_steps(spec, x, n), g):
            fails += 1
    assert criterion(3, fails == 0, f"200 (spec, g, x, n <= 3) instances, {fails} failures")


# ---------------------------------------------------------------- 4


def test_power_agreement(criterion):
    rng = np.random.default_rng(4)
    fails = 0
    for _ in range(200):
        spec = random_spec(rng)
        n = int(rng.integers(1, 4))
        x = random_config(rng, spec.p, spec.k, 1, radius=3)
        if apply_step(power_spec(spec, n), x) != apply_steps(spec, x, n):
            fails += 1
    assert criterion(4, fails == 0, f"200 instances with n <= 3, {fails} failures")


# ---------------------------------------------------------------- 5


def test_duality(criterion):
    fails = 0
    for spec, rng in random_linear_specs(200, seed=5):
        x = random_config(rng, spec.p, spec.k, 1, radius=3)
        y = random_config(rng, spec.p, spec.k, 1, radius=3)
        if pairing(apply_step(spec, x), y) != pairing(x, apply_step(dual_spec(spec), y)):
            fails += 1
    linear = [s for s in SUITE if s.is_linear and s.sparse is None]
    involution = sum(dual_spec(dual_spec(s)) != s for s in linear)
    ok = fails == 0 and involution == 0
    detail = f"200 pairs, {fails} pairing failures; dual of dual on {len(linear)} specs, {involution} failures"
    assert criterion(5, ok, detail)


# ---------------------------------------------------------------- 6


def test_cayley_hamilton_equivalence(criterion):
    mismatch, annihilators, bad = 0, 0, 0
    for spec in SUITE:
        if not spec.is_linear:
            continue
        ch = decide(spec, "cayley-hamilton")
        if ch.verdict != decide(spec, "eventually-periodic").verdict:
            mismatch += 1
        if "annihilator" in ch.certificate:
            annihilators += 1
            bad += not oracle_annihilator(spec, ch.certificate["annihilator"], trials=50)
    ok = mismatch == 0 and bad == 0
    detail = f"{mismatch} verdict mismatches; {annihilators} annihilators, {bad} rejected at 50 samples"
    assert criterion(6, ok, detail)


# ---------------------------------------------------------------- 7


def _pair(cert):
    if "exponent" in cert:
        return cert["exponent"], None
    if "preperiod" in cert:
        return cert["preperiod"], cert["period"]
    if "period" in cert:
        return 0, cert["period"]
    return None


def test_certificate_soundness(criterion):
    certs, bad = 0, []
    for i, spec in enumerate(SUITE):
        for prop in DYNAMICAL:
            rep = decide(spec, prop)
            pair = _pair(rep.certificate) if rep.verdict else None
            if pair is None:
                continue
            certs += 1
            m, n = pair
            if not (oracle_sampled_pair(spec, m, n, trials=50, seed=i) and oracle_certificate_check(spec, m, n)):
                bad.append((i, prop, pair))
    inverses, exhausted, wrong = 0, 0, []
    for i, spec in enumerate(SUITE):
        if not spec.is_linear or spec.sparse is not None or not decide(spec, "injective").verdict:
            continue
        try:
            inv = construct_inverse(spec)
        except RadiusExhausted:
            exhausted += 1
            continue
        inverses += 1
        ident = identity_like(spec)
        if not (compose_specs(spec, inv) == ident == compose_specs(inv, spec)):
            wrong.append(i)
    ok = not bad and not wrong
    detail = (
        f"{certs} certificates on 50 windows, {len(bad)} unsound; "
        f"{inverses} inverses, {len(wrong)} fail to compose ({exhausted} beyond the default radius)"
    )
    assert criterion(7, ok, detail), (bad, wrong)


# ---------------------------------------------------------------- 8


def test_shift_invariance(criterion):
    changed, total = [], 0
    for case in CURATED:
        d = case.spec.d
        shifts = [g for g in box(d, 3) if any(g)]
        for g in shifts:
            moved = shift_spec(case.spec, g)
            for prop in PROPERTIES:
                total += 1
                if verdict(moved, prop) != case.expected[prop]:
                    changed.append((case.name, g, prop))
    ok = not changed
    assert criterion(8, ok, f"{total} shifted verdicts with |g| <= 3, {len(changed)} changed"), changed


# ---------------------------------------------------------------- 9


def random_symbol(rng, p, k, d, terms=4):
    rows = []
    for _ in range(k):
        row = []
        for _ in range(k):
            t = {}
            for _ in range(int(rng.integers(0, terms + 1))):
                t[tuple(int(x) for x in rng.integers(-2, 3, size=d))] = int(rng.integers(1, p))
            row.append(LaurentPoly(p, d, t))
        rows.append(row)
    return SymbolMatrix.from_rows(rows, p, d)


def test_cayley_hamilton_substitution(criterion):
    rng = np.random.default_rng(9)
    fails = 0
    for _ in range(100):
        p = int(rng.choice([2, 3, 5]))
        k, d = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        m = random_symbol(rng, p, k, d)
        fails += not char_poly(m).evaluate(m).is_zero()
    assert criterion(9, fails == 0, f"100 random symbol matrices (k <= 3, d <= 2), {fails} nonzero")


# ---------------------------------------------------------------- 10


def test_negative_controls(criterion):
    cases = {c.name: c.spec for c in CURATED}
    rule90 = cases["rule90"]
    wrong_power = power_spec(rule90, 3)
    flagged = [not oracle_power_agreement(rule90, 2, 20, wrong_power)]
    inv_spec = cases["id_plus_x0x1"]
    wrong_inverse = build_spec(2, 1, 1, {(0,): [[1]]}, [((0,), LinearRule.from_offsets(2, 1, {(1,): [[1]]}))])
    flagged.append(not oracle_inverse_agreement(inv_spec, wrong_inverse))
    flagged.append(not oracle_inverse_agreement(inv_spec, cases["identity"]))
    shift = cases["shift"]
    flagged.append(not oracle_dual_agreement(shift, shift))
    # controls must not fire on the right answers
    clean = [
        oracle_power_agreement(rule90, 2, 20, power_spec(rule90, 2)),
        oracle_inverse_agreement(inv_spec, construct_inverse(inv_spec)),
        oracle_dual_agreement(shift, dual_spec(shift)),
    ]
    onepx = cases["onepx"]
    no_finite = all(finite_support_kernel(onepx, r) is None for r in range(1, 9))
    tails = tail_subspace(onepx, "left").space.dim > 0 and tail_subspace(onepx, "right").space.dim > 0
    window = kernel_window_d1(onepx, 4).dim > 0
    decided = decide(onepx, "injective").verdict is False and oracle_injective(onepx) is False
    ok = all(flagged) and all(clean) and no_finite and tails and window and decided
    detail = (
        f"{sum(flagged)}/{len(flagged)} corrupted fixtures flagged, {sum(clean)}/{len(clean)} correct ones accepted; "
        f"1+x non-injective with no finite kernel witness up to radius 8 (tail window dim > 0: {window})"
    )
    assert criterion(10, ok, detail)


# ---------------------------------------------------------------- 11


def test_performance(criterion):
    slowest, name = 0.0, ""
    for case in CURATED:
        for prop in PROPERTIES:
            t0 = time.perf_counter()
            verdict(case.spec, prop)
            dt = time.perf_counter() - t0
            if dt > slowest:
                slowest, name = dt, f"{case.name}/{prop}"
    a = np.random.default_rng(11).integers(0, 2, size=(2000, 2000))
    t0 = time.perf_counter()
    packed = rref(a, 2, "gf2")
    t_packed = time.perf_counter() - t0
    t0 = time.perf_counter()
    generic = rref(a, 2, "generic")
    t_generic = time.perf_counter() - t0
    same = packed[1] == generic[1] and np.array_equal(packed[0], generic[0])
    speedup = t_generic / t_packed
    ok = slowest < 10 and speedup >= 5 and same
    detail = (
        f"slowest decision {slowest:.3f}s ({name}, < 10s); 2000x2000 GF(2) RREF "
        f"packed {t_packed:.2f}s vs generic {t_generic:.2f}s, speedup {speedup:.0f}x (>= 5x)"
    )
    assert criterion(11, ok, detail)


@pytest.mark.parametrize("prop", PROPERTIES)
def test_decisions_are_deterministic(prop):
    for case in CURATED[:8]:
        a, b = decide(case.spec, prop), decide(case.spec, prop)
        assert a.verdict == b.verdict and str(a.certificate) == str(b.certificate)
