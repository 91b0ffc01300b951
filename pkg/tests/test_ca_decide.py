from __future__ import annotations

import itertools

import numpy as np
import pytest

from lnuca.algebra import SymbolMatrix
from lnuca.ca_decide import ca_eventually_periodic, ca_invertible, ca_nilpotent, ca_periodic
from lnuca.core import apply_step, apply_steps, build_spec, compose_specs, random_config
from lnuca.oracle import oracle_base

from conftest import sym


def test_nilpotent_examples():
    v = ca_nilpotent(SymbolMatrix.zeros(2, 2, 1))
    assert v.verdict and v.certificate["n0"] == 2
    v = ca_nilpotent(sym(2, 1, [[{}, {1: 1}], [{}, {}]]))
    assert v.verdict and v.certificate["n0"] == 2 and v.certificate["index"] == 2
    assert not ca_nilpotent(sym(2, 1, [[{1: 1, -1: 1}]])).verdict


def test_periodic_examples():
    v = ca_periodic(SymbolMatrix.identity(1, 2, 1))
    assert v.verdict and v.certificate["period"] == 1
    v = ca_periodic(sym(3, 1, [[{0: 2}]]))
    assert v.verdict and v.certificate["period"] == 2
    assert not ca_periodic(sym(2, 1, [[{1: 1}]])).verdict


def test_periodic_false_with_constant_coefficients_exhibits_powers():
    # [[1,1],[0,1]] over GF(2) has period 2; [[0,1],[0,0]] has constant
    # coefficients but never returns to I
    v = ca_periodic(sym(2, 1, [[{}, {0: 1}], [{}, {}]]))
    assert not v.verdict
    a, b = v.witness["equal_powers"]
    m = sym(2, 1, [[{}, {0: 1}], [{}, {}]])
    assert a > 0 and m**a == m**b


def test_eventually_periodic_examples():
    v = ca_eventually_periodic(sym(2, 1, [[{}, {1: 1}], [{}, {}]]))
    assert v.verdict and v.certificate == {"preperiod": 2, "period": 1}
    v = ca_eventually_periodic(SymbolMatrix.identity(1, 2, 1))
    assert v.certificate == {"preperiod": 0, "period": 1}
    assert not ca_eventually_periodic(sym(2, 1, [[{1: 1, -1: 1}]])).verdict
    # distinct symbolic powers x^(2^t) + x^(-2^t) confirm there is no repeat
    m = sym(2, 1, [[{1: 1, -1: 1}]])
    powers = [m ** (2**t) for t in range(5)]
    assert len(set(powers)) == 5


def test_invertible_examples():
    v = ca_invertible(sym(2, 1, [[{1: 1}]]))
    assert v.verdict and v.certificate["inverse"] == sym(2, 1, [[{-1: 1}]]) and v.certificate["memory"] == [(-1,)]
    assert not ca_invertible(sym(2, 1, [[{0: 1, 1: 1}]])).verdict
    v = ca_invertible(sym(3, 1, [[{0: 1}, {1: 1}], [{}, {0: 1}]]))
    assert v.certificate["inverse"] == sym(3, 1, [[{0: 1}, {1: 2}], [{}, {0: 1}]])


def all_bases(p=2, k_max=2):
    offsets = [(-1,), (0,), (1,)]
    for k in range(1, k_max + 1):
        for entries in itertools.product(range(p), repeat=k * k * len(offsets)):
            a = np.array(entries).reshape(len(offsets), k, k)
            yield build_spec(p, k, 1, {m: a[i] for i, m in enumerate(offsets)})


def test_exhaustive_agreement_with_impulse_oracle():
    """Every base with p = 2, k <= 2, M inside {-1, 0, 1}."""
    count = 0
    for spec in all_bases():
        m = spec.symbol()
        nil = ca_nilpotent(m)
        per = ca_periodic(m)
        ev = ca_eventually_periodic(m)
        o_nil, info = oracle_base(spec, "nilpotent")
        assert nil.verdict == o_nil
        if o_nil:
            assert info["n0"] == nil.certificate["index"]
        o_per, info = oracle_base(spec, "periodic")
        assert per.verdict == o_per
        if o_per:
            assert info["period"] == per.certificate["period"]
        o_ev, info = oracle_base(spec, "eventual")
        assert ev.verdict == o_ev
        if o_ev:
            assert info == ev.certificate
        count += 1
    assert count == 8 + 4096


@pytest.mark.parametrize("seed", range(5))
def test_periodic_certificate_fixes_random_configs(seed):
    rng = np.random.default_rng(seed)
    spec = build_spec(3, 2, 1, {(0,): [[1, 0], [0, 1]], (1,): [[0, 1], [0, 0]]})
    v = ca_periodic(spec.symbol())
    assert v.verdict
    for _ in range(20):
        x = random_config(rng, 3, 2, 1, radius=4)
        assert apply_steps(spec, x, v.certificate["period"]) == x


def test_inverse_spec_composes_to_identity():
    spec = build_spec(3, 2, 1, {(0,): [[1, 0], [0, 1]], (1,): [[0, 1], [0, 0]]})
    inv = ca_invertible(spec.symbol()).certificate["inverse"]
    inv_spec = build_spec(3, 2, 1, inv.offsets())
    ident = build_spec(3, 2, 1, {(0,): np.eye(2, dtype=np.int64)})
    assert compose_specs(spec, inv_spec) == ident == compose_specs(inv_spec, spec)
    x = random_config(np.random.default_rng(0), 3, 2, 1, radius=3)
    assert apply_step(inv_spec, apply_step(spec, x)) == x
