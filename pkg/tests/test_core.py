from __future__ import annotations

import itertools

import numpy as np
import pytest

from lnuca.core import (
    PatternConfig,
    apply_step,
    apply_steps,
    build_spec,
    dual_spec,
    induced_map,
    local_rule_at,
    pairing,
    power_spec,
    random_config,
    shift_config,
    shift_spec,
)
from lnuca.core.rules import TableRule
from lnuca.core.spec import ClusterType, Placement, SparseLayout
from lnuca.errors import PlacementUnresolved, SpecError
from lnuca.suite import random_spec

from conftest import lin

RULE90 = build_spec(2, 1, 1, {(-1,): [[1]], (1,): [[1]]})
READ1 = build_spec(2, 1, 1, {}, [((0,), lin(2, 1, {(1,): [[1]]}))])
OWN = build_spec(2, 1, 1, {}, [((0,), lin(2, 1, {(0,): [[1]]}))])


def delta(g, p=2, k=1, value=None):
    return PatternConfig.delta(p, k, tuple(g), value)


# ---------------------------------------------------------------- validation


def test_memory_is_padded_and_symmetric():
    s = build_spec(2, 1, 1, {(1,): [[1]]})
    assert s.memory == ((-1,), (0,), (1,))
    assert np.array_equal(s.base.offsets()[(1,)], [[1]])


def test_perturbation_equal_to_base_is_dropped():
    s = build_spec(2, 1, 1, {(0,): [[1]]}, [((0,), lin(2, 1, {(0,): [[1]]}))])
    assert s.cells == ()


def test_validation_errors():
    with pytest.raises(SpecError):
        build_spec(4, 1, 1, {})
    with pytest.raises(SpecError):
        build_spec(2, 2, 1, {(0,): [[1]]})
    with pytest.raises(SpecError):
        build_spec(2, 1, 1, {}, [((0,), lin(2, 1, {})), ((0,), lin(2, 1, {(0,): [[1]]}))])
    not_quiescent = TableRule.from_function(2, 1, [(0,)], lambda w: [1 - w[0][0]])
    with pytest.raises(SpecError):
        build_spec(2, 1, 1, {}, [((0,), not_quiescent)])


def test_local_rule_at_and_shift():
    rule = lin(2, 1, {(1,): [[1]]})
    assert local_rule_at(READ1, (5,)) == READ1.base
    assert local_rule_at(READ1, (0,)) == rule
    t = shift_spec(READ1, (3,))
    for g in range(-4, 5):
        assert local_rule_at(t, (g + 3,)) == local_rule_at(READ1, (g,))
    assert shift_spec(t, (-3,)) == READ1
    assert shift_spec(READ1, (0,)) == READ1


def test_promised_placement_is_unresolved():
    cl = ClusterType((((0,), lin(2, 1, {(1,): [[1]]})),))
    s = build_spec(2, 1, 1, {}, [], SparseLayout((cl,), Placement("promise")))
    with pytest.raises(PlacementUnresolved):
        local_rule_at(s, (7,))


def test_generated_placement_resolves_cells():
    cl = ClusterType((((0,), lin(2, 1, {(1,): [[1]]})),))
    s = build_spec(2, 1, 1, {}, [], SparseLayout((cl,), Placement("polynomial", (1,), (0,), coeffs=(0, 0, 1))))
    squares = {n * n for n in range(10)}
    for g in range(60):
        assert (local_rule_at(s, (g,)) == s.base) == (g not in squares)


def test_affine_placement_rejected():
    with pytest.raises(SpecError):
        Placement("polynomial", (1,), (0,), coeffs=(0, 3))


# ---------------------------------------------------------------- dynamics


def test_apply_step_examples():
    assert apply_step(RULE90, delta((0,))).support == ((-1,), (1,))
    assert apply_step(READ1, delta((0,))).is_zero()
    assert apply_step(READ1, delta((1,))) == delta((0,))
    ident = build_spec(3, 2, 2, {(0, 0): np.eye(2, dtype=np.int64)})
    x = random_config(np.random.default_rng(1), 3, 2, 2, radius=2)
    assert apply_step(ident, x) == x


def test_table_rule_reads_zero_background():
    and_rule = TableRule.from_function(2, 1, [(0,), (1,)], lambda w: [w[0][0] * w[1][0]])
    s = build_spec(2, 1, 1, {(0,): [[1]]}, [((0,), and_rule)])
    x = PatternConfig.from_dict({(0,): [1], (1,): [1]}, 2, 1, 1)
    assert apply_step(s, x) == x
    assert apply_step(s, delta((0,))).is_zero()


def test_induced_map_examples():
    ident = build_spec(2, 1, 1, {(0,): [[1]]})
    assert ident.memory == ((0,),)  # unread offsets are trimmed
    F = induced_map(ident, [(0,)], domain=[(-1,), (0,), (1,)])
    assert np.array_equal(F.body, [[0, 1, 0]])
    assert not induced_map(build_spec(2, 1, 1, {}), [(0,)]).body.any()
    F = induced_map(RULE90, [(0,), (1,)])
    assert F.domain == ((-1,), (0,), (1,), (2,))
    assert np.array_equal(F.body, [[1, 0, 1, 0], [0, 1, 0, 1]])


def exhaustive_induced_check(spec, sites):
    F = induced_map(spec, sites)
    for u in itertools.product(range(spec.p), repeat=spec.k * len(F.domain)):
        x = PatternConfig.from_window(F.domain, u, spec.p, spec.k, spec.d)
        expect = apply_step(spec, x).window(sites)
        assert np.array_equal(F.apply(u), expect)


@pytest.mark.parametrize("seed", range(12))
def test_induced_map_agrees_with_apply_step(seed):
    rng = np.random.default_rng(seed)
    spec = random_spec(rng, p_max=2, k_max=1)
    sites = spec.cells or ((0,),)
    if len(induced_map(spec, sites).domain) * spec.k <= 12:
        exhaustive_induced_check(spec, sites)
    exhaustive_induced_check(RULE90, [(0,), (1,)])


def test_image_slice_law():
    """im f+ over E equals the restrictions to E of one-step images."""
    from lnuca.algebra import image_basis

    spec = build_spec(2, 1, 1, {(1,): [[1]]}, [((0,), lin(2, 1, {(-1,): [[1]], (1,): [[1]]})), ((1,), lin(2, 1, {}))])
    E = [(0,), (1,)]
    F = induced_map(spec, E)
    img = {tuple(int(c) for c in v) for v in image_basis(F.body, 2).elements()}
    seen = set()
    for u in itertools.product(range(2), repeat=len(F.domain)):
        x = PatternConfig.from_window(F.domain, u, 2, 1, 1)
        seen.add(tuple(int(c) for c in apply_step(spec, x).window(E)))
    assert img == seen


def test_power_examples():
    assert power_spec(RULE90, 1) == RULE90
    assert power_spec(OWN, 2) == OWN
    sq = power_spec(RULE90, 2)
    assert set(sq.base.offsets()) == {(-2,), (2,)}


@pytest.mark.parametrize("seed", range(20))
def test_power_agreement_random(seed):
    rng = np.random.default_rng(seed)
    spec = random_spec(rng)
    n = int(rng.integers(1, 4))
    t = power_spec(spec, n)
    for _ in range(5):
        x = random_config(rng, spec.p, spec.k, 1, radius=3)
        assert apply_step(t, x) == apply_steps(spec, x, n)


@pytest.mark.parametrize("seed", range(20))
def test_equivariance(seed):
    rng = np.random.default_rng(seed)
    spec = random_spec(rng)
    g = (int(rng.integers(-5, 6)),)
    n = int(rng.integers(0, 4))
    x = random_config(rng, spec.p, spec.k, 1, radius=3)
    lhs = apply_steps(shift_spec(spec, g), shift_config(x, g), n)
    assert lhs == shift_config(apply_steps(spec, x, n), g)


def test_pairing_examples(rng):
    assert pairing(delta((0,)), delta((1,))) == 0
    assert pairing(delta((0,)), delta((0,))) == 1
    x, y, z = (random_config(rng, 3, 2, 1, radius=3) for _ in range(3))
    assert pairing(x + y, z) == (pairing(x, z) + pairing(y, z)) % 3
    assert pairing(x.scale(2), z) == 2 * pairing(x, z) % 3


def test_dual_examples():
    left = build_spec(2, 1, 1, {(1,): [[1]]})
    assert dual_spec(left) == build_spec(2, 1, 1, {(-1,): [[1]]})
    ident = build_spec(2, 1, 1, {(0,): [[1]]})
    assert dual_spec(ident) == ident
    assert dual_spec(RULE90) == RULE90


@pytest.mark.parametrize("seed", range(20))
def test_duality_pairing(seed):
    rng = np.random.default_rng(seed)
    spec = random_spec(rng)
    if not spec.is_linear:
        return
    dual = dual_spec(spec)
    assert dual_spec(dual) == spec
    for _ in range(5):
        x = random_config(rng, spec.p, spec.k, 1, radius=3)
        y = random_config(rng, spec.p, spec.k, 1, radius=3)
        assert pairing(apply_step(spec, x), y) == pairing(x, apply_step(dual, y))


def test_dual_d2_pairing(rng):
    s = build_spec(3, 2, 2, {(0, 1): [[1, 2], [0, 1]], (1, 0): [[0, 1], [1, 0]]}, [((0, 0), lin(3, 2, {(0, 0): [[2, 0], [1, 1]]}))])
    d = dual_spec(s)
    for _ in range(10):
        x = random_config(rng, 3, 2, 2, radius=2)
        y = random_config(rng, 3, 2, 2, radius=2)
        assert pairing(apply_step(s, x), y) == pairing(x, apply_step(d, y))
