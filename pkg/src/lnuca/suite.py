"""Curated specs with hand-derived verdicts, and a seeded random spec generator.

Expected verdicts use ``None`` for combinations the library refuses with
:class:`~lnuca.errors.UnsupportedError` (table rules with linear-only
properties, sparse specs with injectivity).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core.rules import LinearRule, TableRule
from .core.spec import ClusterType, NucaSpec, Placement, SparseLayout, build_spec
from .decide.report import PROPERTIES


@dataclass(frozen=True)
class SuiteCase:
    name: str
    spec: NucaSpec
    expected: dict
    certificates: dict = field(default_factory=dict)


def _verdicts(nil, per, ev, ch, inj, post) -> dict:
    return dict(zip(PROPERTIES, (nil, per, ev, ch, inj, post)))


def _lin(p: int, k: int, coeffs: dict) -> LinearRule:
    return LinearRule.from_offsets(p, k, coeffs)


def curated_suite() -> list[SuiteCase]:
    L = _lin
    cases = []

    def add(name, spec, verdicts, **certs):
        cases.append(SuiteCase(name, spec, _verdicts(*verdicts), certs))

    T, F = True, False
    add("zero", build_spec(2, 1, 1, {}), (T, F, T, T, F, F), nilpotent={"exponent": 1}, **{"cayley-hamilton": {"polynomial": "z"}})
    add(
        "identity",
        build_spec(2, 1, 1, {(0,): [[1]]}),
        (F, T, T, T, T, T),
        periodic={"period": 1},
        **{"cayley-hamilton": {"polynomial": "z + 1"}},
    )
    add("shift", build_spec(2, 1, 1, {(1,): [[1]]}), (F, F, F, F, T, T))
    add("onepx", build_spec(2, 1, 1, {(0,): [[1]], (1,): [[1]]}), (F, F, F, F, F, F))
    add("rule90", build_spec(2, 1, 1, {(-1,): [[1]], (1,): [[1]]}), (F, F, F, F, F, F))
    add(
        "zero_plus_owncell",
        build_spec(2, 1, 1, {}, [((0,), L(2, 1, {(0,): [[1]]}))]),
        (F, F, T, T, F, F),
        **{"eventually-periodic": {"preperiod": 1, "period": 1}},
    )
    add(
        "zero_plus_shiftread",
        build_spec(2, 1, 1, {}, [((0,), L(2, 1, {(1,): [[1]]}))]),
        (T, F, T, T, F, F),
        nilpotent={"exponent": 2},
        **{"cayley-hamilton": {"polynomial": "z^2"}},
    )
    add("identity_plus_zero", build_spec(2, 1, 1, {(0,): [[1]]}, [((0,), L(2, 1, {}))]), (F, F, T, T, F, F))
    add(
        "id_plus_x0x1",
        build_spec(2, 1, 1, {(0,): [[1]]}, [((0,), L(2, 1, {(0,): [[1]], (1,): [[1]]}))]),
        (F, T, T, T, T, T),
        periodic={"period": 2},
    )
    add(
        "triangular_k2",
        build_spec(2, 2, 1, {(1,): [[0, 1], [0, 0]]}),
        (T, F, T, T, F, F),
        nilpotent={"exponent": 2},
    )
    add(
        "unipotent_k2_p3",
        build_spec(3, 2, 1, {(0,): [[1, 0], [0, 1]], (1,): [[0, 1], [0, 0]]}),
        (F, T, T, T, T, T),
        periodic={"period": 3},
    )
    add(
        "shift_plus_zero_p3",
        build_spec(3, 1, 1, {(1,): [[1]]}, [((0,), L(3, 1, {}))]),
        (F, F, F, F, F, F),
    )
    add(
        "d2_id_plus_x0xe1_p3",
        build_spec(3, 1, 2, {(0, 0): [[1]]}, [((0, 0), L(3, 1, {(0, 0): [[1]], (0, 1): [[1]]}))]),
        (F, T, T, T, T, T),
        periodic={"period": 3},
        **{"cayley-hamilton": {"polynomial": "z^3 + 2"}},
    )
    add("d2_scalar2_p3", build_spec(3, 1, 2, {(0, 0): [[2]]}), (F, T, T, T, T, T), periodic={"period": 2})
    add(
        "d2_nilpotent_chain",
        build_spec(2, 1, 2, {}, [((0, 0), L(2, 1, {(1, 0): [[1]]})), ((1, 0), L(2, 1, {(0, 1): [[1]]}))]),
        (T, F, T, T, F, F),
        nilpotent={"exponent": 3},
    )
    and_rule = TableRule.from_function(2, 1, [(0,), (1,)], lambda w: [w[0][0] * w[1][0]])
    add("table_and_on_zero", build_spec(2, 1, 1, {}, [((0,), and_rule)]), (T, F, T, None, None, None))
    add("table_and_on_identity", build_spec(2, 1, 1, {(0,): [[1]]}, [((0,), and_rule)]), (F, F, T, None, None, None))
    read1 = ClusterType((((0,), L(2, 1, {(1,): [[1]]})),))
    own = ClusterType((((0,), L(2, 1, {(0,): [[1]]})),))
    add(
        "sparse_shiftread_squares",
        build_spec(2, 1, 1, {}, [], SparseLayout((read1,), Placement("polynomial", (1,), (0,), coeffs=(0, 0, 1)))),
        (T, F, T, T, None, None),
    )
    add(
        "sparse_with_owncell",
        build_spec(2, 1, 1, {}, [], SparseLayout((read1, own), Placement("promise"))),
        (F, F, T, T, None, None),
    )
    return cases


def random_spec(rng: np.random.Generator, p_max: int = 3, k_max: int = 2, max_memory: int = 3, max_cells: int = 2) -> NucaSpec:
    """Small d = 1 spec; bases are biased towards ones with a positive base verdict."""
    p = int(rng.choice([2, 3][: 1 if p_max < 3 else 2]))
    k = int(rng.integers(1, k_max + 1))
    size = int(rng.integers(1, max_memory + 1))
    memory = sorted(int(m) for m in rng.choice([-1, 0, 1], size=size, replace=False))

    def mat():
        return rng.integers(0, p, size=(k, k))

    kind = rng.choice(["zero", "scalar", "nilpotent", "shift", "random"])
    if kind == "zero":
        base = {}
    elif kind == "scalar":
        base = {(0,): int(rng.integers(1, p)) * np.eye(k, dtype=np.int64)}
    elif kind == "nilpotent" and k == 2:
        base = {(int(rng.choice(memory)),): np.array([[0, int(rng.integers(1, p))], [0, 0]])}
    elif kind == "shift":
        base = {(int(rng.choice(memory)),): np.eye(k, dtype=np.int64)}
    else:
        base = {(m,): mat() for m in memory if rng.random() < 0.6}
    base = {m: a for m, a in base.items() if m[0] in memory or m == (0,)}
    mem = sorted(set(memory) | {m[0] for m in base})
    cells = sorted(int(c) for c in rng.choice([-1, 0, 1, 2], size=int(rng.integers(0, max_cells + 1)), replace=False))
    perts = []
    for c in cells:
        if rng.random() < 0.25 and p ** (k * len(mem)) <= 8:
            table = rng.integers(0, p, size=(p ** (k * len(mem)), k))
            table[0] = 0
            perts.append(((c,), TableRule(p, k, [(m,) for m in mem], table)))
        else:
            perts.append(((c,), LinearRule.from_offsets(p, k, {(m,): mat() for m in mem if rng.random() < 0.6})))
    return build_spec(p, k, 1, {m: a for m, a in base.items()}, perts)


def random_suite(count: int = 100, seed: int = 0) -> list[NucaSpec]:
    rng = np.random.default_rng(seed)
    return [random_spec(rng) for _ in range(count)]
