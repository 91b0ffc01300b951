"""Scatter-style simulation on dicts, independent of lnuca.core.dynamics.

Linear cells receive contributions pushed from each nonzero source cell;
table cells pull their window and look the answer up digit by digit.
"""

from __future__ import annotations

from typing import Callable

from ..core.spec import NucaSpec, local_rule_at

Cfg = dict  # Point -> list[int], nonzero values only


class NaiveSystem:
    """The per-cell rule data of a spec, as plain lists."""

    def __init__(self, spec: NucaSpec, rule_of: Callable | None = None):
        self.spec = spec
        self.p, self.k = spec.p, spec.k
        self.memory = [tuple(m) for m in spec.memory]
        self.rule_of = rule_of or (lambda g: local_rule_at(spec, g))
        self._cache: dict = {}

    def _rule(self, g):
        r = self._cache.get(g)
        if r is None:
            rule = self.rule_of(g)
            if rule.is_linear:
                r = ("lin", [m.tolist() for m in rule.mats])
            else:
                r = ("tab", rule.table.tolist())
            self._cache[g] = r
        return r

    def step(self, x: Cfg) -> Cfg:
        p, k = self.p, self.k
        out: dict = {}
        pulls = set()
        for h, v in x.items():
            for i, m in enumerate(self.memory):
                g = tuple(a - b for a, b in zip(h, m))
                kind, data = self._rule(g)
                if kind == "tab":
                    pulls.add(g)
                    continue
                mat = data[i]
                acc = out.setdefault(g, [0] * k)
                for r in range(k):
                    acc[r] += sum(mat[r][c] * v[c] for c in range(k))
        for g in pulls:
            _, table = self._rule(g)
            idx = 0
            for m in self.memory:
                w = x.get(tuple(a + b for a, b in zip(g, m)), [0] * k)
                for c in w:
                    idx = idx * p + c
            out[g] = list(table[idx])
        return {g: [c % p for c in v] for g, v in out.items() if any(c % p for c in v)}

    def steps(self, x: Cfg, n: int) -> Cfg:
        for _ in range(n):
            x = self.step(x)
        return x


def base_system(spec: NucaSpec) -> NaiveSystem:
    return NaiveSystem(spec, lambda g: spec.base)


def impulse(g, i: int, k: int) -> Cfg:
    v = [0] * k
    v[i] = 1
    return {tuple(g): v}


def combine(p: int, terms: list[tuple[int, Cfg]]) -> Cfg:
    out: dict = {}
    for c, x in terms:
        for g, v in x.items():
            acc = out.setdefault(g, [0] * len(v))
            for j, a in enumerate(v):
                acc[j] = (acc[j] + c * a) % p
    return {g: v for g, v in out.items() if any(v)}
