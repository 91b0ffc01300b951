"""NUCA specifications: a constant linear base rule plus perturbations.

Specs are always built through :func:`build_spec`, which brings them to a
canonical form:

* the memory is ``U ∪ -U ∪ {0}`` where ``U`` is the set of offsets that some
  rule actually reads, and every rule is re-expressed on that memory;
* perturbations equal to the base rule are dropped;
* cells are sorted lexicographically.

Two specs describing the same NUCA therefore compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..algebra.field import check_prime
from ..algebra.symbol import SymbolMatrix
from ..errors import PlacementUnresolved, SpecError
from .lattice import Point, add, sub, symmetric_hull
from .rules import DEFAULT_TABLE_CAP, LinearRule, Rule, TableRule

PLACEMENT_KINDS = ("promise", "polynomial", "exponential")


@dataclass(frozen=True)
class Placement:
    """Where the infinitely many sparse cluster copies sit.

    Copy ``n`` (n = 0, 1, ...) is anchored at ``origin + value(n) * direction``
    with ``value(n) = sum coeffs[i] n^i`` (polynomial) or
    ``scale * base^n + offset`` (exponential).  ``promise`` places nothing
    explicitly and only asserts sparseness.
    """

    kind: str
    direction: Point = ()
    origin: Point = ()
    coeffs: tuple[int, ...] = ()
    base: int = 2
    scale: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.kind not in PLACEMENT_KINDS:
            raise SpecError(f"unknown placement kind {self.kind!r}")
        if self.kind == "promise":
            return
        if not any(self.direction):
            raise SpecError("placement direction must be a nonzero vector")
        if len(self.origin) != len(self.direction):
            raise SpecError("placement origin and direction differ in dimension")
        if self.kind == "polynomial":
            c = list(self.coeffs)
            while c and c[-1] == 0:
                c.pop()
            if len(c) <= 2:
                raise SpecError("affine placements have constant gaps and are not sparse; use degree >= 2")
            if any(x < 0 for x in c):
                raise SpecError("polynomial placement needs nonnegative coefficients")
            object.__setattr__(self, "coeffs", tuple(c))
        else:
            if self.base < 2 or self.scale < 1:
                raise SpecError("exponential placement needs base >= 2 and scale >= 1")

    @property
    def generated(self) -> bool:
        return self.kind != "promise"

    def value(self, n: int) -> int:
        if self.kind == "polynomial":
            return sum(c * n**i for i, c in enumerate(self.coeffs))
        if self.kind == "exponential":
            return self.scale * self.base**n + self.offset
        raise PlacementUnresolved("promise placements have no explicit positions")

    def position(self, n: int) -> Point:
        v = self.value(n)
        return tuple(o + v * x for o, x in zip(self.origin, self.direction))

    def index_of(self, v: int) -> int | None:
        """n with value(n) == v, if any (value is strictly increasing)."""
        n = 0
        while True:
            cur = self.value(n)
            if cur == v:
                return n
            if cur > v:
                return None
            n += 1

    def shifted(self, g: Point) -> "Placement":
        if self.kind == "promise":
            return self
        return Placement(self.kind, self.direction, add(self.origin, g), self.coeffs, self.base, self.scale, self.offset)


@dataclass(frozen=True)
class ClusterType:
    """A finite pattern of rules, offsets relative to the cluster anchor."""

    cells: tuple[tuple[Point, Rule], ...]
    multiplicity: int | str = "infinite-sparse"

    @property
    def offsets(self) -> tuple[Point, ...]:
        return tuple(c for c, _ in self.cells)


@dataclass(frozen=True)
class SparseLayout:
    """Infinitely repeated cluster types; copy n has type ``clusters[n % len]``."""

    clusters: tuple[ClusterType, ...]
    placement: Placement


@dataclass(frozen=True)
class NucaSpec:
    p: int
    k: int
    d: int
    memory: tuple[Point, ...]
    base: LinearRule
    perturbations: tuple[tuple[Point, Rule], ...] = ()
    sparse: SparseLayout | None = None
    _lookup: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_lookup", dict(self.perturbations))

    @property
    def cells(self) -> tuple[Point, ...]:
        """The finite perturbation support E (explicit cells only)."""
        return tuple(c for c, _ in self.perturbations)

    @property
    def is_sparse(self) -> bool:
        return self.sparse is not None

    @property
    def is_linear(self) -> bool:
        rules = [r for _, r in self.perturbations]
        if self.sparse:
            rules += [r for c in self.sparse.clusters for _, r in c.cells]
        return all(r.is_linear for r in rules)

    def symbol(self) -> SymbolMatrix:
        return SymbolMatrix.from_offsets(self.base.offsets(), self.k, self.p, self.d)

    def rule_at(self, g: Point) -> Rule:
        return local_rule_at(self, g)

    def zero_vector(self) -> tuple[int, ...]:
        return (0,) * self.k

    def without_sparse(self) -> "NucaSpec":
        return build_spec(self.p, self.k, self.d, self.base, self.perturbations)


def _collect_rules(base, perturbations, sparse) -> list[Rule]:
    rules: list[Rule] = [base] + [r for _, r in perturbations]
    if sparse is not None:
        rules += [r for c in sparse.clusters for _, r in c.cells]
    return rules


def _check_rule(rule, p: int, k: int, d: int) -> None:
    if not isinstance(rule, (LinearRule, TableRule)):
        raise SpecError(f"not a local rule: {rule!r}")
    if (rule.p, rule.k) != (p, k):
        raise SpecError(f"rule over (p={rule.p}, k={rule.k}) in a spec over (p={p}, k={k})")
    for m in rule.memory:
        if len(m) != d:
            raise SpecError(f"memory offset {m} is not a point of Z^{d}")
    if len(set(rule.memory)) != len(rule.memory):
        raise SpecError("memory offsets must be distinct")


def build_spec(
    p: int,
    k: int,
    d: int,
    base: LinearRule | Mapping,
    perturbations: Iterable[tuple[Point, Rule]] | Mapping = (),
    sparse: SparseLayout | None = None,
    table_cap: int = DEFAULT_TABLE_CAP,
) -> NucaSpec:
    """Validate and normalize; see the module docstring for the canonical form."""
    check_prime(p)
    if k < 1 or d < 1:
        raise SpecError("k and d must be positive")
    if isinstance(base, Mapping):
        try:
            base = LinearRule.from_offsets(p, k, {tuple(m): a for m, a in base.items()})
        except ValueError as exc:
            raise SpecError(f"malformed base matrices: {exc}") from None
    if not isinstance(base, LinearRule):
        raise SpecError("the base rule must be linear")
    items = list(perturbations.items()) if isinstance(perturbations, Mapping) else list(perturbations)
    seen: set[Point] = set()
    for cell, rule in items:
        cell = tuple(cell)
        if len(cell) != d:
            raise SpecError(f"cell {cell} is not a point of Z^{d}")
        if cell in seen:
            raise SpecError(f"two rules assigned to cell {cell}")
        seen.add(cell)
    for rule in _collect_rules(base, items, sparse):
        _check_rule(rule, p, k, d)
        if isinstance(rule, TableRule):
            if rule.table.shape[0] > table_cap:
                raise SpecError(f"table with {rule.table.shape[0]} entries exceeds cap {table_cap}")
            if not rule.is_zero_quiescent():
                raise SpecError("table rule is not zero-quiescent (maps the zero window to a nonzero value)")

    used: set[Point] = set()
    for rule in _collect_rules(base, items, sparse):
        used.update(rule.used_offsets())
    memory = symmetric_hull(used, d)

    def canon(rule: Rule) -> Rule:
        return rule.on_memory(memory)

    cbase = canon(base)
    perts = []
    for cell, rule in items:
        r = canon(rule)
        if r != cbase:
            perts.append((tuple(cell), r))
    perts.sort(key=lambda cr: cr[0])

    layout = None
    if sparse is not None:
        clusters = []
        for c in sparse.clusters:
            cells = sorted(((tuple(o), canon(r)) for o, r in c.cells), key=lambda cr: cr[0])
            if len({o for o, _ in cells}) != len(cells):
                raise SpecError("cluster cell offsets must be distinct")
            cells = [(o, r) for o, r in cells if r != cbase]
            if cells:
                clusters.append(ClusterType(tuple(cells), c.multiplicity))
        if clusters:
            pl = sparse.placement
            if pl.generated and len(pl.direction) != d:
                raise SpecError("placement direction has the wrong dimension")
            layout = SparseLayout(tuple(clusters), pl)
    spec = NucaSpec(p, k, d, memory, cbase, tuple(perts), layout)
    if layout is not None and layout.placement.generated:
        _check_generated_conflicts(spec)
    return spec


def _generated_hits(spec: NucaSpec, g: Point) -> list[Rule]:
    layout = spec.sparse
    pl = layout.placement
    dirn = pl.direction
    dd = sum(x * x for x in dirn)
    hits = []
    for t, cluster in enumerate(layout.clusters):
        for off, rule in cluster.cells:
            h = sub(sub(g, pl.origin), off)
            dot = sum(a * b for a, b in zip(h, dirn))
            if dot % dd:
                continue
            v = dot // dd
            if tuple(v * x for x in dirn) != h:
                continue
            n = pl.index_of(v)
            if n is not None and n % len(layout.clusters) == t:
                hits.append(rule)
    return hits


def _check_generated_conflicts(spec: NucaSpec) -> None:
    """Generated copies must not land on explicit cells or on each other near the origin."""
    for cell in spec.cells:
        if _generated_hits(spec, cell):
            raise SpecError(f"a generated cluster copy assigns a second rule to cell {cell}")
    layout = spec.sparse
    ncl = len(layout.clusters)
    seen: set[Point] = set()
    for n in range(4 * ncl + 4):
        anchor = layout.placement.position(n)
        for off, _ in layout.clusters[n % ncl].cells:
            c = add(anchor, off)
            if c in seen:
                raise SpecError(f"generated cluster copies overlap at cell {c}")
            seen.add(c)


def local_rule_at(spec: NucaSpec, g: Sequence[int]) -> Rule:
    g = tuple(g)
    rule = spec._lookup.get(g)
    if rule is not None:
        return rule
    if spec.sparse is not None:
        if not spec.sparse.placement.generated:
            raise PlacementUnresolved(
                f"cell {g} may lie in an unplaced cluster copy (sparse placement is only promised)"
            )
        hits = _generated_hits(spec, g)
        if len(hits) > 1:
            raise SpecError(f"generated cluster copies overlap at cell {g}")
        if hits:
            return hits[0]
    return spec.base


def replace_rules(spec: NucaSpec, perturbations, sparse="keep") -> NucaSpec:
    return build_spec(
        spec.p, spec.k, spec.d, spec.base, perturbations, spec.sparse if sparse == "keep" else sparse
    )


def zero_spec(p: int, k: int, d: int) -> NucaSpec:
    return build_spec(p, k, d, {})


def identity_spec(p: int, k: int, d: int) -> NucaSpec:
    return build_spec(p, k, d, {(0,) * d: np.eye(k, dtype=np.int64)})
