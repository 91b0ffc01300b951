"""Decisions for sparse perturbations: infinitely many far-apart cluster copies.

The explicit cells, together with generated copies that are still close to
each other, form a finite core.  Cells whose EN^3 neighbourhoods overlap are
merged into one component.  Every component and every repeated cluster type
is decided as a finitely perturbed spec on its own.  The verdict is the
conjunction and certificates combine by max / lcm.
"""

from __future__ import annotations

import math

from ..core.lattice import add, norm_inf, sub
from ..core.spec import NucaSpec, build_spec
from ..errors import ResourceLimit, UnsupportedError
from .dynamical import annihilator, poly_repr
from .reduction import base_exponent
from .report import DecisionReport

SPARSE_PROPERTIES = ("nilpotent", "periodic", "eventually-periodic", "cayley-hamilton")
MAX_CORE_COPIES = 256
MODE = {"nilpotent": "nilpotent", "periodic": "periodic", "eventually-periodic": "eventual", "cayley-hamilton": "eventual"}


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _components(cells: list, reach: int) -> list[list]:
    """Group cells whose sup-distance is at most ``reach`` (transitively)."""
    parent = list(range(len(cells)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(cells)):
        for j in range(i):
            if norm_inf(sub(cells[i][0], cells[j][0])) <= reach:
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i, c in enumerate(cells):
        groups.setdefault(find(i), []).append(c)
    return [sorted(g, key=lambda cr: cr[0]) for g in groups.values()]


def _core_copies(spec: NucaSpec, margin: int, diam: int) -> int:
    """Least k0 such that copies k0, k0+1, ... are isolated from each other and the core."""
    pl = spec.sparse.placement
    if not pl.generated:
        return 0
    step = norm_inf(pl.direction)
    sep = margin + diam
    for k0 in range(MAX_CORE_COPIES + 1):
        gap_ok = (pl.value(k0 + 1) - pl.value(k0)) * step > sep
        pos = pl.position(k0)
        far_ok = all(norm_inf(sub(pos, c)) > sep for c in spec.cells)
        ahead_ok = pl.value(k0) >= 0 or k0 == 0
        if gap_ok and far_ok and ahead_ok:
            return k0
    raise ResourceLimit(f"sparse placement needs more than {MAX_CORE_COPIES} core copies")


def decide_sparse(spec: NucaSpec, prop: str) -> DecisionReport:
    if prop not in SPARSE_PROPERTIES:
        raise UnsupportedError(f"property {prop!r} is not decided for sparse specs")
    if prop == "cayley-hamilton" and not spec.is_linear:
        raise UnsupportedError("the Cayley-Hamilton property is defined for linear specs only")
    from . import decide

    base, n0 = base_exponent(spec, MODE[prop])
    diag: dict = {"base_char_poly": repr(base.char_poly)}
    if n0 is None:
        diag["reason"] = "base CA fails the property"
        return DecisionReport(prop, False, {}, diag)
    radius = max((norm_inf(m) for m in spec.memory), default=0) * n0
    margin = 6 * radius
    layout = spec.sparse
    diam = max(norm_inf(sub(a, b)) for c in layout.clusters for a in c.offsets for b in c.offsets)
    k0 = _core_copies(spec, margin, diam)
    core = list(spec.perturbations)
    ncl = len(layout.clusters)
    for n in range(k0):
        anchor = layout.placement.position(n)
        core += [(add(anchor, off), r) for off, r in layout.clusters[n % ncl].cells]
    pieces = [build_spec(spec.p, spec.k, spec.d, spec.base, comp) for comp in _components(core, margin + 1)]
    pieces += [build_spec(spec.p, spec.k, spec.d, spec.base, list(c.cells)) for c in layout.clusters]
    diag.update(core_copies=k0, components=len(pieces) - ncl, cluster_types=ncl)
    reports = [decide(piece, prop) for piece in pieces]
    verdict = all(r.verdict for r in reports)
    diag["pieces"] = [{"cells": [list(c) for c in piece.cells], "verdict": r.verdict} for piece, r in zip(pieces, reports)]
    if not verdict:
        return DecisionReport(prop, False, {}, diag)
    certs = [r.certificate for r in reports]
    cert: dict = {"verified": "per-piece"}
    if prop == "nilpotent":
        cert["exponent"] = max(c["exponent"] for c in certs)
    elif prop == "periodic":
        if all("period" in c for c in certs):
            cert["period"] = math.lcm(*[c["period"] for c in certs]) if certs else 1
    else:
        if all(c.get("period") is not None for c in certs):
            m = max(c["preperiod"] for c in certs)
            n = math.lcm(*[c["period"] for c in certs])
            cert.update(preperiod=m, period=n)
            if prop == "cayley-hamilton":
                zero = all(len(c["annihilator"]) == c["preperiod"] + 1 for c in certs)
                coeffs = annihilator(m, n, spec.p, zero)
                cert.update(annihilator=coeffs, polynomial=poly_repr(coeffs))
    return DecisionReport(prop, True, cert, diag)
