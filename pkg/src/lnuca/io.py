"""JSON formats for specs, configurations and reports.

Spec file::

    {"p": 2, "k": 1, "d": 1, "memory": [[-1], [0], [1]],
     "base": {"kind": "linear", "coeffs": {"(1)": [[1]]}},
     "perturbations": [{"cell": [0], "rule": {...}}],
     "sparse": null}

A rule is ``{"kind": "linear", "coeffs": {offset: k x k matrix}}`` or
``{"kind": "table", "memory": [...], "table": [[...], ...]}``; the table lists
the output vector for every window, indexed by the window's base-p digits
(site-major in memory order, component-minor, most significant first).  A
table rule without its own memory uses the spec-level memory.
"""

from __future__ import annotations

import json
import re
from typing import Any

import numpy as np

from . import __version__
from .algebra.field import check_prime
from .algebra.symbol import SymbolMatrix
from .core.config import PatternConfig
from .core.rules import LinearRule, TableRule
from .core.spec import ClusterType, NucaSpec, Placement, SparseLayout, build_spec
from .errors import SpecError

SPEC_KEYS = {"p", "k", "d", "memory", "base", "perturbations", "sparse"}
_OFFSET = re.compile(r"^\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*,?\s*\)$")


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise SpecError(f"{where}: missing key {key!r}")
    return obj[key]


def _check_keys(obj, allowed: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise SpecError(f"{where}: unknown keys {sorted(extra)}")


def _int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecError(f"{where}: expected an integer, got {v!r}")
    return v


def _point(v, d: int, where: str) -> tuple[int, ...]:
    if isinstance(v, int) and d == 1:
        v = [v]
    if not isinstance(v, (list, tuple)) or len(v) != d:
        raise SpecError(f"{where}: expected a point with {d} coordinates, got {v!r}")
    return tuple(_int(c, where) for c in v)


def parse_offset(text: str, d: int) -> tuple[int, ...]:
    m = _OFFSET.match(text.strip())
    if not m:
        raise SpecError(f"malformed offset {text!r}; expected '(i)' or '(i,j)'")
    pt = tuple(int(c) for c in m.group(1).split(","))
    if len(pt) != d:
        raise SpecError(f"offset {text!r} does not have {d} coordinates")
    return pt


def format_offset(m) -> str:
    return "(" + ",".join(str(int(c)) for c in m) + ")"


def _matrix(v, k: int, where: str) -> list[list[int]]:
    if not isinstance(v, list) or len(v) != k or any(not isinstance(r, list) or len(r) != k for r in v):
        raise SpecError(f"{where}: expected a {k}x{k} matrix")
    return [[_int(c, where) for c in r] for r in v]


def parse_rule(obj, p: int, k: int, d: int, memory, where: str):
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: expected a rule object")
    kind = obj.get("kind")
    if kind == "linear":
        _check_keys(obj, {"kind", "coeffs"}, where)
        coeffs = _need(obj, "coeffs", where)
        if not isinstance(coeffs, dict):
            raise SpecError(f"{where}: coeffs must map offsets to matrices")
        mats = {}
        for key, mat in coeffs.items():
            off = parse_offset(key, d)
            if off in mats:
                raise SpecError(f"{where}: offset {key} given twice")
            mats[off] = _matrix(mat, k, f"{where} offset {key}")
        return LinearRule.from_offsets(p, k, mats)
    if kind == "table":
        _check_keys(obj, {"kind", "memory", "table"}, where)
        mem = obj.get("memory", memory)
        if mem is None:
            raise SpecError(f"{where}: table rule needs a memory")
        mem = [_point(m, d, where) for m in mem]
        table = _need(obj, "table", where)
        if not isinstance(table, list):
            raise SpecError(f"{where}: table must be a list")
        rows = []
        for entry in table:
            if isinstance(entry, int) and k == 1:
                entry = [entry]
            if not isinstance(entry, list) or len(entry) != k:
                raise SpecError(f"{where}: every table entry must be a length-{k} vector")
            rows.append([_int(c, where) for c in entry])
        expected = p ** (k * len(mem))
        if len(rows) != expected:
            raise SpecError(f"{where}: table has {len(rows)} entries, expected p^(k|M|) = {expected}")
        return TableRule(p, k, mem, np.array(rows, dtype=np.int64).reshape(-1, k))
    raise SpecError(f"{where}: rule kind must be 'linear' or 'table'")


def _parse_placement(obj, d: int) -> Placement:
    if obj == "promise" or obj is None:
        return Placement("promise")
    _check_keys(obj, {"kind", "coeffs", "base", "scale", "offset", "direction", "origin"}, "placement")
    kind = _need(obj, "kind", "placement")
    if kind == "affine":
        raise SpecError("affine placements have constant gaps and are not sparse")
    if kind == "promise":
        return Placement("promise")
    direction = _point(_need(obj, "direction", "placement"), d, "placement direction")
    origin = _point(obj.get("origin", [0] * d), d, "placement origin")
    if kind == "polynomial":
        coeffs = tuple(_int(c, "placement coeffs") for c in _need(obj, "coeffs", "placement"))
        return Placement("polynomial", direction, origin, coeffs=coeffs)
    if kind == "exponential":
        return Placement(
            "exponential",
            direction,
            origin,
            base=_int(obj.get("base", 2), "placement base"),
            scale=_int(obj.get("scale", 1), "placement scale"),
            offset=_int(obj.get("offset", 0), "placement offset"),
        )
    raise SpecError(f"unknown placement kind {kind!r}")


def parse_spec(obj: Any) -> NucaSpec:
    """Validate a decoded spec document and build the normalized spec."""
    _check_keys(obj, SPEC_KEYS, "spec")
    p = _int(_need(obj, "p", "spec"), "p")
    k = _int(_need(obj, "k", "spec"), "k")
    d = _int(_need(obj, "d", "spec"), "d")
    if k < 1 or d < 1:
        raise SpecError("k and d must be positive")
    memory = obj.get("memory")
    if memory is not None:
        if not isinstance(memory, list):
            raise SpecError("memory must be a list of points")
        memory = [_point(m, d, "memory") for m in memory]
        if len(set(memory)) != len(memory):
            raise SpecError("memory points must be distinct")
    base_obj = _need(obj, "base", "spec")
    if not isinstance(base_obj, dict) or base_obj.get("kind") != "linear":
        raise SpecError("the base rule must be linear")
    check_prime(p)
    base = parse_rule(base_obj, p, k, d, memory, "base")
    perts = []
    for i, entry in enumerate(obj.get("perturbations") or []):
        where = f"perturbation {i}"
        _check_keys(entry, {"cell", "rule"}, where)
        cell = _point(_need(entry, "cell", where), d, where)
        perts.append((cell, parse_rule(_need(entry, "rule", where), p, k, d, memory, where)))
    layout = None
    sparse = obj.get("sparse")
    if sparse is not None:
        _check_keys(sparse, {"clusters", "placement"}, "sparse")
        placement = _parse_placement(sparse.get("placement", "promise"), d)
        clusters = []
        for ci, c in enumerate(_need(sparse, "clusters", "sparse")):
            where = f"cluster {ci}"
            _check_keys(c, {"cells", "anchors", "infinite"}, where)
            cells = []
            for entry in _need(c, "cells", where):
                _check_keys(entry, {"cell", "rule"}, where)
                cells.append(
                    (_point(_need(entry, "cell", where), d, where), parse_rule(entry["rule"], p, k, d, memory, where))
                )
            offs = [o for o, _ in cells]
            if len(set(offs)) != len(offs):
                raise SpecError(f"{where}: cell offsets must be distinct")
            anchors = [_point(a, d, where) for a in c.get("anchors", [])]
            for a in anchors:
                perts += [(tuple(x + y for x, y in zip(a, o)), r) for o, r in cells]
            if c.get("infinite", True):
                clusters.append(ClusterType(tuple(cells)))
        if clusters:
            layout = SparseLayout(tuple(clusters), placement)
    return build_spec(p, k, d, base, perts, layout)


validate_spec = parse_spec


def rule_to_dict(rule, memory) -> dict:
    if rule.is_linear:
        return {"kind": "linear", "coeffs": {format_offset(m): a.tolist() for m, a in rule.offsets().items()}}
    rule = rule.on_memory(memory)
    return {"kind": "table", "memory": [list(m) for m in rule.memory], "table": rule.table.tolist()}


def _placement_to_obj(pl: Placement):
    if pl.kind == "promise":
        return "promise"
    out: dict = {"kind": pl.kind, "direction": list(pl.direction), "origin": list(pl.origin)}
    if pl.kind == "polynomial":
        out["coeffs"] = list(pl.coeffs)
    else:
        out.update(base=pl.base, scale=pl.scale, offset=pl.offset)
    return out


def spec_to_dict(spec: NucaSpec) -> dict:
    out = {
        "p": spec.p,
        "k": spec.k,
        "d": spec.d,
        "memory": [list(m) for m in spec.memory],
        "base": rule_to_dict(spec.base, spec.memory),
        "perturbations": [{"cell": list(c), "rule": rule_to_dict(r, spec.memory)} for c, r in spec.perturbations],
        "sparse": None,
    }
    if spec.sparse is not None:
        out["sparse"] = {
            "clusters": [
                {"cells": [{"cell": list(o), "rule": rule_to_dict(r, spec.memory)} for o, r in c.cells], "infinite": True}
                for c in spec.sparse.clusters
            ],
            "placement": _placement_to_obj(spec.sparse.placement),
        }
    return out


def _format(v, indent: int) -> str:
    # dicts are laid out one key per line; lists without dicts stay inline
    pad = "  " * (indent + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_format(x, indent + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(v, list) and any(isinstance(x, dict) for x in v):
        items = [pad + _format(x, indent + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(v, separators=(", ", ": "))


def dumps(obj) -> str:
    """Deterministic JSON text: insertion key order, nested scalars kept inline."""
    return _format(to_jsonable(obj), 0) + "\n"


def parse_config(obj: Any, p: int, k: int, d: int) -> PatternConfig:
    _check_keys(obj, {"support"}, "configuration")
    values = []
    for i, entry in enumerate(_need(obj, "support", "configuration")):
        where = f"support entry {i}"
        _check_keys(entry, {"cell", "value"}, where)
        v = _need(entry, "value", where)
        if isinstance(v, int) and k == 1:
            v = [v]
        if not isinstance(v, list) or len(v) != k:
            raise SpecError(f"{where}: value must be a length-{k} list")
        values.append((_point(_need(entry, "cell", where), d, where), [_int(c, where) for c in v]))
    return PatternConfig.from_dict(values, p, k, d)


def config_to_dict(x: PatternConfig) -> dict:
    return {"support": [{"cell": list(g), "value": list(v)} for g, v in x.cells]}


def symbol_to_dict(m: SymbolMatrix) -> dict:
    return {format_offset(e): a for e, a in m.offsets().items()}


def to_jsonable(obj):
    if isinstance(obj, NucaSpec):
        return spec_to_dict(obj)
    if isinstance(obj, PatternConfig):
        return config_to_dict(obj)
    if isinstance(obj, SymbolMatrix):
        return symbol_to_dict(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def report_to_dict(rep) -> dict:
    return {
        "property": rep.property,
        "verdict": bool(rep.verdict),
        "certificate": to_jsonable(rep.certificate),
        "diagnostics": to_jsonable(rep.diagnostics),
        "tool_version": __version__,
    }


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from None


def load_spec(path: str) -> NucaSpec:
    return parse_spec(load_json(path))


def load_config(path: str, spec: NucaSpec) -> PatternConfig:
    return parse_config(load_json(path), spec.p, spec.k, spec.d)
