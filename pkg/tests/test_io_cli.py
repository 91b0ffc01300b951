from __future__ import annotations

import json
import subprocess
import sys

import pytest

from lnuca.core import build_spec, random_config
from lnuca.core.rules import TableRule
from lnuca.errors import SpecError
from lnuca.io import config_to_dict, dumps, parse_config, parse_spec, spec_to_dict
from lnuca.suite import curated_suite, random_suite

from conftest import lin

CASES = {c.name: c.spec for c in curated_suite()}


# ---------------------------------------------------------------- formats


@pytest.mark.parametrize("name", sorted(CASES))
def test_spec_round_trip_is_byte_stable(name):
    text = dumps(CASES[name])
    again = parse_spec(json.loads(text))
    assert again == CASES[name]
    assert dumps(again) == text


def test_random_specs_round_trip():
    for spec in random_suite(40, seed=5):
        assert parse_spec(json.loads(dumps(spec))) == spec


def test_values_are_reduced_mod_p():
    raw = {"p": 3, "k": 1, "d": 1, "base": {"kind": "linear", "coeffs": {"(1)": [[4]], "( -1 )": [[3]]}}}
    spec = parse_spec(raw)
    assert spec == build_spec(3, 1, 1, {(1,): [[1]]})


def test_offset_strings_two_dimensional():
    raw = {"p": 2, "k": 1, "d": 2, "base": {"kind": "linear", "coeffs": {"(0, 1)": [[1]], "(-1,0)": [[1]]}}}
    assert set(parse_spec(raw).base.offsets()) == {(0, 1), (-1, 0)}


@pytest.mark.parametrize(
    "raw, fragment",
    [
        ({"p": 2, "k": 1, "d": 1, "base": {"kind": "linear", "coeffs": {}}, "extra": 1}, "unknown keys"),
        ({"p": 4, "k": 1, "d": 1, "base": {"kind": "linear", "coeffs": {}}}, "not prime"),
        ({"p": 2, "k": 2, "d": 1, "base": {"kind": "linear", "coeffs": {"(0)": [[1]]}}}, "2x2"),
        ({"p": 2, "k": 1, "d": 1, "base": {"kind": "table", "table": [[0], [1]]}}, "base rule must be linear"),
        ({"p": 2, "k": 1, "d": 1, "base": {"kind": "linear", "coeffs": {"1": [[1]]}}}, "malformed offset"),
        ({"p": 2, "k": 1, "d": 1}, "missing key"),
        (
            {
                "p": 2,
                "k": 1,
                "d": 1,
                "base": {"kind": "linear", "coeffs": {}},
                "perturbations": [{"cell": [0], "rule": {"kind": "table", "memory": [[0]], "table": [[1], [0]]}}],
            },
            "zero",
        ),
        (
            {
                "p": 2,
                "k": 1,
                "d": 1,
                "base": {"kind": "linear", "coeffs": {}},
                "sparse": {"clusters": [], "placement": {"kind": "affine"}},
            },
            "affine",
        ),
    ],
)
def test_invalid_specs(raw, fragment):
    with pytest.raises(SpecError, match=fragment):
        parse_spec(raw)


def test_table_rule_with_own_memory():
    rule = {"kind": "table", "memory": [[0], [1]], "table": [0, 0, 0, 1]}
    raw = {"p": 2, "k": 1, "d": 1, "base": {"kind": "linear", "coeffs": {}}, "perturbations": [{"cell": [0], "rule": rule}]}
    and_rule = TableRule.from_function(2, 1, [(0,), (1,)], lambda w: [w[0][0] * w[1][0]])
    assert parse_spec(raw) == build_spec(2, 1, 1, {}, [((0,), and_rule)])


def test_finite_anchors_become_perturbations():
    cluster = {"cells": [{"cell": [0], "rule": {"kind": "linear", "coeffs": {"(1)": [[1]]}}}], "anchors": [[0], [10]], "infinite": False}
    raw = {"p": 2, "k": 1, "d": 1, "base": {"kind": "linear", "coeffs": {}}, "sparse": {"clusters": [cluster]}}
    spec = parse_spec(raw)
    assert spec.sparse is None and spec.cells == ((0,), (10,))


def test_config_round_trip(rng):
    x = random_config(rng, 3, 2, 2, radius=2)
    assert parse_config(json.loads(json.dumps(config_to_dict(x))), 3, 2, 2) == x
    y = parse_config({"support": [{"cell": [0], "value": [4]}, {"cell": [1], "value": [3]}]}, 3, 1, 1)
    assert config_to_dict(y) == {"support": [{"cell": [0], "value": [1]}]}


# ---------------------------------------------------------------- command line


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("specs")
    paths = {}
    for name, spec in CASES.items():
        path = root / f"{name}.json"
        path.write_text(dumps(spec))
        paths[name] = str(path)
    for name, cell in (("delta0", 0), ("delta1", 1)):
        path = root / f"{name}.json"
        path.write_text(json.dumps({"support": [{"cell": [cell], "value": [1]}]}))
        paths[name] = str(path)
    paths["root"] = root
    return paths


def run(*args):
    proc = subprocess.run([sys.executable, "-m", "lnuca", *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_cli_decide_examples(files):
    code, out, _ = run("decide", "nilpotent", files["zero_plus_shiftread"])
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] is True
    assert list(rep) == ["property", "verdict", "certificate", "diagnostics", "tool_version"]
    code, out, _ = run("decide", "injective", files["onepx"])
    assert code == 0 and json.loads(out)["verdict"] is False
    code, out, _ = run("decide", "periodic", files["identity"])
    assert json.loads(out)["certificate"]["period"] == 1


def test_cli_reports_are_deterministic(files):
    a = run("decide", "eventually-periodic", files["zero_plus_owncell"])
    b = run("decide", "eventually-periodic", files["zero_plus_owncell"])
    assert a == b and "seconds" not in a[1]
    code, out, _ = run("decide", "eventually-periodic", files["zero_plus_owncell"], "--timings")
    assert "seconds" in json.loads(out)["diagnostics"]


def test_cli_injective_report_carries_reparsable_inverse(files):
    code, out, _ = run("decide", "injective", files["id_plus_x0x1"])
    inverse = json.loads(out)["certificate"]["inverse"]
    assert parse_spec(inverse) == CASES["id_plus_x0x1"]


def frames(out):
    return [sorted(e["cell"][0] for e in json.loads(line)["support"]) for line in out.splitlines()]


def test_cli_simulate_examples(files):
    code, out, _ = run("simulate", files["rule90"], files["delta0"], "--steps", "2")
    assert code == 0 and frames(out) == [[0], [-1, 1], [-2, 2]]
    code, out, _ = run("simulate", files["identity"], files["delta1"], "--steps", "5")
    assert frames(out) == [[1]] * 6
    code, out, _ = run("simulate", files["zero_plus_shiftread"], files["delta1"], "--steps", "2")
    assert frames(out)[2] == []


def test_cli_power_dual_invert(files):
    code, out, _ = run("power", "-n", "2", files["rule90"])
    assert code == 0 and set(json.loads(out)["base"]["coeffs"]) == {"(-2)", "(2)"}
    assert parse_spec(json.loads(out)) == parse_spec(json.loads(dumps(parse_spec(json.loads(out)))))
    code, out, _ = run("dual", files["shift"])
    assert parse_spec(json.loads(out)) == build_spec(2, 1, 1, {(-1,): [[1]]})
    code, out, _ = run("invert", files["id_plus_x0x1"])
    inv = parse_spec(json.loads(out))
    assert inv.perturbations[0][1] == lin(2, 1, {(0,): [[1]], (1,): [[1]]})


def test_cli_oracle(files):
    code, out, _ = run("oracle", "nilpotent", files["zero_plus_shiftread"])
    assert code == 0 and json.loads(out)["diagnostics"]["agree"] is True
    code, out, _ = run("oracle", "injective", files["onepx"])
    assert json.loads(out)["diagnostics"]["agree"] is True
    code, out, _ = run("oracle", "power", files["rule90"], "-n", "2", "--candidate", files["rule90"])
    assert code == 0 and json.loads(out)["diagnostics"]["agree"] is False
    code, out, _ = run("oracle", "inverse", files["id_plus_x0x1"], "--candidate", files["identity"])
    assert code == 0 and json.loads(out)["diagnostics"]["agree"] is False


def test_cli_exit_codes(files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 4, "k": 1, "d": 1, "base": {"kind": "linear", "coeffs": {}}}')
    code, _, err = run("decide", "nilpotent", str(bad))
    assert code == 2 and "prime" in err
    code, _, err = run("decide", "nilpotent", str(tmp_path / "missing.json"))
    assert code == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run("decide", "nilpotent", str(broken))[0] == 2
    code, _, err = run("decide", "injective", files["table_and_on_zero"])
    assert code == 2 and "table" in err
    code, _, err = run("invert", files["onepx"])
    assert code == 2
    code, _, err = run("power", "-n", "3000", files["rule90"])
    assert code == 3 and "cap" in err
    d3 = tmp_path / "d3.json"
    d3.write_text('{"p": 2, "k": 1, "d": 3, "base": {"kind": "linear", "coeffs": {}}}')
    assert run("decide", "nilpotent", str(d3))[0] == 2
    assert run("decide", "surjective", files["identity"])[0] == 2
