"""Command-line front end.

Exit codes: 0 when the command completed (whatever the verdict), 1 on an
internal consistency failure, 2 on bad input or an unsupported combination,
3 when a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .core.dynamics import apply_step, dual_spec, power_spec
from .core.spec import NucaSpec
from .decide import PROPERTIES, construct_inverse, decide
from .errors import NucaError, PlacementUnresolved, RadiusExhausted, ResourceLimit, SpecError
from .io import config_to_dict, dumps, load_config, load_spec, report_to_dict, to_jsonable
from .oracle import (
    oracle_annihilator,
    oracle_certificate_check,
    oracle_dual_agreement,
    oracle_injective,
    oracle_inverse_agreement,
    oracle_power_agreement,
    oracle_trapped_enumeration,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3
CANDIDATE_CHECKS = ("power", "inverse", "dual")


def _spec(path: str) -> NucaSpec:
    spec = load_spec(path)
    if spec.d not in (1, 2):
        raise SpecError(f"the command line supports d in {{1, 2}}, got d = {spec.d}")
    return spec


def _emit(args, obj: dict, text: str | None = None) -> None:
    if getattr(args, "text", False) and text is not None:
        print(text)
    else:
        sys.stdout.write(dumps(obj))


def _summary(rep: dict) -> str:
    cert = ", ".join(f"{k}={json.dumps(v)}" for k, v in rep["certificate"].items() if not isinstance(v, (dict, list)))
    line = f"{rep['property']}: {str(rep['verdict']).lower()}"
    return f"{line} ({cert})" if cert else line


def cmd_decide(args) -> int:
    spec = _spec(args.spec)
    t0 = time.perf_counter()
    rep = decide(spec, args.property)
    if args.property == "injective" and rep.verdict and spec.sparse is None:
        try:
            rep.certificate["inverse"] = construct_inverse(spec, args.max_radius)
        except RadiusExhausted:
            rep.diagnostics["inverse"] = f"no inverse with memory radius <= {args.max_radius}"
    out = report_to_dict(rep)
    if args.timings:
        out["diagnostics"]["seconds"] = round(time.perf_counter() - t0, 6)
    _emit(args, out, _summary(out))
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.steps < 0:
        raise SpecError("--steps must be non-negative")
    spec = _spec(args.spec)
    x = load_config(args.config, spec)
    frames = [x]
    for _ in range(args.steps):
        frames.append(apply_step(spec, frames[-1]))
    for f in frames:
        print(json.dumps(config_to_dict(f), separators=(",", ":")))
    return EXIT_OK


def cmd_power(args) -> int:
    _emit(args, to_jsonable(power_spec(_spec(args.spec), args.n)))
    return EXIT_OK


def cmd_dual(args) -> int:
    _emit(args, to_jsonable(dual_spec(_spec(args.spec))))
    return EXIT_OK


def cmd_invert(args) -> int:
    _emit(args, to_jsonable(construct_inverse(_spec(args.spec), args.max_radius)))
    return EXIT_OK


def _oracle_dynamical(spec: NucaSpec, prop: str, rep, trials: int, seed: int) -> tuple[bool, dict]:
    mode = "eventually-periodic" if prop == "cayley-hamilton" else prop
    verdict = oracle_trapped_enumeration(spec, mode)
    checks: dict = {"method": "trapped-enumeration"}
    cert = rep.certificate
    if rep.verdict:
        if "exponent" in cert:
            checks["certificate_ok"] = oracle_certificate_check(spec, cert["exponent"], None)
        elif "preperiod" in cert:
            checks["certificate_ok"] = oracle_certificate_check(spec, cert["preperiod"], cert["period"])
        elif "period" in cert:
            checks["certificate_ok"] = oracle_certificate_check(spec, 0, cert["period"])
        if "annihilator" in cert:
            checks["annihilator_ok"] = oracle_annihilator(spec, cert["annihilator"], trials, seed)
    return verdict, checks


def cmd_oracle(args) -> int:
    spec = _spec(args.spec)
    t0 = time.perf_counter()
    if args.property in CANDIDATE_CHECKS:
        if args.candidate is not None:
            cand = _spec(args.candidate)
        elif args.property == "power":
            cand = power_spec(spec, args.n)
        elif args.property == "dual":
            cand = dual_spec(spec)
        else:
            cand = construct_inverse(spec, args.max_radius)
        if args.property == "power":
            verdict = oracle_power_agreement(spec, args.n, args.trials, cand, args.seed)
        elif args.property == "dual":
            verdict = oracle_dual_agreement(spec, cand, args.trials, args.seed)
        else:
            verdict = oracle_inverse_agreement(spec, cand, args.trials, args.seed)
        diagnostics = {"method": "naive-simulation", "agree": verdict}
    else:
        rep = decide(spec, args.property)
        if args.property in ("injective", "post-surjective"):
            if spec.d != 1:
                raise SpecError("the kernel-window oracle needs d = 1")
            target = dual_spec(spec) if args.property == "post-surjective" else spec
            verdict = oracle_injective(target, args.bound)
            diagnostics = {"method": "kernel-window"}
        else:
            verdict, diagnostics = _oracle_dynamical(spec, args.property, rep, args.trials, args.seed)
        agree = verdict == rep.verdict and all(v for k, v in diagnostics.items() if k.endswith("_ok"))
        diagnostics.update(decide_verdict=rep.verdict, agree=agree)
    out = {
        "property": args.property,
        "verdict": verdict,
        "certificate": {},
        "diagnostics": diagnostics,
        "tool_version": __version__,
    }
    if args.timings:
        out["diagnostics"]["seconds"] = round(time.perf_counter() - t0, 6)
    _emit(args, out, f"{args.property}: oracle {str(verdict).lower()}, agree={str(diagnostics['agree']).lower()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lnuca", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"lnuca {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def output_flags(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", action="store_true", help="JSON output (default)")
        g.add_argument("--text", action="store_true", help="one-line human summary")

    p = sub.add_parser("decide", help="decide one property of a spec")
    p.add_argument("property", choices=PROPERTIES)
    p.add_argument("spec")
    p.add_argument("--max-radius", type=int, default=4, help="inverse search radius for injective specs")
    p.add_argument("--timings", action="store_true", help="add wall-clock seconds to the diagnostics")
    output_flags(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("simulate", help="iterate a spec on a finitely supported configuration")
    p.add_argument("spec")
    p.add_argument("config")
    p.add_argument("--steps", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("power", help="emit a spec for the n-th iterate")
    p.add_argument("spec")
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("dual", help="emit the dual spec")
    p.add_argument("spec")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("invert", help="emit an inverse spec")
    p.add_argument("spec")
    p.add_argument("--max-radius", type=int, default=4)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("oracle", help="cross-check a decision or a candidate spec independently")
    p.add_argument("property", choices=PROPERTIES + CANDIDATE_CHECKS)
    p.add_argument("spec")
    p.add_argument("--candidate", help="claimed power, inverse or dual spec to check")
    p.add_argument("-n", type=int, default=2, help="exponent for the power check")
    p.add_argument("--bound", type=int, default=None, help="kernel-window radius (d = 1)")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-radius", type=int, default=4)
    p.add_argument("--timings", action="store_true")
    output_flags(p)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ResourceLimit, RadiusExhausted) as exc:
        print(f"lnuca: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (SpecError, PlacementUnresolved, ValueError) as exc:
        print(f"lnuca: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NucaError as exc:
        print(f"lnuca: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
