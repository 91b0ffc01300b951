"""Nilpotency, periodicity, eventual periodicity and the Cayley-Hamilton property."""

from __future__ import annotations

import numpy as np

from ..algebra.endo import endo_classify
from ..core.config import random_config
from ..core.dynamics import apply_steps, compose_specs, identity_like
from ..core.spec import NucaSpec
from ..errors import ResourceLimit, UnsupportedError
from .reduction import base_exponent, reduce_phi
from .report import DecisionReport

# exact minimization of certificates stops after this many compositions
MINIMIZE_STEPS = 64
MINIMIZE_MEMORY = 1024


def _is_zero_spec(s: NucaSpec) -> bool:
    return s.base.is_zero() and not s.perturbations


def _power_sequence(spec: NucaSpec, limit: int):
    """Yield (e, spec of sigma^e) for e = 0..limit, stopping early on resource limits."""
    cur = identity_like(spec)
    yield 0, cur
    for e in range(1, limit + 1):
        if len(cur.memory) * len(spec.memory) > MINIMIZE_MEMORY:
            return
        try:
            cur = compose_specs(spec, cur)
        except ResourceLimit:
            return
        yield e, cur


def _sample_check(spec: NucaSpec, m: int, n: int | None, seed: int = 0, trials: int = 3) -> bool:
    """sigma^(m+n) x == sigma^m x (or sigma^m x == 0 when n is None) on random x."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        x = random_config(rng, spec.p, spec.k, spec.d, radius=1)
        a = apply_steps(spec, x, m)
        b = a if n is None else apply_steps(spec, a, n)
        if (n is None and not a.is_zero()) or (n is not None and a != b):
            return False
    return True


def _no_sparse(spec: NucaSpec) -> None:
    if spec.sparse is not None:
        raise UnsupportedError("sparse specs are decided by decide_sparse")


def decide_nilpotent(spec: NucaSpec) -> DecisionReport:
    _no_sparse(spec)
    base, n0 = base_exponent(spec, "nilpotent")
    diag = {"base_char_poly": repr(base.char_poly)}
    if n0 is None:
        diag["reason"] = "base CA is not nilpotent"
        return DecisionReport("nilpotent", False, {}, diag)
    if not spec.perturbations:
        return DecisionReport("nilpotent", True, {"exponent": base.certificate["index"] or 1, "verified": "symbol"}, diag)
    red = reduce_phi(spec, "nilpotent", n0)
    cls = endo_classify(red.phi)
    diag.update(n0=n0, **red.diagnostics)
    if not cls.nilpotent_to_zero:
        diag["reason"] = "window endomorphism is not nilpotent"
        return DecisionReport("nilpotent", False, {}, diag)
    bound = n0 * (cls.nilpotency_index + 1)
    cert = {"exponent": bound, "verified": "sampled"}
    for e, s_e in _power_sequence(spec, min(bound, MINIMIZE_STEPS)):
        if e and _is_zero_spec(s_e):
            cert = {"exponent": e, "verified": "exact"}
            break
    if cert["verified"] == "sampled" and not _sample_check(spec, cert["exponent"], None):
        raise ArithmeticError("nilpotency exponent failed re-verification")
    cert["bound"] = bound
    return DecisionReport("nilpotent", True, cert, diag)


def decide_periodic(spec: NucaSpec) -> DecisionReport:
    _no_sparse(spec)
    base, n0 = base_exponent(spec, "periodic")
    diag = {"base_char_poly": repr(base.char_poly)}
    if n0 is None:
        diag["reason"] = "base CA is not periodic"
        return DecisionReport("periodic", False, {}, diag)
    if not spec.perturbations:
        return DecisionReport("periodic", True, {"period": n0, "verified": "symbol"}, diag)
    red = reduce_phi(spec, "periodic", n0)
    cls = endo_classify(red.phi)
    diag.update(n0=n0, **red.diagnostics)
    if not cls.bijective:
        diag["reason"] = "window endomorphism is not bijective"
        return DecisionReport("periodic", False, {}, diag)
    if cls.period is None:
        diag["period_capped"] = True
        return DecisionReport("periodic", True, {}, diag)
    period = n0 * cls.period
    verified = "sampled"
    if period <= MINIMIZE_STEPS:
        ident = identity_like(spec)
        for e, s_e in _power_sequence(spec, period):
            if e == period:
                if s_e != ident:
                    raise ArithmeticError("period failed re-verification")
                verified = "exact"
    if verified == "sampled" and not _sample_check(spec, 0, period):
        raise ArithmeticError("period failed re-verification")
    return DecisionReport("periodic", True, {"period": period, "verified": verified}, diag)


def _eventual(spec: NucaSpec, prop: str) -> DecisionReport:
    _no_sparse(spec)
    base, n0 = base_exponent(spec, "eventual")
    diag = {"base_char_poly": repr(base.char_poly)}
    if n0 is None:
        diag["reason"] = "base CA is not eventually periodic"
        return DecisionReport(prop, False, {}, diag)
    try:
        red = reduce_phi(spec, "eventual", n0)
    except ResourceLimit as exc:
        # the verdict is the base verdict; only the certificate is lost
        red = None
        diag["reduction_capped"] = str(exc)
        cert = {"verified": "none"}
        limit = MINIMIZE_STEPS
    else:
        cls = endo_classify(red.phi)
        diag.update(n0=n0, far_rules_checked=red.far_rules_checked, **red.diagnostics)
        m_cert = n0 * (1 + cls.preperiod)
        n_cert = None if cls.period is None else n0 * cls.period
        cert = {"preperiod": m_cert, "period": n_cert, "verified": "sampled"}
        limit = m_cert + (n_cert or 0)
    seen: dict[NucaSpec, int] = {}
    for e, s_e in _power_sequence(spec, min(limit, MINIMIZE_STEPS)):
        if s_e in seen:
            a = seen[s_e]
            cert = {"preperiod": a, "period": e - a, "verified": "exact", "zero": _is_zero_spec(s_e)}
            break
        seen[s_e] = e
    if cert["verified"] == "none":
        diag["certificate_capped"] = True
        cert = {}
    elif cert["verified"] == "sampled":
        if n_cert is None:
            diag["period_capped"] = True
        elif not _sample_check(spec, m_cert, n_cert):
            raise ArithmeticError("(preperiod, period) failed re-verification")
    return DecisionReport(prop, True, cert, diag)


def decide_eventually_periodic(spec: NucaSpec) -> DecisionReport:
    return _eventual(spec, "eventually-periodic")


def annihilator(m: int, n: int, p: int, zero: bool = False) -> list[int]:
    """Coefficients (constant term first) of z^m (z^n - 1), or of z^m when zero."""
    coeffs = [0] * (m + (0 if zero else n) + 1)
    coeffs[-1] = 1
    if not zero:
        coeffs[m] = (coeffs[m] - 1) % p
    return coeffs


def poly_repr(coeffs: list[int]) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "z" if i == 1 else f"z^{i}"
        parts.append(str(c) if i == 0 else (mono if c == 1 else f"{c}*{mono}"))
    return " + ".join(parts) or "0"


def decide_cayley_hamilton(spec: NucaSpec) -> DecisionReport:
    if not spec.is_linear:
        raise UnsupportedError("the Cayley-Hamilton property is defined for linear specs only")
    rep = _eventual(spec, "cayley-hamilton")
    if rep.verdict and rep.certificate.get("period") is not None:
        c = rep.certificate
        zero = bool(c.get("zero"))
        coeffs = annihilator(c["preperiod"], c["period"], spec.p, zero)
        rep.certificate = {
            "annihilator": coeffs,
            "polynomial": poly_repr(coeffs),
            "preperiod": c["preperiod"],
            "period": c["period"],
            "verified": c["verified"],
        }
    return rep
