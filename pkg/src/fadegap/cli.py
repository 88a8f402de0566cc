"""Command-line front-end with stable JSON/CSV output.

Subcommands:
    capacity      full capacity report for a channel read from JSON
    family        generate a worst-case family instance (or its report)
    sweep         analyze a family across several d values, emit CSV
    verify        randomized certification of the closed forms and bounds
    fading-paper  one-bit brackets for the fading-paper channel

Input channels are JSON objects ``{"gains": [...], "probs": [...]}``.  All
randomness in the package lives in ``verify``'s seeded generator; the core
library is fully deterministic, so identical invocations produce identical
bytes on stdout.
"""

import argparse
import json
import math
import random
import sys

from .allocation import closed_form_routes
from .channel import FadingDistribution
from .errors import InternalConsistencyError, ValidationError
from .fading_paper import LN2, fading_paper_report
from .gaps import full_analysis
from .muf import dominating_muf, intersection, muf_value
from .oracle import brute_force_expected_capacity
from .worst_case import additive_family, multiplicative_family, sweep, sweep_to_csv

__all__ = ["main", "run", "random_distribution", "verify_run"]

ORACLE_TOL = 1e-7

_CAPACITY_NAT_FIELDS = ("c_erg", "c_exp", "additive_gap", "entropy")
_FP_NAT_FIELDS = (
    "achievable_rate",
    "c_erg_lower",
    "c_erg_upper",
    "c_exp_fp",
    "gap_lower",
    "gap_upper",
    "gap_lower_raw",
)


def _json_safe(x):
    if x is None or isinstance(x, (int, str, bool)):
        return x
    xf = float(x)
    return xf if math.isfinite(xf) else None


def _load_distribution(path) -> FadingDistribution:
    try:
        if path is None:
            payload = json.load(sys.stdin)
        else:
            with open(path, "r", encoding="utf-8") as handle:
                payload = json.load(handle)
    except OSError as exc:
        raise ValidationError(f"input: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"input: not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValidationError("input: expected a JSON object with gains and probs")
    for field in ("gains", "probs"):
        if field not in payload:
            raise ValidationError(f"{field}: missing from input")
        if not isinstance(payload[field], list):
            raise ValidationError(f"{field}: must be a JSON array of numbers")
        for v in payload[field]:
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ValidationError(f"{field}: non-numeric entry {v!r}")
    return FadingDistribution(gains=tuple(payload["gains"]), probs=tuple(payload["probs"]))


def _convert_units(payload: dict, nat_fields, units: str) -> dict:
    payload = dict(payload)
    if units == "bits":
        for field in nat_fields:
            if payload.get(field) is not None:
                payload[field] = payload[field] / LN2
    payload["units"] = units
    return payload


def _capacity_payload(dist: FadingDistribution, units: str) -> dict:
    analysis = full_analysis(dist)
    report = analysis.report
    payload = {
        "c_erg": report.c_erg,
        "c_exp": report.c_exp,
        "additive_gap": report.additive_gap,
        "multiplicative_gap": report.multiplicative_gap,
        "entropy": report.entropy,
        "lemma2_terms": [_json_safe(v) for v in report.lemma2_terms],
        "lemma3_terms": [_json_safe(v) for v in report.lemma3_terms],
        "active_states": list(report.active_states),
        "epsilon_applied": _json_safe(report.epsilon_applied),
        "boundary_breakpoints": [_json_safe(v) for v in report.boundary_breakpoints],
    }
    payload = _convert_units(payload, _CAPACITY_NAT_FIELDS, units)
    payload["channel"] = {
        "gains": [_json_safe(g) for g in analysis.channel.gains],
        "probs": [_json_safe(p) for p in analysis.channel.probs],
    }
    if analysis.chain is not None:
        payload["chain"] = {
            "pi": list(analysis.chain.pi),
            "breakpoints": [_json_safe(z) for z in analysis.chain.breakpoints],
            "s": analysis.chain.s,
            "w": analysis.chain.w,
        }
        rates = analysis.allocation.per_state_rate
        if units == "bits":
            rates = tuple(r / LN2 for r in rates)
        payload["allocation"] = {
            "beta": [_json_safe(b) for b in analysis.allocation.beta],
            "lambda": [_json_safe(v) for v in analysis.allocation.lam],
            "per_state_rate": [_json_safe(r) for r in rates],
        }
    return payload


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "csv":
        scalars = [(k, v) for k, v in payload.items() if isinstance(v, (int, float, str))]
        print(",".join(k for k, _ in scalars))
        print(",".join(repr(v) if isinstance(v, float) else str(v) for _, v in scalars))
    else:
        print(json.dumps(payload, indent=2))


# ---------------------------------------------------------------------------
# verify: seeded randomized certification
# ---------------------------------------------------------------------------


def random_distribution(rng: random.Random, max_states: int = 5) -> FadingDistribution:
    """One random channel: K uniform in 2..max_states, gains log-uniform in
    [1e-3, 1e3], probabilities flat-Dirichlet (normalized unit exponentials)."""
    k = rng.randint(2, max_states)
    gains = tuple(10 ** rng.uniform(-3.0, 3.0) for _ in range(k))
    raw = [rng.expovariate(1.0) for _ in range(k)]
    total = sum(raw)
    probs = tuple(x / total for x in raw)
    return FadingDistribution(gains=gains, probs=probs)


class _Check:
    def __init__(self, name: str):
        self.name = name
        self.failures = 0
        self.trials = 0
        self.worst = 0.0

    def record(self, ok: bool, margin: float = 0.0):
        self.trials += 1
        if not ok:
            self.failures += 1
        self.worst = max(self.worst, margin)

    def line(self) -> str:
        status = "PASS" if self.failures == 0 else "FAIL"
        return (
            f"{status} {self.name}: {self.trials - self.failures}/{self.trials}"
            f" (worst deviation {self.worst:.3e})"
        )


def _check_chain_properties(ch, chain, check):
    tol = lambda z: max(1e-15, 1e-12 * abs(float(z)))
    segments = chain.segment_count
    ok = True
    worst = 0.0
    for i in range(1, segments):
        z_next = chain.breakpoints[i]
        for l in range(chain.pi[i - 1] + 1, ch.num_states + 1):
            gap = float(z_next - intersection(ch, chain.pi[i - 1], l))
            worst = max(worst, gap)
            ok = ok and gap <= tol(z_next)
        for l in range(1, chain.pi[i]):
            if l == chain.pi[i - 1]:
                continue
            gap = float(intersection(ch, l, chain.pi[i]) - z_next)
            worst = max(worst, gap)
            ok = ok and gap <= tol(z_next)
    for a, b in zip(chain.breakpoints[1:segments], chain.breakpoints[2:segments]):
        gap = float(a - b)
        worst = max(worst, gap)
        ok = ok and gap <= tol(b)
    check.record(ok, worst)


def _check_envelope_samples(ch, chain, check):
    n1 = ch.inverse_gains[0]
    top = 10 * ch.inverse_gains[-1]
    span = top + n1
    ok = True
    worst = 0.0
    for j in range(1, 101):
        z = -n1 + span * j / 100
        value, _ = dominating_muf(chain, ch, z)
        best = max(
            muf_value(ch, k, z) for k in range(1, ch.num_states + 1) if z > -ch.inverse_gains[k - 1]
        )
        deviation = abs(float(value - best)) / float(best)
        worst = max(worst, deviation)
        ok = ok and deviation <= 1e-12
    check.record(ok, worst)


def _check_fading_paper(dist, check):
    reports = [fading_paper_report(dist, inr) for inr in (0.0, 1.0, 1e6)]
    base = reports[0]
    ok = all(
        r.achievable_rate == base.achievable_rate
        and r.c_erg_lower == base.c_erg_lower
        and r.c_erg_upper == base.c_erg_upper
        and r.c_exp_fp == base.c_exp_fp
        and r.gap_lower == base.gap_lower
        and r.gap_upper == base.gap_upper
        for r in reports[1:]
    )
    ok = ok and base.c_erg_lower <= base.achievable_rate <= base.c_erg_upper
    ok = ok and base.gap_upper - base.gap_lower <= LN2 + 1e-12
    worst = 0.0
    for g in dist.gains:
        gf = float(g)
        point = max(math.log(gf), 0.0) if gf > 0 else 0.0
        upper = math.log1p(gf)
        gap = max(upper - LN2 - point, point - upper)
        worst = max(worst, gap)
        ok = ok and gap <= 1e-12
    check.record(ok, worst)


def verify_run(trials: int = 200, seed: int = 0, max_states: int = 5) -> dict:
    """Randomized certification sweep; returns a summary with per-check lines.

    Draws seeded random channels, runs the full pipeline plus the
    brute-force search on each, and checks the closed form against the
    search, the gap bounds, the per-state inequalities, the chain ordering
    properties, the envelope maximality on a z-grid, and the fading-paper
    brackets.
    """
    rng = random.Random(seed)
    checks = {
        name: _Check(name)
        for name in (
            "oracle-certification",
            "oracle-not-above-closed-form",
            "closed-form-route-agreement",
            "additive-gap-bound",
            "multiplicative-gap-bound",
            "per-state-additive-terms",
            "per-state-multiplicative-terms",
            "chain-ordering-properties",
            "envelope-maximality",
            "fading-paper-brackets",
        )
    }

    for _ in range(trials):
        dist = random_distribution(rng, max_states)
        analysis = full_analysis(dist)
        ch, report = analysis.channel, analysis.report
        k_states = ch.num_states

        result = brute_force_expected_capacity(ch, ORACLE_TOL)
        gap = result.value - report.c_exp
        checks["oracle-certification"].record(abs(gap) <= 1e-6, abs(gap))
        checks["oracle-not-above-closed-form"].record(gap <= 1e-9, max(gap, 0.0))

        r1, r2 = closed_form_routes(ch, analysis.allocation)
        rel = abs(r1 - r2) / max(abs(r1), abs(r2), 1e-300)
        checks["closed-form-route-agreement"].record(rel <= 1e-12, rel)

        margin = report.additive_gap - math.log(k_states)
        checks["additive-gap-bound"].record(margin <= 1e-9, max(margin, 0.0))
        margin = report.multiplicative_gap - k_states
        checks["multiplicative-gap-bound"].record(margin <= 1e-9, max(margin, 0.0))

        worst = max(
            t - 1 / float(p) for t, p in zip(report.lemma2_terms, ch.probs)
        )
        checks["per-state-additive-terms"].record(worst <= 1e-9, max(worst, 0.0))
        worst = max(t - 1 for t in report.lemma3_terms)
        checks["per-state-multiplicative-terms"].record(worst <= 1e-9, max(worst, 0.0))

        _check_chain_properties(ch, analysis.chain, checks["chain-ordering-properties"])
        _check_envelope_samples(ch, analysis.chain, checks["envelope-maximality"])
        _check_fading_paper(dist, checks["fading-paper-brackets"])

    lines = [c.line() for c in checks.values()]
    failed = sum(c.failures for c in checks.values())
    return {
        "trials": trials,
        "seed": seed,
        "max_states": max_states,
        "failures": failed,
        "lines": lines,
        "ok": failed == 0,
    }


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fadegap",
        description="Capacity gaps of finite-state slow-fading Gaussian channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", help="Capacity report for a channel JSON file")
    cap.add_argument("--input", default=None, help="channel JSON path (default: stdin)")
    cap.add_argument("--units", choices=["nats", "bits"], default="nats")
    cap.add_argument("--format", choices=["json", "csv"], default="json")

    fam = sub.add_parser("family", help="Generate a worst-case family instance")
    fam.add_argument("--kind", choices=["additive", "multiplicative"], required=True)
    fam.add_argument("--states", type=int, required=True)
    fam.add_argument("--d", type=float, required=True)
    fam.add_argument("--emit", choices=["dist", "report"], default="dist")
    fam.add_argument("--units", choices=["nats", "bits"], default="nats")

    swp = sub.add_parser("sweep", help="Analyze a family across several d values")
    swp.add_argument("--kind", choices=["additive", "multiplicative"], required=True)
    swp.add_argument("--states", type=int, required=True)
    swp.add_argument("--d-values", required=True, help="comma-separated d values")
    swp.add_argument("--out", default=None, help="CSV output path (default: stdout)")

    ver = sub.add_parser("verify", help="Randomized certification of the closed forms")
    ver.add_argument("--trials", type=int, default=200)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--max-states", type=int, default=5)

    fp = sub.add_parser("fading-paper", help="One-bit fading-paper brackets")
    fp.add_argument("--input", default=None, help="channel JSON path (default: stdin)")
    fp.add_argument("--inr", type=float, default=0.0)
    fp.add_argument("--units", choices=["nats", "bits"], default="nats")
    fp.add_argument("--format", choices=["json", "csv"], default="json")

    return parser


def _cmd_capacity(args) -> int:
    dist = _load_distribution(args.input)
    _emit(_capacity_payload(dist, args.units), args.format)
    return 0


def _cmd_family(args) -> int:
    build = additive_family if args.kind == "additive" else multiplicative_family
    dist = build(args.states, args.d)
    if args.emit == "dist":
        payload = {
            "gains": [_json_safe(g) for g in dist.gains],
            "probs": [_json_safe(p) for p in dist.probs],
        }
        print(json.dumps(payload, indent=2))
    else:
        _emit(_capacity_payload(dist, args.units), "json")
    return 0


def _cmd_sweep(args) -> int:
    try:
        d_values = [float(x) for x in args.d_values.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"d-values: {exc}") from exc
    csv_text = sweep_to_csv(sweep(args.kind, args.states, d_values))
    if args.out is None:
        sys.stdout.write(csv_text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(csv_text)
    return 0


def _cmd_verify(args) -> int:
    if args.trials < 1:
        raise ValidationError(f"trials: must be positive, got {args.trials}")
    if args.max_states < 2:
        raise ValidationError(f"max-states: must be at least 2, got {args.max_states}")
    summary = verify_run(trials=args.trials, seed=args.seed, max_states=args.max_states)
    for line in summary["lines"]:
        print(line)
    print(
        f"{'OK' if summary['ok'] else 'FAILED'}: {summary['trials']} trials, "
        f"seed {summary['seed']}, {summary['failures']} failures"
    )
    return 0 if summary["ok"] else 2


def _cmd_fading_paper(args) -> int:
    dist = _load_distribution(args.input)
    report = fading_paper_report(dist, args.inr)
    payload = {
        "inr": report.inr,
        "achievable_rate": report.achievable_rate,
        "c_erg_lower": report.c_erg_lower,
        "c_erg_upper": report.c_erg_upper,
        "c_exp_fp": report.c_exp_fp,
        "gap_lower": report.gap_lower,
        "gap_upper": report.gap_upper,
        "gap_lower_raw": report.gap_lower_raw,
    }
    _emit(_convert_units(payload, _FP_NAT_FIELDS, args.units), args.format)
    return 0


_HANDLERS = {
    "capacity": _cmd_capacity,
    "family": _cmd_family,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "fading-paper": _cmd_fading_paper,
}


def run(argv=None) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; unknown or malformed flags are
        # validation failures here (--help keeps its clean exit).
        return 0 if not exc.code else 1
    try:
        return _HANDLERS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
