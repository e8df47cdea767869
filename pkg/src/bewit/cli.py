"""Command-line front end: ``bewit <subcommand> ...`` or ``python -m bewit``.

Exit codes: 0 success, 1 input error, 2 reproduction check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from typing import Sequence

import numpy as np

from . import ghz, qasm, reproduce, witness
from .circuits import purification_circuit
from .errors import (
    CapacityError,
    DegenerateWitnessError,
    InputError,
    SamplingExhaustedError,
    StructureError,
)
from .estimator import DEFAULT_SHOTS, NoiseParams, estimate_witness

MODE_ALIASES = {
    "linear": "fixed",
    "fixed": "fixed",
    "envelope": "envelope",
    "paper-nl": "paper-numbers",
    "paper-numbers": "paper-numbers",
    "paper-nl-as-printed": "as-printed",
    "as-printed": "as-printed",
}

_ANGLE_RE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/(\d+(?:\.\d*)?))?$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def parse_angle(text: str) -> float:
    """Radians from ``"0.785"``, ``"pi/4"``, ``"6pi/5"`` or ``"-2*pi/3"``."""
    t = text.strip().replace(" ", "")
    m = _ANGLE_RE.match(t)
    if m:
        coef, denom = m.groups()
        c = {"": 1.0, "+": 1.0, "-": -1.0}.get(coef)
        c = float(coef) if c is None else c
        return c * math.pi / (float(denom) if denom else 1.0)
    try:
        return float(t)
    except ValueError:
        raise InputError(f"cannot parse angle {text!r}") from None


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _add_state_args(p: argparse.ArgumentParser):
    p.add_argument("--kind", required=True, choices=("kay", "kye", "category", "probs"))
    p.add_argument("--a", type=float, help="Kay parameter")
    p.add_argument("--b", type=float, help="Kye parameter b")
    p.add_argument("--c", type=float, help="Kye parameter c (defaults to b)")
    p.add_argument("--cat", type=int, choices=(1, 2, 3), help="category number")
    p.add_argument("--p", help="eight comma-separated probabilities (pair convention)")


def _add_json(p: argparse.ArgumentParser):
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _build_state(args) -> tuple[str, np.ndarray, str | None]:
    """(label, density matrix, default spec preset name)."""
    if args.kind == "kay":
        if args.a is None:
            raise InputError("--kind kay needs --a")
        return f"kay(a={args.a:g})", ghz.kay(args.a), "kay"
    if args.kind == "kye":
        if args.b is None:
            raise InputError("--kind kye needs --b")
        c = args.b if args.c is None else args.c
        return f"kye(b={args.b:g},c={c:g})", ghz.kye(args.b, c), "kye"
    if args.kind == "category":
        if args.cat is None:
            raise InputError("--kind category needs --cat")
        return f"category {args.cat}", ghz.density_matrix(ghz.category_state(args.cat)), f"cat{args.cat}"
    if args.p is None:
        raise InputError("--kind probs needs --p")
    try:
        p = [float(v) for v in args.p.split(",")]
    except ValueError:
        raise InputError(f"cannot parse probabilities {args.p!r}") from None
    return "custom", ghz.density_matrix(ghz.GhzDiagonalState(tuple(p))), None


def _resolve_spec(text: str | None, preset: str | None) -> witness.WitnessSpec:
    if text is None:
        if preset is None:
            raise InputError("--spec is required for this state")
        return reproduce.SPECS[preset]
    if text in reproduce.SPECS:
        return reproduce.SPECS[text]
    return witness.WitnessSpec.parse(text)


def _matrix_json(m: np.ndarray) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _default_seed() -> int:
    env = os.environ.get("BEWIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"BEWIT_SEED must be an integer, got {env!r}") from None


# --- subcommands ------------------------------------------------------------

def cmd_state(args, out):
    label, rho, _ = _build_state(args)
    r = ghz.r_vector(rho)
    ppt = ghz.ppt_report(rho)
    data = {
        "state": label,
        "rho": _matrix_json(rho),
        "r": r.to_json(),
        "ppt": ppt.to_json(),
        "is_ppt": ppt.is_ppt,
        "ghz_diagonal": ghz.is_ghz_diagonal(rho),
    }
    data["p"] = None
    if data["ghz_diagonal"]:
        try:
            data["p"] = ghz.probs_from_density(rho).p
        except StructureError:
            pass  # GHZ-diagonal but not positive, e.g. kay(a) for small a
    if args.table and not args.json:
        print(f"state: {label}", file=out)
        print("rho (real part):", file=out)
        for row in rho.real:
            print("  " + " ".join(f"{v:>10.6g}" for v in row), file=out)
        print("correlations:", file=out)
        for k, v in r.as_dict().items():
            print(f"  {k}: {_fmt(v)}", file=out)
        for cut, v in ppt.cuts.items():
            print(f"  min eig PT[{cut}]: {_fmt(v)}", file=out)
        print(f"is_ppt: {ppt.is_ppt}", file=out)
    else:
        json.dump(data, out, indent=2)
        print(file=out)
    return 0


def cmd_witness(args, out):
    label, rho, preset = _build_state(args)
    r = ghz.r_vector(rho)
    spec = _resolve_spec(args.spec, preset)
    mode = MODE_ALIASES[args.mode]

    if args.sweep_theta is not None:
        if args.sweep_theta < 1:
            raise InputError("--sweep-theta needs a positive count")
        thetas = np.linspace(0.0, 2 * math.pi, args.sweep_theta, endpoint=False)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta", "value"])
        for t in thetas:
            w.writerow([repr(float(t)), repr(witness.linear_value(r, spec, t).value)])
        if args.out:
            with open(args.out, "w", newline="") as fh:
                fh.write(buf.getvalue())
        if args.json:
            rows = [{"theta": float(t), "value": witness.linear_value(r, spec, t).value} for t in thetas]
            json.dump({"state": label, "spec": spec.encode(), "out": args.out, "rows": rows}, out, indent=2)
            print(file=out)
        elif args.out:
            print(f"wrote {len(thetas)} rows to {args.out}", file=out)
        else:
            out.write(buf.getvalue())
        return 0

    theta = parse_angle(args.theta) if args.theta is not None else None
    wv = witness.evaluate(r, spec, mode, theta)
    if args.json:
        json.dump({"state": label, "spec": spec.encode(), "mode": mode, **wv.to_json()}, out, indent=2)
        print(file=out)
    else:
        print(f"{label}  {spec.encode()}  {mode}: {wv.value:.4f}", file=out)
    return 0


def cmd_search(args, out):
    label, rho, _ = _build_state(args)
    res = witness.optimal_search(ghz.r_vector(rho))
    if args.json:
        json.dump({"state": label, "spec": res.spec.encode(), "mode": res.mode, **res.value.to_json()}, out, indent=2)
        print(file=out)
    else:
        print(
            f"{label}: best {res.spec.encode()} envelope={_fmt(res.value.value)} "
            f"theta*={_fmt(res.value.theta_used)}",
            file=out,
        )
    return 0


def cmd_synth(args, out):
    label, rho, _ = _build_state(args)
    circuit = purification_circuit(ghz.probs_from_density(rho))
    text = qasm.emit_qasm(circuit) if args.emit == "qasm" else circuit.dumps() + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.json:
        data = {"state": label, "format": args.emit, "out": args.out, "gates": len(circuit)}
        data["circuit" if args.emit == "json" else "qasm"] = circuit.to_json() if args.emit == "json" else text
        json.dump(data, out, indent=2)
        print(file=out)
    elif args.out:
        print(f"wrote {args.emit} circuit for {label} ({len(circuit)} gates) to {args.out}", file=out)
    else:
        out.write(text)
    return 0


def cmd_simulate(args, out):
    label, rho, preset = _build_state(args)
    spec = _resolve_spec(args.spec, preset)
    mode = MODE_ALIASES[args.mode]
    if mode == "as-printed":
        raise InputError("as-printed mode is not estimated (it is identically zero)")
    theta = parse_angle(args.theta) if args.theta is not None else None
    seed = args.seed if args.seed is not None else _default_seed()
    noise = NoiseParams.parse(args.noise) if args.noise else NoiseParams()
    state = ghz.probs_from_density(rho)
    est = estimate_witness(state, spec, mode, args.shots, seed, noise, theta)
    exact = witness.evaluate(ghz.r_vector(rho), spec, mode, theta).value
    if args.json:
        json.dump(
            {"state": label, "spec": spec.encode(), "mode": mode, "theoretical": exact, **est.to_json()},
            out,
            indent=2,
        )
        print(file=out)
    else:
        print(
            f"{label}  {spec.encode()}  {mode}: estimate {est.mean:.4f} +/- {est.stderr:.4f} "
            f"(theory {exact:.4f}, {est.shots} shots, seed {est.seed})",
            file=out,
        )
    return 0


def cmd_reproduce(args, out):
    seed = args.seed if args.seed is not None else _default_seed()
    noise = NoiseParams.parse(args.noise) if args.noise else None
    records = reproduce.run_all(simulate=args.simulate, shots=args.shots, seed=seed, noise=noise)
    ok = reproduce.all_passed(records)
    if args.json:
        json.dump({"passed": ok, "records": [rec.to_json() for rec in records]}, out, indent=2)
        print(file=out)
    else:
        for rec in records:
            line = (
                f"{rec.status:<5} {rec.group:<24} {rec.state:<16} {rec.mode:<14} "
                f"value={rec.theoretical:>10.6g} expected={rec.expected:>9.5g}"
            )
            if rec.estimate:
                line += f"  est={rec.estimate['mean']:.4f}+/-{rec.estimate['stderr']:.4f}"
            print(line, file=out)
        n_fail = sum(rec.status == "FAIL" for rec in records)
        n_known = sum(rec.status == "KNOWN" for rec in records)
        print(
            f"{len(records) - n_fail - n_known} passed, {n_known} known discrepancies, {n_fail} failed",
            file=out,
        )
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bewit", description="GHZ-diagonal bound-entanglement toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("state", help="build a state; print rho, correlations and PPT")
    _add_state_args(p)
    _add_json(p)
    p.add_argument("--table", action="store_true", help="human-readable table instead of JSON")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("witness", help="evaluate a witness on a state")
    _add_state_args(p)
    _add_json(p)
    p.add_argument("--spec", help='e.g. "i=1,s=-,jk=5-4,lm=7-6" or a preset name')
    p.add_argument("--mode", default="linear", choices=sorted(MODE_ALIASES))
    p.add_argument("--theta", help='angle in radians or as "pi/4", "6pi/5"')
    p.add_argument("--sweep-theta", type=int, help="emit N rows of theta,value as CSV")
    p.add_argument("--out", help="CSV file for --sweep-theta")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("search", help="most negative envelope witness over the family")
    _add_state_args(p)
    _add_json(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("synth", help="emit the six-qubit preparation circuit")
    _add_state_args(p)
    _add_json(p)
    p.add_argument("--emit", choices=("json", "qasm"), default="json")
    p.add_argument("--out", help="output file")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", help="shot-based witness estimate")
    _add_state_args(p)
    _add_json(p)
    p.add_argument("--spec")
    p.add_argument("--mode", default="linear", choices=sorted(MODE_ALIASES))
    p.add_argument("--theta")
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    p.add_argument("--seed", type=int, help="defaults to $BEWIT_SEED or 0")
    p.add_argument("--noise", help="depol1=..,depol2=..,readout=..")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce", help="check every reported theoretical value")
    _add_json(p)
    p.add_argument("--simulate", action="store_true", help="also estimate each value from shots")
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    p.add_argument("--seed", type=int)
    p.add_argument("--noise")
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().rstrip())
        if args.command == "witness" and args.sweep_theta is None and MODE_ALIASES[args.mode] == "fixed" and args.theta is None:
            raise InputError("linear mode needs --theta")
        if args.command == "simulate" and MODE_ALIASES[args.mode] == "fixed" and args.theta is None:
            raise InputError("linear mode needs --theta")
        return args.func(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (InputError, StructureError, DegenerateWitnessError, SamplingExhaustedError, CapacityError) as exc:
        print(f"bewit: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"bewit: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
