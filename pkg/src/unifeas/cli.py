"""Command-line front end.

Subcommands: decide, synthesize, verify, scan-family, curve.  Structured
results are JSON, scan/curve data is CSV.  Exit codes encode verdicts:
0 = feasible / verification passed, 1 = infeasible / failed, 2 = input
error.  The default verification tolerance is 1e-9; the environment
variable UNIFEAS_TOL overrides it and the --tol flag overrides both.

Instance files are UTF-8 JSON:

    {"rho1": [[{"re": 0.2, "im": 0.0}, ...], ...],
     "rho2": ..., "tau1": ..., "tau2": ..., "label": "optional"}

Entries may be bare numbers (treated as real) or {"re": ..., "im": ...}
objects.  Channel files use the same entry encoding under a "kraus" key
holding a list of 2x2 matrices, exactly what `synthesize --out` writes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from .errors import InfeasibleInstance, UnifeasError
from .feasibility import (
    Decision,
    ProblemInstance,
    ViolatedInequality,
    ViolatingParameter,
    decide_alberti_uhlmann,
    decide_unital,
    dim_operator_system,
    parabola_coeffs,
)
from .oracle import GridSpec, example_family
from .synth import DEFAULT_VERIFY_TOL, Channel, choi, synthesize, verify_channel

EXIT_FEASIBLE = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT_ERROR = 2


class InputError(Exception):
    """Any parse/validation failure of user-supplied files or flags."""


# ---------------------------------------------------------------------------
# JSON (de)serialization
# ---------------------------------------------------------------------------


def _entry_to_complex(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, dict):
        re = value.get("re", 0.0)
        im = value.get("im", 0.0)
        if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
            raise InputError(f"{where}: 're'/'im' must be numbers")
        if not ("re" in value or "im" in value):
            raise InputError(f"{where}: expected 're' and/or 'im' keys")
        return complex(re, im)
    raise InputError(f"{where}: expected a number or {{'re':..,'im':..}} object")


def _matrix_from_json(data, where: str) -> np.ndarray:
    if not isinstance(data, list) or len(data) != 2:
        raise InputError(f"{where}: expected a 2x2 array (list of 2 rows)")
    out = np.zeros((2, 2), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != 2:
            raise InputError(f"{where}[{i}]: expected a row of 2 entries")
        for j, entry in enumerate(row):
            out[i, j] = _entry_to_complex(entry, f"{where}[{i}][{j}]")
    return out


def _matrix_to_json(m: np.ndarray) -> list:
    return [
        [{"re": float(m[i, j].real), "im": float(m[i, j].imag)} for j in range(m.shape[1])]
        for i in range(m.shape[0])
    ]


def load_instance(path: str) -> tuple[ProblemInstance, Optional[str]]:
    """Parse an instance file; raises InputError with a positioned message."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    states = {}
    for name in ("rho1", "rho2", "tau1", "tau2"):
        if name not in data:
            raise InputError(f"{path}: missing required key '{name}'")
        states[name] = _matrix_from_json(data[name], f"{path}: {name}")
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise InputError(f"{path}: label must be a string")
    try:
        inst = ProblemInstance(**states)
    except UnifeasError as exc:
        raise InputError(f"{path}: invalid state: {exc}") from exc
    return inst, label


def load_channel(path: str) -> Channel:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict) or "kraus" not in data:
        raise InputError(f"{path}: expected an object with a 'kraus' key")
    kraus_json = data["kraus"]
    if not isinstance(kraus_json, list) or not kraus_json:
        raise InputError(f"{path}: 'kraus' must be a nonempty list of 2x2 matrices")
    kraus = tuple(
        _matrix_from_json(entry, f"{path}: kraus[{idx}]")
        for idx, entry in enumerate(kraus_json)
    )
    try:
        return Channel(kraus, provenance=str(data.get("provenance", "user")))
    except UnifeasError as exc:
        raise InputError(f"{path}: invalid channel: {exc}") from exc


def _witness_to_json(witness):
    if witness is None:
        return None
    if isinstance(witness, ViolatedInequality):
        return {
            "type": "violated_inequality",
            "name": witness.name,
            "lhs": witness.lhs,
            "rhs": witness.rhs,
        }
    if isinstance(witness, ViolatingParameter):
        return {
            "type": "violating_parameter",
            "t": witness.t,
            "lhs_norm": witness.lhs_norm,
            "rhs_norm": witness.rhs_norm,
        }
    raise TypeError(f"unknown witness type {type(witness)!r}")


def _json_real(x: float):
    # keep the output strict JSON: infinities become string markers
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _decision_to_json(decision: Decision) -> dict:
    return {
        "verdict": decision.verdict,
        "witness": _witness_to_json(decision.witness),
        "margins": [[name, _json_real(slack)] for name, slack in decision.margins],
    }


def _report_to_json(report) -> dict:
    return {
        "tp_residual": report.tp_residual,
        "unital_residual": report.unital_residual,
        "choi_min_eig": report.choi_min_eig,
        "mapping_residuals": list(report.mapping_residuals),
        "passed": report.passed,
    }


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _resolve_tol(flag_value: Optional[float]) -> float:
    if flag_value is not None:
        return flag_value
    env = os.environ.get("UNIFEAS_TOL")
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise InputError(f"UNIFEAS_TOL={env!r} is not a number") from exc
    return DEFAULT_VERIFY_TOL


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_decide(args) -> int:
    inst, label = load_instance(args.instance)
    decisions = {}
    if args.mode in ("au", "all"):
        decisions["alberti_uhlmann"] = decide_alberti_uhlmann(inst)
    if args.mode in ("unital", "all"):
        decisions["unital"] = decide_unital(inst)
    payload = {
        "label": label,
        "dim_operator_system": dim_operator_system(inst.rho1, inst.rho2),
        "mode": args.mode,
        "seed": args.seed,
        "decisions": {k: _decision_to_json(d) for k, d in decisions.items()},
    }
    _emit(_dump_json(payload), args.out)
    feasible = all(d.feasible for d in decisions.values())
    return EXIT_FEASIBLE if feasible else EXIT_INFEASIBLE


def cmd_synthesize(args) -> int:
    inst, label = load_instance(args.instance)
    tol = _resolve_tol(args.tol)
    try:
        channel = synthesize(inst, policy=args.c_policy)
    except InfeasibleInstance as exc:
        payload = {
            "label": label,
            "feasible": False,
            "decision": _decision_to_json(exc.decision),
        }
        _emit(_dump_json(payload), args.out)
        return EXIT_INFEASIBLE
    report = verify_channel(channel, inst, tol=tol)
    payload = {
        "label": label,
        "feasible": True,
        "c_policy": args.c_policy,
        "seed": args.seed,
        "tolerance": tol,
        "kraus": [_matrix_to_json(k) for k in channel.kraus],
        "choi": _matrix_to_json(choi(channel)),
        "verification": _report_to_json(report),
    }
    _emit(_dump_json(payload), args.out)
    return EXIT_FEASIBLE


def cmd_verify(args) -> int:
    inst, label = load_instance(args.instance)
    channel = load_channel(args.channel)
    tol = _resolve_tol(args.tol)
    report = verify_channel(channel, inst, tol=tol)
    payload = {
        "label": label,
        "tolerance": tol,
        "verification": _report_to_json(report),
    }
    _emit(_dump_json(payload), args.out)
    return EXIT_FEASIBLE if report.passed else EXIT_INFEASIBLE


def _family_row(c: float) -> tuple[float, float, float, float, str]:
    inst = example_family(c)
    a2, a1, a0 = parabola_coeffs(inst)
    verdict = decide_unital(inst).verdict
    return c, a0, a2, 4.0 * a0 * a2 - a1 * a1, verdict


def _bisect_family_threshold(lo: float, hi: float, iterations: int = 80) -> float:
    """Boundary of the feasible set of `example_family` in [lo, hi].

    Assumes feasibility at lo and infeasibility at hi (checked by caller).
    """
    for _ in range(iterations):
        mid = (lo + hi) / 2.0
        if decide_unital(example_family(mid)).feasible:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def cmd_scan_family(args) -> int:
    if not (0.0 <= args.start <= args.stop <= 1.0):
        raise InputError(
            f"need 0 <= from <= to <= 1, got from={args.start!r}, to={args.stop!r}"
        )
    if args.steps < 2:
        raise InputError(f"steps must be >= 2, got {args.steps}")
    cs = np.linspace(args.start, args.stop, args.steps)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["c", "det1_slack", "det2_slack", "disc_slack", "verdict"])
    rows = [_family_row(float(c)) for c in cs]
    for row in rows:
        writer.writerow([f"{row[0]:.12g}", f"{row[1]:.17g}", f"{row[2]:.17g}", f"{row[3]:.17g}", row[4]])
    # Refine the feasible/infeasible boundary between the first flip, if any.
    boundary = None
    for prev, cur in zip(rows, rows[1:]):
        if prev[4] == "feasible" and cur[4] == "infeasible":
            boundary = _bisect_family_threshold(prev[0], cur[0])
            break
    if boundary is not None:
        c, d1, d2, disc, _ = _family_row(boundary)
        writer.writerow(
            [f"{c:.12g}", f"{d1:.17g}", f"{d2:.17g}", f"{disc:.17g}", "threshold"]
        )
    _emit(buf.getvalue(), args.out)
    return EXIT_FEASIBLE


def cmd_curve(args) -> int:
    inst, _label = load_instance(args.instance)
    if args.condition != "iv":
        raise InputError(f"unsupported condition {args.condition!r} (only 'iv')")
    try:
        count_s, bound_s = args.grid.split(",")
        grid = GridSpec(count=int(count_s), bound=float(bound_s))
    except (ValueError, TypeError) as exc:
        raise InputError(f"--grid expects 'COUNT,BOUND', got {args.grid!r}") from exc
    axis = grid.axis()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["beta", "gamma", "lhs", "rhs", "margin"])
    from .oracle import _norm_grid  # local import: private vectorized kernel

    lhs = _norm_grid(0.5, inst.rho1, inst.rho2, axis, axis)
    rhs = _norm_grid(0.5, inst.tau1, inst.tau2, axis, axis)
    margin = lhs - rhs
    for i, beta in enumerate(axis):
        for j, gamma in enumerate(axis):
            writer.writerow(
                [
                    f"{beta:.12g}",
                    f"{gamma:.12g}",
                    f"{lhs[i, j]:.17g}",
                    f"{rhs[i, j]:.17g}",
                    f"{margin[i, j]:.17g}",
                ]
            )
    _emit(buf.getvalue(), args.out)
    return EXIT_FEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unifeas",
        description=(
            "Decide whether a (unital) channel maps one pair of qubit states "
            "onto another, synthesize explicit witnesses and verify them."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="write output to this file")
    common.add_argument(
        "--tol",
        type=float,
        default=None,
        help="verification tolerance (overrides UNIFEAS_TOL; default 1e-9)",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed recorded in reports (current commands are deterministic)",
    )

    p_decide = sub.add_parser("decide", parents=[common], help="run feasibility decisions")
    p_decide.add_argument("instance", help="instance JSON file")
    p_decide.add_argument(
        "--mode", choices=("au", "unital", "all"), default="all",
        help="which decision(s) to run",
    )
    p_decide.set_defaults(func=cmd_decide)

    p_synth = sub.add_parser(
        "synthesize", parents=[common], help="construct a witnessing unital channel"
    )
    p_synth.add_argument("instance", help="instance JSON file")
    p_synth.add_argument(
        "--c-policy",
        choices=("midpoint", "zero", "min", "max"),
        default="midpoint",
        dest="c_policy_flag",
        help="sigma_z eigenvalue selection policy",
    )
    p_synth.set_defaults(func=cmd_synthesize)

    p_verify = sub.add_parser(
        "verify", parents=[common], help="verify a channel file against an instance"
    )
    p_verify.add_argument("instance", help="instance JSON file")
    p_verify.add_argument("channel", help="channel JSON file (synthesize output)")
    p_verify.set_defaults(func=cmd_verify)

    p_scan = sub.add_parser(
        "scan-family", parents=[common], help="scan the built-in example family"
    )
    p_scan.add_argument("--from", dest="start", type=float, default=0.0)
    p_scan.add_argument("--to", dest="stop", type=float, default=1.0)
    p_scan.add_argument("--steps", type=int, default=21)
    p_scan.set_defaults(func=cmd_scan_family)

    p_curve = sub.add_parser(
        "curve", parents=[common], help="dump a norm-comparison surface as CSV"
    )
    p_curve.add_argument("instance", help="instance JSON file")
    p_curve.add_argument("--condition", default="iv")
    p_curve.add_argument("--grid", default="201,20", help="COUNT,BOUND per axis")
    p_curve.set_defaults(func=cmd_curve)

    return parser


_POLICY_BY_FLAG = {
    "midpoint": "midpoint",
    "zero": "zero_if_contained",
    "min": "min",
    "max": "max",
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if hasattr(args, "c_policy_flag"):
            args.c_policy = _POLICY_BY_FLAG[args.c_policy_flag]
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except UnifeasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
