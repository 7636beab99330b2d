"""Command-line front end.

Exit codes: 0 ok, 1 input error, 2 not reconstructible, 3 reconstruction
quality failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from . import io, workflows
from .matcore import DimensionError


def _bool_arg(text):
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _common(p, config_required=True):
    p.add_argument("--config", required=config_required, help="problem config JSON")
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.add_argument("--tol", type=float, help="relative rank tolerance (default 1e-10)")
    p.add_argument("--seed", type=int, help="noise seed")
    p.add_argument("--identity-augmented", type=_bool_arg, metavar="BOOL",
                   help="use the known unit trace as extra datum")
    p.add_argument("--out", help="also write the JSON report to this path")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="strobotomo",
        description="Stroboscopic state tomography for GKLS dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("check", help="Krylov reconstructibility test"))
    _common(sub.add_parser("roundtrip", help="simulate, reconstruct, score"))
    p = sub.add_parser("decompose", help="Hermitian parts of a complex matrix")
    p.add_argument("matrix", help="matrix JSON file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p = sub.add_parser("demo", help="built-in scenarios vs. static tomography")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return parser


def _apply_overrides(cfg, args):
    changes = {}
    if args.tol is not None:
        if not args.tol > 0:
            raise io.ConfigError("--tol", "must be positive")
        changes["rank_tol"] = args.tol
    if args.seed is not None:
        if args.seed < 0:
            raise io.ConfigError("--seed", "must be nonnegative")
        changes["seed"] = args.seed
    if args.identity_augmented is not None:
        changes["identity_augmented"] = args.identity_augmented
    return dataclasses.replace(cfg, **changes) if changes else cfg


def _fmt_matrix(m, indent="    "):
    m = np.asarray(m)
    return "\n".join(indent + "  ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row)
                     for row in m)


def _text_check(p):
    lines = [f"verdict: {p['verdict']}",
             f"mu: {p['mu']}",
             f"span: {p['total_span_dim']}/{p['target_dim']}"
             + (" (identity augmented)" if p["identity_augmented"] else "")]
    for label, d in zip(p["labels"], p["per_observable_dims"]):
        lines.append(f"  K_mu({label}): dim {d}")
    if p["missing_direction"] is not None:
        lines.append("missing direction:")
        lines.append(_fmt_matrix(io.matrix_from_json(p["missing_direction"])))
    lines += [f"warning: {w}" for w in p["warnings"]]
    lines += [f"notice: {n}" for n in p["notices"]]
    return "\n".join(lines)


def _text_roundtrip(p):
    r = p["result"]
    cond = r["frame_condition_number"]
    lines = [f"verdict: {p['verdict']}  mu: {p['mu']}  instants: {len(p['times'])}",
             f"frame rank: {r['frame_rank']}  condition number: "
             + ("inf" if cond is None else f"{cond:.4g}"),
             f"residual: {r['residual_norm']:.3e}",
             f"HS error: {p['hs_error']:.3e}  fidelity: {p['fidelity']:.12f}  "
             f"trace distance: {p['trace_distance']:.3e}",
             "reconstructed rho0:", _fmt_matrix(io.matrix_from_json(r["rho_hat"])),
             "PASS" if p["passed"] else "FAIL"]
    lines += [f"warning: {w}" for w in p["warnings"]]
    lines += [f"notice: {n}" for n in p["notices"]]
    return "\n".join(lines)


def _text_decompose(p):
    return "\n".join(["Q (Hermitian part):", _fmt_matrix(io.matrix_from_json(p["Q"])),
                      "R (A = Q + iR):", _fmt_matrix(io.matrix_from_json(p["R"])),
                      f"recomposition error: {p['recomposition_error']:.3e}"])


def _text_demo(p):
    head = f"{'scenario':<10}{'n':>3}{'r':>4}{'n^2-1':>7}{'mu':>5}{'g':>5}{'HS error':>12}{'cond':>11}  verdict"
    lines = [head, "-" * len(head)]
    for s in p["scenarios"]:
        lines.append(f"{s['scenario']:<10}{s['n']:>3}{s['observables_used']:>4}"
                     f"{s['static_count']:>7}{s['mu']:>5}{s['time_instants']:>5}"
                     f"{s['hs_error']:>12.2e}{s['condition_number']:>11.3g}  {s['verdict']}")
    lines.append("")
    lines.append("ququart with one observable:")
    for c in p["single_observable_ququart"]:
        lines.append(f"  {c['observable']}: {c['verdict']} "
                     f"({c['total_span_dim']}/{c['target_dim']})")
    lines.append("PASS" if p["passed"] else "FAIL")
    return "\n".join(lines)


def _emit(args, payload, text):
    if args.json:
        sys.stdout.write(io.dumps(payload))
    else:
        print(text)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(io.dumps(payload))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "demo":
            code, payload = workflows.run_demo(args.seed)
            _emit(args, payload, _text_demo(payload))
            return code
        if args.command == "decompose":
            with open(args.matrix) as fh:
                text = fh.read()
            try:
                obj = io.json.loads(text)
            except io.json.JSONDecodeError as exc:
                raise io.ConfigError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
            m = io.square_matrix_from_json(obj, "matrix")
            code, payload = workflows.run_decompose(m)
            _emit(args, payload, _text_decompose(payload))
            return code
        cfg = _apply_overrides(io.load_config(args.config), args)
        if args.command == "check":
            code, payload, _ = workflows.run_check(cfg)
            _emit(args, payload, _text_check(payload))
        else:
            code, payload, _ = workflows.run_roundtrip(cfg)
            _emit(args, payload, _text_roundtrip(payload))
        return code
    except (io.ConfigError, DimensionError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return workflows.EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
