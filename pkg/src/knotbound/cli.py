"""Command-line interface.

    knotbound certify [--t-min F] [--t-max F] [--grid N] [--refine N] [--t-tol F] [--margin F] [--out PATH]
    knotbound lcurve --steps N [--t-min F] [--t-max F] --out PATH
    knotbound detour --t F --a F --b F [--oracle N]
    knotbound verify-appendix [--density N]
    knotbound distortion --input PATH
    knotbound gen-torus-knot --p N --q N --R F --r F --n N --out PATH

Every subcommand also takes ``--threads N``.  Exit status is 0 on success,
1 when a computation fails or a claim does not verify, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from knotbound.appendix import verify_appendix
from knotbound.curves import load_curve, polygonal_distortion, save_curve, torus_knot
from knotbound.detour import detour_breakdown, detour_length_F, structure_check
from knotbound.errors import (
    CertificationError,
    CurveFormatError,
    DegenerateCurveError,
    DomainError,
    NoCrossingError,
    StructureError,
)
from knotbound.optimizer import T_HIGH, T_LOW, Tolerances, certify_lower_bound, sample_L_curve
from knotbound.oracle import oracle_shortest_path

CLAIMED_BOUND = 4.76


def fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, str)):
        return str(x)
    return f"{x:.12g}"


def _block(title, pairs):
    lines = [f"# {title}"]
    lines += [f"{k}={fmt(v)}" for k, v in pairs]
    return "\n".join(lines) + "\n"


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive_int, default=None,
                        help="cap on worker threads (default: all cores)")

    parser = argparse.ArgumentParser(
        prog="knotbound",
        description="Certified lower bound for the distortion of knotted curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", parents=[common], help="certify the distortion threshold")
    p.add_argument("--t-min", type=float, default=T_LOW)
    p.add_argument("--t-max", type=float, default=T_HIGH)
    p.add_argument("--grid", type=_positive_int, default=64)
    p.add_argument("--refine", type=_positive_int, default=8)
    p.add_argument("--t-tol", type=_positive_float, default=1e-6)
    p.add_argument("--margin", type=_positive_float, default=1e-4)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("lcurve", parents=[common], help="sample L(t) to CSV")
    p.add_argument("--steps", type=_positive_int, required=True)
    p.add_argument("--t-min", type=float, default=T_LOW)
    p.add_argument("--t-max", type=float, default=T_HIGH)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("detour", parents=[common], help="evaluate one detour")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--oracle", type=_positive_int)

    p = sub.add_parser("verify-appendix", parents=[common], help="check the shape bounds")
    p.add_argument("--density", type=_positive_int, default=1000)

    p = sub.add_parser("distortion", parents=[common], help="distortion of a curve file")
    p.add_argument("--input", type=Path, required=True)

    p = sub.add_parser("gen-torus-knot", parents=[common], help="write a torus knot sample")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    return parser


def _validate(parser, args):
    if args.command in ("certify", "lcurve"):
        if not (T_LOW - 1e-12 <= args.t_min < args.t_max <= T_HIGH):
            parser.error("need pi + 1 <= --t-min < --t-max <= 5")
    if args.command == "certify" and args.grid < 2:
        parser.error("--grid must be at least 2")
    if args.command == "lcurve" and args.steps < 2:
        parser.error("--steps must be at least 2")
    if args.command == "detour" and args.oracle is not None and args.oracle < 64:
        parser.error("--oracle needs at least 64 boundary samples")
    if args.command == "verify-appendix" and args.density < 100:
        parser.error("--density must be at least 100")


def cmd_certify(args, out):
    tol = Tolerances(grid_n=args.grid, refine_depth=args.refine, t_tol=args.t_tol,
                     cert_margin=args.margin)
    pairs = [
        ("t_min", args.t_min), ("t_max", args.t_max), ("grid_n", tol.grid_n),
        ("refine_depth", tol.refine_depth), ("t_tol", tol.t_tol),
        ("cert_margin", tol.cert_margin), ("root_tol", tol.root_tol), ("scan_n", tol.scan_n),
    ]
    try:
        cert = certify_lower_bound((args.t_min, args.t_max), tol, workers=args.threads)
    except NoCrossingError as exc:
        pairs += [("status", "no-crossing"), ("holds_throughout", exc.holds_throughout)]
        _emit(out, args.out, _block("certify", pairs) + f"# {exc}\n")
        return 1
    except CertificationError as exc:
        pairs += [("status", "unverified")]
        _emit(out, args.out, _block("certify", pairs) + f"# {exc}\n")
        return 1
    exceeds = cert.t_star > CLAIMED_BOUND
    pairs += [
        ("t_star", cert.t_star), ("margin", cert.margin), ("L_at_t_star", cert.L_star),
        ("argmin_a", cert.argmin[0]), ("argmin_b", cert.argmin[1]),
    ]
    pairs += [(f"verify_grid_{n}", v) for n, v in cert.verifications]
    pairs += [("valid", cert.valid), (f"exceeds_{CLAIMED_BOUND}", exceeds), ("samples", len(cert.samples))]
    pairs += [(f"sample_{i:03d}", f"{fmt(t)},{fmt(v)}") for i, (t, v) in enumerate(cert.samples)]
    _emit(out, args.out, _block("certify", pairs))
    return 0 if cert.valid and exceeds else 1


def _emit(out, path, text):
    out.write(text)
    if path is not None:
        Path(path).write_text(text)


def cmd_lcurve(args, out):
    rows = sample_L_curve(args.t_min, args.t_max, args.steps, workers=args.threads)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "L", "t_minus_1"])
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    out.write(_block("lcurve", [("rows", len(rows)), ("out", str(args.out))]))
    return 0


def cmd_detour(args, out):
    t, a, b = args.t, args.a, args.b
    value = detour_length_F(t, a, b)
    parts = detour_breakdown(t, a, b)
    shape = structure_check(t, a, b)
    pairs = [
        ("t", t), ("a", a), ("b", b), ("F", value),
        ("seg_pp", parts.seg_pp), ("spiral_pv", parts.spiral_pv),
        ("spiral_vq", parts.spiral_vq), ("seg_qq", parts.seg_qq), ("total", parts.total),
        ("p", shape.p), ("q", shape.q), ("gamma", shape.gamma), ("structure_ok", shape.ok),
    ]
    if args.oracle is not None:
        oracle = oracle_shortest_path(t, a, b, args.oracle)
        pairs += [("oracle_n", args.oracle), ("oracle", oracle),
                  ("relative_gap", (oracle - value) / value)]
    out.write(_block("detour", pairs))
    return 0


def cmd_verify_appendix(args, out):
    report = verify_appendix(args.density)
    pairs = [
        ("density", args.density), ("x5", report.x5), ("q_max", report.q_max),
        ("bridge", report.bridge),
    ]
    pairs += [(f"d_{q:g}", v) for q, v in report.d_values.items()]
    for row in report.case_rows:
        key = f"case_{row['q_lo']:g}_{row['q_hi']:g}"
        pairs.append((key, "pass" if row["ok"] else "fail"))
    pairs.append(("gamma_configs", report.gamma_configs))
    pairs += list(report.flags.items())
    pairs.append(("all_pass", report.all_pass))
    text = _block("verify-appendix", pairs) + "".join(f"# note: {n}\n" for n in report.notes)
    out.write(text)
    return 0 if report.all_pass else 1


def cmd_distortion(args, out):
    curve = load_curve(args.input)
    value, (i, j) = polygonal_distortion(curve, workers=args.threads)
    out.write(_block("distortion", [
        ("vertices", len(curve)), ("length", curve.length), ("distortion", value),
        ("pair_i", i), ("pair_j", j),
    ]))
    return 0


def cmd_gen_torus_knot(args, out):
    curve = torus_knot(args.p, args.q, args.R, args.r, args.n)
    save_curve(curve, args.out)
    out.write(_block("gen-torus-knot", [
        ("p", args.p), ("q", args.q), ("vertices", len(curve)),
        ("length", curve.length), ("out", str(args.out)),
    ]))
    return 0


COMMANDS = {
    "certify": cmd_certify,
    "lcurve": cmd_lcurve,
    "detour": cmd_detour,
    "verify-appendix": cmd_verify_appendix,
    "distortion": cmd_distortion,
    "gen-torus-knot": cmd_gen_torus_knot,
}


def run(argv=None, out=None):
    """Execute one subcommand and return its exit status."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(parser, args)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is None:
        args.threads = os.cpu_count() or 1
    try:
        return COMMANDS[args.command](args, out)
    except DomainError as exc:
        # includes infeasible (t, a, b) and bad torus-knot parameters
        print(f"knotbound: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except (StructureError, CurveFormatError, DegenerateCurveError, OSError, RuntimeError) as exc:
        print(f"knotbound: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
