"""``helix`` command line: analyze, synthesize and frame.

Exit codes: 0 success, 1 analysis/synthesis error, 2 I/O or input-format error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import FIT_TOL, VERDICT_TOL, build_report
from .curvefile import (
    SchemaError,
    failed_document,
    frame_columns,
    function_columns,
    read_curve_csv,
    report_document,
    write_columns_csv,
    write_curve_csv,
)
from .errors import HelixError
from .expr import parse_expression
from .frenet import frenet_data, reparametrize_unit_speed
from .synthesis import REORTH_EVERY, CurvatureSpec, integrate_frenet, make_b2_slant_spec

EXIT_OK, EXIT_ANALYSIS, EXIT_IO = 0, 1, 2


def _range(text):
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like a:b, got {text!r}") from None
    if not hi > lo:
        raise argparse.ArgumentTypeError("range must satisfy a < b")
    return lo, hi


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="helix", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="run every helix characterization on a curve CSV")
    an.add_argument("--input", required=True)
    an.add_argument("--tol", type=_positive, default=VERDICT_TOL, help="verdict tolerance")
    an.add_argument("--fit-tol", type=_positive, default=FIT_TOL)
    an.add_argument("--step", type=_positive, default=None, help="arc-length resampling step (default: keep node count)")
    an.add_argument("--report", help="JSON report path (default: stdout)")
    an.add_argument("--dump-functions", help="CSV of invariant functions per node")

    sy = sub.add_parser("synthesize", help="integrate the Frenet system from curvature expressions")
    sy.add_argument("--kappa1", required=True)
    sy.add_argument("--kappa2", required=True)
    sy.add_argument("--kappa3")
    sy.add_argument("--slant", nargs=2, type=float, metavar=("C", "D"))
    sy.add_argument("--range", type=_range, required=True, dest="domain")
    sy.add_argument("--step", type=_positive, default=1e-3)
    sy.add_argument("--reorth", type=int, default=REORTH_EVERY, help="re-orthonormalize every K steps")
    sy.add_argument("--out", required=True)

    fr = sub.add_parser("frame", help="write per-node frames and curvatures")
    fr.add_argument("--input", required=True)
    fr.add_argument("--step", type=_positive, default=None)
    fr.add_argument("--out", required=True)
    return parser


def _fail(code, message):
    print(f"helix: {message}", file=sys.stderr)
    return code


def _write_json(doc, path):
    text = json.dumps(doc, indent=2, allow_nan=False)
    if path is None:
        print(text)
    else:
        Path(path).write_text(text + "\n")


def cmd_analyze(args):
    info = {"source": args.input, "step": args.step}
    tolerances = {"verdict": args.tol, "fit": args.fit_tol}
    try:
        raw = read_curve_csv(args.input)
    except (OSError, SchemaError) as exc:
        return _fail(EXIT_IO, str(exc))
    info["nodes"] = len(raw)
    try:
        curve = reparametrize_unit_speed(raw, args.step)
        fd = frenet_data(curve)
        report = build_report(fd, tol=args.tol, fit_tol=args.fit_tol)
    except HelixError as exc:
        code = _fail(EXIT_ANALYSIS, f"{type(exc).__name__}: {exc}")
        try:
            _write_json(failed_document(info, f"{type(exc).__name__}: {exc}", tolerances), args.report)
        except OSError as io_exc:
            return _fail(EXIT_IO, str(io_exc))
        return code
    try:
        _write_json(report_document(report, info), args.report)
        if args.dump_functions:
            write_columns_csv(args.dump_functions, function_columns(fd, report))
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    return EXIT_OK


def cmd_synthesize(args):
    lo, hi = args.domain
    try:
        k1 = parse_expression(args.kappa1)
        k2 = parse_expression(args.kappa2)
        if args.slant is not None:
            if args.kappa3 is not None:
                return _fail(EXIT_IO, "--kappa3 and --slant are mutually exclusive")
            spec = make_b2_slant_spec(args.slant[0], args.slant[1], k1, k2, (lo, hi), args.step)
        else:
            if args.kappa3 is None:
                return _fail(EXIT_IO, "either --kappa3 or --slant C D is required")
            spec = CurvatureSpec(k1, k2, parse_expression(args.kappa3), lo, hi, args.step)
        result = integrate_frenet(spec, reorth_every=args.reorth)
        if result.curve is None:
            return _fail(EXIT_ANALYSIS, "range/step give fewer than 7 nodes")
    except HelixError as exc:
        return _fail(EXIT_ANALYSIS, f"{type(exc).__name__}: {exc}")
    out = Path(args.out)
    sidecar = {**spec.describe(), "reorth_every": args.reorth, "max_signature_deviation": result.max_signature_deviation}
    try:
        write_curve_csv(out, result.curve)
        out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    return EXIT_OK


def cmd_frame(args):
    try:
        raw = read_curve_csv(args.input)
    except (OSError, SchemaError) as exc:
        return _fail(EXIT_IO, str(exc))
    try:
        fd = frenet_data(reparametrize_unit_speed(raw, args.step))
    except HelixError as exc:
        return _fail(EXIT_ANALYSIS, f"{type(exc).__name__}: {exc}")
    try:
        write_columns_csv(args.out, frame_columns(fd))
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "synthesize": cmd_synthesize, "frame": cmd_frame}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which matches the I/O/input class
        return exc.code if isinstance(exc.code, int) else EXIT_IO
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
