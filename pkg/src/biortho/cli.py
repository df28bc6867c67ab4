"""Command-line front end.

Subcommands:
  eval          one polynomial value by the exact sum, the contour oracle,
                or the asymptotic leading term
  verify        run a certification suite, one JSON record per line
  table         convergence table (CSV) with a fitted error-rate slope
  contour-dump  plot data: contour points, T-profiles, or the saddle
                partition of the contour

Exit codes: 0 success, 1 verification failure, 2 usage/config error,
3 scope error (alpha < 1 asymptotics without --allow-unproven),
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

from . import __version__
from .asymptotics import convergence_table, darboux_biortho
from .config import RunConfig, load_config
from .errors import ConvergenceError, ScopeError
from .phase import contour_point, t_modulus, theta_of_x, x_of_theta
from .polys import Params, eval_biortho
from .quadrature import rodrigues_contour_eval
from .verify import SUITE_NAMES, run_suite

_PI = math.pi

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_SCOPE = 3
EXIT_NUMERICAL = 4


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biortho",
        description="Jacobi biorthogonal polynomials: evaluation, "
                    "verification, convergence tables and plot data.")
    parser.add_argument("--version", action="version",
                        version=f"biortho {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--output", default=None,
                        help="output file (default: stdout)")
        sp.add_argument("--format", default=None, choices=("json", "csv"),
                        help="output format (commands support one each)")
        sp.add_argument("--config", default=None,
                        help="config file of key = value lines "
                             "(default: $BIORTHO_CONFIG)")
        sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker processes for long sweeps")

    sp = sub.add_parser("eval", help="evaluate one polynomial value")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--x", type=float, default=None)
    sp.add_argument("--theta", type=float, default=None)
    sp.add_argument("--method", required=True,
                    choices=("exact", "contour", "asymptotic"))
    sp.add_argument("--allow-unproven", action="store_true",
                    help="evaluate the asymptotic formula outside its "
                         "proven range alpha >= 1")
    add_common(sp)

    sp = sub.add_parser("verify", help="run a certification suite")
    sp.add_argument("--suite", default="all", choices=SUITE_NAMES)
    sp.add_argument("--seed", type=int, default=7)
    add_common(sp)

    sp = sub.add_parser("table", help="convergence table with rate fit")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--n-dyadic", required=True, metavar="K0..K1",
                    help="degrees 2^K0 .. 2^K1 (K1 > K0 >= 3)")
    sp.add_argument("--reference", default="contour",
                    choices=("exact", "contour", "auto"))
    sp.add_argument("--allow-unproven", action="store_true")
    add_common(sp)

    sp = sub.add_parser("contour-dump", help="plot data as CSV")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--points", type=int, default=360)
    sp.add_argument("--what", required=True,
                    choices=("contour", "T", "partition"))
    sp.add_argument("--theta", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--delta", type=float, default=1.0 / 12.0)
    add_common(sp)
    return parser


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_format(args, expected: str) -> None:
    if args.format is not None and args.format != expected:
        raise _UsageError(
            f"command '{args.command}' emits {expected}, not {args.format}")


def _json_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True, allow_nan=True)


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _cmd_eval(args, config: RunConfig) -> int:
    if (args.x is None) == (args.theta is None):
        raise _UsageError("provide exactly one of --x / --theta")
    p = Params(args.alpha, args.a, args.b)
    bisect_tol = config.tolerances["bisect_tol"]
    inputs = {"alpha": args.alpha, "a": args.a, "b": args.b, "n": args.n,
              "method": args.method}
    record: dict = {"inputs": inputs, "method": args.method}
    if args.method == "exact":
        x = args.x if args.x is not None else x_of_theta(p, args.theta)
        inputs["x"] = x
        result = eval_biortho(p, args.n, x)
        record["value"] = result.value
        record["condition_estimate"] = result.condition_estimate
    elif args.method == "contour":
        theta = args.theta if args.theta is not None else \
            theta_of_x(p, args.x, bisect_tol)
        inputs["theta"] = theta
        result = rodrigues_contour_eval(p, args.n, theta,
                                        config.tolerances["contour_tol"])
        record["value"] = result.value
        record["error_estimate"] = result.error_estimate
    else:
        theta = args.theta if args.theta is not None else \
            theta_of_x(p, args.x, bisect_tol)
        inputs["theta"] = theta
        record["value"] = darboux_biortho(p, args.n, theta,
                                          allow_unproven=args.allow_unproven)
    _emit(_json_line(record) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _suite_task(payload):
    suite, seed, kwargs = payload
    return [r.as_dict() for r in run_suite(suite, seed, **kwargs)]


def _cmd_verify(args, config: RunConfig) -> int:
    kwargs = dict(
        identity_samples=config.grids["identity_samples"],
        scan_grid=config.grids["scan_grid"],
        biortho_n_max=config.grids["biortho_n_max"],
        biortho_tol=config.tolerances["biortho_tol"],
        quad_tol=config.tolerances["quad_tol"],
        reduction_n_max=config.grids["reduction_n_max"],
        reduction_tol=config.tolerances["reduction_tol"],
    )
    if args.suite == "all" and args.jobs > 1:
        # sub-suites are independent; ordered dispatch keeps output stable
        parts = ["identities", "lemmas", "biortho", "reduction"]
        payloads = [(name, args.seed, kwargs) for name in parts]
        with ProcessPoolExecutor(max_workers=min(args.jobs, len(parts))) as pool:
            chunks = list(pool.map(_suite_task, payloads))
        records = [r for chunk in chunks for r in chunk]
    else:
        records = _suite_task((args.suite, args.seed, kwargs))
    lines = "".join(_json_line(r) + "\n" for r in records)
    _emit(lines, args.output)
    failed = any(r["status"] == "fail" for r in records)
    return EXIT_VERIFY_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------

def _parse_dyadic(text: str):
    try:
        lo, hi = text.split("..", 1)
        k0, k1 = int(lo), int(hi)
    except ValueError as exc:
        raise _UsageError(f"bad --n-dyadic {text!r}; expected K0..K1") from exc
    if not (k1 > k0 >= 3):
        raise _UsageError("--n-dyadic requires K1 > K0 >= 3")
    return [2 ** k for k in range(k0, k1 + 1)]


def _cmd_table(args, config: RunConfig) -> int:
    p = Params(args.alpha, args.a, args.b)
    n_list = _parse_dyadic(args.n_dyadic)
    try:
        report = convergence_table(
            p, args.theta, n_list, args.reference,
            contour_tol=config.tolerances["contour_tol"],
            envelope_threshold=config.tolerances["envelope_threshold"],
            allow_unproven=args.allow_unproven)
    except ValueError as exc:
        if "envelope-kept" in str(exc):
            sys.stderr.write(f"biortho table: {exc}\n")
            return EXIT_NUMERICAL
        raise
    lines = ["n,reference,asymptotic,abs_err,rel_err,envelope_ok"]
    for row in report.rows:
        lines.append(f"{row.n},{row.reference!r},{row.asymptotic!r},"
                     f"{row.abs_err!r},{row.rel_err!r},"
                     f"{'true' if row.envelope_ok else 'false'}")
    lines.append(f"# slope = {report.slope!r}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# contour-dump
# ---------------------------------------------------------------------------

def _cmd_contour_dump(args, config: RunConfig) -> int:
    p = Params(args.alpha, 0.0, 0.0)
    if args.points < 2:
        raise _UsageError("--points must be >= 2")
    lines: List[str] = []
    if args.what == "contour":
        lines.append("phi,re_xi,im_xi")
        for i in range(args.points):
            phi = -_PI + 2.0 * _PI * i / args.points
            cp = contour_point(p, phi)
            lines.append(f"{phi!r},{cp.xi.real!r},{cp.xi.imag!r}")
    elif args.what == "T":
        if args.theta is None:
            raise _UsageError("--what T requires --theta")
        lines.append("phi,T")
        for i in range(args.points):
            phi = (i + 1) * _PI / (args.points + 1)
            lines.append(f"{phi!r},{t_modulus(p, args.theta, phi)!r}")
    else:
        if args.theta is None or args.n is None:
            raise _UsageError("--what partition requires --theta and --n")
        if not (0.0 < args.delta < 0.5):
            raise _UsageError("--delta must lie in (0, 0.5)")
        half_width = float(args.n) ** (-0.5 + args.delta)
        lo, hi = args.theta - half_width, args.theta + half_width
        lines.append("phi,re_xi,im_xi,segment")
        for i in range(args.points):
            phi = (i + 1) * _PI / (args.points + 1)
            cp = contour_point(p, phi)
            segment = "left" if phi <= lo else ("center" if phi < hi else "right")
            lines.append(f"{phi!r},{cp.xi.real!r},{cp.xi.imag!r},{segment}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config_path = args.config or os.environ.get("BIORTHO_CONFIG")
        config = load_config(config_path)
        if args.command == "eval":
            _check_format(args, "json")
            return _cmd_eval(args, config)
        if args.command == "verify":
            _check_format(args, "json")
            return _cmd_verify(args, config)
        if args.command == "table":
            _check_format(args, "csv")
            return _cmd_table(args, config)
        _check_format(args, "csv")
        return _cmd_contour_dump(args, config)
    except _UsageError as exc:
        sys.stderr.write(f"biortho: {exc}\n")
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        # parameter/domain errors from validation are usage errors; anything
        # raised mid-computation is a numerical failure
        message = str(exc)
        sys.stderr.write(f"biortho: {message}\n")
        if isinstance(exc, OSError) or "config" in message or "unknown" in message:
            return EXIT_USAGE
        return _classify_value_error(message)
    except ScopeError as exc:
        sys.stderr.write(f"biortho: {exc}\n")
        return EXIT_SCOPE
    except ConvergenceError as exc:
        sys.stderr.write(f"biortho: {exc}\n")
        return EXIT_NUMERICAL


_USAGE_MARKERS = (
    "must be", "requires", "expected", "got", "need", "choose from",
)


def _classify_value_error(message: str) -> int:
    if any(marker in message for marker in _USAGE_MARKERS):
        return EXIT_USAGE
    return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
