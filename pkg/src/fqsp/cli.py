"""Command-line front end.

Exit codes: 0 success, 1 usage or validation error, 2 numerical or search
failure. Set ``FQSP_LOG_LEVEL`` (e.g. ``DEBUG``) for more log output.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import approx, complement, pulses, qsim
from .exceptions import FqspError
from .fourier import DEFAULT_GRID_POINTS, FourierSeries

logger = logging.getLogger("fqsp")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2
METHOD_NAMES = {
    "analytic": "analytic_extension",
    "linear": "linear_extension",
    "taylor": "taylor_fourier",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _add_function_args(p):
    p.add_argument("--function", choices=["exp", "poly"], default="exp")
    p.add_argument("--beta", type=float, default=1.0, help="inverse temperature for exp")
    p.add_argument("--coefficients", type=_float_list, help="a_0,a_1,... for poly")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--method", choices=sorted(METHOD_NAMES), default="analytic")
    p.add_argument("--delta", type=float, help="taylor method: interval margin delta")
    p.add_argument("--x0", type=float, help="half-width of the approximation window in x")
    p.add_argument("--growth-bound", default="matched",
                   help="analytic method: bound on |f b|, a number, 'matched' or 'strict'")
    p.add_argument("--q-max", type=int, default=approx.DEFAULT_Q_MAX)
    p.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fqsp", description="Fourier-series signal processing toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("approx", help="Fourier approximation of a target function")
    _add_function_args(p)
    p.add_argument("--output", "-o")

    p = sub.add_parser("complement", help="complementary series of a series file")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--margin", type=float, default=0.0)
    p.add_argument("--roots-csv", help="optional dump of the Laurent roots")
    p.add_argument("--output", "-o")

    p = sub.add_parser("pulses", help="pulse sequence for a series (and optional complement)")
    p.add_argument("--input", "-i", required=True, help="series or approx-result JSON")
    p.add_argument("--complement", help="complement series JSON (computed when omitted)")
    p.add_argument("--output", "-o")

    p = sub.add_parser("simulate", help="end-to-end block encoding on a Hamiltonian")
    _add_function_args(p)
    p.add_argument("--hamiltonian", required=True,
                   help="diag:v1,v2,..  random_hermitian:d  tfim:n  or a matrix JSON path")
    p.add_argument("--remap", help="'auto' or 'lo,hi': map this interval onto the window")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")

    p = sub.add_parser("compare", help="truncation orders of the three routes for exp")
    p.add_argument("--betas", type=_float_list, default=[1, 2, 4, 8, 16, 32])
    p.add_argument("--eps-list", type=_float_list, default=[1e-2, 1e-4])
    p.add_argument("--q-max", type=int, default=approx.DEFAULT_Q_MAX)
    p.add_argument("--output", "-o")

    p = sub.add_parser("verify", help="check a pulse file against a series")
    p.add_argument("--pulses", required=True)
    p.add_argument("--series", required=True, help="series or approx-result JSON")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS)
    p.add_argument("--output", "-o")
    return parser


# ---------------------------------------------------------------------------


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(data: dict, output: str | None) -> None:
    _emit(json.dumps(data, indent=2) + "\n", output)


def _check_eps(eps: float) -> None:
    if not 0 < eps < 1:
        raise UsageError(f"--eps must lie in (0, 1), got {eps}")


def _target(args) -> approx.TargetFunction:
    if args.function == "exp":
        if not args.beta > 0:
            raise UsageError("--beta must be positive")
        return approx.TargetFunction.exponential(args.beta)
    if not args.coefficients:
        raise UsageError("--function poly needs --coefficients")
    return approx.TargetFunction.power_series(args.coefficients)


def _growth_bound(text: str):
    if text == "matched":
        return "matched"
    if text == "strict":
        return None
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"--growth-bound must be a number, 'matched' or 'strict', got {text!r}")


def _run_approx(args, f) -> approx.ApproxResult:
    method = METHOD_NAMES[args.method]
    if args.q_max < 0 or args.q_max % 2:
        raise UsageError("--q-max must be a non-negative even integer")
    if method == "analytic_extension":
        return approx.analytic_extension_series(
            f, args.eps, x0=args.x0 or 1.0, growth_bound=_growth_bound(args.growth_bound),
            q_max=args.q_max, grid_points=args.grid_points,
        )
    if method == "linear_extension":
        return approx.linear_extension_series(
            f, args.x0 or math.pi / 2, args.eps, q_max=args.q_max, grid_points=args.grid_points
        )
    delta = args.delta if args.x0 is None else math.pi / 2 - args.x0
    return approx.taylor_fourier_series(f, args.eps, delta)


def _read_series(path: str) -> FourierSeries:
    data = json.loads(Path(path).read_text())
    if "series" in data:
        data = data["series"]
    return FourierSeries.from_json_dict(data)


def cmd_approx(args) -> int:
    _check_eps(args.eps)
    res = _run_approx(args, _target(args))
    _dump(res.to_json_dict(), args.output)
    return EXIT_OK if res.eps_measured <= args.eps else EXIT_NUMERICAL


def cmd_complement(args) -> int:
    g = _read_series(args.input)
    h = complement.complementary_series(g, args.margin)
    if args.roots_csv:
        scaled = g.scaled(1.0 / (1.0 + args.margin))
        complement.write_roots_csv(complement.complement_roots(scaled), args.roots_csv)
    _dump(h.to_json_dict(), args.output)
    return EXIT_OK


def cmd_pulses(args) -> int:
    g = _read_series(args.input)
    h = _read_series(args.complement) if args.complement else complement.complementary_series(g)
    seq = pulses.synthesize_pulses(g, h)
    _dump(seq.to_json_dict(), args.output)
    return EXIT_OK


def _hamiltonian(spec: str, seed: int) -> np.ndarray:
    kind, _, arg = spec.partition(":")
    try:
        if kind == "diag":
            return qsim.diag_hamiltonian(_float_list(arg))
        if kind == "random_hermitian":
            return qsim.random_hermitian(int(arg), np.random.default_rng(seed))
        if kind == "tfim":
            return qsim.tfim_hamiltonian(int(arg))
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"bad --hamiltonian {spec!r}: {exc}")
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"--hamiltonian {spec!r} is neither a generator nor a file")
    return qsim.load_matrix(path)


def cmd_simulate(args) -> int:
    _check_eps(args.eps)
    f = _target(args)
    H = _hamiltonian(args.hamiltonian, args.seed)
    interval = None
    if args.remap == "auto":
        lam = np.linalg.eigvalsh(qsim.as_hermitian(H))
        interval = (float(lam[0]), float(lam[-1]))
        if interval[0] == interval[1]:
            interval = (interval[0] - 1.0, interval[1] + 1.0)
    elif args.remap:
        vals = _float_list(args.remap)
        if len(vals) != 2:
            raise UsageError("--remap expects 'auto' or 'lo,hi'")
        interval = (vals[0], vals[1])
    x0 = args.x0
    if interval is not None and x0 is None and args.method != "taylor":
        x0 = math.pi / 2
    try:
        res = qsim.run_pipeline(
            H, f, args.eps, METHOD_NAMES[args.method], interval=interval, x0=x0,
            delta=args.delta, growth_bound=_growth_bound(args.growth_bound),
            q_max=args.q_max, grid_points=args.grid_points,
        )
    except ValueError as exc:
        if "remap" in str(exc):
            raise UsageError(f"{exc}; use --remap auto or --remap lo,hi (see remap_interval)")
        raise
    _dump(res.to_json_dict(), args.output)
    ok = res.err_vs_target <= args.eps and res.err_vs_series <= qsim.SERIES_TOL
    return EXIT_OK if ok else EXIT_NUMERICAL


def cmd_compare(args) -> int:
    for b in args.betas:
        if not b > 0:
            raise UsageError("betas must be positive")
    for e in args.eps_list:
        _check_eps(e)
    rows = approx.compare_methods(args.betas, args.eps_list, q_max=args.q_max)
    for r in rows:
        for note in r.notes:
            logger.warning("beta=%g eps=%g: %s", r.beta, r.eps, note)
    _emit(approx.write_comparison_csv(rows), args.output)
    return EXIT_OK if any(r.complete for r in rows) else EXIT_NUMERICAL


def cmd_verify(args) -> int:
    seq = pulses.PulseSequence.load(args.pulses)
    g = _read_series(args.series)
    report = pulses.verify_pulses(seq, g, args.grid_points)
    _dump(report.to_json_dict(), args.output)
    return EXIT_OK if report.max_abs_error <= args.tol else EXIT_NUMERICAL


COMMANDS = {
    "approx": cmd_approx,
    "complement": cmd_complement,
    "pulses": cmd_pulses,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    logging.basicConfig(
        level=getattr(logging, os.environ.get("FQSP_LOG_LEVEL", "WARNING").upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"fqsp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FqspError as exc:
        print(f"fqsp {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
