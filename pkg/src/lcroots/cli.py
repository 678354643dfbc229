"""Command-line front door.

Subcommands: ``solve`` (ranked root-estimate tables), ``map`` (export sweep
maps, crossings, and gap reports), ``shift`` (change of variable), ``quartic``
(closed-form resolvent solve), ``serve`` (HTTP API for the explorer).

Exit codes: 0 success, 2 argument/parse problems, 3 degenerate input (the
trailing coefficient vanishes, so 0 is a root and the reciprocal circle
collapses; rerun through ``shift`` to move the roots first).

stdout carries tables and file listings; warnings go to stderr. Identical
invocations (including --seed) produce byte-identical outputs: floats are
written with shortest round-trip repr everywhere.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .dsd_optimizer import OptimizerConfig, OptimizerMethod
from .lzc_engine import solve_quadratic
from .polynomial import (
    MonicPolynomial,
    format_complex_pretty,
    format_complex_text,
    parse_coefficients_inline,
    parse_coefficients_text,
    parse_complex,
    shift_variable,
    solve_quartic_resolvent,
    theta_root,
)
from .proximity_maps import PartitionSpec, SolveOutcome, solve_pipeline

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

_ZERO_ROOT_FLOOR = 1e-300
_KINDS = ("e", "dd2", "dt")
_DEFAULTS = OptimizerConfig()


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def parse_angle(text: str) -> float:
    """Angle flags accept 'pi', '-pi', or a decimal literal."""
    s = text.strip().lower()
    if s == "pi":
        return math.pi
    if s == "-pi":
        return -math.pi
    try:
        return float(s)
    except ValueError:
        raise CommandError(f"cannot parse angle {text!r} (use pi, -pi, or a number)")


def parse_shift(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise CommandError(f"--shift wants 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise CommandError(f"--shift wants 're,im', got {text!r}")


def load_polynomial(args) -> MonicPolynomial:
    """Coefficients from exactly one of --coeffs / --file, highest power first."""
    if (args.coeffs is None) == (args.file is None):
        raise CommandError("give exactly one coefficient source: --coeffs or --file")
    try:
        if args.coeffs is not None:
            coeffs = parse_coefficients_inline(args.coeffs)
        else:
            coeffs = parse_coefficients_text(Path(args.file).read_text())
        return MonicPolynomial(tuple(coeffs))
    except OSError as exc:
        raise CommandError(f"cannot read {args.file}: {exc.strerror}")
    except ValueError as exc:
        raise CommandError(str(exc))


def resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    raw = os.environ.get("LC_SEED")
    if raw is None:
        return _DEFAULTS.seed
    try:
        return int(raw)
    except ValueError:
        raise CommandError(f"LC_SEED must be an integer, got {raw!r}")


def build_optimizer_config(args) -> OptimizerConfig:
    method = (OptimizerMethod.GRID_DISCRETIZE if args.method == "grid"
              else OptimizerMethod.TWO_PHASE)
    try:
        return OptimizerConfig(method=method,
                               max_iterations=args.maxit,
                               initial_temperature=args.temp,
                               evals_per_temperature=args.tmax,
                               seed=resolve_seed(args))
    except ValueError as exc:
        raise CommandError(str(exc))


def build_partition(args) -> PartitionSpec:
    lo = parse_angle(args.theta_from) if args.theta_from is not None else -math.pi
    hi = parse_angle(args.theta_to) if args.theta_to is not None else math.pi
    # the exact full circle keeps wraparound crossing detection
    is_global = lo == -math.pi and hi == math.pi
    try:
        return PartitionSpec(lo, hi, args.n, is_global)
    except ValueError as exc:
        raise CommandError(str(exc))


def parse_kinds(text: str) -> tuple:
    kinds = tuple(k.strip().lower() for k in text.split(",") if k.strip())
    if not kinds or any(k not in _KINDS for k in kinds):
        raise CommandError(f"--kinds wants a subset of {','.join(_KINDS)}, got {text!r}")
    return kinds


def check_sweepable(p: MonicPolynomial):
    if abs(p.coeffs[-1]) < _ZERO_ROOT_FLOOR:
        raise CommandError(
            "trailing coefficient is zero, so 0 is a root and the reciprocal "
            "circle collapses; divide out z or rerun via `shift` to move the "
            "roots away from the origin", EXIT_DEGENERATE)


def run_pipeline(p: MonicPolynomial, args) -> SolveOutcome:
    return solve_pipeline(p, build_partition(args),
                          config=build_optimizer_config(args),
                          kinds=parse_kinds(args.kinds),
                          tol_e=args.tol_e,
                          tol_dd2=args.tol_dd2,
                          tol_dt=args.tol_dt,
                          workers=args.workers)


# ---------------------------------------------------------------- output

def _fmt_opt(x) -> str:
    return "" if x is None else repr(float(x))


def estimate_records(rows, shift: complex):
    recs = []
    for r in rows:
        rx = r.rx - shift
        recs.append({"rx_re": rx.real, "rx_im": rx.imag,
                     "theta_hat": r.theta_hat,
                     "delta": r.delta_quality,
                     "d2": r.d2_quality})
    return recs


def write_estimates(path: Path, recs, fmt: str):
    if fmt == "json":
        path.write_text(json.dumps(recs, indent=2, sort_keys=True) + "\n")
        return
    lines = ["rx_re,rx_im,theta_hat,delta,d2"]
    for r in recs:
        lines.append(",".join((repr(r["rx_re"]), repr(r["rx_im"]),
                               repr(r["theta_hat"]), repr(r["delta"]),
                               _fmt_opt(r["d2"]))))
    path.write_text("\n".join(lines) + "\n")


def write_gaps(path: Path, gaps, fmt: str):
    if fmt == "json":
        recs = [{"from": lo, "to": hi} for lo, hi in gaps]
        path.write_text(json.dumps(recs, indent=2, sort_keys=True) + "\n")
        return
    lines = ["from,to"] + [f"{lo!r},{hi!r}" for lo, hi in gaps]
    path.write_text("\n".join(lines) + "\n")


def write_map(path: Path, pm, fmt: str):
    n = len(pm.support)

    def col(arr, i):
        return None if arr is None else arr[i]

    if fmt == "json":
        def arr(values):
            return None if values is None else list(values)

        def carr(values):
            if values is None:
                return None
            return [None if z is None else [z.real, z.imag] for z in values]

        payload = {"kind": pm.kind, "support": list(pm.support),
                   "values_a": arr(pm.values_a), "values_b": arr(pm.values_b),
                   "min_f": arr(pm.aux_min_f), "min_t": arr(pm.aux_min_t),
                   "rx": carr(pm.aux_rx), "ap": carr(pm.aux_ap)}
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return

    lines = ["kind,theta,value_a,value_b,min_f,min_t,rx_re,rx_im,ap_re,ap_im"]
    for i in range(n):
        rx = col(pm.aux_rx, i)
        ap = col(pm.aux_ap, i)
        lines.append(",".join((
            pm.kind, repr(pm.support[i]),
            _fmt_opt(col(pm.values_a, i)), _fmt_opt(col(pm.values_b, i)),
            _fmt_opt(col(pm.aux_min_f, i)), _fmt_opt(col(pm.aux_min_t, i)),
            "" if rx is None else repr(rx.real),
            "" if rx is None else repr(rx.imag),
            "" if ap is None else repr(ap.real),
            "" if ap is None else repr(ap.imag))))
    path.write_text("\n".join(lines) + "\n")


def write_plot_series(out: Path, kind: str, pm):
    """Two-column (theta, value) files per branch for external plotting."""
    written = []
    for label, values in (("a", pm.values_a), ("b", pm.values_b)):
        if values is None:
            continue
        lines = [f"{th!r} {v!r}" for th, v in zip(pm.support, values)
                 if v is not None]
        path = out / f"plot_{kind}_{label}.xy"
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written


def print_table(kind: str, recs):
    print(f"[{kind}] {len(recs)} estimate(s), best first")
    header = f"  {'rank':>4}  {'rx':>24}  {'theta_hat':>12}  {'delta':>13}  {'d2':>13}"
    print(header)
    for i, r in enumerate(recs, start=1):
        rx = complex(r["rx_re"], r["rx_im"])
        d2 = "-" if r["d2"] is None else f"{r['d2']:.6e}"
        print(f"  {i:>4}  {format_complex_pretty(rx):>24}  "
              f"{r['theta_hat']:>12.7f}  {r['delta']:>13.9f}  {d2:>13}")


def print_gaps(kind: str, gaps):
    for lo, hi in gaps:
        print(f"[{kind}] undefined stretch with a sign change: "
              f"theta in [{lo:.7f}, {hi:.7f}]; zoom a regional sweep there")


# ---------------------------------------------------------------- commands

def cmd_solve(args) -> int:
    p = load_polynomial(args)
    if p.degree < 2:
        raise CommandError("solve needs degree >= 2")
    shift = parse_shift(args.shift) if args.shift else 0j
    q = shift_variable(p, shift) if shift else p

    if q.degree == 2:
        sol = solve_quadratic(q)
        recs = []
        for root in (sol.r1, sol.r2):
            try:
                th = theta_root(q, root)
            except ValueError:
                th = 0.0
            recs.append({"rx_re": (root - shift).real,
                         "rx_im": (root - shift).imag,
                         "theta_hat": th, "delta": 0.0, "d2": None})
        print("degree 2: closed form on the root line")
        for r in recs:
            print(f"  {format_complex_pretty(complex(r['rx_re'], r['rx_im']))}")
        if args.out is not None:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"estimates_e.{args.format}"
            write_estimates(path, recs, args.format)
            print(f"wrote {path}")
        return EXIT_OK

    check_sweepable(q)
    try:
        outcome = run_pipeline(q, args)
    except ValueError as exc:
        raise CommandError(str(exc))
    if shift:
        print(f"solved with variable shift a = {format_complex_pretty(shift)}; "
              "rx below are mapped back (theta/delta/d2 stay in the shifted frame)")
    if outcome.rescue_used:
        print("rescue: one direction recovered from an undefined stretch of the map")
    for kind in _KINDS:
        if kind not in outcome.tables:
            continue
        recs = estimate_records(outcome.tables[kind], shift)
        print_table(kind, recs)
        print_gaps(kind, outcome.gaps[kind])
        if args.out is not None:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"estimates_{kind}.{args.format}"
            write_estimates(path, recs, args.format)
            print(f"wrote {path}")
    return EXIT_OK


def cmd_map(args) -> int:
    p = load_polynomial(args)
    if p.degree < 3:
        raise CommandError("map needs degree >= 3")
    shift = parse_shift(args.shift) if args.shift else 0j
    q = shift_variable(p, shift) if shift else p
    check_sweepable(q)
    try:
        outcome = run_pipeline(q, args)
    except ValueError as exc:
        raise CommandError(str(exc))
    out = Path(args.out) if args.out is not None else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    for kind in _KINDS:
        if kind not in outcome.maps:
            continue
        pm = outcome.maps[kind]
        recs = estimate_records(outcome.tables[kind], shift)
        gaps = outcome.gaps[kind]
        paths = [out / f"map_{kind}.{args.format}",
                 out / f"estimates_{kind}.{args.format}",
                 out / f"gaps_{kind}.{args.format}"]
        write_map(paths[0], pm, args.format)
        write_estimates(paths[1], recs, args.format)
        write_gaps(paths[2], gaps, args.format)
        if args.plot_data:
            paths.extend(write_plot_series(out, kind, pm))
        print(f"[{kind}] {len(pm.support)} samples, {len(recs)} estimate(s), "
              f"{len(gaps)} gap(s)")
        for path in paths:
            print(f"wrote {path}")
    return EXIT_OK


def cmd_shift(args) -> int:
    p = load_polynomial(args)
    if args.shift is None:
        raise CommandError("shift needs --shift re,im")
    q = shift_variable(p, parse_shift(args.shift))
    for c in q.coeffs:
        print(format_complex_text(c))
    return EXIT_OK


def cmd_quartic(args) -> int:
    p = load_polynomial(args)
    if p.degree != 4:
        raise CommandError("quartic needs exactly degree 4")
    for root in solve_quartic_resolvent(p).roots:
        print(format_complex_pretty(root))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_input_flags(sub):
    sub.add_argument("--coeffs", help="inline coefficients 're im, re im, ...' "
                     "or literals like 1+2i, highest power first")
    sub.add_argument("--file", help="coefficient file, one entry per line")


def _add_sweep_flags(sub):
    sub.add_argument("--n", type=int, default=2500, help="partition size")
    sub.add_argument("--from", dest="theta_from", metavar="ANGLE",
                     help="sweep start (pi, -pi, or a number; default -pi)")
    sub.add_argument("--to", dest="theta_to", metavar="ANGLE",
                     help="sweep end (default pi)")
    sub.add_argument("--kinds", default="e,dd2,dt",
                     help="comma list from e,dd2,dt (degree>=4; cubics always e)")
    sub.add_argument("--tol-e", type=float, default=1.0,
                     help="crossing tolerance for the e map")
    sub.add_argument("--tol-dd2", type=float, default=2.0,
                     help="crossing tolerance for the dd2 map")
    sub.add_argument("--tol-dt", type=float, default=2.0,
                     help="crossing tolerance for the dt map")
    sub.add_argument("--method", choices=("grid", "twophase"), default="grid")
    sub.add_argument("--maxit", type=int, default=_DEFAULTS.max_iterations)
    sub.add_argument("--temp", type=float, default=_DEFAULTS.initial_temperature)
    sub.add_argument("--tmax", type=int, default=_DEFAULTS.evals_per_temperature)
    sub.add_argument("--seed", type=int, default=None,
                     help="random stream seed (falls back to env LC_SEED, then 0)")
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--shift", metavar="RE,IM",
                     help="solve after the change of variable z -> z - a "
                          "(use --shift=RE,IM when RE is negative)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcroots",
        description="Root estimation from geometric sweeps in the complex plane")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("solve", help="ranked root-estimate tables")
    _add_input_flags(s)
    _add_sweep_flags(s)
    s.set_defaults(func=cmd_solve)

    s = subs.add_parser("map", help="export sweep maps, estimates, and gaps")
    _add_input_flags(s)
    _add_sweep_flags(s)
    s.add_argument("--plot-data", action="store_true",
                   help="also write two-column (theta, value) series files")
    s.set_defaults(func=cmd_map)

    s = subs.add_parser("shift", help="print coefficients after z -> z - a")
    _add_input_flags(s)
    s.add_argument("--shift", metavar="RE,IM", help="shift amount a")
    s.set_defaults(func=cmd_shift)

    s = subs.add_parser("quartic", help="closed-form resolvent solve (degree 4)")
    _add_input_flags(s)
    s.set_defaults(func=cmd_quartic)

    s = subs.add_parser("serve", help="run the HTTP API for the explorer")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    s.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
