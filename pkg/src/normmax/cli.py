"""Command-line front end; every command writes CSV.

Exit status is 0 on success, 1 when a verification certificate fails and 2
for usage or numerical errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Iterable, Sequence

import numpy as np

from . import calibrate, distance, mc, specfn, verify
from .errors import ConvergenceError, DomainError, NoRootError
from .norming import (
    LOG_2PI,
    AuxiliaryKind,
    LogSize,
    Method,
    NormingPair,
    location,
    norming_pair,
    parse_aux,
    parse_method,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

TABLE1_N0 = ("16", "30", "50", "10^2", "10^4", "10^6", "10^10", "10^20", "10^100")
TABLE2_N = tuple(f"10^{k}" for k in distance.TABLE2_EXPONENTS)
TABLE3_N = ("10", "10^2", "10^5", "10^10", "10^30", "10^60")
TABLE3_METHODS = (
    Method.EXACT, Method.BETA_FINAL, Method.BAR_BETA,
    Method.HALL_STAR, Method.BAR_BETA_STAR, Method.BETA_STAR,
)
DENSITY_PAIRS = "exact:af,hallstar:ah"
DEFAULT_GRID = "-5:15:2001"


class UsageError(Exception):
    pass


# -- formatting -----------------------------------------------------------------


class Formatter:
    """Number rendering: ``digits`` significant digits in shortest round-trip
    form, or a fixed number of ``decimals`` rounded half-to-even."""

    def __init__(self, digits: int = 17, decimals: int | None = None):
        if not 5 <= digits <= 17:
            raise UsageError(f"--digits must lie in [5, 17], got {digits}")
        if decimals is not None and not 0 <= decimals <= 30:
            raise UsageError(f"--decimals must lie in [0, 30], got {decimals}")
        self.digits = digits
        self.decimals = decimals

    def __call__(self, value) -> str:
        if isinstance(value, (bool, np.bool_)):
            return "true" if value else "false"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, str):
            return value
        x = float(value)
        if not math.isfinite(x):
            return repr(x)
        if self.decimals is not None:
            q = Decimal(repr(x)).quantize(Decimal(1).scaleb(-self.decimals), ROUND_HALF_EVEN)
            return format(q, "f")
        return repr(float(f"{x:.{self.digits}g}"))


def write_csv(out, header: Sequence[str], rows: Iterable[Sequence], fmt: Formatter, delimiter: str):
    w = csv.writer(out, delimiter=delimiter, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


# -- argument parsing -----------------------------------------------------------


def _split(values: Sequence[str] | None) -> list[str]:
    out = []
    for v in values or ():
        out.extend(s for s in v.split(",") if s.strip())
    return out


def _sizes(values, default) -> list[LogSize]:
    return [LogSize.parse(s) for s in (_split(values) or list(default))]


def _methods(values) -> list:
    names = _split(values)
    if not names or names == ["all"]:
        return list(TABLE3_METHODS)
    return [parse_method(s) for s in names]


def _pairs(args, default: str) -> list[tuple]:
    """(method, aux) list from --pairs, or from --methods crossed with --aux."""
    if args.pairs:
        specs = _split(args.pairs)
    elif getattr(args, "methods", None):
        auxes = _split(args.aux) or ["af"]
        specs = [f"{m}:{a}" for m in _split(args.methods) for a in auxes]
    else:
        specs = default.split(",")
    pairs = []
    for spec in specs:
        m, sep, a = spec.rpartition(":")
        if not sep:
            raise UsageError(f"pair spec must look like method:aux, got {spec!r}")
        pairs.append((parse_method(m), parse_aux(a)))
    return pairs


def _real(text: str) -> float:
    s = text.strip().lower()
    if s in ("-log2pi", "-ln2pi"):
        return -LOG_2PI
    return float(s)


def _grid(text: str) -> np.ndarray:
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise UsageError(f"grid must look like lo:hi:count, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi and count >= 2):
        raise UsageError(f"invalid grid {text!r}")
    return np.linspace(lo, hi, count)


def _pair_label(method, aux) -> str:
    return f"{method.value}:{aux.value}"


# -- commands -------------------------------------------------------------------


def cmd_constants(args, fmt):
    methods = _methods(args.methods)
    rows = []
    for n in _sizes(args.n, TABLE3_N):
        row = [n.label]
        for m in methods:
            try:
                row.append(location(m, n))
            except DomainError as exc:
                raise DomainError(f"method {m.value} at n = {n.label}: {exc}") from None
        rows.append(row)
    return ["n"] + [m.value for m in methods], rows, EXIT_OK


def cmd_distance(args, fmt):
    pairs = _pairs(args, ",".join(_pair_label(m, a) for m, a in distance.TABLE2_ROWS))
    rows = []
    for m, a in pairs:
        for n in _sizes(args.n, TABLE2_N):
            rep = distance.sup_distance(n, norming_pair(m, a, n), args.tol)
            rows.append([n.label, m.value, a.value, rep.pair.location, rep.pair.scale,
                         rep.sup, rep.argmax, rep.scaled])
    header = ["n", "method", "aux", "location", "scale", "sup", "argmax", "scaled"]
    return header, rows, EXIT_OK


def _table(which: int, tol: float, jobs: int):
    if which == 1:
        sizes = [LogSize.parse(s) for s in TABLE1_N0]
        rows = [["C"] + [verify.theorem_constant(n) for n in sizes],
                ["C_tilde"] + [verify.theorem_constant_tilde(n) for n in sizes]]
        return ["n0"] + [n.label for n in sizes], rows, 2
    if which == 2:
        sizes = [LogSize.parse(s) for s in TABLE2_N]
        matrix = distance.scaled_distance_table(sizes, distance.TABLE2_ROWS, tol, jobs)
        rows = [[_pair_label(m, a)] + list(vals) for (m, a), vals in zip(distance.TABLE2_ROWS, matrix)]
        return ["constants"] + [n.label for n in sizes], rows, 4
    sizes = [LogSize.parse(s) for s in TABLE3_N]
    rows = [[m.value] + [location(m, n) for n in sizes] for m in TABLE3_METHODS]
    return ["method"] + [n.label for n in sizes], rows, 5


def cmd_table(args, fmt):
    header, rows, decimals = _table(args.which, args.tol, args.jobs)
    if args.digits is None and args.decimals is None:
        fmt.decimals = decimals
    return header, rows, EXIT_OK


def cmd_verify(args, fmt):
    suite = verify.SUITES[args.suite]
    if args.suite == "theorem1":
        certs = suite(_sizes(args.n0, verify.THEOREM1_N0), tol=args.tol)
    elif args.suite == "hall":
        certs = suite(tol=args.tol)
    else:
        certs = suite()
    rows = [[c.name, c.argument_label, c.lhs, c.rhs, c.margin, c.passed] for c in certs]
    failed = [c for c in certs if not c.passed]
    for c in failed:
        print(f"FAILED {c.name} at {c.argument_label}: {c.lhs!r} < {c.rhs!r} does not hold",
              file=sys.stderr)
    return ["name", "argument", "lhs", "rhs", "margin", "pass"], rows, (EXIT_FAILED if failed else EXIT_OK)


def cmd_density(args, fmt):
    sizes = _sizes(args.n, ["100"])
    if len(sizes) != 1:
        raise UsageError("density takes a single --n")
    n = sizes[0]
    if n.n < 2:
        raise DomainError(f"density needs n >= 2, got {n.label}")
    xs = _grid(args.grid)
    pairs = _pairs(args, DENSITY_PAIRS)
    cols = [specfn.gumbel_pdf(xs)]
    cols += [distance.normalized_max_pdf(n, norming_pair(m, a, n), xs) for m, a in pairs]
    header = ["x", "gumbel"] + [_pair_label(m, a) for m, a in pairs]
    return header, [list(r) for r in zip(xs, *cols)], EXIT_OK


def cmd_calibrate(args, fmt):
    res = calibrate.p_hat(args.m, args.q)
    rows = [] if args.summary else [[k, p] for k, p in res.per_k]
    rows.append(["p_hat", res.p_hat])
    return ["k", "p"], rows, EXIT_OK


def cmd_simulate(args, fmt):
    sizes = _sizes(args.n, ["100"])
    if len(sizes) != 1:
        raise UsageError("simulate takes a single --n")
    n = sizes[0]
    pairs = _pairs(args, "exact:af")
    if len(pairs) != 1:
        raise UsageError("simulate takes a single pair")
    (m, a), = pairs
    cfg = mc.SimConfig(n, args.reps, args.seed, norming_pair(m, a, n))
    rep = mc.simulate(cfg, args.jobs, args.raw)
    header = ["n", "pair", "reps", "seed", "ks_distance", "sample_mean", "sample_sd"]
    return header, [[n.label, _pair_label(m, a), rep.reps, args.seed, rep.ks_distance,
                     rep.sample_mean, rep.sample_sd]], EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None,
                        help="significant digits in [5, 17] (default 17)")
    common.add_argument("--decimals", type=int, default=None,
                        help="fixed decimals, rounded half-to-even")
    common.add_argument("--out", default="-", help="output file (default stdout)")
    common.add_argument("--delimiter", default=",", help="single-character field separator")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--tol", type=float, default=1e-8, help="optimizer tolerance")

    sizes = argparse.ArgumentParser(add_help=False)
    sizes.add_argument("--n", nargs="+", help="sample sizes: 1000, 1e30 or 10^100; comma lists allowed")

    pairs = argparse.ArgumentParser(add_help=False)
    pairs.add_argument("--pairs", nargs="+", help="method:aux specs such as exact:af")
    pairs.add_argument("--methods", nargs="+", help="location methods, crossed with --aux")
    pairs.add_argument("--aux", nargs="+", help="auxiliary functions: ac, af, ah")

    p = argparse.ArgumentParser(prog="normmax", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("constants", parents=[common, sizes], help="location constants")
    s.add_argument("--methods", nargs="+", help="methods or 'all'")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("distance", parents=[common, sizes, pairs], help="sup-norm distance to the Gumbel law")
    s.set_defaults(func=cmd_distance)

    s = sub.add_parser("table", parents=[common], help="reproduce table 1, 2 or 3")
    s.add_argument("which", type=int, choices=(1, 2, 3))
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("verify", parents=[common], help="run a certificate suite")
    s.add_argument("suite", choices=sorted(verify.SUITES))
    s.add_argument("--n0", nargs="+", help="n0 values for the theorem1 suite")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("density", parents=[common, sizes, pairs], help="density curves of the normalised maximum")
    s.add_argument("--grid", default=DEFAULT_GRID, help="lo:hi:count")
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("calibrate", parents=[common], help="estimate p_hat(m)")
    s.add_argument("--m", type=int, default=100)
    s.add_argument("--q", type=_real, default=-LOG_2PI, help="q parameter (default -log2pi)")
    s.add_argument("--summary", action="store_true", help="emit only the p_hat row")
    s.set_defaults(func=cmd_calibrate)

    s = sub.add_parser("simulate", parents=[common, sizes, pairs], help="Monte Carlo check against the Gumbel law")
    s.add_argument("--reps", type=int, default=10**6)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--raw", default=None, help="dump normalised samples, one per line")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if len(args.delimiter) != 1:
            raise UsageError(f"--delimiter must be one character, got {args.delimiter!r}")
        if args.jobs < 1:
            raise UsageError(f"--jobs must be positive, got {args.jobs}")
        fmt = Formatter(args.digits if args.digits is not None else 17, args.decimals)
        header, rows, status = args.func(args, fmt)
        buf = io.StringIO()
        write_csv(buf, header, rows, fmt, args.delimiter)
        if args.out == "-":
            sys.stdout.write(buf.getvalue())
            sys.stdout.flush()
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
        return status
    except (UsageError, DomainError, ConvergenceError, NoRootError, ValueError, OSError) as exc:
        print(f"normmax {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything unexpected still maps to the usage/error status
        print(f"normmax {args.command}: internal error: {exc!r}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
