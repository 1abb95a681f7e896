"""Command-line interface.

Exit codes: 0 success or hypothesis accepted, 1 hypothesis rejected,
2 usage errors (bad flags, unknown series, malformed expressions),
3 domain errors (non-positive terms, overflow, unsupported brackets).
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import bounds, errors, reproduce
from .kummer import TestConfig, run_test
from .search import CSV_COLUMNS, SearchConfig, format_epsilon, record_row, search
from .series import catalog_names, resolve
from .summation import partial_sum

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

_USAGE_ERRORS = (
    errors.LexError,
    errors.ParseError,
    errors.UnknownSeries,
    errors.IndexBeforeStart,
)


def _count(text):
    """Non-negative integer flag; accepts 1e9-style input."""
    try:
        value = int(text)
    except ValueError:
        try:
            f = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not f.is_integer():
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        value = int(f)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def _positive(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value > 0 and value != float("inf")):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kummersum",
        description="Sum convergent positive series with the Kummer/Tong zeta test.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, series=True, fmt="plain"):
        if series:
            p.add_argument("--series", required=True,
                           help=f"catalog name ({', '.join(catalog_names())}) or an expression in n")
            p.add_argument("--from", dest="n0", type=int, default=None,
                           help="start index for expression series (default 1)")
        p.add_argument("--format", choices=("plain", "csv", "markdown"), default=fmt)
        p.add_argument("--precision", type=int, default=6, help="decimals shown (default 6)")

    p = sub.add_parser("sum", help="partial sum S_N")
    common(p)
    p.add_argument("--upto", type=_count, required=True, metavar="N")

    p = sub.add_parser("test", help="test whether the remainder after N is below epsilon")
    common(p)
    p.add_argument("--at", type=_count, required=True, metavar="N")
    p.add_argument("--epsilon", type=_positive, required=True)
    p.add_argument("--horizon", type=_count, default=10**9,
                   help="zeta values scanned, seed included (default 1e9)")
    p.add_argument("--tolerance", type=float, default=0.0)
    p.add_argument("--trace", action="store_true", help="print the last zeta values")

    p = sub.add_parser("search", help="step-forward search")
    common(p, fmt="csv")
    p.add_argument("--start", type=_count, required=True, metavar="N")
    p.add_argument("--epsilon", type=_positive, required=True)
    p.add_argument("--mode", choices=("plain", "modified"), default="plain")
    p.add_argument("--m", dest="M", type=int, default=2)
    p.add_argument("--k", dest="K", type=_positive, default=10.0)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--cap", type=_count, default=10**9, help="term budget (default 1e9)")
    p.add_argument("--horizon", type=_count, default=10**9)

    p = sub.add_parser("bounds", help="integral-test brackets for the remainder or the sum")
    common(p)
    p.add_argument("--at", type=_count, required=True, metavar="N")
    p.add_argument("--method", choices=("all",) + bounds.METHODS, default="all")
    p.add_argument("--sum", action="store_true", help="bracket the full sum instead of R_N")

    p = sub.add_parser("reproduce", help="regenerate the reference tables")
    common(p, series=False)
    p.add_argument("--table", choices=reproduce.TABLE_IDS + ("all",), required=True)
    p.add_argument("--fast", action="store_true",
                   help=f"limit searches to {reproduce.FAST_BUDGET:.0e} terms")
    return parser


# -- output ------------------------------------------------------------------------

class _Printer:
    def __init__(self, fmt, columns, out):
        self.fmt = fmt
        self.columns = columns
        self.out = out
        self.writer = csv.writer(out, lineterminator="\n")

    def header(self):
        if self.fmt == "csv":
            self.writer.writerow(self.columns)
        elif self.fmt == "markdown":
            self.out.write("| " + " | ".join(self.columns) + " |\n")
            self.out.write("|" + "---|" * len(self.columns) + "\n")
        else:
            self.out.write("  ".join(f"{c:>14}" for c in self.columns) + "\n")
        self.out.flush()

    def row(self, cells):
        cells = [str(c) for c in cells]
        if self.fmt == "csv":
            self.writer.writerow(cells)
        elif self.fmt == "markdown":
            self.out.write("| " + " | ".join(cells) + " |\n")
        else:
            self.out.write("  ".join(f"{c:>14}" for c in cells) + "\n")
        self.out.flush()

    def note(self, text):
        self.out.write(("# " if self.fmt == "csv" else "") + text + "\n")
        self.out.flush()


def _series(args):
    return resolve(args.series, args.n0)


def cmd_sum(args, out) -> int:
    series = _series(args)
    state = partial_sum(series, args.upto)
    p = args.precision
    if args.format == "plain":
        out.write(f"{state.last_index}, {state.value:.{p}f}\n")
    else:
        printer = _Printer(args.format, ["N", "S_N", "S_N_full"], out)
        printer.header()
        printer.row([state.last_index, f"{state.value:.{p}f}", repr(state.value)])
    return EXIT_OK


def cmd_test(args, out) -> int:
    series = _series(args)
    config = TestConfig(args.epsilon, args.horizon, tolerance=args.tolerance)
    outcome = run_test(series, args.at, config)
    p = args.precision
    if outcome.rejected:
        peak = outcome.zeta_at(outcome.break_index)
        nxt = outcome.boundary_zetas[-1][1]
        line = (f"REJECTED peak={outcome.break_index} iters={outcome.iterations} "
                f"zeta_peak={peak:.{p}f} zeta_next={nxt:.{p}f}")
        if outcome.negative_hit:
            line += " negative"
    else:
        last = outcome.boundary_zetas[-1][1]
        line = f"ACCEPTED@HORIZON iters={outcome.iterations} zeta_last={last:.{p}f}"
        if outcome.numeric_limit:
            line += " (stopped at the limit of double range)"
    out.write(f"seed zeta_{outcome.seed_index}={outcome.seed_zeta:.{p}f}\n")
    out.write(line + "\n")
    if args.trace:
        for n, z in outcome.boundary_zetas:
            out.write(f"{n}, {z:.{p}f}\n")
    return EXIT_REJECTED if outcome.rejected else EXIT_OK


def cmd_search(args, out) -> int:
    series = _series(args)
    config = SearchConfig(
        epsilon=args.epsilon, mode=args.mode, M=args.M, K=args.K,
        refine_depth=args.depth, horizon=args.horizon, total_budget=args.cap,
    )
    start = partial_sum(series, args.start)
    printer = _Printer(args.format, CSV_COLUMNS, out)
    printer.header()
    rep = search(series, start, config, on_step=lambda rec: printer.row(record_row(rec, args.precision)))
    p = args.precision
    lo, hi = rep.sum_interval
    label = {"AcceptedHypothesis": "ACCEPTED", "CapReached": "CAP", "BudgetExhausted": "BUDGET"}
    interval = f"interval=[{lo:.{p}f},{hi:.{p}f}]"
    where = f"S={rep.final_state.value:.{p}f} n={rep.final_state.last_index}"
    eps = f"epsilon={format_epsilon(rep.final_epsilon)}"
    if rep.certified:
        summary = f"ACCEPTED {interval} {where} {eps}"
    else:
        summary = f"{label[rep.termination.value]} {where} {interval} {eps} (interval not certified)"
    printer.note(summary)
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    series = _series(args)
    methods = bounds.METHODS if args.method == "all" else (args.method,)
    p = max(args.precision, 6)
    printer = _Printer(args.format, ["method", "lower", "upper", "width"], out)
    printer.header()
    produced = 0
    for method in methods:
        try:
            if args.sum:
                b = bounds.estimate_sum(series, args.at, method)
            else:
                b = bounds.remainder_bracket(series, args.at, method)
        except (errors.MissingTailIntegral, errors.MissingDerivative, errors.ShapeConditionFailed) as exc:
            if args.method != "all":
                raise
            printer.note(f"{method}: unavailable ({exc})")
            continue
        produced += 1
        printer.row([method, f"{b.lower:.{p}f}", f"{b.upper:.{p}f}", f"{b.width:.3e}"])
    if produced == 0:
        raise errors.MissingTailIntegral(series.name)
    return EXIT_OK


def cmd_reproduce(args, out) -> int:
    ids = reproduce.TABLE_IDS if args.table == "all" else (args.table,)
    for i, table_id in enumerate(ids):
        table = reproduce.build(table_id, fast=args.fast, precision=args.precision)
        if i:
            out.write("\n")
        if args.format == "markdown":
            out.write(f"### {table.title}\n\n")
        elif args.format == "csv":
            out.write(f"# {table.id}: {table.title}\n")
        else:
            out.write(f"== {table.id}: {table.title}\n")
        printer = _Printer(args.format, table.columns, out)
        printer.header()
        for row in table.rows:
            printer.row(row)
        for note in table.notes:
            printer.note(note)
    return EXIT_OK


COMMANDS = {
    "sum": cmd_sum,
    "test": cmd_test,
    "search": cmd_search,
    "bounds": cmd_bounds,
    "reproduce": cmd_reproduce,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except _USAGE_ERRORS as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        if isinstance(exc, errors.KummerSumError):
            err.write(f"error: {type(exc).__name__}: {exc}\n")
            return EXIT_DOMAIN
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except errors.NonPositiveTerm as exc:
        err.write(f"error: NonPositiveTerm at n={exc.n}: {exc}\n")
        return EXIT_DOMAIN
    except errors.KummerSumError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
