"""
Command-line front end.

    lifemoments moment --product term-insurance --x 50 --defer 2 --term 7 --i 0.03 --assumption UDD,C,B
    lifemoments table --which table2
    lifemoments plotdata --which interp

Exit status: 0 success, 1 computation error, 2 usage error.  Every flag
can also come from a JSON file given with --config; flags on the command
line win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import gompertz
from .closed_form import ProductSpec
from .errors import LifeMomentsError
from .fractional_age import Assumption, density, survival_fraction
from .life_table import LifeTable, example_table, load_life_table
from .products import Product, compute
from .tables import EXACT, TABLE_SPECS, build_table

DEFAULT_KNOTS = (1.0, 0.8, 0.7, 0.5, 0.2)
PLOT_KINDS = ("interp", "density", "gompertz_s", "gompertz_pmf", "premium_by_age")


class LifeLookupError(LifeMomentsError):
    """No age of the requested range fits the table."""


class UsageError(Exception):
    """Bad flags or config; maps to exit status 2."""


def format_number(value: float, precision: int) -> str:
    """Round half-to-even at ``precision`` decimals."""
    if not math.isfinite(value):
        return repr(value)
    quantum = Decimal(1).scaleb(-precision)
    out = Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_EVEN)
    if out.is_zero():
        out = abs(out)
    return format(out, "f")


def _parse_assumptions(text: str) -> List[str]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part.upper() == EXACT:
            out.append(EXACT)
            continue
        try:
            out.append(Assumption.parse(part).value)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not out:
        raise UsageError("no assumption given")
    return out


def _emit(header: Sequence[str], rows: Sequence[Sequence[str]], fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    elif fmt == "markdown":
        out.write("| " + " | ".join(header) + " |\n")
        out.write("|" + "|".join("---" for _ in header) + "|\n")
        for r in rows:
            out.write("| " + " | ".join(r) + " |\n")
    else:
        # numbers stay as exact decimal literals rather than re-rounded floats
        recs = ["{" + ", ".join(f"{json.dumps(h)}: {_json_cell(c)}" for h, c in zip(header, r)) + "}" for r in rows]
        out.write("[" + ",\n ".join(recs) + "]\n")


def _json_cell(cell: str) -> str:
    try:
        Decimal(cell)
        if cell.lower() in ("nan", "inf", "-inf", "infinity", "-infinity"):
            raise ValueError
        return cell
    except (ArithmeticError, ValueError):
        return json.dumps(cell)


# ---------------------------------------------------------------- inputs

def _gompertz_params(args) -> gompertz.GompertzParams:
    try:
        return gompertz.GompertzParams(args.alpha, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _discrete_table(args) -> LifeTable:
    if args.gompertz:
        return gompertz.discretize(_gompertz_params(args), args.max_age)
    if args.table:
        return load_life_table(args.table)
    return example_table()


def _spec(args) -> ProductSpec:
    if args.defer_periods and args.j == 1:
        raise UsageError("--defer-periods needs --j")
    try:
        return ProductSpec(
            x=args.x,
            defer=args.defer,
            term=args.term,
            m=args.m,
            i=args.i,
            j=args.j,
            defer_periods=args.defer_periods,
            force_terminal=args.force_terminal,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -------------------------------------------------------------- commands

def cmd_moment(args, out) -> None:
    assumptions = _parse_assumptions(args.assumption)
    if EXACT in assumptions and not args.gompertz:
        raise UsageError("assumption G needs a continuous law: pass --gompertz (not available for CSV tables)")
    if args.x is None:
        raise UsageError("--x is required")
    spec = _spec(args)
    product = Product(args.product)
    table = _discrete_table(args)
    values = []
    for a in assumptions:
        if a == EXACT:
            values.append(gompertz.exact_moment(_gompertz_params(args), product, spec))
        else:
            values.append(compute(table, product, spec, Assumption(a)).value)
    _emit(assumptions, [[format_number(v, args.precision) for v in values]], args.format, out)


def cmd_table(args, out) -> None:
    name = args.which
    csv_source = TABLE_SPECS[name][1] == "csv"
    if csv_source and args.gompertz:
        raise UsageError(f"{name} is built from a discrete table, not --gompertz")
    assumptions = _parse_assumptions(args.assumption) if args.assumption else None
    if csv_source and assumptions and EXACT in assumptions:
        raise UsageError("assumption G needs a continuous law; not available for CSV tables")
    if csv_source:
        table = load_life_table(args.table) if args.table else None
        res = build_table(name, table=table, assumptions=assumptions)
    else:
        if args.table:
            raise UsageError(f"{name} is built from the Gompertz law; drop --table")
        res = build_table(name, params=_gompertz_params(args), max_age=args.max_age, assumptions=assumptions)
    rows = [[label, *(format_number(vals[c], args.precision) for c in res.columns)] for label, vals in res.rows]
    _emit(["row", *res.columns], rows, args.format, out)


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    if not step > 0:
        raise UsageError("--step must be positive")
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def _plot_interp(args, kind: str) -> Tuple[List[str], List[List[str]]]:
    knots = tuple(args.knots) if args.knots else DEFAULT_KNOTS
    try:
        table = LifeTable.from_survivors(knots)
    except ValueError as exc:
        raise UsageError(f"bad knots: {exc}") from None
    cols = ["UDD", "C", "B"]
    span = len(knots) - 1
    # the density is defined on [0, span); the last knot only closes the interval
    ts = _grid(0.0, float(span), args.step)
    if kind == "density":
        ts = ts[ts < span]
    rows = []
    for t in ts:
        t = float(t)
        cells = [format_number(t, args.precision)]
        for a in cols:
            if kind == "interp":
                v = survival_fraction(table, Assumption(a), 0, t)
            else:
                v = density(table, Assumption(a), 0, t)
            cells.append(format_number(v, args.precision))
        rows.append(cells)
    return ["t", *cols], rows


def _plot_gompertz(args, kind: str):
    params = _gompertz_params(args)
    if kind == "gompertz_s":
        us = _grid(0.0, float(args.max_age), args.step)
        vals = np.atleast_1d(gompertz.survival(params, us))
        return ["u", "s"], [[format_number(float(u), args.precision), format_number(float(v), args.precision)] for u, v in zip(us, vals)]
    table = gompertz.discretize(params, args.max_age)
    rows = []
    for k in range(args.max_age):
        rows.append([str(k), format_number(table.d(k) / table.radix, args.precision)])
    return ["k", "pmf"], rows


def _plot_premiums(args):
    table = _discrete_table(args)
    cols = _parse_assumptions(args.assumption or "UDD,C,B")
    if EXACT in cols and not args.gompertz:
        raise UsageError("assumption G needs --gompertz")
    defer = 2 if args.defer is None else args.defer
    term = 7 if args.term is None else args.term
    lo, hi = args.ages
    rows, skipped = [], []
    for x in range(lo, hi + 1):
        if x not in table or x + defer + term not in table:
            skipped.append(x)
            continue
        spec = ProductSpec(x=x, defer=defer, term=term, m=args.m, i=args.i)
        cells = [str(x)]
        for a in cols:
            if a == EXACT:
                v = gompertz.exact_moment(_gompertz_params(args), Product.TERM_INSURANCE, spec)
            else:
                v = compute(table, Product.TERM_INSURANCE, spec, Assumption(a)).value
            cells.append(format_number(v, args.precision))
        rows.append(cells)
    if not rows:
        raise LifeLookupError(f"table covers none of the ages {lo}..{hi} with a {defer}+{term} year window")
    if skipped:
        print(f"note: skipped {len(skipped)} ages outside the table ({skipped[0]}..{skipped[-1]})", file=sys.stderr)
    return ["x", *cols], rows


def cmd_plotdata(args, out) -> None:
    kind = args.which
    if kind in ("interp", "density"):
        header, rows = _plot_interp(args, kind)
    elif kind in ("gompertz_s", "gompertz_pmf"):
        header, rows = _plot_gompertz(args, kind)
    else:
        if args.i is None:
            args.i = 0.03
        header, rows = _plot_premiums(args)
    _emit(header, rows, args.format, out)


# ---------------------------------------------------------------- parser

def _precision(text) -> int:
    p = int(text)
    if not 1 <= p <= 15:
        raise argparse.ArgumentTypeError("precision must lie in 1..15")
    return p


def _common(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("input")
    src.add_argument("--table", metavar="CSV", help="life table CSV (age,lx); default: bundled example")
    src.add_argument("--gompertz", action="store_true", help="use the Gompertz law instead of a CSV")
    src.add_argument("--alpha", type=float, default=gompertz.EXAMPLE_ALPHA)
    src.add_argument("--beta", type=float, default=gompertz.EXAMPLE_BETA)
    src.add_argument("--max-age", type=int, default=gompertz.EXAMPLE_MAX_AGE, help="last age of the discretized Gompertz table")
    p.add_argument("--format", choices=("csv", "markdown", "json"), default="csv")
    p.add_argument("--precision", type=_precision, default=7)
    p.add_argument("--config", metavar="JSON", help="JSON file of flag values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lifemoments", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    mom = sub.add_parser("moment", help="one moment under one or more assumptions")
    _common(mom)
    mom.add_argument("--product", choices=[p.value for p in Product], default=Product.TERM_INSURANCE.value)
    mom.add_argument("--x", type=int)
    mom.add_argument("--defer", type=int, default=0, help="whole years of deferment")
    mom.add_argument("--defer-periods", type=int, default=0, help="extra deferment in 1/j periods")
    mom.add_argument("--term", type=int, default=None, help="years of cover; omit for whole life")
    mom.add_argument("--m", type=int, default=1, help="moment order")
    mom.add_argument("--i", type=float, default=0.0, help="annual interest rate")
    mom.add_argument("--j", type=int, default=1, help="periods per year")
    mom.add_argument("--assumption", default="C", help="comma list of UDD, C, B, G")
    mom.add_argument("--force-terminal", action="store_true", help="treat the last tabulated age as the end of life")
    mom.set_defaults(handler=cmd_moment)

    tab = sub.add_parser("table", help="regenerate a standard table")
    _common(tab)
    tab.add_argument("--which", choices=sorted(TABLE_SPECS), required=True)
    tab.add_argument("--assumption", default=None, help="comma list of columns")
    tab.set_defaults(handler=cmd_table)

    plot = sub.add_parser("plotdata", help="point series for plotting")
    _common(plot)
    plot.add_argument("--which", choices=PLOT_KINDS, required=True)
    plot.add_argument("--knots", type=float, nargs="+", help="survival values at t = 0, 1, 2, ...")
    plot.add_argument("--step", type=float, default=0.01)
    plot.add_argument("--ages", type=int, nargs=2, default=(18, 70), metavar=("LO", "HI"))
    plot.add_argument("--defer", type=int, default=None)
    plot.add_argument("--term", type=int, default=None)
    plot.add_argument("--m", type=int, default=1)
    plot.add_argument("--i", type=float, default=None)
    plot.add_argument("--assumption", default=None)
    plot.set_defaults(handler=cmd_plotdata)
    return parser


def _load_config(path: str, sub: argparse.ArgumentParser) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    known = {a.dest for a in sub._actions}
    out = {}
    for key, value in cfg.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest not in known or dest in ("help", "config", "handler"):
            raise UsageError(f"unknown config key {key!r}")
        out[dest] = value
    if "precision" in out:
        try:
            out["precision"] = _precision(out["precision"])
        except (argparse.ArgumentTypeError, TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    return out


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = _subparser(parser, args.command)
        sub.set_defaults(**_load_config(args.config, sub))
        args = parser.parse_args(argv)
    return args


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    buf = io.StringIO()
    try:
        args.handler(args, buf)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (LifeMomentsError, ValueError, ArithmeticError, IndexError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    out.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
