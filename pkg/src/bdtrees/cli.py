"""Command-line interface: ``trees count | x0 | mu | dist | estrada | verify``.

Exit codes: 0 success, 1 invalid input, 2 failed verification guard or
refused computation, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .counting import counting_series, find_x0
from .occurrences import occurrence_distribution
from .series import SeriesError
from .stats import estrada_survey, linear_fit
from .system import (
    ConnectivityError, ResourceCapError, build_system, compute_mu, mean_variance_series, solve_series,
)
from .trees import TreeError, count_trees, diameter, format_tree, parse_tree

EXIT_OK, EXIT_INVALID, EXIT_GUARD, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _n_values(args) -> list[int]:
    if args.n_range:
        try:
            lo, hi = (int(v) for v in args.n_range.split(":"))
        except ValueError:
            raise UsageError("--n-range must look like LO:HI") from None
        if lo < 1 or hi < lo:
            raise UsageError("--n-range needs 1 <= LO <= HI")
        return list(range(lo, hi + 1))
    if args.n is None:
        raise UsageError("--n or --n-range is required")
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    return [args.n]


def _json_default(v):
    if isinstance(v, Fraction):
        return str(v)
    raise TypeError(type(v))


def _render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True, default=_json_default) + "\n"
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def _emit(args, rows: list[dict], summary: str):
    """Human summary on stdout, or machine-readable rows when a format/output was requested."""
    if args.output:
        Path(args.output).write_text(_render(rows, args.format or "csv"))
        if summary:
            print(summary)
    elif args.format:
        sys.stdout.write(_render(rows, args.format))
    else:
        print(summary)


def _subtree(args):
    try:
        return parse_tree(args.subtree).tree
    except TreeError as exc:
        raise UsageError(f"--subtree: {exc}") from None


def _check_delta(args, minimum: int):
    if args.delta is None:
        raise UsageError("--delta is required")
    if args.delta < minimum:
        raise UsageError(f"--delta must be >= {minimum}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_count(args) -> int:
    _check_delta(args, 2)
    ns = _n_values(args)
    if args.method == "gf":
        b = counting_series(args.delta, max(ns))
        series = {"planted": b.p, "rooted": b.r, "free": b.t}[args.kind]
        values = [int(series[n]) for n in ns]
    else:
        values = [count_trees(args.kind, n, args.delta) for n in ns]
    rows = [{"n": n, "kind": args.kind, "delta": args.delta, "count": v} for n, v in zip(ns, values)]
    summary = str(values[0]) if len(ns) == 1 else "\n".join(f"{n} {v}" for n, v in zip(ns, values))
    _emit(args, rows, summary)
    return EXIT_OK


def cmd_x0(args) -> int:
    _check_delta(args, 3)
    est = find_x0(args.delta, args.order, args.tol)
    rows = [{"delta": args.delta, "x0": est.x0, "p_at_x0": est.p_at_x0, "order": est.truncation,
             "bracket_width": est.bracket_width, "extrapolation_residual": est.extrapolation_residual}]
    _emit(args, rows, f"x0 = {est.x0:.10f}\np(x0) = {est.p_at_x0:.7f}")
    return EXIT_OK


def cmd_mu(args) -> int:
    _check_delta(args, 3)
    H = _subtree(args)
    if args.empirical:
        ns = _n_values(args) if (args.n or args.n_range) else list(range(50, 301))
        if H.n == 1:
            raise UsageError("the empirical fit needs H with at least one edge")
        ms = mean_variance_series(build_system(args.delta, H), max(ns))
        fit = linear_fit((n, ms.mean(n)) for n in ns)
        rows = [{"delta": args.delta, "subtree": format_tree(H), "slope": fit.slope,
                 "intercept": fit.intercept, "r_squared": fit.r_squared, "n_min": ns[0], "n_max": ns[-1]}]
        _emit(args, rows, f"mu (slope of E[X_n], n={ns[0]}..{ns[-1]}) = {fit.slope:.6f}")
        return EXIT_OK
    est = find_x0(args.delta, args.order, args.tol)
    sys_ = None if H.n == 1 else build_system(args.delta, H)
    rep = compute_mu(sys_, est.x0, args.series_order, counting_order=args.order)
    rows = [{"delta": args.delta, "subtree": format_tree(H), **rep.as_record()}]
    lines = [f"mu = {rep.mu:.6f}", f"x0 = {rep.x0:.10f}",
             f"column_sum_residual = {rep.column_sum_residual:.2e}",
             f"extrapolation_residual = {rep.extrapolation_residual:.2e}"]
    lines += [f"warning: {w}" for w in rep.warnings]
    _emit(args, rows, "\n".join(lines))
    return EXIT_OK


def cmd_dist(args) -> int:
    _check_delta(args, 2)
    H = _subtree(args)
    ns = _n_values(args)
    rows = []
    if args.method == "gf":
        if args.delta < 3:
            raise UsageError("--method gf needs --delta >= 3")
        if H.n == 1 or diameter(H) < 1:
            raise UsageError("--method gf needs H with at least one edge")
        s = solve_series(build_system(args.delta, H), max(ns))
        series = {"planted": s.p, "rooted": s.r, "free": s.t}[args.kind]
        for n in ns:
            for k, c in sorted(series[n].items()):
                rows.append({"n": n, "delta": args.delta, "subtree": format_tree(H), "k": k, "count": int(c)})
    else:
        for n in ns:
            table = occurrence_distribution(args.kind, n, args.delta, H, pattern=args.pattern)
            rows.extend(table.rows())
    summary = "\n".join(f"n={r['n']} k={r['k']} count={r['count']}" for r in rows)
    _emit(args, rows, summary)
    return EXIT_OK


def cmd_estrada(args) -> int:
    _check_delta(args, 2)
    ns = _n_values(args)
    if args.K < 0:
        raise UsageError("--K must be >= 0")
    rows, lines = [], []
    for n in ns:
        survey = estrada_survey(n, args.delta, args.K)
        for r in survey.rows:
            row = {"tree": r.tree, "n": r.n, "D": r.D, "EE": r.EE}
            row.update({f"M_{2 * k}": m for k, m in enumerate(r.moments, start=1)})
            rows.append(row)
        agg = survey.aggregate
        line = f"n={n} trees={agg.trees} mean(EE/n)={agg.mean_ee_per_n:.6f} std(EE/n)={agg.std_ee_per_n:.6f}"
        if agg.fit:
            line += f" EE~D: slope={agg.fit.slope:.6f} intercept={agg.fit.intercept:.6f} r2={agg.fit.r_squared:.6f}"
        lines.append(line)
        if args.plot:
            base = Path(args.output).with_suffix("") if args.output else Path(f"estrada_d{args.delta}")
            path = Path(f"{base}_n{n}.svg")
            path.write_text(survey.to_svg())
            lines.append(f"plot: {path}")
    _emit(args, rows, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import run_suite
    try:
        results = run_suite(args.suite)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    for r in results:
        print(r.line(), flush=True)
    if args.output or args.format:
        _emit(args, [{"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
                     for r in results], "")
    return EXIT_OK if all(r.passed for r in results) else EXIT_GUARD


COMMANDS = {"count": cmd_count, "x0": cmd_x0, "mu": cmd_mu, "dist": cmd_dist, "estrada": cmd_estrada,
            "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delta", type=int, help="maximum vertex degree")
    common.add_argument("--n", type=int, help="tree order")
    common.add_argument("--n-range", help="inclusive order range LO:HI")
    common.add_argument("--kind", choices=["free", "rooted", "planted"], default="free")
    common.add_argument("--subtree", default="", help='pattern tree H as a parent array ("" is K1)')
    common.add_argument("--order", type=int, default=600, help="truncation order of the counting series")
    common.add_argument("--tol", type=float, default=1e-8, help="bisection tolerance for x0")
    common.add_argument("--K", type=int, default=30, help="number of even moments M_2..M_2K")
    common.add_argument("--output", help="write machine-readable output to this file")
    common.add_argument("--format", choices=["csv", "json"], help="machine-readable format")
    common.add_argument("--plot", action="store_true", help="also write an SVG scatter (estrada)")
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; computation is single-threaded and deterministic")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="trees", description="Subtree statistics of bounded-degree trees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("count", parents=[common], help="count trees of order n")
    c.add_argument("--method", choices=["enum", "gf"], default="gf")
    sub.add_parser("x0", parents=[common], help="dominant singularity and p(x0)")
    m = sub.add_parser("mu", parents=[common], help="mean constant of occurrences of H")
    m.add_argument("--series-order", type=int, default=120, help="series order for dilated slots")
    m.add_argument("--empirical", action="store_true", help="fit the slope of exact means instead")
    d = sub.add_parser("dist", parents=[common], help="distribution of occurrences of H")
    d.add_argument("--method", choices=["enum", "gf"], default="enum")
    d.add_argument("--pattern", action="store_true", help="pattern semantics (enumeration only)")
    sub.add_parser("estrada", parents=[common], help="Estrada/Zagreb survey over all free trees")
    v = sub.add_parser("verify", parents=[common], help="run acceptance criteria")
    v.add_argument("--suite", default="all", help="criterion name or number, or all")
    return p


def _validate(args):
    if args.order < 1:
        raise UsageError("--order must be >= 1")
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    if args.format is None and args.output:
        suffix = Path(args.output).suffix.lower()
        args.format = "json" if suffix == ".json" else "csv"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        _validate(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"trees: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ResourceCapError as exc:
        print(f"trees: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ConnectivityError as exc:
        print(f"trees: refused: {exc}; components: {exc.components}", file=sys.stderr)
        return EXIT_GUARD
    except (SeriesError, TreeError, ValueError) as exc:
        print(f"trees: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
