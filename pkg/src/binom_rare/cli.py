"""Command-line interface.

Subcommands: ``interval`` (single computed interval), ``evaluate`` (exact
performance at one or more design points), ``plan`` (sample sizes),
``sweep`` (figure-style grid data as CSV), ``tables`` (built-in comparison
tables), ``case-study`` (bundled datasets), and ``thresholds`` (validity
thresholds for the relative margin of error).

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import datetime
import math
import sys

from . import __version__
from .cases import CASE_STUDIES, case_report
from .estimators import ALL_KINDS, EstimatorKind, Observation, interval
from .evaluation import DEFAULT_TAIL_TOL, evaluate_grid
from .numerics import NonConvergenceError
from .planning import PlanRequest, eps_r_threshold, sample_sizes
from .render import (Cell, ReportRow, canon_num, color_enabled, fmt_n_sig2,
                     fmt_pct, fmt_two_dec, render_csv, render_json,
                     render_text_table)
from .tables import TABLE_IDS, build_table

USAGE_EXIT = 2
IO_EXIT = 3
NUMERICAL_EXIT = 4


class UsageError(Exception):
    """Invalid flag combination or argument value."""


def _kind_list(values: list[str] | None) -> tuple[EstimatorKind, ...]:
    if not values or "all" in values:
        return ALL_KINDS
    seen: list[EstimatorKind] = []
    for v in values:
        kind = EstimatorKind(v)
        if kind not in seen:
            seen.append(kind)
    return tuple(seen)


def _check_alpha(alpha: float) -> float:
    if math.isnan(alpha) or not 0.0 < alpha < 1.0:
        raise UsageError(f"--alpha must lie in (0, 1), got {alpha}")
    return alpha


def _check_p(p: float, name: str = "--p") -> float:
    if math.isnan(p) or not 0.0 < p < 1.0:
        raise UsageError(f"{name} must lie strictly inside (0, 1), got {p}")
    return p


def _n_grid(args) -> list[int]:
    if args.n is not None:
        if args.n_start is not None or args.n_end is not None:
            raise UsageError("give either --n or --n-start/--n-end, not both")
        return [args.n]
    if args.n_start is None or args.n_end is None:
        raise UsageError("either --n or both --n-start and --n-end are required")
    step = args.n_step or 1
    if step < 1:
        raise UsageError("--n-step must be a positive integer")
    return list(range(args.n_start, args.n_end + 1, step))


def _emit(args, meta: dict, header: list[str], rows: list[list],
          json_rows: list[dict], text_lines: list[str] | None = None,
          csv_comments: list[str] | None = None) -> None:
    fmt = args.format
    if fmt == "csv":
        payload = render_csv(header, rows, csv_comments)
    elif fmt == "json":
        payload = render_json(meta, json_rows)
    else:
        stream = sys.stdout if args.out is None else None
        colors = color_enabled(args.no_color, stream) if stream else False
        parts = []
        if not args.reproducible:
            now = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
            parts.append(f"# binom-rare {__version__} generated {now}")
        parts.extend(text_lines or [])
        parts.append(render_text_table(header, rows, colors=colors,
                                       footer=[f"# {c}" for c in csv_comments or []]))
        payload = "\n".join(parts) if len(parts) > 1 else parts[0]
        if not payload.endswith("\n"):
            payload += "\n"
    if args.out is None:
        sys.stdout.write(payload)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)


def _report_rows_output(results, p: float, alpha: float):
    header = list(ReportRow.CSV_HEADER)
    rows, json_rows = [], []
    for res in results:
        rr = ReportRow(
            estimator=res.point.kind.value, n=res.point.n, p=p, alpha=alpha,
            cpr=res.cpr, eps_r=res.eps_r,
            coverage_band=res.coverage_band.label, moe_band=res.moe_band.label)
        rows.append(rr.to_csv_cells(res.coverage_band, res.moe_band))
        json_rows.append(rr.to_dict())
    return header, rows, json_rows


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_interval(args) -> int:
    alpha = _check_alpha(args.alpha)
    kinds = _kind_list(args.estimator)
    try:
        obs = Observation(x=args.x, n=args.n, alpha=alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    header = ["estimator", "x", "n", "p_hat", "raw_lower", "raw_upper",
              "lower", "upper", "realized_eps_r", "note"]
    rows, json_rows, notes = [], [], []
    for kind in kinds:
        itv = interval(kind, obs)
        realized = (itv.raw_half_width / obs.p_hat) if obs.p_hat > 0 else math.inf
        note = "degenerate interval" if itv.degenerate else ""
        rows.append([kind.value, str(obs.x), str(obs.n), canon_num(obs.p_hat),
                     canon_num(itv.raw_lower), canon_num(itv.raw_upper),
                     canon_num(itv.lower), canon_num(itv.upper),
                     "inf" if math.isinf(realized) else canon_num(realized), note])
        json_rows.append({
            "estimator": kind.value, "x": obs.x, "n": obs.n, "p_hat": obs.p_hat,
            "raw_lower": itv.raw_lower, "raw_upper": itv.raw_upper,
            "lower": itv.lower, "upper": itv.upper,
            "realized_eps_r": None if math.isinf(realized) else realized,
            "note": note or None,
        })
        if note:
            notes.append(f"{kind.value}: interval is degenerate at x={obs.x}")
    meta = {"command": "interval", "version": __version__,
            "params": {"x": obs.x, "n": obs.n, "alpha": alpha,
                       "estimators": [k.value for k in kinds]}}
    _emit(args, meta, header, rows, json_rows, csv_comments=notes)
    return 0


def cmd_evaluate(args) -> int:
    alpha = _check_alpha(args.alpha)
    p = _check_p(args.p)
    p_star = args.p_star if args.p_star is not None else p
    if not p_star > 0:
        raise UsageError(f"--p-star must be positive, got {p_star}")
    kinds = _kind_list(args.estimator)
    grid = _n_grid(args)
    result = evaluate_grid(kinds, grid, p, p_star, alpha, args.tail_tol)
    header, rows, json_rows = _report_rows_output(result.rows, p, alpha)
    comments = [f"first n with both bands at target: "
                + ", ".join(f"{k.value}={result.first_target_n[k]}" for k in kinds)]
    meta = {"command": "evaluate", "version": __version__,
            "params": {"p": p, "p_star": p_star, "alpha": alpha,
                       "n_grid": grid, "tail_tol": args.tail_tol,
                       "estimators": [k.value for k in kinds]},
            "first_target_n": {k.value: result.first_target_n[k] for k in kinds}}
    _emit(args, meta, header, rows, json_rows, csv_comments=comments)
    return 0


def cmd_plan(args) -> int:
    alpha = _check_alpha(args.alpha)
    if (args.epsilon is None) == (args.eps_r is None):
        raise UsageError("exactly one of --epsilon and --eps-r is required")
    kinds = _kind_list(args.estimator)
    try:
        req = PlanRequest(p_star=args.p_star, epsilon=args.epsilon,
                          eps_r_tilde=args.eps_r, alpha=alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = sample_sizes(req, kinds)
    header = ["estimator", "n", "n_2sig", "method", "cross_check_n", "consistent"]
    rows, json_rows = [], []
    for res in results:
        rows.append([res.kind.value, str(res.n), fmt_n_sig2(res.n), res.method,
                     "" if res.cross_check_n is None else str(res.cross_check_n),
                     "yes" if res.consistent else "no"])
        json_rows.append({
            "estimator": res.kind.value, "n": res.n, "n_2sig": fmt_n_sig2(res.n),
            "method": res.method, "cross_check_n": res.cross_check_n,
            "consistent": res.consistent, "discrepancy": res.discrepancy,
        })
    comments = list(req.warnings)
    for res in results:
        if res.discrepancy:
            comments.append(f"{res.kind.value}: {res.discrepancy}")
    meta = {"command": "plan", "version": __version__,
            "params": {"p_star": req.p_star, "epsilon": req.epsilon,
                       "eps_r_tilde": req.eps_r_tilde, "alpha": alpha,
                       "estimators": [k.value for k in kinds]},
            "warnings": list(req.warnings)}
    _emit(args, meta, header, rows, json_rows, csv_comments=comments)
    return 0


def cmd_sweep(args) -> int:
    alpha = _check_alpha(args.alpha)
    p = _check_p(args.p)
    p_star = args.p_star if args.p_star is not None else p
    kinds = _kind_list(args.estimator)
    if args.n_start is None or args.n_end is None:
        raise UsageError("--n-start and --n-end are required")
    step = args.n_step or 1
    if step < 1:
        raise UsageError("--n-step must be a positive integer")
    grid = list(range(args.n_start, args.n_end + 1, step))
    header = ["estimator", "n", "cpr", "eps_r"]
    rows, json_rows = [], []
    first_target: dict[str, int | None] = {}
    if grid:
        result = evaluate_grid(kinds, grid, p, p_star, alpha, args.tail_tol)
        for res in result.rows:
            rows.append([res.point.kind.value, str(res.point.n),
                         canon_num(res.cpr), canon_num(res.eps_r)])
            json_rows.append({"estimator": res.point.kind.value, "n": res.point.n,
                              "cpr": res.cpr, "eps_r": res.eps_r})
        first_target = {k.value: result.first_target_n[k] for k in kinds}
        comments = [f"first n with both bands at target: {k}={v}"
                    for k, v in first_target.items()]
    else:
        first_target = {k.value: None for k in kinds}
        comments = []
    meta = {"command": "sweep", "version": __version__,
            "params": {"p": p, "p_star": p_star, "alpha": alpha,
                       "n_start": args.n_start, "n_end": args.n_end,
                       "n_step": step, "tail_tol": args.tail_tol,
                       "estimators": [k.value for k in kinds]},
            "first_target_n": first_target}
    _emit(args, meta, header, rows, json_rows, csv_comments=comments)
    return 0


def cmd_tables(args) -> int:
    alpha = _check_alpha(args.alpha)
    try:
        table = build_table(args.table, alpha, args.tail_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    json_rows = []
    for row in table.rows:
        json_rows.append({h: (c.text if isinstance(c, Cell) else c)
                          for h, c in zip(table.header, row)})
    meta = {"command": "tables", "version": __version__,
            "params": {"table": table.table_id, "alpha": alpha,
                       "tail_tol": args.tail_tol},
            "title": table.title}
    _emit(args, meta, table.header, table.rows, json_rows,
          text_lines=[f"# {table.title}"])
    return 0


def cmd_case_study(args) -> int:
    try:
        report = case_report(args.name, args.tail_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    study = report.study
    header = ["estimator", "lower", "upper", "realized_eps_r", "cpr",
              "enum_eps_r", "coverage_band", "moe_band", "verdict"]
    rows, json_rows = [], []
    for row in report.rows:
        rows.append([
            row.estimator.value,
            canon_num(row.interval.lower), canon_num(row.interval.upper),
            fmt_two_dec(row.realized_eps_r), fmt_pct(row.cpr),
            f"{row.enum_eps_r:.3f}",
            Cell(row.coverage_band.label, row.coverage_band),
            Cell(row.moe_band.label, row.moe_band),
            row.verdict,
        ])
        json_rows.append({
            "estimator": row.estimator.value,
            "lower": row.interval.lower, "upper": row.interval.upper,
            "realized_eps_r": row.realized_eps_r, "cpr": row.cpr,
            "enum_eps_r": row.enum_eps_r,
            "coverage_band": row.coverage_band.label,
            "moe_band": row.moe_band.label,
            "verdict": row.verdict,
        })
    text_lines = [f"# case study: {study.id} - {study.description}",
                  f"# n = {study.n}, observed p-hat = {canon_num(study.p_hat)}, "
                  f"alpha = {study.alpha:g}, evaluation at p = {canon_num(study.p_eval)}"]
    comments = []
    for srow in report.scaling_rows:
        note = ("" if srow.matches_published
                else f" (published value {srow.n_published}, ceiling differs by "
                     f"{srow.n - (srow.n_published or 0):+d})")
        comments.append(
            f"target eps_r {srow.eps_r:g}: n = {srow.n}, interval "
            f"[{srow.lower:.3f}, {srow.upper:.3f}]{note}")
    meta = {"command": "case-study", "version": __version__,
            "params": {"name": study.id, "tail_tol": args.tail_tol},
            "study": {"id": study.id, "n": study.n, "x": study.x,
                      "p_hat": study.p_hat, "alpha": study.alpha,
                      "p_eval": study.p_eval,
                      "description": study.description},
            "sample_size_rows": [
                {"eps_r": s.eps_r, "n": s.n, "epsilon": s.epsilon,
                 "lower": s.lower, "upper": s.upper,
                 "n_published": s.n_published,
                 "matches_published": s.matches_published}
                for s in report.scaling_rows]}
    _emit(args, meta, header, rows, json_rows, text_lines=text_lines,
          csv_comments=comments)
    return 0


def cmd_thresholds(args) -> int:
    p_stars = args.p_star or [1e-1, 1e-2, 1e-3, 1e-4, 1e-5]
    alphas = args.alpha_grid or [0.1, 0.05, 0.01]
    a_values = args.a or [5, 10]
    header = ["p_star", "a", "alpha", "eps_r_threshold"]
    rows, json_rows = [], []
    for a in a_values:
        for alpha in alphas:
            _check_alpha(alpha)
            for p_star in p_stars:
                _check_p(p_star, "--p-star")
                thr = eps_r_threshold(p_star, alpha, a)
                rows.append([canon_num(p_star), canon_num(a), canon_num(alpha),
                             fmt_two_dec(thr)])
                json_rows.append({"p_star": p_star, "a": a, "alpha": alpha,
                                  "eps_r_threshold": thr})
    meta = {"command": "thresholds", "version": __version__,
            "params": {"p_star": p_stars, "a": a_values, "alphas": alphas}}
    _emit(args, meta, header, rows, json_rows)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_ESTIMATOR_CHOICES = [k.value for k in ALL_KINDS] + ["all"]


def _common_options(default_format: str = "text") -> argparse.ArgumentParser:
    # fresh parent per subcommand: parents share action objects, so a
    # per-subcommand default must not mutate a shared instance
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=0.05,
                        help="significance level (default 0.05)")
    common.add_argument("--format", choices=("text", "csv", "json"),
                        default=default_format, help="output format")
    common.add_argument("--no-color", action="store_true",
                        help="disable ANSI colors (also: BINOM_RARE_NO_COLOR)")
    common.add_argument("--reproducible", action="store_true",
                        help="omit the generated-at header comment")
    common.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL,
                        help="total binomial tail mass excluded from "
                             "enumeration (default 1e-12)")
    common.add_argument("--out", metavar="FILE", default=None,
                        help="write output to FILE instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binom-rare",
        description="Binomial proportion confidence intervals for rare events: "
                    "exact coverage, relative margin of error, and sample-size "
                    "planning.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interval", parents=[_common_options()],
                       help="compute a confidence interval for observed (x, n)")
    p.add_argument("--estimator", action="append", choices=_ESTIMATOR_CHOICES,
                   help="estimator (repeatable; default all)")
    p.add_argument("--x", type=int, required=True, help="success count")
    p.add_argument("--n", type=int, required=True, help="number of trials")
    p.set_defaults(func=cmd_interval)

    p = sub.add_parser("evaluate", parents=[_common_options()],
                       help="exact coverage and relative margin of error")
    p.add_argument("--estimator", action="append", choices=_ESTIMATOR_CHOICES)
    p.add_argument("--p", type=float, required=True, help="true proportion")
    p.add_argument("--p-star", type=float, default=None,
                   help="reference proportion for eps_r (default: --p)")
    p.add_argument("--n", type=int, default=None, help="single sample size")
    p.add_argument("--n-start", type=int, default=None)
    p.add_argument("--n-end", type=int, default=None)
    p.add_argument("--n-step", type=int, default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("plan", parents=[_common_options()],
                       help="sample size for a target margin of error")
    p.add_argument("--estimator", action="append", choices=_ESTIMATOR_CHOICES)
    p.add_argument("--p-star", type=float, required=True,
                   help="anticipated proportion")
    p.add_argument("--epsilon", type=float, default=None,
                   help="absolute margin of error")
    p.add_argument("--eps-r", type=float, default=None,
                   help="relative margin of error epsilon / p*")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("sweep", parents=[_common_options("csv")],
                       help="grid sweep of (estimator, n, CPr, eps_r) for plotting")
    p.add_argument("--estimator", action="append", choices=_ESTIMATOR_CHOICES)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--p-star", type=float, default=None)
    p.add_argument("--n-start", type=int, required=True)
    p.add_argument("--n-end", type=int, required=True)
    p.add_argument("--n-step", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tables", parents=[_common_options()],
                       help="regenerate a built-in comparison table")
    p.add_argument("--table", required=True,
                   help=f"table id: one of {', '.join(TABLE_IDS)}")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("case-study", parents=[_common_options()],
                       help="analyze a bundled case-study dataset")
    p.add_argument("--name", required=True, choices=sorted(CASE_STUDIES),
                   help="case study id")
    p.set_defaults(func=cmd_case_study)

    p = sub.add_parser("thresholds", parents=[_common_options()],
                       help="relative margin-of-error validity thresholds")
    p.add_argument("--p-star", type=float, action="append", default=None)
    p.add_argument("--a", type=float, action="append", default=None,
                   help="required minimum for n * p-star (repeatable)")
    p.add_argument("--alpha-grid", type=float, action="append", default=None)
    p.set_defaults(func=cmd_thresholds)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except NonConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return NUMERICAL_EXIT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return IO_EXIT


def run() -> None:  # console-script entry point
    sys.exit(main())
