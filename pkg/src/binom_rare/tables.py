"""Built-in comparison tables.

Canned analyses over the rare-event decades p* in {1e-1, ..., 1e-5}:
sample-size comparisons, fixed and relative margin-of-error schemes,
validity thresholds, and banded performance grids.  Each builder returns
display-rounded cells; the underlying full-precision values come straight
from :mod:`evaluation` and :mod:`planning`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .estimators import ALL_KINDS, EstimatorKind
from .evaluation import (DEFAULT_TAIL_TOL, DesignPoint,
                         coverage_probability, evaluate)
from .planning import PlanRequest, eps_r_threshold, sample_sizes, wald_sample_size
from .render import Cell, fmt_n_sig2, fmt_pct, fmt_two_dec

__all__ = ["Table", "TABLE_IDS", "build_table"]

P_DECADES = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)

# fixed margin-of-error schemes: (epsilon, p_star or None for p_star = p)
FIXED_SCHEMES = {
    1: (4e-2, None),
    2: (4e-2, 0.5),
    3: (4e-4, None),
    4: (4e-4, 0.5),
}

EPS_R_GRID = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.75)

THRESHOLD_A = (5, 10)
THRESHOLD_ALPHAS = (0.1, 0.05, 0.01)

PERFORMANCE_GRIDS = {
    "6": (1e-1, range(10, 141, 10)),
    "7": (1e-1, range(150, 351, 10)),
    "8": (1e-5, range(750_000, 1_400_001, 50_000)),
    "9": (1e-5, range(1_500_000, 2_500_001, 50_000)),
}

TABLE_IDS = ("1", "2", "3", "4", "6", "7", "8", "9", "B1", "B2")


@dataclass(frozen=True)
class Table:
    table_id: str
    title: str
    header: list[str]
    rows: list[list]


def _sample_size_comparison(alpha: float) -> Table:
    rows = []
    for p_star in P_DECADES:
        req = PlanRequest(p_star=p_star, eps_r_tilde=0.4, alpha=alpha)
        results = sample_sizes(req)
        rows.append([canonical_p(p_star), fmt_n_sig2(req.epsilon)]
                    + [fmt_n_sig2(r.n) for r in results])
    header = ["p_star", "epsilon"] + [k.value for k in ALL_KINDS]
    return Table("1", "Sample size comparison, relative margin of error 0.4",
                 header, rows)


def _fixed_moe_sample_sizes(alpha: float, tail_tol: float) -> Table:
    rows = []
    for p in P_DECADES:
        for scheme, (eps, p_star_fixed) in FIXED_SCHEMES.items():
            p_star = p if p_star_fixed is None else p_star_fixed
            n = wald_sample_size(PlanRequest(p_star=p_star, epsilon=eps, alpha=alpha)).n
            cpr = coverage_probability(DesignPoint(EstimatorKind.WALD, n, p, alpha), tail_tol)
            rows.append([canonical_p(p), str(scheme), fmt_n_sig2(eps),
                         canonical_p(p_star), fmt_n_sig2(n), fmt_pct(cpr)])
    header = ["p", "scheme", "epsilon", "p_star", "n", "wald_cpr_pct"]
    return Table("2", "Wald sample sizes and coverage under fixed margin-of-error schemes",
                 header, rows)


def _variable_moe_sample_sizes(alpha: float, tail_tol: float) -> Table:
    rows = []
    for p_star in P_DECADES:
        for ert in EPS_R_GRID:
            req = PlanRequest(p_star=p_star, eps_r_tilde=ert, alpha=alpha)
            n = wald_sample_size(req).n
            cpr = coverage_probability(DesignPoint(EstimatorKind.WALD, n, p_star, alpha),
                                       tail_tol)
            rows.append([canonical_p(p_star), f"{ert:g}", fmt_n_sig2(req.epsilon),
                         fmt_n_sig2(n), fmt_pct(cpr)])
    header = ["p_star", "eps_r_tilde", "epsilon", "n", "wald_cpr_pct"]
    return Table("3", "Wald sample sizes and coverage under relative margin-of-error schemes",
                 header, rows)


def _threshold_table() -> Table:
    rows = []
    for a in THRESHOLD_A:
        for alpha in THRESHOLD_ALPHAS:
            for p_star in P_DECADES:
                thr = eps_r_threshold(p_star, alpha, a)
                rows.append([canonical_p(p_star), str(a), f"{alpha:g}", fmt_two_dec(thr)])
    header = ["p_star", "a", "alpha", "eps_r_threshold"]
    return Table("4", "Relative margin-of-error validity thresholds", header, rows)


def _performance_table(table_id: str, alpha: float, tail_tol: float) -> Table:
    p, n_grid = PERFORMANCE_GRIDS[table_id]
    rows = []
    for n in n_grid:
        row = [str(n)]
        for kind in ALL_KINDS:
            res = evaluate(DesignPoint(kind, n, p, alpha), p, tail_tol)
            row.append(Cell(fmt_pct(res.cpr), res.coverage_band))
            row.append(Cell(fmt_two_dec(res.eps_r), res.moe_band))
        rows.append(row)
    header = ["n"]
    for kind in ALL_KINDS:
        header += [f"{kind.value}_cpr_pct", f"{kind.value}_eps_r"]
    return Table(table_id,
                 f"Interval performance at p = p* = {canonical_p(p)} "
                 f"({(1 - alpha) * 100:g}% intervals)",
                 header, rows)


def _fixed_moe_coverage(alpha: float, tail_tol: float) -> Table:
    rows = []
    for scheme, (eps, p_star_fixed) in FIXED_SCHEMES.items():
        for p in P_DECADES:
            p_star = p if p_star_fixed is None else p_star_fixed
            n = wald_sample_size(PlanRequest(p_star=p_star, epsilon=eps, alpha=alpha)).n
            row = [str(scheme), fmt_n_sig2(eps), canonical_p(p_star), canonical_p(p),
                   fmt_n_sig2(n)]
            for kind in ALL_KINDS:
                cpr = coverage_probability(DesignPoint(kind, n, p, alpha), tail_tol)
                row.append(fmt_pct(cpr))
            rows.append(row)
    header = (["scheme", "epsilon", "p_star", "p", "n"]
              + [f"{k.value}_cpr_pct" for k in ALL_KINDS])
    return Table("B1", "Coverage comparison under fixed margin-of-error schemes",
                 header, rows)


def _relative_moe_coverage(alpha: float, tail_tol: float) -> Table:
    rows = []
    for p_star in P_DECADES:
        req = PlanRequest(p_star=p_star, eps_r_tilde=0.75, alpha=alpha)
        n = wald_sample_size(req).n
        row = [canonical_p(p_star), fmt_n_sig2(n)]
        for kind in ALL_KINDS:
            cpr = coverage_probability(DesignPoint(kind, n, p_star, alpha), tail_tol)
            row.append(fmt_pct(cpr))
        rows.append(row)
    header = ["p_star", "n"] + [f"{k.value}_cpr_pct" for k in ALL_KINDS]
    return Table("B2", "Coverage comparison at relative margin of error 0.75",
                 header, rows)


def canonical_p(p: float) -> str:
    """Decade proportions render as exact decimals (0.1, 1e-05, ...)."""
    return repr(p) if p >= 1e-4 else f"{p:.0e}"


def build_table(table_id: str, alpha: float = 0.05,
                tail_tol: float = DEFAULT_TAIL_TOL) -> Table:
    """Build one of the canned comparison tables by id."""
    table_id = str(table_id).upper()
    if table_id == "1":
        return _sample_size_comparison(alpha)
    if table_id == "2":
        return _fixed_moe_sample_sizes(alpha, tail_tol)
    if table_id == "3":
        return _variable_moe_sample_sizes(alpha, tail_tol)
    if table_id == "4":
        return _threshold_table()
    if table_id in PERFORMANCE_GRIDS:
        return _performance_table(table_id, alpha, tail_tol)
    if table_id == "B1":
        return _fixed_moe_coverage(alpha, tail_tol)
    if table_id == "B2":
        return _relative_moe_coverage(alpha, tail_tol)
    raise ValueError(f"unknown table id {table_id!r}; expected one of {TABLE_IDS}")
