"""Exact interval performance evaluation.

Coverage probability and expected width are computed by enumerating the
binomial outcome distribution over a tail-trimmed support window:

    CPr(n, p)  = sum_x pmf(x) 1(L_x <= p <= U_x)
    EW(n, p)   = sum_x pmf(x) (U_x - L_x)
    EMoE       = EW / 2,   eps_R = EMoE / p*

Coverage uses the clipped bounds with inclusive comparisons.  Width uses
the raw bounds: for the estimators whose bounds can leave [0, 1] the
half-width is the quantity the sample-size formulas control, and the
reference result tables are consistent with the raw convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

from .estimators import ALL_KINDS, EstimatorKind, raw_bounds
from .numerics import normal_quantile, pmf_window

__all__ = [
    "DEFAULT_TAIL_TOL",
    "ToleranceBand",
    "DesignPoint",
    "EvalResult",
    "GridResult",
    "coverage_probability",
    "expected_width",
    "expected_moe",
    "relative_moe",
    "classify",
    "evaluate",
    "evaluate_grid",
]

DEFAULT_TAIL_TOL = 1e-12


class ToleranceBand(IntEnum):
    """Performance bands, ordered from strictest to worst."""

    TARGET = 0
    ACCEPTABLE = 1
    MINIMALLY_ACCEPTABLE = 2
    UNACCEPTABLE = 3

    @property
    def label(self) -> str:
        return _BAND_LABELS[self]


_BAND_LABELS = {
    ToleranceBand.TARGET: "target",
    ToleranceBand.ACCEPTABLE: "acceptable",
    ToleranceBand.MINIMALLY_ACCEPTABLE: "minimally-acceptable",
    ToleranceBand.UNACCEPTABLE: "unacceptable",
}


@dataclass(frozen=True)
class DesignPoint:
    """One (estimator, n, p, alpha) evaluation point; p strictly interior."""

    kind: EstimatorKind
    n: int
    p: float
    alpha: float = 0.05

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", EstimatorKind(self.kind))
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if math.isnan(self.p) or not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie strictly inside (0, 1), got {self.p!r}")
        if math.isnan(self.alpha) or not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")


@dataclass(frozen=True)
class EvalResult:
    """Exact performance of one design point against a reference proportion."""

    point: DesignPoint
    p_star: float
    cpr: float
    ew: float
    emoe: float
    eps_r: float
    coverage_band: ToleranceBand
    moe_band: ToleranceBand


@dataclass(frozen=True)
class GridResult:
    """Rows in (kind-major, n-minor) order plus per-kind first fully-Target n."""

    rows: tuple[EvalResult, ...]
    first_target_n: dict[EstimatorKind, int | None]


def _bounds_for(point: DesignPoint, x: float, z: float) -> tuple[float, float]:
    return raw_bounds(point.kind, x, point.n, point.alpha, z)


def _cp_covered_span(point: DesignPoint, x_lo: int, x_hi: int) -> tuple[int, int] | None:
    """Covered outcome range for the exact interval via bound monotonicity.

    Both bounds increase with x, so the covered set {x : L_x <= p <= U_x}
    is contiguous; two binary searches with the actual clipped bounds find
    it in O(log window) quantile evaluations.
    """
    n, p, alpha = point.n, point.p, point.alpha
    cache: dict[int, tuple[float, float]] = {}

    def bounds(x: int) -> tuple[float, float]:
        got = cache.get(x)
        if got is None:
            lo, hi = raw_bounds(EstimatorKind.CLOPPER_PEARSON, x, n, alpha)
            got = (max(0.0, lo), min(1.0, hi))
            cache[x] = got
        return got

    if bounds(x_hi)[1] < p or bounds(x_lo)[0] > p:
        return None
    # smallest x with U_x >= p
    lo, hi = x_lo, x_hi
    if bounds(x_lo)[1] >= p:
        x_min = x_lo
    else:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if bounds(mid)[1] >= p:
                hi = mid
            else:
                lo = mid
        x_min = hi
    # largest x with L_x <= p
    lo, hi = x_lo, x_hi
    if bounds(x_hi)[0] <= p:
        x_max = x_hi
    else:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if bounds(mid)[0] <= p:
                lo = mid
            else:
                hi = mid
        x_max = lo
    if x_min > x_max:
        return None
    return x_min, x_max


def coverage_probability(point: DesignPoint, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """P(L_X <= p <= U_X), enumerated over the support window."""
    x_lo, probs = pmf_window(point.n, point.p, tail_tol)
    x_hi = x_lo + len(probs) - 1
    if point.kind is EstimatorKind.CLOPPER_PEARSON:
        span = _cp_covered_span(point, x_lo, x_hi)
        if span is None:
            return 0.0
        return math.fsum(probs[span[0] - x_lo: span[1] - x_lo + 1])
    z = normal_quantile(1.0 - point.alpha / 2.0)
    covered = []
    p = point.p
    for i, prob in enumerate(probs):
        lo, hi = _bounds_for(point, x_lo + i, z)
        if max(0.0, lo) <= p <= min(1.0, hi):
            covered.append(prob)
    return math.fsum(covered)


def expected_width(point: DesignPoint, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Probability-weighted raw interval width over the support window."""
    x_lo, probs = pmf_window(point.n, point.p, tail_tol)
    z = normal_quantile(1.0 - point.alpha / 2.0)
    terms = []
    for i, prob in enumerate(probs):
        lo, hi = _bounds_for(point, x_lo + i, z)
        terms.append(prob * (hi - lo))
    return math.fsum(terms)


def expected_moe(point: DesignPoint, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Expected margin of error: half the expected width."""
    return expected_width(point, tail_tol) / 2.0


def relative_moe(point: DesignPoint, p_star: float,
                 tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Expected margin of error relative to the reference proportion p*."""
    if not p_star > 0.0:
        raise ValueError(f"p_star must be positive, got {p_star!r}")
    return expected_moe(point, tail_tol) / p_star


def classify(cpr: float, eps_r: float, alpha: float) -> tuple[ToleranceBand, ToleranceBand]:
    """Band classification; boundaries are inclusive toward the better band.

    Coverage: within +/-1, 2, 3 percentage points of nominal.
    Relative margin of error: <= 0.5, <= 0.75, <= 1.
    """
    nominal_pct = 100.0 - alpha * 100.0
    dev = abs(cpr * 100.0 - nominal_pct)
    if dev <= 1.0:
        cov = ToleranceBand.TARGET
    elif dev <= 2.0:
        cov = ToleranceBand.ACCEPTABLE
    elif dev <= 3.0:
        cov = ToleranceBand.MINIMALLY_ACCEPTABLE
    else:
        cov = ToleranceBand.UNACCEPTABLE
    if eps_r <= 0.5:
        moe = ToleranceBand.TARGET
    elif eps_r <= 0.75:
        moe = ToleranceBand.ACCEPTABLE
    elif eps_r <= 1.0:
        moe = ToleranceBand.MINIMALLY_ACCEPTABLE
    else:
        moe = ToleranceBand.UNACCEPTABLE
    return cov, moe


def evaluate(point: DesignPoint, p_star: float | None = None,
             tail_tol: float = DEFAULT_TAIL_TOL) -> EvalResult:
    """Coverage, width and band classification in one enumeration pass."""
    if p_star is None:
        p_star = point.p
    if not p_star > 0.0:
        raise ValueError(f"p_star must be positive, got {p_star!r}")
    x_lo, probs = pmf_window(point.n, point.p, tail_tol)
    z = normal_quantile(1.0 - point.alpha / 2.0)
    p = point.p
    covered = []
    width_terms = []
    for i, prob in enumerate(probs):
        lo, hi = _bounds_for(point, x_lo + i, z)
        if max(0.0, lo) <= p <= min(1.0, hi):
            covered.append(prob)
        width_terms.append(prob * (hi - lo))
    cpr = math.fsum(covered)
    ew = math.fsum(width_terms)
    emoe = ew / 2.0
    eps_r = emoe / p_star
    cov_band, moe_band = classify(cpr, eps_r, point.alpha)
    return EvalResult(point, p_star, cpr, ew, emoe, eps_r, cov_band, moe_band)


def evaluate_grid(kinds: list[EstimatorKind] | tuple[EstimatorKind, ...] | None,
                  n_grid: list[int] | tuple[int, ...] | range,
                  p: float,
                  p_star: float | None = None,
                  alpha: float = 0.05,
                  tail_tol: float = DEFAULT_TAIL_TOL) -> GridResult:
    """Evaluate every (kind, n) cell; deterministic kind-major ordering.

    Also reports, per kind, the first n at which both the coverage and
    margin-of-error bands reach Target.
    """
    if kinds is None:
        kinds = ALL_KINDS
    kinds = tuple(EstimatorKind(k) for k in kinds)
    n_list = list(n_grid)
    rows: list[EvalResult] = []
    first_target: dict[EstimatorKind, int | None] = {}
    for kind in kinds:
        first_n = None
        for n in n_list:
            res = evaluate(DesignPoint(kind, n, p, alpha), p_star, tail_tol)
            rows.append(res)
            if (first_n is None
                    and res.coverage_band is ToleranceBand.TARGET
                    and res.moe_band is ToleranceBand.TARGET):
                first_n = n
        first_target[kind] = first_n
    return GridResult(tuple(rows), first_target)
