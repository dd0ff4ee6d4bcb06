"""Sample-size determination for a target margin of error.

Given an anticipated proportion p* and a margin of error (absolute
epsilon, or relative eps_r_tilde = epsilon / p*), find the smallest n at
which each estimator's planned half-width at p* drops to epsilon.

The Wald and Wilson sizes have closed forms.  The Agresti-Coull and exact
(Clopper-Pearson) sizes are found by monotone search; the published
cube-root expression for the Agresti-Coull case is evaluated as a recorded
cross-check only, since it omits the terms that would turn the cubic's
discriminants into a root.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .estimators import EstimatorKind
from .numerics import NonConvergenceError, beta_quantile, normal_quantile

__all__ = [
    "PlanRequest",
    "PlanResult",
    "planned_half_width",
    "wald_sample_size",
    "wilson_sample_size",
    "agresti_coull_sample_size",
    "clopper_pearson_sample_size",
    "generic_sample_size",
    "sample_sizes",
    "eps_r_threshold",
    "relative_to_absolute",
]

SEARCH_CAP = 10_000_000_000  # largest n any search will consider

RECOMMENDED_EPS_R = (0.1, 0.5)


def relative_to_absolute(eps_r_tilde: float, p_star: float) -> float:
    """Convert a relative margin of error to absolute: epsilon = eps_r_tilde * p*."""
    if not eps_r_tilde > 0.0:
        raise ValueError(f"eps_r_tilde must be positive, got {eps_r_tilde!r}")
    if not 0.0 < p_star < 1.0:
        raise ValueError(f"p_star must lie in (0, 1), got {p_star!r}")
    return eps_r_tilde * p_star


@dataclass(frozen=True)
class PlanRequest:
    """Planning inputs: p*, exactly one of epsilon / eps_r_tilde, and alpha.

    Warning flags are advisory; planning proceeds regardless.
    """

    p_star: float
    epsilon: float | None = None
    eps_r_tilde: float | None = None
    alpha: float = 0.05

    def __post_init__(self) -> None:
        if math.isnan(self.p_star) or not 0.0 < self.p_star < 1.0:
            raise ValueError(f"p_star must lie in (0, 1), got {self.p_star!r}")
        if math.isnan(self.alpha) or not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if (self.epsilon is None) == (self.eps_r_tilde is None):
            raise ValueError("exactly one of epsilon and eps_r_tilde must be given")
        if self.epsilon is None:
            if not self.eps_r_tilde > 0.0:
                raise ValueError(f"eps_r_tilde must be positive, got {self.eps_r_tilde!r}")
            object.__setattr__(self, "epsilon", self.eps_r_tilde * self.p_star)
        else:
            if not self.epsilon > 0.0:
                raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
            object.__setattr__(self, "eps_r_tilde", self.epsilon / self.p_star)

    @property
    def exceeds_unity(self) -> bool:
        return self.eps_r_tilde > 1.0

    @property
    def outside_recommended(self) -> bool:
        lo, hi = RECOMMENDED_EPS_R
        return not lo <= self.eps_r_tilde <= hi

    @property
    def warnings(self) -> tuple[str, ...]:
        notes = []
        if self.exceeds_unity:
            notes.append(
                f"relative margin of error {self.eps_r_tilde:.3g} exceeds 1: "
                "the interval is wider than the proportion itself")
        elif self.outside_recommended:
            notes.append(
                f"relative margin of error {self.eps_r_tilde:.3g} is outside "
                f"the recommended range [{RECOMMENDED_EPS_R[0]}, {RECOMMENDED_EPS_R[1]}]")
        return tuple(notes)


@dataclass(frozen=True)
class PlanResult:
    """Solved sample size for one estimator."""

    kind: EstimatorKind
    n: int
    method: str  # "closed_form" or "search"
    cross_check_n: int | None = None
    discrepancy: str | None = None
    warnings: tuple[str, ...] = field(default=())

    @property
    def consistent(self) -> bool:
        return self.cross_check_n is None or abs(self.n - self.cross_check_n) <= 1


# ---------------------------------------------------------------------------
# planned half-width criteria
# ---------------------------------------------------------------------------

def _cp_bound_distances(n: int, p_star: float, alpha: float) -> tuple[float, float]:
    # real-valued expected count x* = n p*; distances of the two bounds from p*
    x_star = n * p_star
    lower = beta_quantile(alpha / 2.0, x_star, n - x_star + 1.0)
    upper = beta_quantile(1.0 - alpha / 2.0, x_star + 1.0, n - x_star)
    return p_star - lower, upper - p_star


def planned_half_width(kind: EstimatorKind, n: int, p_star: float, alpha: float,
                       z: float | None = None) -> float:
    """Anticipated half-width at p-hat = p* used as the planning criterion."""
    kind = EstimatorKind(kind)
    if kind is EstimatorKind.CLOPPER_PEARSON:
        return max(_cp_bound_distances(n, p_star, alpha))
    if z is None:
        z = normal_quantile(1.0 - alpha / 2.0)
    if kind is EstimatorKind.WALD:
        return z * math.sqrt(p_star * (1.0 - p_star) / n)
    if kind is EstimatorKind.WILSON:
        z2 = z * z
        return (z * math.sqrt(p_star * (1.0 - p_star) / n + z2 / (4.0 * n * n))
                / (1.0 + z2 / n))
    z2 = z * z
    n_tilde = n + z2
    p_tilde = (n * p_star + z2 / 2.0) / n_tilde
    return z * math.sqrt(p_tilde * (1.0 - p_tilde) / n_tilde)


def _search_min_n(pred, cap: int = SEARCH_CAP) -> int:
    """Smallest n >= 1 with pred(n) true, by doubling bracket and bisection."""
    if pred(1):
        return 1
    lo, hi = 1, 2
    while not pred(hi):
        lo = hi
        hi *= 2
        if hi > cap:
            raise NonConvergenceError(f"sample-size criterion unmet for any n <= {cap}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _confirm_scan(pred, n: int, radius: int) -> int:
    # bisection assumes monotonicity; re-check a small neighborhood
    for m in range(max(1, n - radius), n + radius + 1):
        if pred(m):
            return m
    return n


# ---------------------------------------------------------------------------
# per-estimator planners
# ---------------------------------------------------------------------------

def wald_sample_size(req: PlanRequest) -> PlanResult:
    """n = ceil(z^2 p* (1 - p*) / epsilon^2), at least 1."""
    z = normal_quantile(1.0 - req.alpha / 2.0)
    n = math.ceil(z * z * req.p_star * (1.0 - req.p_star) / (req.epsilon ** 2))
    return PlanResult(EstimatorKind.WALD, max(1, n), "closed_form",
                      warnings=req.warnings)


def wilson_sample_size(req: PlanRequest) -> PlanResult:
    """Larger root of the quadratic the score half-width satisfies in n.

    n = ceil( (z^2 / 2 eps^2) [ (p* q* - 2 eps^2)
              + sqrt(eps^2 (1 - 4 p* q*) + (p* q*)^2) ] ),
    cross-checked against the generic search.
    """
    z = normal_quantile(1.0 - req.alpha / 2.0)
    eps = req.epsilon
    pq = req.p_star * (1.0 - req.p_star)
    radicand = eps * eps * (1.0 - 4.0 * pq) + pq * pq
    search_n = generic_sample_size(EstimatorKind.WILSON, req).n
    if radicand < 0.0:
        return PlanResult(EstimatorKind.WILSON, search_n, "search",
                          warnings=req.warnings)
    n_closed = math.ceil((z * z / (2.0 * eps * eps))
                         * ((pq - 2.0 * eps * eps) + math.sqrt(radicand)))
    if n_closed < 1:
        return PlanResult(EstimatorKind.WILSON, search_n, "search",
                          warnings=req.warnings)
    discrepancy = None
    if abs(n_closed - search_n) > 1:
        discrepancy = (f"closed form {n_closed} differs from search {search_n} "
                       "by more than the ceiling tie allowance")
    return PlanResult(EstimatorKind.WILSON, n_closed, "closed_form",
                      cross_check_n=search_n, discrepancy=discrepancy,
                      warnings=req.warnings)


def _agresti_coull_formula_n(req: PlanRequest) -> int | None:
    # Published cube-root discriminant expression, taken literally.  Its
    # discriminants usually make the radical complex (three-real-root case)
    # and the surrounding root terms are missing, so the output is recorded
    # for comparison only and never trusted.
    z = normal_quantile(1.0 - req.alpha / 2.0)
    z2 = z * z
    e2 = req.epsilon ** 2
    pq = req.p_star * (1.0 - req.p_star)
    d0 = 16.0 * z2 * z2 * (3.0 * e2 + pq) ** 2 - 24.0 * e2 * z2 * (6.0 * e2 - 1.0)
    d1 = (128.0 * z2 ** 3 * (3.0 * e2 + pq) ** 3
          - 288.0 * e2 * z2 * z2 * (3.0 * e2 + pq) * (6.0 * e2 - 1.0)
          + 432.0 * e2 * e2 * z2 ** 3 * (4.0 * e2 - 1.0))
    s = cmath.sqrt(complex(d1 * d1 - 4.0 * d0 ** 3, 0.0))
    candidates = [((d1 + sign * s) / 2.0) ** (1.0 / 3.0) for sign in (1.0, -1.0)]
    best = max(c.real for c in candidates)
    if not math.isfinite(best):
        return None
    return max(1, math.ceil(best))


def agresti_coull_sample_size(req: PlanRequest) -> PlanResult:
    """Monotone search on the adjusted-Wald half-width; formula as cross-check."""
    n = generic_sample_size(EstimatorKind.AGRESTI_COULL, req).n
    cross = _agresti_coull_formula_n(req)
    discrepancy = None
    if cross is not None and abs(n - cross) > 1:
        discrepancy = (f"published cube-root expression gives {cross}, search "
                       f"gives {n}; the expression is incomplete and the search "
                       "result is authoritative")
    return PlanResult(EstimatorKind.AGRESTI_COULL, n, "search",
                      cross_check_n=cross, discrepancy=discrepancy,
                      warnings=req.warnings)


def clopper_pearson_sample_size(req: PlanRequest) -> PlanResult:
    """Smallest n at which both exact-bound distances from p* are <= epsilon.

    n_LB and n_UB are each found by doubling bracket plus bisection on n,
    then a +/-2 confirmation scan; the answer is max(n_LB, n_UB).
    """
    p_star, eps, alpha = req.p_star, req.epsilon, req.alpha

    def lower_ok(n: int) -> bool:
        return _cp_bound_distances(n, p_star, alpha)[0] <= eps

    def upper_ok(n: int) -> bool:
        return _cp_bound_distances(n, p_star, alpha)[1] <= eps

    n_lb = _confirm_scan(lower_ok, _search_min_n(lower_ok), 2)
    n_ub = _confirm_scan(upper_ok, _search_min_n(upper_ok), 2)
    return PlanResult(EstimatorKind.CLOPPER_PEARSON, max(n_lb, n_ub), "search",
                      warnings=req.warnings)


def generic_sample_size(kind: EstimatorKind, req: PlanRequest) -> PlanResult:
    """Uniform search planner: smallest n with planned half-width <= epsilon."""
    kind = EstimatorKind(kind)
    z = normal_quantile(1.0 - req.alpha / 2.0)

    def ok(n: int) -> bool:
        return planned_half_width(kind, n, req.p_star, req.alpha, z) <= req.epsilon

    n = _confirm_scan(ok, _search_min_n(ok), 5)
    return PlanResult(kind, n, "search", warnings=req.warnings)


_PLANNERS = {
    EstimatorKind.WALD: wald_sample_size,
    EstimatorKind.CLOPPER_PEARSON: clopper_pearson_sample_size,
    EstimatorKind.WILSON: wilson_sample_size,
    EstimatorKind.AGRESTI_COULL: agresti_coull_sample_size,
}


def sample_sizes(req: PlanRequest,
                 kinds: tuple[EstimatorKind, ...] | None = None) -> list[PlanResult]:
    """Plan for several estimators at once, in the given order."""
    if kinds is None:
        kinds = tuple(EstimatorKind)
    return [_PLANNERS[EstimatorKind(k)](req) for k in kinds]


def eps_r_threshold(p_star: float, alpha: float, a: float) -> float:
    """Largest relative margin of error compatible with n p* >= a:

    eps_r_tilde <= sqrt(z^2 (1 - p*) / a).
    """
    if not a > 0.0:
        raise ValueError(f"a must be positive, got {a!r}")
    if not 0.0 < p_star < 1.0:
        raise ValueError(f"p_star must lie in (0, 1), got {p_star!r}")
    if math.isnan(alpha) or not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    z = normal_quantile(1.0 - alpha / 2.0)
    return math.sqrt(z * z * (1.0 - p_star) / a)
