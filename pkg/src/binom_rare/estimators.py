"""The four classical binomial proportion interval estimators.

Wald, Clopper-Pearson (exact), Wilson (score) and Agresti-Coull
(adjusted Wald) intervals for an observed success count, with both the
raw algebraic bounds and their [0, 1]-clipped counterparts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .numerics import beta_quantile, normal_quantile

__all__ = [
    "EstimatorKind",
    "ALL_KINDS",
    "Observation",
    "Interval",
    "PropertyFlags",
    "interval",
    "wald_interval",
    "clopper_pearson_interval",
    "wilson_interval",
    "agresti_coull_interval",
    "properties",
    "raw_bounds",
]


class EstimatorKind(str, Enum):
    WALD = "wald"
    CLOPPER_PEARSON = "clopper-pearson"
    WILSON = "wilson"
    AGRESTI_COULL = "agresti-coull"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


ALL_KINDS: tuple[EstimatorKind, ...] = tuple(EstimatorKind)


@dataclass(frozen=True)
class Observation:
    """An observed (successes, trials) pair with a significance level."""

    x: int
    n: int
    alpha: float = 0.05

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.x, int) or not 0 <= self.x <= self.n:
            raise ValueError(f"x must be an integer in [0, {self.n}], got {self.x!r}")
        if math.isnan(self.alpha) or not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")

    @property
    def p_hat(self) -> float:
        return self.x / self.n


@dataclass(frozen=True)
class Interval:
    """Raw interval bounds plus the [0, 1]-clipped view used for reporting."""

    raw_lower: float
    raw_upper: float
    lower: float
    upper: float

    @classmethod
    def from_raw(cls, raw_lower: float, raw_upper: float) -> "Interval":
        if not raw_lower <= raw_upper:
            raise ValueError(f"invalid bounds: [{raw_lower!r}, {raw_upper!r}]")
        clip = lambda v: min(1.0, max(0.0, v))
        return cls(raw_lower, raw_upper, clip(raw_lower), clip(raw_upper))

    @property
    def raw_width(self) -> float:
        return self.raw_upper - self.raw_lower

    @property
    def raw_half_width(self) -> float:
        return 0.5 * self.raw_width

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def covers(self, p: float) -> bool:
        return self.lower <= p <= self.upper

    @property
    def degenerate(self) -> bool:
        return (self.lower, self.upper) in ((0.0, 0.0), (1.0, 1.0))


@dataclass(frozen=True)
class PropertyFlags:
    """Structural properties of an estimator's bounds."""

    symmetric: bool
    non_degenerate: bool
    bounds_conforming: bool
    closed_form: bool


_PROPERTY_TABLE = {
    EstimatorKind.WALD: PropertyFlags(True, False, False, True),
    EstimatorKind.CLOPPER_PEARSON: PropertyFlags(False, True, True, False),
    EstimatorKind.WILSON: PropertyFlags(False, True, True, True),
    EstimatorKind.AGRESTI_COULL: PropertyFlags(False, True, False, True),
}


def properties(kind: EstimatorKind) -> PropertyFlags:
    return _PROPERTY_TABLE[EstimatorKind(kind)]


# ---------------------------------------------------------------------------
# raw bound formulas
#
# x is accepted as a real number: the formulas are all well defined for
# fractional counts, which reporting-only datasets (a published p-hat with
# no integer count) rely on.
# ---------------------------------------------------------------------------

def _wald_bounds(x: float, n: float, z: float) -> tuple[float, float]:
    p_hat = x / n
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / n)
    return p_hat - half, p_hat + half


def _clopper_pearson_bounds(x: float, n: float, alpha: float) -> tuple[float, float]:
    lower = 0.0 if x <= 0 else beta_quantile(alpha / 2.0, x, n - x + 1.0)
    upper = 1.0 if x >= n else beta_quantile(1.0 - alpha / 2.0, x + 1.0, n - x)
    return lower, upper


def _wilson_bounds(x: float, n: float, z: float) -> tuple[float, float]:
    p_hat = x / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p_hat + z2 / (2.0 * n)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom
    # the score bounds live in [0, 1] algebraically; trim float overshoot
    return max(0.0, center - half), min(1.0, center + half)


def _agresti_coull_bounds(x: float, n: float, z: float) -> tuple[float, float]:
    z2 = z * z
    n_tilde = n + z2
    p_tilde = (x + z2 / 2.0) / n_tilde
    half = z * math.sqrt(p_tilde * (1.0 - p_tilde) / n_tilde)
    return p_tilde - half, p_tilde + half


def raw_bounds(kind: EstimatorKind, x: float, n: float, alpha: float,
               z: float | None = None) -> tuple[float, float]:
    """Raw (unclipped) bounds for any estimator at a possibly fractional x.

    ``z`` may be passed in to avoid recomputing the normal quantile in
    enumeration loops.
    """
    kind = EstimatorKind(kind)
    if kind is EstimatorKind.CLOPPER_PEARSON:
        return _clopper_pearson_bounds(x, n, alpha)
    if z is None:
        z = normal_quantile(1.0 - alpha / 2.0)
    if kind is EstimatorKind.WALD:
        return _wald_bounds(x, n, z)
    if kind is EstimatorKind.WILSON:
        return _wilson_bounds(x, n, z)
    return _agresti_coull_bounds(x, n, z)


def wald_interval(obs: Observation) -> Interval:
    """p-hat +/- z sqrt(p-hat (1 - p-hat) / n); degenerate at x = 0 and x = n."""
    z = normal_quantile(1.0 - obs.alpha / 2.0)
    return Interval.from_raw(*_wald_bounds(obs.x, obs.n, z))


def clopper_pearson_interval(obs: Observation) -> Interval:
    """Equal-tailed exact interval from beta quantiles."""
    return Interval.from_raw(*_clopper_pearson_bounds(obs.x, obs.n, obs.alpha))


def wilson_interval(obs: Observation) -> Interval:
    """Score interval: inverts the normal test at the score-centered estimate."""
    z = normal_quantile(1.0 - obs.alpha / 2.0)
    return Interval.from_raw(*_wilson_bounds(obs.x, obs.n, z))


def agresti_coull_interval(obs: Observation) -> Interval:
    """Wald-style interval around the adjusted estimate (x + z^2/2) / (n + z^2)."""
    z = normal_quantile(1.0 - obs.alpha / 2.0)
    return Interval.from_raw(*_agresti_coull_bounds(obs.x, obs.n, z))


_DISPATCH = {
    EstimatorKind.WALD: wald_interval,
    EstimatorKind.CLOPPER_PEARSON: clopper_pearson_interval,
    EstimatorKind.WILSON: wilson_interval,
    EstimatorKind.AGRESTI_COULL: agresti_coull_interval,
}


def interval(kind: EstimatorKind, obs: Observation) -> Interval:
    """Compute the interval of the requested kind for an observation."""
    return _DISPATCH[EstimatorKind(kind)](obs)
