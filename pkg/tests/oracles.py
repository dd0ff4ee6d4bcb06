"""Independent reference implementations used only by the tests.

These deliberately avoid the code paths of the package under test:
the normal CDF comes from a power series, binomial probabilities from
exact rational arithmetic, and coverage from Monte Carlo simulation.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def erf_series(t: float) -> float:
    """erf via the all-positive confluent series (stable for |t| <= 7)."""
    if t < 0:
        return -erf_series(-t)
    if t == 0:
        return 0.0
    total = term = t
    k = 0
    tt = 2.0 * t * t
    while True:
        k += 1
        term *= tt / (2 * k + 1)
        new = total + term
        if new == total:
            break
        total = new
        if k > 500:
            raise RuntimeError("erf series did not converge")
    return (2.0 / math.sqrt(math.pi)) * math.exp(-t * t) * total


def normal_cdf_series(z: float) -> float:
    return 0.5 * (1.0 + erf_series(z / math.sqrt(2.0)))


def normal_quantile_bisect(q: float, tol: float = 1e-13) -> float:
    """Bisection on the series CDF."""
    lo, hi = -12.0, 12.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if normal_cdf_series(mid) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def exact_log_binomial_pmf(n: int, x: int, p: float) -> float:
    """log pmf from exact rational arithmetic on the binary value of p."""
    pf = Fraction(p)
    pmf = math.comb(n, x) * pf**x * (1 - pf) ** (n - x)
    # normalize the huge ratio near 1 before converting, so the only
    # roundings are one float conversion and one multiply
    num, den = pmf.numerator, pmf.denominator
    shift = num.bit_length() - den.bit_length()
    if shift >= 0:
        reduced = Fraction(num, den << shift)
    else:
        reduced = Fraction(num << -shift, den)
    return math.log(float(reduced)) + shift * math.log(2.0)


def mc_coverage(kind_bounds, n: int, p: float, reps: int, seed: int) -> tuple[float, float]:
    """Monte Carlo coverage estimate and its standard error.

    ``kind_bounds(x)`` must return clipped (lower, upper) for outcome x.
    """
    rng = np.random.default_rng(seed)
    draws = rng.binomial(n, p, size=reps)
    values, counts = np.unique(draws, return_counts=True)
    hits = 0
    for x, cnt in zip(values, counts):
        lo, hi = kind_bounds(int(x))
        if lo <= p <= hi:
            hits += int(cnt)
    cpr_hat = hits / reps
    se = math.sqrt(max(cpr_hat * (1.0 - cpr_hat), 1e-12) / reps)
    return cpr_hat, se
