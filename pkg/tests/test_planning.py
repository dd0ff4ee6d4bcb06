"""Planning tests: closed forms, searches, cross-checks, thresholds."""

import math

import pytest

from binom_rare.estimators import EstimatorKind
from binom_rare.numerics import NonConvergenceError, normal_quantile
from binom_rare.planning import (PlanRequest, agresti_coull_sample_size,
                                 clopper_pearson_sample_size, eps_r_threshold,
                                 generic_sample_size, planned_half_width,
                                 relative_to_absolute, sample_sizes,
                                 wald_sample_size, wilson_sample_size)

W = EstimatorKind.WALD
CP = EstimatorKind.CLOPPER_PEARSON
WS = EstimatorKind.WILSON
AC = EstimatorKind.AGRESTI_COULL


def wilson_quadratic_oracle(p_star, eps, alpha):
    """Solve the score half-width equation for n with 50-digit arithmetic."""
    import mpmath as mp
    mp.mp.dps = 50
    z = mp.mpf(normal_quantile(1 - alpha / 2))
    e, p = mp.mpf(eps), mp.mpf(p_star)
    pq = p * (1 - p)
    # e^2 (n + z^2)^2 = z^2 (pq n + z^2 / 4) as a quadratic in n
    a2 = e * e
    a1 = 2 * e * e * z * z - z * z * pq
    a0 = e * e * z ** 4 - z ** 4 / 4
    root = (-a1 + mp.sqrt(a1 * a1 - 4 * a2 * a0)) / (2 * a2)
    return int(mp.ceil(root))


class TestPlanRequest:
    def test_epsilon_from_relative(self):
        req = PlanRequest(p_star=1e-3, eps_r_tilde=0.4)
        assert req.epsilon == pytest.approx(4e-4, rel=1e-15)

    def test_relative_from_epsilon(self):
        req = PlanRequest(p_star=0.1, epsilon=0.05)
        assert req.eps_r_tilde == pytest.approx(0.5, rel=1e-15)

    def test_exactly_one_margin(self):
        with pytest.raises(ValueError):
            PlanRequest(p_star=0.1)
        with pytest.raises(ValueError):
            PlanRequest(p_star=0.1, epsilon=0.01, eps_r_tilde=0.1)

    def test_warning_flags(self):
        assert PlanRequest(p_star=0.1, eps_r_tilde=1.5).exceeds_unity
        assert PlanRequest(p_star=0.1, eps_r_tilde=1.0).outside_recommended
        assert not PlanRequest(p_star=0.1, eps_r_tilde=1.0).exceeds_unity
        assert PlanRequest(p_star=0.1, eps_r_tilde=0.05).outside_recommended
        ok = PlanRequest(p_star=0.1, eps_r_tilde=0.3)
        assert not ok.outside_recommended and ok.warnings == ()
        assert PlanRequest(p_star=1e-5, eps_r_tilde=1.0).warnings


class TestWaldSampleSize:
    def test_conservative_half(self):
        assert wald_sample_size(PlanRequest(p_star=0.5, epsilon=0.04)).n == 601

    def test_relative_margin(self):
        assert wald_sample_size(PlanRequest(p_star=0.1, eps_r_tilde=0.4)).n == 217

    def test_floor_of_one(self):
        # ceiling of a value below one
        res = wald_sample_size(PlanRequest(p_star=1e-4, epsilon=4e-2))
        assert res.n == 1

    def test_exact_ceiling_boundary(self):
        z = normal_quantile(0.975)
        eps = math.sqrt(z * z * 0.25)  # closed form equals exactly 1
        assert wald_sample_size(PlanRequest(p_star=0.5, epsilon=eps)).n == 1

    @pytest.mark.parametrize("p_star,eps,expected", [
        (1e-1, 4e-2, 217), (1e-2, 4e-2, 24), (1e-3, 4e-2, 3),
        (1e-4, 4e-2, 1), (1e-5, 4e-2, 1),
        (0.5, 4e-2, 601), (0.5, 4e-4, 6_002_280),
        (1e-1, 4e-4, 2_160_821), (1e-2, 4e-4, 237_691),
        (1e-3, 4e-4, 23_986), (1e-4, 4e-4, 2_401), (1e-5, 4e-4, 241),
    ])
    def test_fixed_scheme_values(self, p_star, eps, expected):
        assert wald_sample_size(PlanRequest(p_star=p_star, epsilon=eps)).n == expected

    def test_closed_form_equals_search(self):
        for p_star, ert in [(0.1, 0.4), (1e-3, 0.2), (0.5, 0.1), (1e-5, 0.75)]:
            req = PlanRequest(p_star=p_star, eps_r_tilde=ert)
            assert wald_sample_size(req).n == generic_sample_size(W, req).n


class TestWilsonSampleSize:
    def test_reference_point(self):
        res = wilson_sample_size(PlanRequest(p_star=0.1, epsilon=0.04))
        assert res.n == 219
        assert res.method == "closed_form"
        assert res.cross_check_n == 219
        assert res.consistent

    def test_against_quadratic_oracle(self):
        for p_star, eps in [(0.1, 0.04), (1e-2, 4e-3), (1e-3, 2e-4), (0.3, 0.05)]:
            res = wilson_sample_size(PlanRequest(p_star=p_star, epsilon=eps))
            assert res.n == wilson_quadratic_oracle(p_star, eps, 0.05)

    def test_search_consistency_scaling(self):
        res = wilson_sample_size(PlanRequest(p_star=0.1, eps_r_tilde=0.05))
        assert res.cross_check_n is not None
        assert abs(res.n - res.cross_check_n) <= 1
        assert 1.3e4 <= res.n <= 1.5e4  # same order as the matching direct size

    def test_wide_margin_falls_back_to_search(self):
        req = PlanRequest(p_star=0.5, epsilon=0.6)
        res = wilson_sample_size(req)
        assert res.n == generic_sample_size(WS, req).n == 1


class TestAgrestiCoullSampleSize:
    def test_reference_point(self):
        res = agresti_coull_sample_size(PlanRequest(p_star=0.1, epsilon=0.04))
        assert res.n == 226
        assert res.method == "search"

    def test_rare_event_point(self):
        res = agresti_coull_sample_size(PlanRequest(p_star=1e-2, epsilon=4e-3))
        assert res.n == 2547  # 2.5e3 at two significant digits

    def test_half_width_fixed_point(self):
        # epsilon equal to the half-width at n = 100 must return exactly 100
        eps = planned_half_width(AC, 100, 0.07, 0.05)
        res = agresti_coull_sample_size(PlanRequest(p_star=0.07, epsilon=eps))
        assert res.n == 100

    def test_published_expression_recorded_not_trusted(self):
        res = agresti_coull_sample_size(PlanRequest(p_star=0.1, epsilon=0.04))
        assert res.cross_check_n is not None
        assert res.discrepancy is not None
        assert not res.consistent


class TestClopperPearsonSampleSize:
    @pytest.mark.parametrize("p_star,expected", [
        (1e-1, 296), (1e-2, 3_322), (1e-3, 33_581),
        (1e-4, 336_173), (1e-5, 3_362_087)])
    def test_reference_points(self, p_star, expected):
        res = clopper_pearson_sample_size(
            PlanRequest(p_star=p_star, eps_r_tilde=0.4))
        assert res.n == expected

    def test_against_linear_scan(self):
        # small enough to scan every n directly with the same criterion
        req = PlanRequest(p_star=0.1, eps_r_tilde=1.0)
        res = clopper_pearson_sample_size(req)
        scan = next(n for n in range(1, 10_000)
                    if planned_half_width(CP, n, req.p_star, req.alpha)
                    <= req.epsilon)
        assert res.n == scan

    def test_matches_generic_search(self):
        for p_star, ert in [(0.1, 0.4), (1e-2, 0.3), (1e-3, 0.75)]:
            req = PlanRequest(p_star=p_star, eps_r_tilde=ert)
            assert clopper_pearson_sample_size(req).n == \
                generic_sample_size(CP, req).n


class TestGenericSearch:
    def test_equals_closed_forms(self):
        req = PlanRequest(p_star=0.1, epsilon=0.04)
        assert generic_sample_size(W, req).n == 217
        assert generic_sample_size(WS, req).n == 219
        assert generic_sample_size(AC, req).n == 226

    def test_unreachable_criterion_raises(self):
        with pytest.raises(NonConvergenceError):
            generic_sample_size(W, PlanRequest(p_star=0.5, epsilon=1e-9))

    def test_half_width_decreases_with_n(self):
        for kind in (W, CP, WS, AC):
            h = [planned_half_width(kind, n, 0.02, 0.05)
                 for n in (50, 500, 5_000, 50_000)]
            assert h == sorted(h, reverse=True)


class TestMonotonicity:
    @pytest.mark.parametrize("kind", [W, CP, WS, AC])
    def test_sample_size_monotone_in_margin(self, kind):
        for p_star in (1e-1, 1e-3, 1e-5):
            sizes = [generic_sample_size(kind,
                                         PlanRequest(p_star=p_star,
                                                     eps_r_tilde=ert)).n
                     for ert in (0.1, 0.2, 0.4, 0.75)]
            assert sizes == sorted(sizes, reverse=True)

    @pytest.mark.parametrize("kind", [W, CP, WS, AC])
    def test_sample_size_grows_as_p_star_shrinks(self, kind):
        sizes = [generic_sample_size(kind, PlanRequest(p_star=p_star,
                                                       eps_r_tilde=0.4)).n
                 for p_star in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)]
        assert sizes == sorted(sizes)


class TestThreshold:
    @pytest.mark.parametrize("p_star,alpha,a,expected", [
        (0.1, 0.05, 5, 0.83),
        (1e-3, 0.01, 10, 0.81),
        (0.1, 0.10, 10, 0.49),
        (1e-5, 0.01, 5, 1.15),
    ])
    def test_reference_values(self, p_star, alpha, a, expected):
        assert round(eps_r_threshold(p_star, alpha, a), 2) == expected

    def test_algebraic_identity(self):
        z = normal_quantile(1 - 0.05 / 2)
        p_star = 0.2
        a = z * z * (1 - p_star)
        assert eps_r_threshold(p_star, 0.05, a) == pytest.approx(1.0, rel=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            eps_r_threshold(0.1, 0.05, 0.0)


class TestRelativeToAbsolute:
    def test_values(self):
        assert relative_to_absolute(0.4, 1e-3) == pytest.approx(4e-4, rel=1e-15)
        assert relative_to_absolute(1.0, 0.037) == 0.037
        assert relative_to_absolute(0.05, 0.1) == pytest.approx(5e-3, rel=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            relative_to_absolute(0.0, 0.1)
        with pytest.raises(ValueError):
            relative_to_absolute(0.4, 1.0)


class TestSampleSizes:
    def test_batch_order_and_warnings(self):
        req = PlanRequest(p_star=1e-5, eps_r_tilde=1.0)
        results = sample_sizes(req)
        assert [r.kind for r in results] == [W, CP, WS, AC]
        assert all(r.warnings for r in results)

    def test_reference_row(self):
        results = sample_sizes(PlanRequest(p_star=1e-5, eps_r_tilde=0.4))
        assert [r.n for r in results] == [2_400_888, 3_362_087, 2_493_356,
                                          2_579_642]
