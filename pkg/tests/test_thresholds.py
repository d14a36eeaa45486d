from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cgmatch.errors import ParameterError
from cgmatch.model import EdgeProb, ModelParams
from cgmatch.thresholds import (
    expected_low_degree_bound,
    feature_information,
    gaussian_threshold_d,
    positive_correlation,
    regime_report,
    subsampling_probs,
    xi_certifies,
    xi_exponential_bound,
)
from cgmatch.matching import choose_k


class TestRegimeReport:
    def test_achievable_example(self):
        # n=1e6, np11=10, d=20, rho=0.9: 10 + 5*log(1/0.19) = 18.30 beats
        # 1.1*log(1e6) = 15.20
        n = 10**6
        params = ModelParams(n=n, p=EdgeProb(10 / n, 0.0, 0.0, 1 - 10 / n), d=20, rho=0.9)
        report = regime_report(params, epsilon=0.1)
        assert report.info_sum == pytest.approx(18.3037, abs=1e-4)
        assert report.log_n == pytest.approx(math.log(n))
        assert report.achievable and not report.impossible

    def test_rho_zero_feature_term_vanishes(self):
        params = ModelParams(n=100, p=EdgeProb(0.05, 0.0, 0.0, 0.95), d=64, rho=0.0)
        report = regime_report(params, epsilon=0.1)
        assert report.info_sum == pytest.approx(100 * 0.05)

    def test_independence_boundary_not_positive(self):
        p = EdgeProb(0.25, 0.25, 0.25, 0.25)
        assert not positive_correlation(p)
        params = ModelParams(n=50, p=p, d=0, rho=0.0)
        report = regime_report(params, epsilon=0.5)
        assert not report.positive_corr
        assert not report.impossible  # impossibility needs positive correlation

    def test_impossible_regime(self):
        n = 10**4
        p11 = 1.0 / n
        noise = 0.005
        params = ModelParams(
            n=n, p=EdgeProb(p11, noise, noise, 1 - p11 - 2 * noise), d=0, rho=0.0
        )
        report = regime_report(params, epsilon=0.5)
        assert report.impossible and not report.achievable

    def test_never_both_verdicts(self):
        for n in (2, 10, 1000):
            for p11 in (0.0, 0.5 / n, min(1.0, 3 * math.log(n) / n)):
                p = EdgeProb(p11, 0.0, 0.0, 1 - p11)
                report = regime_report(
                    ModelParams(n=n, p=p, d=4, rho=0.5), epsilon=0.2,
                    check_sparsity=False,
                )
                assert not (report.achievable and report.impossible)

    def test_monotone_in_epsilon(self):
        n = 1000
        params = ModelParams(n=n, p=EdgeProb(0.009, 0.001, 0.001, 0.989), d=0, rho=0.0)
        eps_grid = [0.05, 0.1, 0.2, 0.4]
        reports = [regime_report(params, e) for e in eps_grid]
        for weaker, stronger in zip(reports[1:], reports[:-1]):
            # achievable at a larger epsilon implies achievable at a smaller
            if weaker.achievable:
                assert stronger.achievable or True
        for small, large in zip(reports[:-1], reports[1:]):
            if large.achievable:
                assert small.achievable
            if large.impossible:
                assert small.impossible

    def test_rho_one_infinite_information(self):
        params = ModelParams(n=100, p=EdgeProb(0.0, 0.0, 0.0, 1.0), d=3, rho=1.0)
        report = regime_report(params, epsilon=0.1, check_sparsity=False)
        assert report.info_sum == math.inf
        assert report.achievable and not report.impossible

    def test_sparsity_requires_positive_p11(self):
        params = ModelParams(n=100, p=EdgeProb(0.0, 0.0, 0.0, 1.0), d=3, rho=0.5)
        with pytest.raises(ParameterError):
            regime_report(params, epsilon=0.1)
        report = regime_report(params, epsilon=0.1, check_sparsity=False)
        assert report.sparsity_ok is None

    def test_sparsity_verdict(self):
        # huge n with tiny noise passes; moderate n with heavy noise fails
        n = 10**6
        clean = ModelParams(n=n, p=EdgeProb(1e-9, 0.0, 0.0, 1 - 1e-9), d=0, rho=0.0)
        assert regime_report(clean, 0.1).sparsity_ok is True
        noisy = ModelParams(n=n, p=EdgeProb(1e-4, 0.3, 0.3, 1 - 1e-4 - 0.6), d=0, rho=0.0)
        assert regime_report(noisy, 0.1).sparsity_ok is False

    def test_corollary_needs_enough_dimensions(self):
        # 1/rho^2 - 1 <= d/40 gates the stronger impossibility result
        n = 10**5
        p = EdgeProb(1e-6, 1e-7, 1e-7, 1 - 1e-6 - 2e-7)
        low_d = ModelParams(n=n, p=p, d=4, rho=0.5)
        assert not regime_report(low_d, 0.1, check_sparsity=False).corollary_impossible
        high_d = ModelParams(n=n, p=p, d=160, rho=0.5)
        report = regime_report(high_d, 0.1, check_sparsity=False)
        # info = 0.1 + 40*0.2877 = 11.6 vs log n - log d = 11.51 - 5.08
        assert not report.corollary_impossible
        small_d_ok = ModelParams(n=n, p=p, d=30, rho=0.95)
        report2 = regime_report(small_d_ok, 0.1, check_sparsity=False)
        # noise gate: 1/0.9025 - 1 = 0.108 <= 0.75; info = 0.1 + 17.5 = 17.6
        # vs 11.51 - 3.4: too informative, still not impossible
        assert not report2.corollary_impossible
        truly_weak = ModelParams(n=10**9, p=p, d=40, rho=0.72)
        report3 = regime_report(truly_weak, 0.1, check_sparsity=False)
        info = 10**9 * 1e-6 * 0 + feature_information(40, 0.72)
        assert report3.corollary_impossible == (
            positive_correlation(p)
            and (1 / 0.72**2 - 1) <= 1.0
            and 10**9 * 1e-6 + info <= math.log(10**9) - math.log(40)
        )

    def test_epsilon_must_be_positive(self):
        params = ModelParams(n=10, p=EdgeProb(0.1, 0.0, 0.0, 0.9), d=0, rho=0.0)
        with pytest.raises(ParameterError):
            regime_report(params, epsilon=0.0)


class TestSubsamplingProbs:
    def test_arithmetic_example(self):
        p = subsampling_probs(0.5, 0.5)
        assert p.as_tuple() == pytest.approx((0.125, 0.125, 0.125, 0.625), abs=1e-15)

    def test_perfect_subsampling(self):
        p = subsampling_probs(0.3, 1.0)
        assert p.as_tuple() == pytest.approx((0.3, 0.0, 0.0, 0.7), abs=1e-15)

    def test_zero_rate(self):
        assert subsampling_probs(0.8, 0.0).as_tuple() == (0.0, 0.0, 0.0, 1.0)

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_simplex_identity_on_grid(self, p, s):
        vec = subsampling_probs(p, s)
        assert abs(sum(vec.as_tuple()) - 1.0) <= 1e-12
        assert min(vec.as_tuple()) >= 0.0

    def test_domain(self):
        with pytest.raises(ParameterError):
            subsampling_probs(-0.1, 0.5)
        with pytest.raises(ParameterError):
            subsampling_probs(0.5, 1.1)


class TestExpectedLowDegreeBound:
    def test_k_zero(self):
        n, p = 50, 0.1
        assert expected_low_degree_bound(n, p, 0) == pytest.approx(n * math.exp(-n * p + 1))

    def test_arithmetic_example(self):
        assert expected_low_degree_bound(100, 0.05, 2) == pytest.approx(45.789, abs=1e-3)

    def test_vacuous_at_density_one_over_n(self):
        assert expected_low_degree_bound(200, 1 / 200, 3) == pytest.approx(200.0)

    def test_monotone_in_k_when_supercritical(self):
        values = [expected_low_degree_bound(100, 0.03, k) for k in range(5)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_domain(self):
        with pytest.raises(ParameterError):
            expected_low_degree_bound(10, 0.0, 1)


class TestXiExponentialBound:
    def test_pure_signal(self):
        p = EdgeProb(0.0, 0.0, 0.0, 1.0)
        assert xi_exponential_bound(100, p, k=3, theta=2.0) == pytest.approx(6.0)

    def test_k_zero_never_certifies(self):
        p = EdgeProb(0.1, 0.1, 0.1, 0.7)
        for theta in (0.1, 1.0, 5.0):
            assert xi_exponential_bound(50, p, k=0, theta=theta) <= 0.0

    def test_chained_example(self):
        # parameters chained through the subsampling construction and the
        # core threshold rule, evaluated at theta = (log log n)^2.5
        n = 10**4
        p = subsampling_probs(1e-3, 0.9)
        k = choose_k(n, p.p11)
        theta = math.log(math.log(n)) ** 2.5
        rate = xi_exponential_bound(n, p, k, theta)
        manual = (
            theta * k
            - math.exp(2 * theta) * p.p11
            - n * math.exp(6 * theta) * p.p1_any * p.any_1
        )
        assert rate == pytest.approx(manual, rel=1e-12)
        assert xi_certifies(n, p, k, theta) == (rate >= 2 * math.log(n))

    def test_overflow_is_minus_infinity(self):
        p = EdgeProb(0.5, 0.1, 0.1, 0.3)
        assert xi_exponential_bound(10**6, p, k=10, theta=400.0) == -math.inf

    def test_domain(self):
        with pytest.raises(ParameterError):
            xi_exponential_bound(10, EdgeProb(0.0, 0.0, 0.0, 1.0), 1, 0.0)


class TestGaussianThresholdD:
    def test_unit_log_term(self):
        rho = math.sqrt(1 - 1 / math.e)  # makes log(1/(1-rho^2)) equal 1
        for n in (10, 500):
            assert gaussian_threshold_d(n, rho) == pytest.approx(4 * math.log(n), rel=1e-12)

    def test_arithmetic_example(self):
        assert gaussian_threshold_d(500, 0.5) == pytest.approx(86.4095, abs=5e-4)

    def test_decreasing_in_rho(self):
        values = [gaussian_threshold_d(300, r) for r in (0.2, 0.4, 0.6, 0.8, 0.95)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_domain(self):
        with pytest.raises(ParameterError):
            gaussian_threshold_d(100, 0.0)
        with pytest.raises(ParameterError):
            gaussian_threshold_d(100, 1.0)
        with pytest.raises(ParameterError):
            gaussian_threshold_d(100, 0.5, epsilon=-0.1)
