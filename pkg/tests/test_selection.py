"""Likelihood-ratio arithmetic, the boundary-mixture p-value, and the ladder."""

import numpy as np
import pytest
from scipy.stats import chi2

from hermite_counts import (
    CountHistogram,
    DataError,
    DomainError,
    HermiteParams,
    fit_mle,
    lrt_pvalue,
    lrt_statistic,
    sample_hermite,
    select_order,
)
from hermite_counts.selection import ZERO_STATISTIC_TOL


class TestLrtStatistic:
    def test_equal_likelihoods(self):
        assert lrt_statistic(-50.0, -50.0) == 0.0

    def test_arithmetic(self):
        assert lrt_statistic(-100.0, -101.353) == pytest.approx(2.706, rel=1e-12)

    def test_negative_raw_clamps(self):
        assert lrt_statistic(-101.0, -100.0) == 0.0

    def test_non_finite_rejected(self):
        with pytest.raises(DomainError):
            lrt_statistic(float("-inf"), -1.0)

    def test_nested_fits_never_meaningfully_negative(self, np_rng):
        # the order-(r+1) feasible set contains the order-r one
        for seed in range(12):
            truth = HermiteParams(tuple(np_rng.uniform(0.3, 2.0, size=2)))
            batch = sample_hermite(truth, 2_000, seed=500 + seed)
            hist = CountHistogram.from_observations(batch.values)
            raw = 2.0 * (fit_mle(hist, 3).loglik - fit_mle(hist, 2).loglik)
            assert raw >= -1e-6


class TestLrtPvalue:
    def test_atom_at_zero(self):
        assert lrt_pvalue(0.0) == 1.0

    def test_halved_chi_square_tail_points(self):
        assert lrt_pvalue(2.706) == pytest.approx(0.05, abs=1e-4)
        assert lrt_pvalue(3.841) == pytest.approx(0.025, abs=1e-4)

    def test_matches_scipy_half_survival(self):
        for d in (0.01, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0):
            assert lrt_pvalue(d) == pytest.approx(0.5 * chi2.sf(d, 1), rel=1e-12)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            lrt_pvalue(-0.1)

    def test_strictly_decreasing_and_continuous(self):
        grid = np.geomspace(1e-12, 60.0, 4000)
        values = np.array([lrt_pvalue(float(d)) for d in grid])
        assert np.all(np.diff(values) < 0.0)
        # approaches the mixture weight 0.5 from below the atom
        assert lrt_pvalue(1e-14) == pytest.approx(0.5, abs=1e-7)


class TestSelectOrder:
    def test_poisson_data_picks_order_one(self):
        batch = sample_hermite(HermiteParams((2.0,)), 10_000, seed=50_003)
        hist = CountHistogram.from_observations(batch.values)
        trace = select_order(hist, 3, 0.05)
        assert trace.chosen_order == 1
        assert trace.steps[0].rejected is False

    def test_order_two_data_picks_order_two(self):
        batch = sample_hermite(HermiteParams((1.0, 1.0)), 10_000, seed=110_001)
        hist = CountHistogram.from_observations(batch.values)
        trace = select_order(hist, 3, 0.05)
        assert trace.chosen_order == 2

    def test_degenerate_data_propagates(self):
        hist = CountHistogram.from_mapping({0: 100})
        with pytest.raises(DataError):
            select_order(hist, 2, 0.05)

    def test_bad_alpha(self):
        hist = CountHistogram.from_mapping({0: 5, 1: 5})
        for alpha in (0.0, 1.0, -0.2):
            with pytest.raises(DomainError):
                select_order(hist, 2, alpha)

    def test_r_max_one_fits_only_base(self):
        batch = sample_hermite(HermiteParams((2.0,)), 1_000, seed=5)
        hist = CountHistogram.from_observations(batch.values)
        trace = select_order(hist, 1, 0.05)
        assert trace.chosen_order == 1
        assert trace.steps == ()
        assert len(trace.fits) == 1

    def test_trace_is_deterministic(self):
        batch = sample_hermite(HermiteParams((1.0, 0.5)), 5_000, seed=17)
        hist = CountHistogram.from_observations(batch.values)
        first = select_order(hist, 3, 0.05)
        second = select_order(hist, 3, 0.05)
        assert first == second

    def test_statistics_clamped_non_negative(self):
        batch = sample_hermite(HermiteParams((2.0,)), 5_000, seed=19)
        hist = CountHistogram.from_observations(batch.values)
        trace = select_order(hist, 4, 0.5)
        assert all(step.statistic >= 0.0 for step in trace.steps)


class TestMixtureCalibration:
    def test_null_statistic_matches_the_mixture(self):
        # truth is order 1; the order-2 test statistic should put roughly
        # half its mass on the atom at zero and track chi-square(1) above it
        stats = []
        for rep in range(500):
            batch = sample_hermite(HermiteParams((2.0,)), 10_000, seed=220_000 + rep)
            hist = CountHistogram.from_observations(batch.values)
            d = lrt_statistic(fit_mle(hist, 2).loglik, fit_mle(hist, 1).loglik)
            stats.append(0.0 if d < ZERO_STATISTIC_TOL else d)
        stats = np.array(stats)
        zero_fraction = float(np.mean(stats == 0.0))
        assert 0.42 <= zero_fraction <= 0.58
        positive = stats[stats > 0.0]
        # chi-square(1): median 0.455, upper decile point 2.706
        assert abs(float(np.median(positive)) - 0.455) < 0.15
        assert abs(float(np.mean(positive <= 2.706)) - 0.90) < 0.06
