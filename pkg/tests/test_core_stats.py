"""Tests for samples, quantiles and summaries."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core.exceptions import DegenerateVariance, DomainError, EmptyInput, NonFiniteValue
from src.services.core_stats import (
    build_sample,
    chauvenet_deviations,
    median,
    quantile,
    summary,
    sum_of_squares,
)

finite_floats = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


@pytest.mark.unit
class TestBuildSample:
    def test_three_point_sample(self):
        """Test sorting and moments of a tiny sample."""
        sample = build_sample([3, 1, 2])

        assert list(sample.values) == [1.0, 2.0, 3.0]
        assert sample.n == 3
        assert sample.mean == 2.0
        assert sample.sd == 1.0

    def test_toy_moments(self, toy_sample):
        """Test mean and sd of the toy data."""
        assert toy_sample.mean == pytest.approx(22.136, abs=5e-4)
        assert toy_sample.sd == pytest.approx(44.160, abs=5e-4)

    def test_junior_moments(self, junior_sample):
        """Test mean and sd of the junior column."""
        assert junior_sample.n == 18
        assert junior_sample.mean == pytest.approx(3.51, abs=5e-3)
        assert junior_sample.sd == pytest.approx(2.08, abs=5e-3)

    def test_original_order_is_kept(self):
        """Test the input-order view and rank map."""
        sample = build_sample([5.0, -1.0, 2.0])

        assert list(sample.original) == [5.0, -1.0, 2.0]
        assert sample.value_at(0) == 5.0
        assert sample.sorted_position(0) == 2
        assert sample.sorted_position(1) == 0

    def test_arrays_are_read_only(self):
        """Test that sample arrays cannot be modified."""
        sample = build_sample([1.0, 2.0, 3.0])

        with pytest.raises(ValueError):
            sample.values[0] = 10.0
        with pytest.raises(ValueError):
            sample.original[0] = 10.0

    def test_single_value_has_zero_sd(self):
        """Test a one-value sample."""
        sample = build_sample([4.2])

        assert sample.sd == 0.0
        assert sample.q1 == sample.q3 == 4.2

    def test_empty_input(self):
        """Test refusal of an empty sample."""
        with pytest.raises(EmptyInput):
            build_sample([])

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite_reports_first_index(self, bad):
        """Test that the first non-finite index is reported."""
        with pytest.raises(NonFiniteValue) as excinfo:
            build_sample([1.0, 2.0, bad, bad])

        assert excinfo.value.index == 2
        assert excinfo.value.code == "NON_FINITE_VALUE"

    def test_accepts_generators(self):
        """Test building a sample from a generator."""
        sample = build_sample(float(x) for x in range(5))
        assert sample.n == 5


@pytest.mark.unit
class TestQuantile:
    def test_toy_quartiles_are_order_statistics(self, toy_sample):
        """Test toy quartiles that fall on order statistics."""
        assert quantile(toy_sample, 0.25) == -0.854
        assert quantile(toy_sample, 0.75) == 1.741
        assert toy_sample.q1 == -0.854
        assert toy_sample.q3 == 1.741

    def test_junior_quartiles(self, junior_sample):
        """Test junior quartiles."""
        assert round(junior_sample.q1, 2) == 2.61
        assert round(junior_sample.q3, 2) == 4.70

    def test_senior_quartiles(self, senior_sample):
        """Test senior quartiles."""
        assert (senior_sample.q1, senior_sample.q3) == pytest.approx((2.035, 4.9075), abs=1e-9)
        assert senior_sample.q1 == pytest.approx(2.04, abs=0.01)
        assert senior_sample.q3 == pytest.approx(4.91, abs=0.01)

    def test_middle_rank(self):
        """Test the median of an odd sample."""
        sample = build_sample([1, 2, 3])
        assert quantile(sample, 0.5) == 2.0
        assert median(sample) == 2.0

    def test_extremes(self, toy_sample):
        """Test quantiles at 0 and 1."""
        assert quantile(toy_sample, 0.0) == toy_sample.minimum
        assert quantile(toy_sample, 1.0) == toy_sample.maximum

    def test_linear_interpolation(self):
        """Test interpolation between order statistics."""
        sample = build_sample([1.0, 2.0, 4.0, 8.0])
        # h = 3 * 0.5 + 1 = 2.5, halfway between 2 and 4
        assert quantile(sample, 0.5) == 3.0

    @pytest.mark.parametrize("p", [-0.01, 1.01])
    def test_probability_outside_unit_interval(self, toy_sample, p):
        """Test probabilities outside [0, 1]."""
        with pytest.raises(DomainError):
            quantile(toy_sample, p)


@pytest.mark.unit
class TestDeviationsAndSummary:
    def test_toy_deviations(self, toy_sample):
        """Test standardized deviations of the toy data."""
        deviations = chauvenet_deviations(toy_sample)

        assert deviations[0] == pytest.approx(0.545, abs=5e-3)
        assert deviations[-1] == pytest.approx(1.763, abs=5e-3)
        # no deviation reaches c_9 = 1.915
        assert deviations.max() < 1.915

    def test_deviations_need_spread(self):
        """Test deviations of a constant sample."""
        with pytest.raises(DegenerateVariance):
            chauvenet_deviations(build_sample([2.0, 2.0, 2.0]))

    def test_sum_of_squares(self):
        """Test the centered sum of squares."""
        assert sum_of_squares(build_sample([1.0, 3.0])) == 2.0

    def test_summary_keys(self, toy_sample):
        """Test the summary dictionary."""
        stats = summary(toy_sample)

        assert stats["n"] == 9
        assert stats["min"] == -1.938
        assert stats["max"] == 100.0
        assert stats["iqr"] == pytest.approx(2.595)


@pytest.mark.unit
class TestSampleProperties:
    @given(st.lists(finite_floats, min_size=1, max_size=60))
    @settings(max_examples=60)
    def test_quartile_ordering(self, values):
        """Test q1 <= median <= q3 for any sample."""
        sample = build_sample(values)

        assert np.all(np.diff(sample.values) >= 0)
        slack = 1e-9 * max(1.0, abs(sample.maximum), abs(sample.minimum))
        assert sample.q1 <= sample.median + slack
        assert sample.median <= sample.q3 + slack
        assert sample.iqr >= 0.0

    @given(st.lists(finite_floats, min_size=2, max_size=60))
    @settings(max_examples=60)
    def test_moments_match_two_pass(self, values):
        """Test moments against a two-pass reference."""
        sample = build_sample(values)
        mean = math.fsum(values) / len(values)
        var = math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1)

        assert sample.mean == pytest.approx(mean, rel=1e-12, abs=1e-6)
        assert sample.sd == pytest.approx(math.sqrt(var), rel=1e-9, abs=1e-6)

    @given(st.lists(finite_floats, min_size=1, max_size=40), st.randoms())
    @settings(max_examples=40)
    def test_permutation_invariance(self, values, rng):
        """Test that input order does not change statistics."""
        shuffled = list(values)
        rng.shuffle(shuffled)
        a, b = build_sample(values), build_sample(shuffled)

        assert list(a.values) == list(b.values)
        assert (a.q1, a.median, a.q3) == (b.q1, b.median, b.q3)

    @given(
        st.lists(finite_floats, min_size=2, max_size=40),
        st.floats(min_value=0, max_value=1),
        st.floats(min_value=0, max_value=1),
    )
    @settings(max_examples=60)
    def test_quantile_monotone(self, values, p1, p2):
        """Test that quantiles are monotone in p."""
        sample = build_sample(values)
        lo, hi = sorted((p1, p2))
        slack = 1e-9 * max(1.0, abs(sample.maximum), abs(sample.minimum))
        assert quantile(sample, lo) <= quantile(sample, hi) + slack

    @pytest.mark.parametrize("n", range(5, 21))
    def test_upper_contamination_leaves_quartiles(self, n):
        """Test quartiles under a few large contaminants."""
        rng = np.random.default_rng(n)
        clean = rng.normal(size=n)
        m = math.ceil(0.25 * (n - 1) - 1) - 1
        if m < 1:
            pytest.skip("no contamination budget at this n")
        contaminated = np.sort(clean)
        contaminated[-m:] = 1e6 + np.arange(m)

        a, b = build_sample(clean), build_sample(contaminated)
        assert (a.q1, a.q3, a.iqr) == (b.q1, b.q3, b.iqr)
