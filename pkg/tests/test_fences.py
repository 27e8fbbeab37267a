"""Tests for fence coefficients and fence construction."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from src.core.exceptions import DegenerateIQR, DegenerateVariance, InvalidParameters, OutsideValidityDomain
from src.schemas.distribution import ChiSquareModel, NormalModel, StudentTModel
from src.schemas.fences import (
    AsymptoticMethod,
    ChauvenetIntervalMethod,
    ChauvenetNonNormalMethod,
    ChauvenetTypeMethod,
    EmpiricalMethod,
    ExactRateMethod,
    SigmaClipMethod,
    ToleranceLimitMethod,
    TukeyMethod,
    in_approximation_grid,
)
from src.services.core_stats import build_sample
from src.services.fences import (
    AF_SMOOTHING_CUTOFF,
    af_coefficient,
    af_smoothing,
    chauvenet_coefficient,
    chauvenet_crossing_n,
    chauvenet_interval,
    chauvenet_threshold,
    coefficient_for,
    coefficient_table,
    compute_fences,
    ec_coefficient,
    er_coefficient,
    fences_from_quartiles,
    normal_reduction_gap,
    quartile_coefficients,
    sigma_equivalent,
    tl_coefficient,
)

GRID = [4 * m + 1 for m in range(2, 125)]


@pytest.mark.unit
class TestChauvenetCoefficient:
    @pytest.mark.parametrize(
        "n,expected",
        [(9, 0.91815), (18, 1.12993), (50, 1.408), (72, 1.4996)],
    )
    def test_values(self, n, expected):
        """Test Chauvenet-type coefficients at known n."""
        assert chauvenet_coefficient(n) == pytest.approx(expected, abs=5e-4)

    def test_threshold_at_nine(self):
        """Test the Chauvenet threshold at n=9."""
        assert chauvenet_threshold(9) == pytest.approx(1.915, abs=1e-3)

    def test_increasing_in_n(self):
        """Test that the coefficient grows with n."""
        ks = [chauvenet_coefficient(n) for n in range(2, 500)]
        assert all(b > a for a, b in zip(ks, ks[1:]))

    def test_increasing_up_to_a_million(self):
        """Test growth on a log grid up to a million."""
        ns = sorted({int(n) for n in np.geomspace(2, 10**6, 3000)})
        ks = [chauvenet_coefficient(n) for n in ns]
        assert all(b > a for a, b in zip(ks, ks[1:]))

    def test_reaches_tukey_at_73(self):
        """Test where the coefficient reaches 1.5."""
        assert chauvenet_crossing_n(1.5) == 73
        assert chauvenet_coefficient(72) < 1.5 <= chauvenet_coefficient(73)

    def test_reaches_outer_fence_coefficient(self):
        """Test where the coefficient reaches 3."""
        assert chauvenet_coefficient(217_282) == pytest.approx(3.0, abs=5e-3)
        assert chauvenet_crossing_n(3.0) == pytest.approx(217_282, rel=0.01)

    def test_sigma_equivalent_of_tukey(self):
        """Test the sigma multiple of Tukey fences."""
        assert sigma_equivalent(1.5) == pytest.approx(2.698, abs=1e-3)


@pytest.mark.unit
class TestApproximationCoefficients:
    def test_grid(self):
        """Test the approximation grid n = 4m+1."""
        assert in_approximation_grid(9)
        assert in_approximation_grid(497)
        assert not in_approximation_grid(5)
        assert not in_approximation_grid(10)
        assert not in_approximation_grid(501)

    @pytest.mark.parametrize("n", [5, 10, 18, 498, 501])
    def test_outside_grid(self, n):
        """Test approximations off the grid."""
        with pytest.raises(OutsideValidityDomain):
            er_coefficient(n)
        with pytest.raises(OutsideValidityDomain):
            tl_coefficient(n)

    def test_tolerance_limit_above_exact_rate(self):
        """Test tolerance-limit coefficients above exact-rate ones."""
        for n in GRID:
            er, tl = er_coefficient(n), tl_coefficient(n)
            assert math.isfinite(er) and er > 0
            assert tl > er

    def test_method_validity_helpers(self):
        """Test method validity checks."""
        assert ExactRateMethod().is_valid_for(9)
        assert not ToleranceLimitMethod().is_valid_for(10)

    def test_asymptotic_smoothing_is_continuous_at_cutoff(self):
        """Test asymptotic smoothing at its cutoff."""
        assert af_smoothing(AF_SMOOTHING_CUTOFF) == 1.0
        assert af_smoothing(AF_SMOOTHING_CUTOFF - 1) == pytest.approx(1.0, abs=5e-3)
        gap = af_coefficient(AF_SMOOTHING_CUTOFF) - af_coefficient(AF_SMOOTHING_CUTOFF - 1)
        assert abs(gap) < 0.02

    def test_asymptotic_coefficient_is_positive(self):
        """Test that asymptotic coefficients are positive."""
        for n in (10, 50, 100, 1000, 5000):
            assert af_coefficient(n) > 0.0

    def test_empirical_values(self):
        """Test the empirical coefficient."""
        assert ec_coefficient(10) == pytest.approx(1.5)
        assert ec_coefficient(100) == pytest.approx(1.5 * (1 + 0.1 * math.log(10)))

    def test_coefficient_table_marks_out_of_domain(self):
        """Test null table entries off the grid."""
        rows = coefficient_table([9, 10], kinds=["exact_rate", "tukey"])

        assert rows == [
            {"n": 9, "kind": "exact_rate", "coefficient": pytest.approx(er_coefficient(9))},
            {"n": 9, "kind": "tukey", "coefficient": 1.5},
            {"n": 10, "kind": "exact_rate", "coefficient": None},
            {"n": 10, "kind": "tukey", "coefficient": 1.5},
        ]

    def test_unknown_coefficient_kind(self):
        """Test an unknown coefficient kind."""
        with pytest.raises(InvalidParameters):
            coefficient_for("median_rule", 10)


@pytest.mark.unit
class TestQuartileFences:
    def test_toy_chauvenet_type(self, toy_sample):
        """Test Chauvenet-type fences for the toy data."""
        pair = compute_fences(toy_sample, ChauvenetTypeMethod())

        assert pair.lower == pytest.approx(-3.2366, abs=5e-4)
        assert pair.upper == pytest.approx(4.1236, abs=5e-4)
        assert pair.is_symmetric

    def test_junior_chauvenet_type(self, junior_sample):
        """Test Chauvenet-type fences for the junior column."""
        pair = compute_fences(junior_sample, ChauvenetTypeMethod())

        assert pair.coefficient_lower == pytest.approx(1.13, abs=5e-3)
        assert pair.lower == pytest.approx(0.2456, abs=5e-4)
        assert pair.upper == pytest.approx(7.0669, abs=5e-4)

    def test_junior_tukey(self, junior_sample):
        """Test Tukey fences for the junior column."""
        pair = compute_fences(junior_sample, TukeyMethod())

        assert pair.lower == pytest.approx(-0.52875, abs=1e-9)
        assert pair.upper == pytest.approx(7.84125, abs=1e-9)

    def test_senior_fences(self, senior_sample):
        """Test Tukey and Chauvenet-type fences for the senior column."""
        tukey = compute_fences(senior_sample, TukeyMethod())
        chau = compute_fences(senior_sample, ChauvenetTypeMethod())

        assert (tukey.lower, tukey.upper) == pytest.approx((-2.27375, 9.21625), abs=1e-9)
        assert chau.lower == pytest.approx(-1.2107, abs=5e-4)
        assert chau.upper == pytest.approx(8.1532, abs=5e-4)

    def test_senior_lower_fence_from_rounded_quartiles(self):
        """Test the senior lower fence from quartiles rounded to 2.04 and 4.91."""
        pair = fences_from_quartiles(2.04, 4.91, 18, ChauvenetTypeMethod())

        assert pair.lower == pytest.approx(-1.20, abs=0.01)

    def test_from_summary_quartiles(self):
        """Test fences from summary quartiles alone."""
        pair = fences_from_quartiles(-0.854, 1.741, 9, ChauvenetTypeMethod())
        assert (pair.lower, pair.upper) == pytest.approx((-3.2366, 4.1236), abs=5e-4)

    def test_every_quartile_method_brackets_the_quartiles(self, toy_sample):
        """Test that quartile fences lie outside the box."""
        for method in (
            TukeyMethod(k=3.0),
            ChauvenetTypeMethod(),
            ExactRateMethod(),
            ToleranceLimitMethod(),
            AsymptoticMethod(),
            EmpiricalMethod(),
        ):
            pair = compute_fences(toy_sample, method)
            assert pair.lower < toy_sample.q1 < toy_sample.q3 < pair.upper

    def test_small_n(self):
        """Test quartile fences with n < 4."""
        with pytest.raises(DegenerateIQR):
            compute_fences(build_sample([1.0, 2.0, 3.0]), TukeyMethod())

    def test_zero_iqr(self):
        """Test quartile fences with a zero IQR."""
        with pytest.raises(DegenerateIQR):
            compute_fences(build_sample([1.0, 1.0, 1.0, 1.0, 2.0]), ChauvenetTypeMethod())

    def test_moment_method_is_not_quartile_based(self):
        """Test quartile coefficients for a moment method."""
        with pytest.raises(InvalidParameters):
            quartile_coefficients(SigmaClipMethod(), 10)

    def test_non_normal_needs_model(self):
        """Test non-normal coefficients without a model."""
        with pytest.raises(InvalidParameters):
            quartile_coefficients(ChauvenetNonNormalMethod(family="gamma"), 10)

    @given(
        st.lists(st.floats(min_value=-1e3, max_value=1e3), min_size=5, max_size=40),
        st.floats(min_value=0.1, max_value=10.0),
        st.floats(min_value=-100.0, max_value=100.0),
    )
    @settings(max_examples=60)
    def test_affine_equivariance(self, values, scale, shift):
        """Test that fences follow affine changes of the data."""
        sample = build_sample(values)
        assume(sample.iqr > 1e-3)
        moved = build_sample([scale * v + shift for v in values])

        for method in (TukeyMethod(), ChauvenetTypeMethod(), EmpiricalMethod()):
            a, b = compute_fences(sample, method), compute_fences(moved, method)
            assert b.lower == pytest.approx(scale * a.lower + shift, rel=1e-9, abs=1e-6)
            assert b.upper == pytest.approx(scale * a.upper + shift, rel=1e-9, abs=1e-6)


@pytest.mark.unit
class TestMomentIntervals:
    def test_toy_chauvenet_interval(self, toy_sample):
        """Test the Chauvenet interval for the toy data."""
        pair = chauvenet_interval(toy_sample)

        assert pair.lower == pytest.approx(-62.430, abs=0.025)
        assert pair.upper == pytest.approx(106.702, abs=0.025)

    def test_junior_interval(self, junior_sample):
        """Test the Chauvenet interval for the junior column."""
        pair = compute_fences(junior_sample, ChauvenetIntervalMethod())

        assert pair.lower == pytest.approx(-1.07, abs=0.01)
        assert pair.upper == pytest.approx(8.09, abs=0.01)

    def test_senior_interval(self, senior_sample):
        """Test the Chauvenet interval for the senior column."""
        pair = compute_fences(senior_sample, ChauvenetIntervalMethod())

        assert pair.lower == pytest.approx(-3.33, abs=0.01)
        assert pair.upper == pytest.approx(9.52, abs=0.01)

    def test_sigma_clip(self, toy_sample):
        """Test sigma-clip fences."""
        pair = compute_fences(toy_sample, SigmaClipMethod(c=2.0))

        assert pair.lower == pytest.approx(toy_sample.mean - 2.0 * toy_sample.sd)
        assert pair.upper == pytest.approx(toy_sample.mean + 2.0 * toy_sample.sd)

    def test_constant_sample(self):
        """Test the Chauvenet interval of a constant sample."""
        with pytest.raises(DegenerateVariance):
            chauvenet_interval(build_sample([3.0, 3.0, 3.0]))

    def test_single_value(self):
        """Test the Chauvenet interval of one value."""
        with pytest.raises(DegenerateVariance):
            chauvenet_interval(build_sample([3.0]))


@pytest.mark.unit
class TestNonNormalFences:
    def test_chi_square_fences(self):
        """Test chi-square fences from summary quartiles."""
        method = ChauvenetNonNormalMethod(family="chi_square", model=ChiSquareModel(dof=8.02))
        pair = fences_from_quartiles(5.08, 10.24, 50_000, method)

        assert pair.coefficient_lower == pytest.approx(0.94, abs=0.01)
        assert pair.coefficient_upper == pytest.approx(5.58, abs=0.01)
        assert pair.lower == pytest.approx(0.217, abs=0.02)
        assert pair.upper == pytest.approx(39.027, abs=0.02)
        assert not pair.is_symmetric

    def test_student_t_fences(self):
        """Test Student-t fences from summary quartiles."""
        method = ChauvenetNonNormalMethod(family="student_t", model=StudentTModel(dof=8.02))
        pair = fences_from_quartiles(-0.70, 0.71, 50_000, method)

        assert pair.coefficient_lower == pytest.approx(6.41, abs=0.01)
        assert pair.lower == pytest.approx(-9.77, abs=0.05)
        assert pair.upper == pytest.approx(9.78, abs=0.05)

    @pytest.mark.parametrize("n", [9, 18, 50, 500, 50_000])
    def test_normal_model_reduces_to_chauvenet_type(self, n):
        """Test that a normal model gives Chauvenet-type coefficients."""
        assert normal_reduction_gap(NormalModel(mu=0.0, sigma=1.0), n) <= 0.01
