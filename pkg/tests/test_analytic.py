import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphere_khintchine import analytic

# independently computed reference values (mpmath at 60 digits)
BEST_CONSTANT_1 = 1.6329931618554520655
BEST_CONSTANT_3 = 1.3422405109664748574
LIMIT = 1.2011224087864497949
MGF_1_03 = 1.5811388300841896660  # 0.4 ** -0.5


class TestLogGammaRatio:
    def test_empty_product_is_exact_zero(self):
        assert analytic.log_gamma_ratio(1, 0) == 0.0

    def test_half_integer_example(self):
        # Gamma(3/2) / Gamma(1/2) = 1/2
        assert analytic.log_gamma_ratio(1, 1) == pytest.approx(math.log(0.5), rel=1e-15)

    def test_integer_example(self):
        # Gamma(4) / Gamma(1) = 3!
        assert analytic.log_gamma_ratio(2, 3) == pytest.approx(math.log(6.0), rel=1e-15)

    @pytest.mark.parametrize("dim", [1, 2, 3, 7, 20])
    @pytest.mark.parametrize("k", [0, 1, 2, 5, 50, 1000])
    def test_matches_lgamma_difference(self, dim, k):
        expected = math.lgamma(k + dim / 2) - math.lgamma(dim / 2)
        assert analytic.log_gamma_ratio(dim, k) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_no_overflow_at_large_order(self):
        assert math.isfinite(analytic.log_gamma_ratio(1, 10_000))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            analytic.log_gamma_ratio(0, 1)
        with pytest.raises(ValueError):
            analytic.log_gamma_ratio(3, -1)


class TestEvenMomentConstants:
    def test_zeroth_moment_is_one(self):
        assert analytic.kk_even_moment_constant(3, 0) == 1.0

    def test_second_moment_constant_is_one(self):
        assert analytic.kk_even_moment_constant(5, 1) == pytest.approx(1.0, abs=1e-15)

    def test_fourth_moment_dim_two(self):
        assert analytic.kk_even_moment_constant(2, 2) == pytest.approx(2.0, rel=1e-14)

    def test_second_moment_is_one_for_all_dims(self):
        for dim in range(1, 101):
            assert abs(analytic.kk_even_moment_constant(dim, 1) - 1.0) <= 1e-15

    def test_matches_gaussian_moment_at_matched_variance(self):
        for dim in (1, 2, 3, 10, 50):
            for k in (0, 1, 2, 5, 20, 50):
                lhs = analytic.gaussian_even_moment(dim, k, 1.0 / dim)
                rhs = analytic.kk_even_moment_constant(dim, k)
                assert lhs == pytest.approx(rhs, rel=1e-12)


class TestBestConstant:
    def test_dim_two_is_sqrt_two(self):
        assert analytic.best_constant(2) == pytest.approx(math.sqrt(2.0), rel=1e-15)

    def test_dim_one_closed_form(self):
        assert analytic.best_constant(1) == pytest.approx(BEST_CONSTANT_1, rel=1e-14)
        assert analytic.best_constant(1) == pytest.approx(math.sqrt(8.0 / 3.0), rel=1e-15)

    def test_dim_three_high_precision(self):
        assert analytic.best_constant(3) == pytest.approx(BEST_CONSTANT_3, rel=1e-14)

    def test_strictly_decreasing_to_limit(self):
        values = [analytic.best_constant(dim) for dim in range(1, 202)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert all(v > analytic.asymptotic_limit() for v in values)

    def test_limit_value(self):
        assert analytic.asymptotic_limit() == pytest.approx(LIMIT, rel=1e-15)

    def test_large_dim_gap_matches_expansion(self):
        dim = 10**6
        gap = analytic.best_constant(dim) - analytic.asymptotic_limit()
        assert 0.0 < gap < 1e-5
        expansion = math.log(2.0) / (2.0 * dim) * analytic.asymptotic_limit()
        assert gap == pytest.approx(expansion, rel=1e-2)


class TestGaussianNorms:
    def test_dim_two_norm_is_two(self):
        assert analytic.gaussian_psi2_norm_exact(2) == pytest.approx(2.0, rel=1e-15)

    def test_dim_one_norm(self):
        assert analytic.gaussian_psi2_norm_exact(1) == pytest.approx(
            math.sqrt(8.0 / 3.0), rel=1e-15)

    def test_identity_with_best_constant(self):
        for dim in range(1, 51):
            lhs = math.sqrt(dim) * analytic.best_constant(dim)
            assert lhs == pytest.approx(analytic.gaussian_psi2_norm_exact(dim), rel=1e-14)

    def test_second_moment_is_dim(self):
        assert analytic.gaussian_even_moment(3, 1, 1.0) == pytest.approx(3.0, rel=1e-14)

    def test_zeroth_moment_is_one(self):
        assert analytic.gaussian_even_moment(9, 0, 0.123) == 1.0

    def test_rejects_nonpositive_variance(self):
        with pytest.raises(ValueError):
            analytic.gaussian_even_moment(3, 1, 0.0)
        with pytest.raises(ValueError):
            analytic.gaussian_even_moment(3, 1, -2.0)


class TestMomentUpperBound:
    def test_first_moment_bound_is_sum_of_squares(self):
        a = [0.3, -1.2, 2.0]
        assert analytic.kk_upper_bound(7, 1, a) == pytest.approx(
            sum(x * x for x in a), rel=1e-14)

    def test_single_unit_coefficient(self):
        assert analytic.kk_upper_bound(2, 2, [1.0]) == pytest.approx(2.0, rel=1e-14)

    def test_zero_vector_gives_zero(self):
        assert analytic.kk_upper_bound(4, 3, np.zeros(5)) == 0.0


class TestMgfClosedForm:
    def test_at_zero(self):
        assert analytic.mgf_closed_form(5, 0.0) == 1.0

    def test_dim_two_at_half(self):
        assert analytic.mgf_closed_form(2, 0.5) == pytest.approx(2.0, rel=1e-15)

    def test_strictly_increasing(self):
        xs = np.linspace(0.0, 0.99 * 1.5, 40)
        values = [analytic.mgf_closed_form(3, x) for x in xs]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_fixed_point_equals_two(self):
        for dim in range(1, 51):
            x = 1.0 / analytic.best_constant(dim) ** 2
            assert analytic.mgf_closed_form(dim, x) == pytest.approx(2.0, rel=1e-12)

    @pytest.mark.parametrize("x", [1.5, 1.6, 100.0])
    def test_pole_and_beyond_rejected(self, x):
        with pytest.raises(ValueError):
            analytic.mgf_closed_form(3, x)


class TestMgfSeries:
    def test_at_zero_single_term(self):
        result = analytic.mgf_series(3, 0.0)
        assert result == analytic.SeriesResult(1.0, 1, True, 0.0)

    def test_dim_two_fixed_point(self):
        result = analytic.mgf_series(2, 0.5, tol=1e-12)
        assert result.converged
        assert result.value == pytest.approx(2.0, abs=1e-10)

    def test_dim_one_against_closed_form(self):
        result = analytic.mgf_series(1, 0.3, tol=1e-12)
        assert result.converged
        assert result.value == pytest.approx(MGF_1_03, abs=1e-10)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            analytic.mgf_series(3, -0.1)
        with pytest.raises(ValueError):
            analytic.mgf_series(3, 1.5)
        with pytest.raises(ValueError):
            analytic.mgf_series(3, 0.1, tol=0.0)
        with pytest.raises(ValueError):
            analytic.mgf_series(3, 0.1, max_terms=0)

    def test_term_cap_reports_not_converged(self):
        result = analytic.mgf_series(1, 0.49, tol=1e-12, max_terms=5)
        assert not result.converged
        assert result.terms_used == 5
        assert result.value < analytic.mgf_closed_form(1, 0.49)

    def test_partial_sums_nondecreasing(self):
        values = [analytic.mgf_series(3, 1.2, tol=1e-15, max_terms=cap).value
                  for cap in range(1, 40)]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_converged_last_term_respects_tolerance(self):
        result = analytic.mgf_series(4, 1.7, tol=1e-9)
        assert result.converged
        assert abs(result.last_term) <= 1e-9 * max(1.0, abs(result.value))

    @settings(max_examples=80, deadline=None)
    @given(dim=st.integers(min_value=1, max_value=50),
           fraction=st.floats(min_value=0.0, max_value=0.99))
    def test_series_agrees_with_closed_form(self, dim, fraction):
        x = fraction * 0.5 * dim
        tol = 1e-12
        result = analytic.mgf_series(dim, x, tol=tol)
        closed = analytic.mgf_closed_form(dim, x)
        assert result.converged
        assert abs(result.value - closed) <= 10.0 * tol * closed
