import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphere_khintchine import orlicz

# brentq on (exp(u) + exp(4u))/2 = 2, u = 1/c^2, computed independently
NORM_ONE_TWO = 2.0007598382099015
LIMIT = 1.2011224087864497949


class TestYoung:
    def test_zero(self):
        assert orlicz.young(2.0, 0.0) == 0.0

    def test_unit_level(self):
        assert orlicz.young(2.0, math.sqrt(math.log(2.0))) == pytest.approx(1.0, rel=1e-14)

    def test_exponential_case(self):
        assert orlicz.young(1.0, 1.0) == pytest.approx(math.e - 1.0, rel=1e-15)

    def test_strictly_increasing(self):
        xs = np.linspace(0.0, 3.0, 30)
        values = [orlicz.young(2.0, x) for x in xs]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_rejects_negative_argument(self):
        with pytest.raises(ValueError):
            orlicz.young(2.0, -0.5)

    @pytest.mark.parametrize("q", [0.0, -1.0, math.nan, math.inf])
    def test_rejects_bad_exponent(self, q):
        with pytest.raises(ValueError):
            orlicz.young(q, 1.0)


class TestExactConstantNorm:
    def test_zero_value(self):
        assert orlicz.exact_orlicz_norm_constant(0.0, 2.0) == 0.0

    def test_unit_value_psi2(self):
        assert orlicz.exact_orlicz_norm_constant(1.0, 2.0) == pytest.approx(LIMIT, rel=1e-15)

    def test_psi1_case(self):
        assert orlicz.exact_orlicz_norm_constant(3.0, 1.0) == pytest.approx(
            3.0 / math.log(2.0), rel=1e-15)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            orlicz.exact_orlicz_norm_constant(-1.0, 2.0)


class TestEmpiricalNorm:
    def test_constant_batch_matches_closed_form(self):
        batch = np.full(1000, 1.0)
        estimate = orlicz.empirical_orlicz_norm(batch, q=2.0, tol=1e-10)
        assert estimate.value == pytest.approx(LIMIT, abs=2e-10)

    def test_all_zero_batch(self):
        estimate = orlicz.empirical_orlicz_norm(np.zeros(17))
        assert estimate == orlicz.OrliczEstimate(0.0, 0.0, 0.0, 0)

    def test_two_point_batch_frozen_oracle(self):
        estimate = orlicz.empirical_orlicz_norm([1.0, 2.0], q=2.0, tol=1e-10)
        assert estimate.value == pytest.approx(NORM_ONE_TWO, abs=2e-10)

    def test_bracket_invariants(self):
        estimate = orlicz.empirical_orlicz_norm([0.2, 1.5, 3.0, 0.0], tol=1e-9)
        assert estimate.bracket_lo <= estimate.value <= estimate.bracket_hi
        assert estimate.bracket_hi - estimate.bracket_lo <= 1e-9
        assert estimate.iterations > 0

    def test_root_certificate(self):
        batch = np.array([0.3, 0.7, 1.1, 2.2, 0.05])
        tol = 1e-9
        estimate = orlicz.empirical_orlicz_norm(batch, q=2.0, tol=tol)

        def mean_young(c):
            return float(np.mean(np.expm1((batch / c) ** 2)))

        residual_cap = mean_young(estimate.bracket_lo) - mean_young(estimate.bracket_hi)
        assert abs(mean_young(estimate.value) - 1.0) <= residual_cap

    def test_scales_beyond_exp_overflow(self):
        # (s / c)^q overflows exp during bracketing; treated as infinite mean
        batch = np.array([1e3, 1e-6, 0.0])
        estimate = orlicz.empirical_orlicz_norm(batch, q=2.0, tol=1e-6)
        assert math.isfinite(estimate.value)
        assert estimate.value > 0

    def test_rejects_bad_batches(self):
        with pytest.raises(ValueError):
            orlicz.empirical_orlicz_norm([])
        with pytest.raises(ValueError):
            orlicz.empirical_orlicz_norm([1.0, -0.5])
        with pytest.raises(ValueError):
            orlicz.empirical_orlicz_norm([1.0, math.nan])
        with pytest.raises(ValueError):
            orlicz.empirical_orlicz_norm([[1.0, 2.0]])
        with pytest.raises(ValueError):
            orlicz.empirical_orlicz_norm([1.0], tol=0.0)
        with pytest.raises(ValueError):
            orlicz.empirical_orlicz_norm([1.0], q=-2.0)


_batches = st.lists(st.floats(min_value=0.0, max_value=100.0), min_size=1, max_size=30)


class TestEmpiricalNormProperties:
    @settings(max_examples=100, deadline=None)
    @given(batch=_batches, scale=st.floats(min_value=1e-2, max_value=1e2))
    def test_homogeneity(self, batch, scale):
        tol = 1e-9
        base = orlicz.empirical_orlicz_norm(batch, q=2.0, tol=tol).value
        scaled = orlicz.empirical_orlicz_norm(
            [scale * s for s in batch], q=2.0, tol=tol).value
        assert abs(scaled - scale * base) <= 2.0 * tol * max(1.0, scale)

    @settings(max_examples=100, deadline=None)
    @given(batch=_batches, bump=st.floats(min_value=0.0, max_value=10.0))
    def test_adding_a_large_sample_never_decreases(self, batch, bump):
        tol = 1e-9
        new_sample = max(batch) + bump
        base = orlicz.empirical_orlicz_norm(batch, q=2.0, tol=tol).value
        grown = orlicz.empirical_orlicz_norm(batch + [new_sample], q=2.0, tol=tol).value
        assert grown >= base - 2.0 * tol

    @settings(max_examples=60, deadline=None)
    @given(value=st.floats(min_value=1e-3, max_value=1e3),
           size=st.integers(min_value=1, max_value=50),
           q=st.floats(min_value=0.5, max_value=4.0))
    def test_constant_batches_match_exact_norm(self, value, size, q):
        tol = 1e-9
        estimate = orlicz.empirical_orlicz_norm([value] * size, q=q, tol=tol)
        exact = orlicz.exact_orlicz_norm_constant(value, q)
        assert abs(estimate.value - exact) <= tol * max(1.0, exact) + tol
