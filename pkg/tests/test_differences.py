"""Difference operators and the (cos theta - 1) multiplication identity."""

import numpy as np
import pytest

from needlets import (
    CoeffSequence,
    backward_difference,
    decay_rate_estimate,
    forward_difference,
    multiply_cos_minus_one,
    multiply_cos_minus_one_power,
    zonal_series,
)
from needlets.differences import first_difference_weight, second_difference_weight

RNG = np.random.default_rng(20240812)


def series_value(seq: CoeffSequence, x: float) -> float:
    return zonal_series(seq.values, x, offset=seq.offset)


class TestForwardBackward:
    def test_forward_on_constant(self):
        out = forward_difference(CoeffSequence(0, np.full(6, 5.0)))
        assert np.array_equal(out.values, np.zeros(5))

    def test_forward_on_squares(self):
        seq = CoeffSequence(0, np.arange(6, dtype=float) ** 2)
        assert forward_difference(seq)[3] == 16.0 - 9.0

    def test_triple_forward_on_cubes(self):
        seq = CoeffSequence(0, np.arange(10, dtype=float) ** 3)
        out = seq
        for _ in range(3):
            out = forward_difference(out)
        assert np.array_equal(out.values, np.full(7, 6.0))

    def test_backward_boundary_convention(self):
        out = backward_difference(CoeffSequence(0, np.full(6, 5.0)))
        assert out[0] == 5.0  # a_{-1} reads as 0
        assert np.array_equal(out.values[1:], np.zeros(5))

    def test_backward_on_identity(self):
        out = backward_difference(CoeffSequence(0, np.arange(8, dtype=float)))
        # a_0 - a_{-1} = 0 then all ones
        assert np.array_equal(out.values, np.r_[0.0, np.ones(7)])

    def test_operators_commute(self):
        seq = CoeffSequence(0, RNG.normal(size=12))
        ab = backward_difference(forward_difference(seq))
        ba = forward_difference(backward_difference(seq))
        # commutation holds on the interior; the zero-extension below the
        # window makes index 0 order-dependent
        np.testing.assert_array_equal(ab.values[1:], ba.values[1:ab.values.size])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            forward_difference(CoeffSequence(0, np.array([1.0])))

    def test_product_rules_exact(self):
        b = CoeffSequence(0, RNG.normal(size=15))
        c = CoeffSequence(0, RNG.normal(size=15))
        bc = CoeffSequence(0, b.values * c.values)
        fwd = forward_difference(bc)
        for l in range(14):
            expected = (forward_difference(b)[l] * c[l + 1]
                        + b[l] * forward_difference(c)[l])
            assert fwd[l] == pytest.approx(expected, rel=1e-12, abs=1e-14)
        bwd = backward_difference(bc)
        for l in range(15):
            expected = (backward_difference(b)[l] * c[l]
                        + b[l - 1] * backward_difference(c)[l])
            assert bwd[l] == pytest.approx(expected, rel=1e-12, abs=1e-14)


class TestMultiplyCosMinusOne:
    def test_constant_tail_vanishes(self):
        values = np.r_[0.0, np.full(9, 3.0)]  # a_0 = 0, constant on l >= 1
        out = multiply_cos_minus_one(CoeffSequence(0, values))
        # both differences vanish on the constant stretch away from the edges
        assert np.max(np.abs(out.values[2:9])) == 0.0
        assert out[0] != 0.0 or out[1] != 0.0

    def test_identity_sequence_gives_first_difference_weight(self):
        seq = CoeffSequence(0, np.arange(12, dtype=float))
        out = multiply_cos_minus_one(seq)
        ls = np.arange(11)
        np.testing.assert_allclose(out.values[:11][1:-1], 1.0 / (2 * ls[1:-1] + 1.0),
                                   rtol=1e-14)

    def test_multiplication_identity(self):
        seq = CoeffSequence(0, RNG.normal(size=20))
        out = multiply_cos_minus_one(seq)
        for x in RNG.uniform(-1, 1, 50):
            lhs = series_value(out, x)
            rhs = (x - 1.0) * series_value(seq, x)
            assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_identity_with_offset_window(self):
        seq = CoeffSequence(3, RNG.normal(size=8))
        out = multiply_cos_minus_one(seq)
        for x in RNG.uniform(-1, 1, 10):
            assert series_value(out, x) == pytest.approx(
                (x - 1.0) * series_value(seq, x), abs=1e-11)

    def test_single_application_equals_power_one(self):
        seq = CoeffSequence(0, RNG.normal(size=10))
        one = multiply_cos_minus_one(seq)
        pow1 = multiply_cos_minus_one_power(seq, 1)
        np.testing.assert_array_equal(one.values, pow1.values)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_iterated_identity(self, n):
        seq = CoeffSequence(0, RNG.normal(size=20))
        out = multiply_cos_minus_one_power(seq, n)
        for x in RNG.uniform(-1, 1, 50):
            lhs = series_value(out, x)
            rhs = (x - 1.0) ** n * series_value(seq, x)
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_decay_gain_two_orders_per_step(self):
        ls = np.arange(1, 4001, dtype=float)
        seq = CoeffSequence(1, ls ** -1.0)
        out = multiply_cos_minus_one_power(seq, 2)
        slope = decay_rate_estimate(out, 100, 1000)
        assert slope == pytest.approx(-5.0, abs=0.2)


class TestDecayRateEstimate:
    def test_exact_power_law(self):
        ls = np.arange(1, 1001, dtype=float)
        seq = CoeffSequence(1, ls ** -3.0)
        assert decay_rate_estimate(seq, 10, 1000) == pytest.approx(-3.0, abs=0.01)

    def test_perturbed_power_law(self):
        ls = np.arange(1, 601, dtype=float)
        seq = CoeffSequence(1, ls ** -3.0 * (1.0 + 1.0 / ls))
        assert decay_rate_estimate(seq, 50, 500) == pytest.approx(-3.0, abs=0.1)

    def test_super_polynomial_decay_diverges(self):
        ls = np.arange(1, 101, dtype=float)
        seq = CoeffSequence(1, np.exp(-ls))
        assert decay_rate_estimate(seq, 20, 80) < -20.0

    def test_zero_in_window_rejected(self):
        seq = CoeffSequence(1, np.r_[np.ones(5), 0.0, np.ones(5)])
        with pytest.raises(ValueError):
            decay_rate_estimate(seq, 1, 11)


class TestRecursionWeights:
    def test_values(self):
        assert second_difference_weight(3) == pytest.approx(3 / 7)
        assert first_difference_weight(3) == pytest.approx(1 / 7)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_difference_decay_orders(self, k):
        # k-fold differences of R and S decay like l^-(k+1)
        ls = np.arange(1, 1201, dtype=float)
        for weight in (second_difference_weight, first_difference_weight):
            seq = CoeffSequence(1, weight(ls))
            for _ in range(k):
                seq = forward_difference(seq)
            slope = decay_rate_estimate(seq, 100, 1000)
            assert slope == pytest.approx(-(k + 1), abs=0.3)
