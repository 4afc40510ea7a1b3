"""Legendre polynomials, zonal series, and real spherical harmonics."""

import math

import numpy as np
import pytest
from scipy.special import eval_legendre, lpmv

from needlets import (
    DegreeCapExceeded,
    SphHarmPoint,
    generating_function_check,
    legendre_batch,
    legendre_series,
    real_sph_harm,
    recursion_residual,
    sph_harm_flat_index,
    sph_harm_matrix,
    zonal_eval,
    zonal_series,
)
from needlets.defaults import DEGREE_CAP_ENV

RNG = np.random.default_rng(20240811)


def reference_real_sph_harm(l, m, theta, phi):
    """Independent construction from scipy's associated Legendre values."""
    am = abs(m)
    norm = math.sqrt((2 * l + 1) / (4 * math.pi)
                     * math.factorial(l - am) / math.factorial(l + am))
    plm = norm * lpmv(am, l, math.cos(theta))
    if m == 0:
        return plm
    if m > 0:
        return math.sqrt(2.0) * plm * math.cos(am * phi)
    return math.sqrt(2.0) * plm * math.sin(am * phi)


class TestLegendreBatch:
    def test_at_one_all_ones(self):
        table = legendre_batch(1.0, 5)
        assert np.array_equal(table.values, np.ones(6))

    def test_at_minus_one_parity(self):
        table = legendre_batch(-1.0, 5)
        assert np.array_equal(table.values, (-1.0) ** np.arange(6))

    def test_degree_two_explicit_formula(self):
        x = 0.5
        expected = (3 * x * x - 1) / 2  # P_2 written out
        assert legendre_batch(x, 2).values[2] == pytest.approx(expected, abs=1e-15)
        assert expected == -0.125

    def test_matches_scipy_oracle(self):
        for x in RNG.uniform(-1, 1, 25):
            table = legendre_batch(x, 64)
            ref = eval_legendre(np.arange(65), x)
            np.testing.assert_allclose(table.values, ref, atol=5e-15)

    def test_table_invariants(self):
        for x in RNG.uniform(-1, 1, 100):
            table = legendre_batch(x, 64)
            assert table.values[0] == 1.0
            assert table.values[1] == x
            assert np.max(np.abs(table.values)) <= 1.0 + 1e-13

    def test_domain_error(self):
        with pytest.raises(ValueError):
            legendre_batch(1.0 + 1e-9, 4)

    def test_degree_cap(self, monkeypatch):
        monkeypatch.setenv(DEGREE_CAP_ENV, "32")
        with pytest.raises(DegreeCapExceeded):
            legendre_batch(0.5, 33)
        legendre_batch(0.5, 32)


class TestZonal:
    def test_at_one(self):
        assert zonal_eval(3, 1.0) == 7.0

    def test_degree_zero_constant(self):
        assert zonal_eval(0, 0.3) == 1.0

    def test_degree_two(self):
        assert zonal_eval(2, 0.5) == pytest.approx(5 * -0.125, abs=1e-15)

    def test_series_matches_term_sum(self):
        coeffs = RNG.normal(size=12)
        x = 0.37
        expected = sum(coeffs[l - 1] * zonal_eval(l, x) for l in range(1, 13))
        assert zonal_series(coeffs, x, offset=1) == pytest.approx(expected, rel=1e-13)

    def test_series_batching_bit_identical(self):
        coeffs = RNG.normal(size=30)
        xs = RNG.uniform(-1, 1, 11)
        batched = legendre_series(coeffs, xs)
        single = np.array([legendre_series(coeffs, x) for x in xs])
        assert np.array_equal(batched, single)


class TestRecursionResidual:
    @pytest.mark.parametrize("l,x", [(0, 0.7), (1, -0.2)])
    def test_small_degrees(self, l, x):
        assert abs(recursion_residual(l, x)) <= 1e-15

    def test_high_degree_near_endpoint(self):
        assert abs(recursion_residual(50, 0.999)) <= 1e-12

    def test_all_degrees_random_arguments(self):
        xs = RNG.uniform(-1, 1, 100)
        worst = max(abs(recursion_residual(l, x))
                    for l in range(65) for x in xs[:10])
        assert worst <= 1e-12
        for x in xs:
            assert abs(recursion_residual(64, x)) <= 1e-12


class TestGeneratingFunction:
    def test_trivial_at_xi_zero(self):
        assert generating_function_check(0.0, 0.5, 0) == 0.0

    @pytest.mark.parametrize("xi", [0.4, -0.4])
    def test_against_closed_form(self, xi):
        # independent oracle: scipy Legendre values against the closed form
        ref_partial = math.fsum(eval_legendre(l, 0.3) * xi ** l for l in range(81))
        closed = (1 - 2 * xi * 0.3 + xi * xi) ** -0.5
        assert abs(ref_partial - closed) <= 1e-12
        assert generating_function_check(xi, 0.3, 80) <= 1e-12

    def test_closed_form_value(self):
        assert (1 - 2 * 0.4 * 0.3 + 0.16) == pytest.approx(0.92)

    def test_divergent_xi_rejected(self):
        with pytest.raises(ValueError):
            generating_function_check(1.0, 0.3, 10)


class TestRealSphHarm:
    def test_constant_harmonic(self):
        value = real_sph_harm(SphHarmPoint(0, 0, 1.1, 2.2))
        assert value == pytest.approx(1 / math.sqrt(4 * math.pi), rel=1e-15)

    def test_degree_one_pole(self):
        value = real_sph_harm(SphHarmPoint(1, 0, 0.0, 0.0))
        assert value == pytest.approx(math.sqrt(3 / (4 * math.pi)), rel=1e-15)

    def test_matches_scipy_construction(self):
        for _ in range(60):
            l = int(RNG.integers(1, 12))
            m = int(RNG.integers(-l, l + 1))
            theta = RNG.uniform(0, math.pi)
            phi = RNG.uniform(0, 2 * math.pi)
            mine = real_sph_harm(SphHarmPoint(l, m, theta, phi))
            ref = reference_real_sph_harm(l, m, theta, phi)
            assert mine == pytest.approx(ref, abs=1e-12)

    def test_orthonormality_by_quadrature(self):
        # Gauss-Legendre in cos(theta) x trapezoid in phi integrates these
        # products essentially exactly
        lmax = 4
        nodes, weights = np.polynomial.legendre.leggauss(2 * lmax + 2)
        nphi = 4 * lmax + 5
        phis = np.arange(nphi) * 2 * math.pi / nphi
        pairs = [(l, m) for l in range(lmax + 1) for m in range(-l, l + 1)]
        vals = np.array([[real_sph_harm(SphHarmPoint(l, m, math.acos(x), p))
                          for x in nodes for p in phis] for (l, m) in pairs])
        w = np.repeat(weights, nphi) * (2 * math.pi / nphi)
        gram = vals @ (w[None, :] * vals).T
        np.testing.assert_allclose(gram, np.eye(len(pairs)), atol=1e-8)

    def test_unsold_identity_high_degree(self):
        # sum_m Y_{l,m}^2 = (2l+1)/(4 pi); probes stability far past l = 150
        l = 200
        theta, phi = 1.234, 0.567
        total = math.fsum(real_sph_harm(SphHarmPoint(l, m, theta, phi)) ** 2
                          for m in range(-l, l + 1))
        assert total == pytest.approx((2 * l + 1) / (4 * math.pi), rel=1e-11)

    def test_invalid_order_rejected(self):
        with pytest.raises(ValueError):
            SphHarmPoint(2, 3, 0.5, 0.5)

    def test_degree_cap_guard(self, monkeypatch):
        monkeypatch.setenv(DEGREE_CAP_ENV, "16")
        with pytest.raises(DegreeCapExceeded):
            real_sph_harm(SphHarmPoint(17, 0, 0.5, 0.5))

    def test_laplacian_eigenvalue_accessor(self):
        assert SphHarmPoint(7, 2, 0.5, 0.5).laplacian_eigenvalue == 56.0


class TestSphHarmMatrix:
    def test_matches_pointwise_evaluation(self):
        thetas = RNG.uniform(0, math.pi, 5)
        phis = RNG.uniform(0, 2 * math.pi, 5)
        mat = sph_harm_matrix(6, thetas, phis)
        for i in range(5):
            for l in range(1, 7):
                for m in range(-l, l + 1):
                    ref = real_sph_harm(SphHarmPoint(l, m, thetas[i], phis[i]))
                    assert mat[i, sph_harm_flat_index(l, m)] == pytest.approx(ref, abs=1e-13)

    def test_flat_index_layout(self):
        idx = [sph_harm_flat_index(l, m) for l in range(1, 5) for m in range(-l, l + 1)]
        assert idx == list(range(24))
