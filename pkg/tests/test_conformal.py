import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import SQRT2, random_disc
from hinfmatch import LensParams, TruncatedSeries, lens_contains, lens_derivative_at_zero, lens_map, lens_map_inv
from hinfmatch.approximation import schwarz_derivative, taylor_coeffs
from hinfmatch.complex_core import series_compose
from hinfmatch.conformal import (
    POINT_AT_INFINITY,
    lens_map_inv_series,
    lens_map_series,
    mobius_U,
    mobius_V,
    mobius_V_inv,
    power_R,
)
from hinfmatch.exceptions import LensDomainError

GAMMAS = [1.1, SQRT2, 2.0, 5.0]


class TestParams:
    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_consistency(self, gamma):
        p = LensParams.from_gamma(gamma)
        assert abs(p.alpha - math.acos(1 / gamma)) < 1e-14
        assert abs(p.tan_alpha - math.sqrt(gamma**2 - 1)) < 1e-12
        q = LensParams.from_alpha(p.alpha)
        assert q.gamma == pytest.approx(gamma, rel=1e-14)

    @pytest.mark.parametrize("gamma", [1.0, 0.5, math.inf, math.nan])
    def test_rejects(self, gamma):
        with pytest.raises(ValueError):
            LensParams.from_gamma(gamma)


class TestMobius:
    def test_V_values(self):
        assert mobius_V(0) == 1
        assert abs(mobius_V(1j)) < 1e-16
        assert mobius_V(-1j) == POINT_AT_INFINITY

    def test_V_conjugate_inversion(self, rng):
        w = random_disc(rng, 200)
        np.testing.assert_allclose(mobius_V(np.conj(w)) * np.conj(mobius_V(w)), 1, atol=1e-12)

    def test_V_inv(self, rng):
        assert mobius_V_inv(1) == 0
        assert abs(mobius_V_inv(0) - 1j) < 1e-16
        assert mobius_V_inv(POINT_AT_INFINITY) == -1j
        w = random_disc(rng, 500, 0.999)
        np.testing.assert_allclose(mobius_V(mobius_V_inv(mobius_V(w))), mobius_V(w), atol=1e-12)
        np.testing.assert_allclose(mobius_V_inv(mobius_V(w)), w, atol=1e-12)
        with pytest.raises(LensDomainError):
            mobius_V_inv(-1)

    def test_R(self, lens_sqrt2, rng):
        assert power_R(lens_sqrt2, 1) == pytest.approx(1)
        assert power_R(lens_sqrt2, 1j) == pytest.approx(np.exp(1j * np.pi / 4), abs=1e-15)
        s = mobius_V(random_disc(rng, 200, 0.99))
        np.testing.assert_allclose(power_R(lens_sqrt2, 1 / np.conj(s)),
                                   1 / np.conj(power_R(lens_sqrt2, s)), rtol=1e-12)
        with pytest.raises(LensDomainError):
            power_R(lens_sqrt2, -1 + 0.1j)

    def test_U(self, rng):
        p = LensParams.from_gamma(2.0)
        assert mobius_U(p, 1) == 0
        assert mobius_U(p, 0) == pytest.approx(1j * math.sqrt(3), abs=1e-15)
        y = random_disc(rng, 200) + 0.1
        np.testing.assert_allclose(mobius_U(p, 1 / np.conj(y)), np.conj(mobius_U(p, y)), rtol=1e-11)
        with pytest.raises(LensDomainError):
            mobius_U(p, -1)


class TestLensMap:
    def test_values(self, lens_sqrt2):
        assert lens_map(lens_sqrt2, 0) == 0
        # tan(acos(1/sqrt 2)) is 1 up to an ulp
        assert abs(lens_map(lens_sqrt2, 1j) - 1j) <= 1e-15
        assert abs(lens_map(lens_sqrt2, -1j) + 1j) <= 1e-15

    def test_closed_form_oracle(self, lens_sqrt2, rng):
        w = random_disc(rng, 1000)
        np.testing.assert_allclose(lens_map(lens_sqrt2, w), oracles.f_sqrt2(w), atol=1e-12)

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_numpy_oracle(self, gamma, rng):
        w = random_disc(rng, 500, 0.99)
        np.testing.assert_allclose(lens_map(LensParams.from_gamma(gamma), w), oracles.lens(gamma, w), atol=1e-11)

    def test_F_at_one_is_gamma_minus_one(self):
        # the boundary point w = 1 lands on the real axis at gamma - 1
        for g in GAMMAS:
            assert lens_map(LensParams.from_gamma(g), 1.0) == pytest.approx(g - 1, abs=1e-12)

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_invariants(self, gamma, rng):
        p = LensParams.from_gamma(gamma)
        w = random_disc(rng, 1000)
        s = lens_map(p, w)
        np.testing.assert_allclose(lens_map(p, np.conj(w)), np.conj(s), atol=1e-12)
        np.testing.assert_allclose(lens_map(p, -w), -s, atol=1e-12)
        assert np.all(lens_contains(p, s, 0.0))
        np.testing.assert_allclose(lens_map_inv(p, s), w, atol=1e-10)

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_boundary_to_boundary(self, gamma, rng):
        p = LensParams.from_gamma(gamma)
        t = rng.uniform(-np.pi, np.pi, 1000)
        s = lens_map(p, np.exp(1j * t))
        np.testing.assert_allclose(np.maximum(np.abs(1 - s), np.abs(1 + s)), gamma, atol=1e-10)

    def test_injectivity_spot_check(self, rng):
        p = LensParams.from_gamma(2.0)
        w1, w2 = random_disc(rng, 1000), random_disc(rng, 1000)
        keep = np.abs(w1 - w2) > 1e-6
        assert np.all(np.abs(lens_map(p, w1[keep]) - lens_map(p, w2[keep])) > 0)

    def test_outside_disc(self, lens_sqrt2):
        lens_map(lens_sqrt2, 1 + 5e-13)
        with pytest.raises(LensDomainError):
            lens_map(lens_sqrt2, 1.01)

    @given(st.floats(0, 2 * np.pi))
    def test_boundary_property(self, t):
        p = LensParams.from_gamma(3.0)
        s = lens_map(p, np.exp(1j * t))
        assert abs(max(abs(1 - s), abs(1 + s)) - 3.0) < 1e-10


class TestInverse:
    def test_values(self, lens_sqrt2):
        assert lens_map_inv(lens_sqrt2, 0) == 0
        assert abs(lens_map_inv(lens_sqrt2, 1j) - 1j) < 1e-15

    def test_outside(self, lens_sqrt2):
        with pytest.raises(LensDomainError):
            lens_map_inv(lens_sqrt2, 0.5)

    def test_numpy_oracle(self, rng):
        s = lens_map(LensParams.from_gamma(2.0), random_disc(rng, 300, 0.95))
        np.testing.assert_allclose(lens_map_inv(LensParams.from_gamma(2.0), s), oracles.lens_inv(2.0, s), atol=1e-12)


class TestContains:
    def test_examples(self, lens_sqrt2):
        assert lens_contains(lens_sqrt2, 0)
        assert not lens_contains(lens_sqrt2, 0.5)
        assert lens_contains(lens_sqrt2, 0.99j)

    def test_tolerance(self, lens_sqrt2):
        edge = SQRT2 - 1
        assert not lens_contains(lens_sqrt2, edge)
        assert lens_contains(lens_sqrt2, edge, tol=1e-12)


class TestDerivative:
    def test_sqrt2(self, lens_sqrt2):
        assert abs(lens_derivative_at_zero(lens_sqrt2) - 0.5) <= 1e-15

    def test_gamma_two(self):
        assert lens_derivative_at_zero(LensParams.from_gamma(2.0)) == pytest.approx(2 * math.sqrt(3) / 3, abs=1e-15)

    def test_small_alpha(self):
        assert lens_derivative_at_zero(LensParams.from_alpha(1e-6)) < 1e-11

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_contour(self, gamma):
        p = LensParams.from_gamma(gamma)
        d = schwarz_derivative(lambda w: lens_map(p, w), 0.5, 4096)
        assert abs(d - lens_derivative_at_zero(p)) < 1e-8


class TestSeriesMaps:
    def test_jet_of_F_sqrt2(self, lens_sqrt2):
        jet = lens_map_series(lens_sqrt2, TruncatedSeries.variable(9))
        np.testing.assert_allclose(jet.coeffs, oracles.f_sqrt2_coeffs(9), atol=1e-14)

    def test_order_three_jet(self, lens_sqrt2):
        jet = lens_map_series(lens_sqrt2, TruncatedSeries.variable(3))
        np.testing.assert_allclose(jet.coeffs, [0, 0.5, 0, -0.125], atol=1e-15)
        ext = taylor_coeffs(lambda w: lens_map(lens_sqrt2, w), 0.9, 4096, n_coeffs=4)
        np.testing.assert_allclose(ext.coeffs, [0, 0.5, 0, -0.125], atol=1e-10)

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_inverse_series(self, gamma, rng):
        p = LensParams.from_gamma(gamma)
        g = TruncatedSeries(np.r_[0.0, rng.normal(size=6) * 0.3])
        f = lens_map_inv_series(p, lens_map_series(p, g))
        assert f.allclose(g, atol=1e-11)

    def test_series_at_off_origin_centre(self, rng):
        p = LensParams.from_gamma(2.0)
        c = 0.3 + 0.2j
        jet = lens_map_series(p, TruncatedSeries.variable(6, c))
        h = 1e-3 * np.exp(1j * np.linspace(0, 2 * np.pi, 7))
        direct = lens_map(p, c + h)
        approx = np.array([jet(x) for x in h])
        np.testing.assert_allclose(approx, direct, atol=1e-15)

    def test_compose_consistency(self, rng):
        p = LensParams.from_gamma(2.0)
        inner = TruncatedSeries([0, 0.6, 0.1, -0.05, 0.02, 0, 0])
        via_compose = series_compose(lens_map_series(p, TruncatedSeries.variable(6)), inner)
        direct = lens_map_series(p, inner)
        assert via_compose.allclose(direct, atol=1e-12)
