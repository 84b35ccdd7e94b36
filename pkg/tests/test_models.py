"""Semigroup models: exponents, jump densities, kernels, standing assumptions."""

import numpy as np
import pytest

from bregmanlab.errors import ParameterError, SingularityError, UnsupportedModelError
from bregmanlab.models import (
    SemigroupModel,
    chapman_kolmogorov_defect,
    check_P1_P2,
    conservativeness_defect,
    hartman_wintner_probe,
    kernel_density,
    kernel_sup,
    kernel_tail_mass,
    levy_constant,
    levy_constant_gamma,
    levy_density,
    levy_exponent,
    levy_integrability_check,
    levy_tail_mass,
)

GAUSS1 = SemigroupModel.gaussian(d=1)
GAUSS2 = SemigroupModel.gaussian(d=2)
CAUCHY1 = SemigroupModel.stable(1.0, d=1)
CAUCHY2 = SemigroupModel.stable(1.0, d=2)
STABLE_HALF = SemigroupModel.stable(0.5, d=1)
STABLE_32 = SemigroupModel.stable(1.5, d=1)


class TestModelValidation:
    def test_rejects_alpha_out_of_range(self):
        for bad in (0.0, 2.0, -1.0):
            with pytest.raises(ParameterError):
                SemigroupModel.stable(bad)

    def test_rejects_dimension(self):
        with pytest.raises(ParameterError):
            SemigroupModel.gaussian(d=3)

    def test_gaussian_takes_no_index(self):
        with pytest.raises(ParameterError):
            SemigroupModel(kind="gaussian", alpha=1.0)


class TestExponent:
    def test_zero(self):
        assert levy_exponent(CAUCHY1, 0.0) == 0.0
        assert levy_exponent(GAUSS2, np.zeros(2)) == 0.0

    def test_stable_value(self):
        assert levy_exponent(CAUCHY1, 2.0) == pytest.approx(2.0)
        assert levy_exponent(STABLE_HALF, 4.0) == pytest.approx(2.0)

    def test_symmetry(self):
        xi = np.linspace(-3, 3, 11)
        np.testing.assert_allclose(levy_exponent(STABLE_32, xi), levy_exponent(STABLE_32, -xi))

    def test_hartman_wintner(self):
        for model in (CAUCHY1, STABLE_HALF, GAUSS2):
            probe = hartman_wintner_probe(model)
            assert probe["increasing"] and probe["large"]


class TestLevyDensity:
    def test_cauchy_constant(self):
        # nu(x) = 1/(pi x^2) in the Cauchy case.
        assert levy_density(CAUCHY1, 1.0) == pytest.approx(1.0 / np.pi, rel=1e-9)
        assert levy_density(CAUCHY1, 2.0) == pytest.approx(1.0 / (4.0 * np.pi), rel=1e-9)

    @pytest.mark.parametrize("model", [CAUCHY1, CAUCHY2, STABLE_HALF, STABLE_32,
                                       SemigroupModel.stable(0.5, d=2),
                                       SemigroupModel.stable(1.5, d=2)])
    def test_quadrature_constant_matches_gamma_formula(self, model):
        assert levy_constant(model) == pytest.approx(levy_constant_gamma(model), rel=1e-6)

    def test_symmetric(self):
        x = np.array([0.7, -0.7])
        vals = levy_density(STABLE_32, x)
        assert vals[0] == vals[1]

    def test_singularity_and_unsupported(self):
        with pytest.raises(SingularityError):
            levy_density(CAUCHY1, 0.0)
        with pytest.raises(UnsupportedModelError):
            levy_density(GAUSS1, 1.0)

    @pytest.mark.parametrize("model", [CAUCHY1, STABLE_HALF, SemigroupModel.stable(1.5, d=2)])
    def test_integrability(self, model):
        out = levy_integrability_check(model)
        assert out["finite"]
        assert out["value"] == pytest.approx(out["closed_form"], rel=1e-8)

    def test_tail_mass_closed_form(self):
        # d=1: integral of c x^-2 over |x|>R is 2c/R.
        c = levy_constant(CAUCHY1)
        assert levy_tail_mass(CAUCHY1, 4.0) == pytest.approx(2.0 * c / 4.0)


class TestKernel:
    def test_gaussian_value_by_hand(self):
        # (4 pi t)^{-1/2} at t = 1/(4 pi) is exactly 1.
        assert kernel_density(GAUSS1, 1.0 / (4.0 * np.pi), 0.0) == pytest.approx(1.0)

    def test_cauchy_value_by_hand(self):
        assert kernel_density(CAUCHY1, 1.0, 0.0) == pytest.approx(1.0 / np.pi)
        assert kernel_density(CAUCHY1, 1.0, 1.0) == pytest.approx(1.0 / (2.0 * np.pi))

    def test_rejects_nonpositive_time(self):
        with pytest.raises(ParameterError):
            kernel_density(CAUCHY1, 0.0, 1.0)

    @pytest.mark.parametrize("model", [GAUSS1, CAUCHY1, STABLE_HALF, STABLE_32])
    def test_symmetry_and_positivity(self, model):
        xs = np.linspace(-8.0, 8.0, 33)
        vals = kernel_density(model, 0.7, xs)
        assert np.all(vals > 0.0)
        np.testing.assert_allclose(vals, vals[::-1], rtol=1e-11)

    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    def test_series_and_quadrature_agree_across_switch(self, alpha):
        # Evaluate straddling the routing radius by scaling time.
        from bregmanlab.models import _series_rho_threshold, _stable_p1_quad, _stable_p1_series

        thresh = _series_rho_threshold(alpha)
        rho = np.linspace(thresh, thresh + 4.0, 9)
        series, bound = _stable_p1_series(alpha, 1, rho)
        quadv = _stable_p1_quad(alpha, 1, rho)
        np.testing.assert_allclose(series, quadv, rtol=1e-9, atol=1e-13)
        assert np.all(bound <= 1e-10 * np.abs(series) + 1e-15)

    def test_series_matches_cauchy_closed_form(self):
        from bregmanlab.models import _stable_p1_series

        rho = np.array([3.0, 6.0, 20.0])
        series, _ = _stable_p1_series(1.0, 1, rho)
        np.testing.assert_allclose(series, 1.0 / (np.pi * (1.0 + rho**2)), rtol=1e-10)
        series2, _ = _stable_p1_series(1.0, 2, rho)
        np.testing.assert_allclose(series2, 1.0 / (2.0 * np.pi * (1.0 + rho**2) ** 1.5), rtol=1e-10)

    def test_self_similarity(self):
        # p_t(x) = t^{-1/a} p_1(x t^{-1/a}); evaluated through different routes.
        for model in (STABLE_HALF, STABLE_32):
            a = model.alpha
            t = 0.37
            x = np.array([0.1, 0.9, 4.0, 9.0])
            lhs = kernel_density(model, t, x)
            rhs = t ** (-1.0 / a) * kernel_density(model, 1.0, x * t ** (-1.0 / a))
            np.testing.assert_allclose(lhs, rhs, rtol=1e-9)

    def test_sup_closed_forms(self):
        assert kernel_sup(GAUSS2, 0.5) == pytest.approx((4.0 * np.pi * 0.5) ** -1.0)
        assert kernel_sup(CAUCHY1, 2.0) == pytest.approx(kernel_density(CAUCHY1, 2.0, 0.0))
        for model in (STABLE_HALF, STABLE_32, CAUCHY2):
            small = 1e-9 if model.d == 1 else np.array([1e-9, 0.0])
            assert kernel_sup(model, 1.3) == pytest.approx(
                float(kernel_density(model, 1.3, small)), rel=1e-6
            )

    def test_sup_decreasing_to_zero(self):
        ts = np.array([0.01, 0.1, 1.0, 10.0, 100.0])
        for model in (GAUSS1, CAUCHY1, STABLE_HALF):
            sups = np.array([kernel_sup(model, t) for t in ts])
            assert np.all(np.diff(sups) < 0.0)
            assert sups[-1] < 1e-1

    def test_tail_mass_gaussian_and_cauchy(self):
        # One-sided normal tail and arctan tail, checked against quadrature.
        from scipy.integrate import quad

        val = kernel_tail_mass(GAUSS1, 0.5, 3.0)
        ref, _ = quad(lambda x: kernel_density(GAUSS1, 0.5, x), 3.0, np.inf)
        assert val == pytest.approx(2.0 * ref, rel=1e-9)
        val = kernel_tail_mass(CAUCHY1, 0.5, 3.0)
        ref, _ = quad(lambda x: kernel_density(CAUCHY1, 0.5, x), 3.0, np.inf)
        assert val == pytest.approx(2.0 * ref, rel=1e-9)

    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    def test_tail_mass_series_vs_quadrature(self, alpha):
        from scipy.integrate import quad

        model = SemigroupModel.stable(alpha, d=1)
        radius = 10.0
        val = kernel_tail_mass(model, 1.0, radius)
        ref, _ = quad(lambda x: kernel_density(model, 1.0, x), radius, radius + 4000.0, limit=400)
        # Add the remainder beyond the quadrature window from the series itself.
        rem = kernel_tail_mass(model, 1.0, radius + 4000.0)
        assert val == pytest.approx(2.0 * ref + rem, rel=1e-6)


class TestConservativeness:
    @pytest.mark.parametrize("model", [GAUSS1, GAUSS2, CAUCHY1, CAUCHY2, STABLE_HALF, STABLE_32])
    @pytest.mark.parametrize("t", [0.01, 1.0, 10.0])
    def test_mass_is_one(self, model, t):
        out = conservativeness_defect(model, t)
        assert out["defect"] < 1e-6, out


class TestChapmanKolmogorov:
    @pytest.mark.parametrize("model", [GAUSS1, CAUCHY1])
    @pytest.mark.parametrize("st", [(0.1, 0.1), (0.5, 1.0)])
    def test_convolution_matches_direct(self, model, st):
        out = chapman_kolmogorov_defect(model, *st)
        assert out["sup_defect"] < 1e-6, out

    def test_generic_alpha(self):
        out = chapman_kolmogorov_defect(STABLE_32, 0.5, 1.0)
        assert out["sup_defect"] < 1e-6, out


class TestP1P2:
    def test_cauchy_closed_oracle(self):
        # p_t(x)/(t nu(x)) = x^2/(t^2+x^2) -> 1; at t=1e-3, |x|>=0.5 within 1%.
        out = check_P1_P2(CAUCHY1)
        assert out["limit_max_deviation"] < 0.01
        assert out["sup_ratio"] <= 1.0 + 1e-9
        assert out["tail_decreasing"]

    @pytest.mark.parametrize("model", [STABLE_HALF, STABLE_32])
    def test_generic_alpha_bounded_and_limiting(self, model):
        out = check_P1_P2(model)
        assert np.isfinite(out["sup_ratio"])
        assert out["limit_max_deviation"] < 0.01

    def test_needs_stable(self):
        with pytest.raises(ParameterError):
            check_P1_P2(GAUSS1)
