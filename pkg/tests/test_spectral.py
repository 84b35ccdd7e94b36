"""Test functions and the spectral semigroup action, against closed oracles."""

import numpy as np
import pytest

from bregmanlab.errors import ParameterError
from bregmanlab.functions import BandLimited, GaussianBump, GaussianMixture
from bregmanlab.models import SemigroupModel
from bregmanlab.spectral import (
    apply_generator,
    apply_semigroup,
    lp_norm_evolved,
    mass_conservation_check,
    pairing_integral,
    physical_agreement_check,
    spectral_table,
    stein_maximal_probe,
    supremum_decay_check,
)

GAUSS1 = SemigroupModel.gaussian(d=1)
CAUCHY1 = SemigroupModel.stable(1.0, d=1)
CAUCHY2 = SemigroupModel.stable(1.0, d=2)
BUMP = GaussianBump(amp=1.0, center=(0.0,), sigma=1.0, d=1)


class TestFunctionFamilies:
    def test_bump_norms_closed_form(self):
        # ||f||_p^p = |A|^p (2 pi s^2 / p)^{1/2} in one dimension.
        f = GaussianBump(amp=2.0, center=(0.5,), sigma=1.5, d=1)
        xs = np.linspace(-40, 40, 400001)
        for p in (2.0, 3.0):
            num = np.trapezoid(np.abs(f.value(xs)) ** p, xs)
            assert num == pytest.approx(f.lp_norm(p) ** p, rel=1e-10)

    def test_bump_fourier_inverts(self):
        f = GaussianBump(amp=1.3, center=(0.7,), sigma=0.8, d=1)
        xi = np.linspace(-40, 40, 200001)
        x = np.array([-1.0, 0.0, 0.4])
        inv = np.trapezoid(
            f.fourier(xi)[None, :] * np.exp(1j * np.outer(x, xi)), xi, axis=1
        ).real / (2 * np.pi)
        np.testing.assert_allclose(inv, f.value(x), rtol=1e-10)

    def test_heat_evolution_variance_rule(self):
        # Convolving with the speed-doubled kernel adds 2t to the variance.
        f = GaussianBump(amp=1.0, center=(0.0,), sigma=1.0, d=1)
        g = f.evolve_gaussian(0.5)
        assert g.sigma == pytest.approx(np.sqrt(2.0))
        assert g.amp == pytest.approx(1.0 / np.sqrt(2.0))
        assert g.mass() == pytest.approx(f.mass())

    def test_gradient_and_laplacian(self):
        f = GaussianBump(amp=1.0, center=(0.3,), sigma=0.9, d=1)
        x = np.linspace(-2, 2, 7)
        h = 1e-5
        fd_grad = (f.value(x + h) - f.value(x - h)) / (2 * h)
        fd_lap = (f.value(x + h) - 2 * f.value(x) + f.value(x - h)) / h**2
        np.testing.assert_allclose(f.gradient(x), fd_grad, rtol=1e-7, atol=1e-10)
        np.testing.assert_allclose(f.laplacian(x), fd_lap, rtol=1e-4, atol=1e-6)

    def test_band_limited_round_trip(self):
        f = BandLimited(amp=1.0, center=0.2, cutoff=3.0, carrier=2.0)
        xi = np.linspace(-6, 6, 100001)
        x = np.array([-0.5, 0.0, 1.2])
        inv = np.trapezoid(
            f.fourier(xi)[None, :] * np.exp(1j * np.outer(x, xi)), xi, axis=1
        ).real / (2 * np.pi)
        np.testing.assert_allclose(inv, f.value(x), rtol=1e-8, atol=1e-12)

    def test_band_limited_derivatives(self):
        f = BandLimited(amp=1.0, center=0.0, cutoff=2.5, carrier=1.0)
        x = np.array([-0.3, 0.8])
        h = 1e-5
        fd = (f.value(x + h) - f.value(x - h)) / (2 * h)
        np.testing.assert_allclose(f.gradient(x), fd, rtol=1e-7, atol=1e-10)

    def test_mixture_dimension_guard(self):
        with pytest.raises(ParameterError):
            GaussianMixture((GaussianBump(d=1), GaussianBump(center=(0.0, 0.0), d=2)))


class TestApplySemigroup:
    def test_time_zero_identity(self):
        x = np.linspace(-3, 3, 11)
        np.testing.assert_array_equal(apply_semigroup(CAUCHY1, BUMP, 0.0, x), BUMP.value(x))

    def test_gaussian_model_closed_versus_spectral(self):
        # The closed convolution oracle and the frequency route must agree.
        f = GaussianBump(amp=1.2, center=(0.4,), sigma=0.9, d=1)
        x = np.linspace(-5, 5, 41)
        closed = apply_semigroup(GAUSS1, f, 0.7, x)
        spectral = spectral_table(GAUSS1, [f], 0.7, x, ("value",))["value"][0]
        np.testing.assert_allclose(closed, spectral, atol=1e-10)

    def test_cauchy_action_against_kernel_quadrature(self):
        out = physical_agreement_check(CAUCHY1, BUMP, 0.5, [0.0, 0.7, 2.0])
        assert out["sup_difference"] < 1e-5

    def test_semigroup_property(self):
        x = np.linspace(-4, 4, 9)
        direct = apply_semigroup(CAUCHY1, BUMP, 0.6, x)
        # P_s applied to the gridded P_t f via direct kernel quadrature.
        from bregmanlab.models import kernel_density
        from scipy.integrate import simpson

        ys = np.linspace(-200, 200, 120001)
        pt = apply_semigroup(CAUCHY1, BUMP, 0.3, ys)
        two_step = np.array(
            [simpson(pt * kernel_density(CAUCHY1, 0.3, xx - ys), x=ys) for xx in x]
        )
        np.testing.assert_allclose(two_step, direct, atol=2e-6)

    def test_mass_conservation_signed(self):
        f = GaussianMixture(
            (
                GaussianBump(amp=1.0, center=(-1.0,), sigma=0.8, d=1),
                GaussianBump(amp=-0.6, center=(1.5,), sigma=1.1, d=1),
            )
        )
        for model, t in ((GAUSS1, 1.0), (CAUCHY1, 0.2), (CAUCHY1, 1.0)):
            out = mass_conservation_check(model, f, t)
            assert out["defect"] < 1e-6, (model, t, out)

    def test_two_dimensional_radial_reduction(self):
        # d=2 Cauchy action on a centered bump, against direct 2-d quadrature.
        f = GaussianBump(amp=1.0, center=(0.0, 0.0), sigma=1.0, d=2)
        val = apply_semigroup(CAUCHY2, f, 0.5, np.array([0.3, -0.4]))
        from bregmanlab.models import kernel_density

        g = np.linspace(-12, 12, 601)
        yy, zz = np.meshgrid(g, g, indexing="ij")
        pts = np.stack([yy, zz], axis=-1)
        fv = f.value(pts)
        shift = np.stack([0.3 - yy, -0.4 - zz], axis=-1)
        kv = kernel_density(CAUCHY2, 0.5, shift.reshape(-1, 2)).reshape(yy.shape)
        direct = np.trapezoid(np.trapezoid(fv * kv, g, axis=1), g)
        assert val == pytest.approx(direct, abs=5e-4)


class TestApplyGenerator:
    def test_gaussian_generator_is_laplacian(self):
        # Band-limited input: L f must equal the classical second derivative.
        f = BandLimited(amp=1.0, center=0.0, cutoff=3.0, carrier=1.5)
        x = np.linspace(-2, 2, 9)
        lap = apply_generator(GAUSS1, f, 0.0, x)
        np.testing.assert_allclose(lap, f.laplacian(x), rtol=1e-8, atol=1e-10)

    def test_gaussian_family_closed_path(self):
        f = GaussianBump(amp=1.0, center=(0.2,), sigma=1.1, d=1)
        x = np.linspace(-3, 3, 7)
        np.testing.assert_allclose(
            apply_generator(GAUSS1, f, 0.4, x),
            f.evolve_gaussian(0.4).laplacian(x),
            rtol=1e-12,
        )

    def test_semigroup_difference_quotient_first_order(self):
        # (P_h u - u)/h -> L u with first-order error in h.
        f = BandLimited(amp=1.0, center=0.0, cutoff=2.0, carrier=1.0)
        x = np.linspace(-1.5, 1.5, 7)
        lu = apply_generator(CAUCHY1, f, 0.0, x)
        errs = []
        for h in (0.02, 0.01):
            quotient = (apply_semigroup(CAUCHY1, f, h, x) - f.value(x)) / h
            errs.append(np.max(np.abs(quotient - lu)))
        ratio = errs[0] / errs[1]
        assert 1.6 < ratio < 2.6

    def test_zero_function(self):
        f = GaussianBump(amp=0.0, center=(0.0,), sigma=1.0, d=1)
        assert np.allclose(apply_generator(CAUCHY1, f, 0.5, np.zeros(3)), 0.0)

    def test_time_zero_guard(self):
        class Rough:
            d = 1

            def spectral_radius(self, tol=1e-17):
                return 50.0

            def fourier(self, xi):
                return np.exp(-np.abs(xi))

            def value(self, x):
                return np.zeros_like(x)

        with pytest.raises(ParameterError):
            apply_generator(CAUCHY1, Rough(), 0.0, np.zeros(2))


class TestNormsAndProbes:
    def test_lp_norm_against_closed_form(self):
        val, tail = lp_norm_evolved(CAUCHY1, [BUMP], 0.0, 3.0)
        assert val == pytest.approx(BUMP.lp_norm(3.0) ** 3, rel=1e-9)
        assert tail == 0.0

    def test_evolved_l2_norm_against_parseval(self):
        # ||P_t f||_2^2 = (1/2pi) int |fhat|^2 exp(-2 t |xi|) d xi.
        from scipy.integrate import quad

        t = 0.8
        ref, _ = quad(
            lambda xi: np.abs(BUMP.fourier(xi)) ** 2 * np.exp(-2.0 * t * abs(xi)),
            -12.0,
            12.0,
            limit=200,
        )
        ref /= 2.0 * np.pi
        val, tail = lp_norm_evolved(CAUCHY1, [BUMP], t, 2.0)
        assert val == pytest.approx(ref, rel=1e-7)
        assert tail < 1e-8 * ref

    def test_vector_norm(self):
        f1 = GaussianBump(amp=1.0, center=(-0.7,), sigma=1.0, d=1)
        f2 = GaussianBump(amp=0.8, center=(0.7,), sigma=1.2, d=1)
        xs = np.linspace(-30, 30, 200001)
        direct = np.trapezoid((f1.value(xs) ** 2 + f2.value(xs) ** 2) ** 1.5, xs)
        val, _ = lp_norm_evolved(CAUCHY1, [f1, f2], 0.0, 3.0)
        assert val == pytest.approx(direct, rel=1e-9)

    def test_pairing_integral(self):
        f = GaussianBump(amp=1.0, center=(-0.5,), sigma=1.0, d=1)
        g = GaussianBump(amp=0.9, center=(0.5,), sigma=1.1, d=1)
        xs = np.linspace(-30, 30, 200001)
        direct = np.trapezoid(f.value(xs) * np.abs(g.value(xs)) ** 2, xs)  # g > 0
        val, _ = pairing_integral(CAUCHY1, f, g, 0.0, 3.0)
        assert val == pytest.approx(direct, rel=1e-9)

    def test_stein_probe(self):
        out = stein_maximal_probe(CAUCHY1, BUMP, [0.0, 0.1, 0.5, 1.0, 5.0], 2.0, n_points=2001)
        assert out["passed"]
        assert out["dominates_function"]
        out3 = stein_maximal_probe(CAUCHY1, BUMP, [0.0], 3.0, n_points=1001)
        assert out3["passed"]  # trivial grid: g = |f| and p/(p-1) > 1

    def test_supremum_decay(self):
        out = supremum_decay_check(CAUCHY1, BUMP, 2.0, [1.0, 10.0, 100.0])
        assert out["passed"]
