"""Signum-mask processor: transform accuracy, conventions, densities."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from sgnsep.errors import ConfigurationError, NumericalError
from sgnsep.processor import (
    SampledField,
    apply_signum,
    field_energy,
    filtered_intensity_gaussian,
    sample_psf,
    sgn_density,
)
from sgnsep.psf import gaussian_alpha, gaussian_psf
from sgnsep.specfun import dawson

from test_psf import TwoScaleGaussianPsf


def _analytic_filtered_amplitude(x, sigma=1.0):
    # i*sgn mask on the Gaussian amplitude: 2 c / sqrt(pi) * D(x / 2 sigma)
    c = (2 * math.pi * sigma**2) ** -0.25
    return 2 * c / math.sqrt(math.pi) * dawson(x / (2 * sigma))


class TestSignumMask:
    def test_rule(self, rng):
        from sgnsep.processor import signum_mask

        assert signum_mask(0.0) == 0.0
        f = rng.uniform(-5, 5, 100)
        vals = signum_mask(f)
        assert set(np.unique(vals)).issubset({-1.0, 0.0, 1.0})
        assert np.array_equal(signum_mask(-f), -vals)


class TestSampledField:
    def test_grid_invariants(self):
        with pytest.raises(ConfigurationError):
            SampledField(-8.0, 1 / 64, np.zeros(512))  # too short
        with pytest.raises(ConfigurationError):
            SampledField(-24.0, 1 / 64, np.zeros(1000))  # not a power of two
        with pytest.raises(ConfigurationError):
            SampledField(-7.9, 1 / 64, np.zeros(1024))  # asymmetric grid
        f = SampledField(-8.0, 1 / 64, np.zeros(1024))
        assert f.x[512] == 0.0

    def test_sample_psf_default_grid(self):
        f = sample_psf(gaussian_psf(1.0))
        assert f.values.shape == (4096,)
        assert f.grid_step == pytest.approx(1 / 64)


class TestApplySignum:
    def test_zero_field(self):
        f = SampledField(-8.0, 1 / 64, np.zeros(1024))
        out = apply_signum(f)
        assert np.all(out.values == 0.0)

    def test_gaussian_matches_dawson_form(self):
        f = sample_psf(gaussian_psf(1.0))
        out = apply_signum(f)
        assert out.grid_min == f.grid_min and out.grid_step == f.grid_step
        x = out.x
        sel = np.abs(x) <= 4.0
        # intensity against the closed form
        err_int = np.max(
            np.abs(out.values[sel] ** 2 - filtered_intensity_gaussian(x[sel], 0.0, 1.0))
        )
        assert err_int < 1e-6
        # amplitude including sign convention
        err_amp = np.max(np.abs(out.values[sel] - _analytic_filtered_amplitude(x[sel])))
        assert err_amp < 1e-8

    def test_output_odd_and_dark_at_center(self):
        out = apply_signum(sample_psf(gaussian_psf(1.0)))
        m = out.values.shape[0]
        assert abs(out.values[m // 2]) < 1e-15
        inten = out.values**2
        assert np.allclose(inten[1:], inten[1:][::-1], atol=1e-13)

    def test_double_application_negates_up_to_dc(self):
        f = sample_psf(gaussian_psf(1.0))
        twice = apply_signum(apply_signum(f))
        # the in-band content is negated; what cannot come back is the
        # DC-band background of scale (integrated amplitude)/domain
        domain = f.values.shape[0] * f.grid_step
        dc_scale = abs(float(np.sum(f.values)) * f.grid_step) / domain
        resid = np.max(np.abs(twice.values + f.values))
        assert resid < 3 * dc_scale
        assert resid < 0.12 * np.max(np.abs(f.values))
        # and it is nothing like the unnegated field
        assert np.max(np.abs(twice.values - f.values)) > np.max(np.abs(f.values))

    def test_window_energy_matches_analytic_window_mass(self):
        # the in-band transfer modulus is one; the window energy equals
        # the analytic filtered mass inside the window (the 1/x^2 tails
        # carry the rest)
        f = sample_psf(gaussian_psf(1.0))
        out = apply_signum(f)
        halfwidth = -f.grid_min
        expected, _ = quad(
            lambda x: filtered_intensity_gaussian(x, 0.0, 1.0),
            -halfwidth, halfwidth, points=[-1.0, 0.0, 1.0], limit=300,
        )
        # the residual ~1e-9 is the rectangle-rule discretization of the
        # energy sum, not filter error
        assert field_energy(out) == pytest.approx(expected, rel=1e-8)
        assert field_energy(f) == pytest.approx(1.0, rel=1e-10)

    def test_second_order_refinement_to_floor(self):
        def err(m, step):
            out = apply_signum(sample_psf(gaussian_psf(1.0), m=m, step=step))
            x = out.x
            sel = np.abs(x) <= 4.0
            return np.max(
                np.abs(out.values[sel] ** 2 - filtered_intensity_gaussian(x[sel], 0.0, 1.0))
            )

        e0 = err(4096, 1 / 64)
        e1 = err(8192, 1 / 128)
        assert e0 < 1e-6
        assert e1 <= e0 / 4 or e0 <= 1e-12

    def test_aliasing_guard(self):
        f = sample_psf(gaussian_psf(1.0), m=1024, step=1 / 4)
        with pytest.raises(ConfigurationError):
            apply_signum(f, feature_scale=1.0)

    def test_complex_input_supported(self):
        f = sample_psf(gaussian_psf(1.0))
        fc = SampledField(f.grid_min, f.grid_step, f.values * (1 + 0.5j))
        out = apply_signum(fc)
        ref = apply_signum(f)
        assert np.allclose(out.values, ref.values * (1 + 0.5j), atol=1e-14)


class TestFilteredIntensityGaussian:
    def test_dark_center_at_zero_separation(self):
        assert filtered_intensity_gaussian(0.0, 0.0, 1.0) == 0.0

    def test_frozen_center_value(self):
        # x=0, s=0.2: 2 sqrt(2)/pi^1.5 * D(0.05)^2
        got = filtered_intensity_gaussian(0.0, 0.2, 1.0)
        coef = 2 * math.sqrt(2) / math.pi**1.5
        assert got == pytest.approx(coef * dawson(0.05) ** 2, rel=1e-14)
        assert got == pytest.approx(1.2656475598877003e-3, rel=1e-10)

    @pytest.mark.parametrize("s", [0.0, 0.2, 1.0])
    def test_unit_mass_over_real_line(self, s):
        mass, _ = quad(
            lambda x: filtered_intensity_gaussian(x, s, 1.0),
            -np.inf, np.inf, limit=400, epsabs=1e-10, epsrel=1e-10,
        )
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_sigma_validation(self):
        with pytest.raises(ValueError):
            filtered_intensity_gaussian(0.0, 0.1, -1.0)


class TestSgnDensity:
    def test_trivial_zero(self):
        d = sgn_density(gaussian_psf(1.0), 0.0)
        assert d.pdf(0.0) == 0.0
        assert d.kind == "signum_filtered"

    def test_parabolic_core(self):
        # p ~ alpha (x^2 + s^2/4) within 1% for |x|, s <= 0.05 sigma
        alpha = gaussian_alpha(1.0)
        worst = 0.0
        for s in (0.01, 0.03, 0.05):
            d = sgn_density(gaussian_psf(1.0), s)
            x = np.linspace(-0.05, 0.05, 21)
            par = alpha * (x * x + s * s / 4)
            worst = max(worst, float(np.max(np.abs(d.pdf(x) / par - 1))))
        assert worst < 0.01

    def test_numeric_path_matches_analytic(self):
        psf = gaussian_psf(1.0)
        num = sgn_density(psf, 0.4, method="numeric")
        ana = sgn_density(psf, 0.4)
        x = np.linspace(-4, 4, 513)
        assert np.max(np.abs(num.pdf(x) - ana.pdf(x))) < 1e-6

    def test_numeric_path_component_and_fd_derivative(self):
        psf = gaussian_psf(1.0)
        num = sgn_density(psf, 0.3, method="numeric")
        ana = sgn_density(psf, 0.3)
        u = np.linspace(-3, 3, 101)
        assert np.max(np.abs(num.component_intensity(u) - ana.component_intensity(u))) < 1e-5
        x = np.linspace(-1, 1, 11)
        assert np.allclose(num.dpdf_ds(x), ana.dpdf_ds(x), atol=1e-4)

    def test_numeric_path_non_gaussian(self):
        from sgnsep.psf import parabolic_alpha

        psf = TwoScaleGaussianPsf(1.0)
        d = sgn_density(psf, 0.2)  # auto routes to numeric
        x = np.linspace(-6, 6, 301)
        p = d.pdf(x)
        assert np.all(p >= 0)
        assert np.allclose(p, d.pdf(-x), atol=1e-12)
        # dark center scales like alpha s^2/4 for any even profile
        alpha = parabolic_alpha(psf, method="quadrature")
        assert d.pdf(0.0) == pytest.approx(alpha * 0.2**2 / 4, rel=0.01)

    def test_mass_bookkeeping_gate(self):
        # a minimal window leaves too much unexplained tail mass
        with pytest.raises(NumericalError):
            sgn_density(gaussian_psf(1.0), 0.1, method="numeric", m=1024, step=1 / 120)

    def test_grid_step_guard(self):
        with pytest.raises(ConfigurationError):
            sgn_density(gaussian_psf(1.0), 0.1, method="numeric", m=1024, step=0.2)

    def test_analytic_requires_gaussian(self):
        with pytest.raises(ValueError):
            sgn_density(TwoScaleGaussianPsf(1.0), 0.1, method="analytic")
