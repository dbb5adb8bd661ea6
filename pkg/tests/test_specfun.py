"""Dawson's integral: frozen values, symmetry, and oracle agreement."""

import math

import numpy as np
import pytest

from sgnsep.specfun import DawsonEvalConfig, dawson

from conftest import dawson_oracle


class TestFrozenValues:
    def test_zero(self):
        assert dawson(0.0) == 0.0

    def test_unit_argument(self):
        # oracle value, alternating series at extended precision
        assert dawson(1.0) == pytest.approx(0.5380795069127684, rel=1e-14)

    def test_small_argument_law(self):
        # tiny z behaves like z (1 - 2 z^2 / 3)
        z = 0.01
        assert dawson(z) == pytest.approx(0.009999333359999238, rel=1e-13)
        # the cubic law has an O(z^4) relative remainder (~3e-9 here)
        assert dawson(z) == pytest.approx(z * (1 - 2 * z * z / 3), rel=1e-8)

    def test_large_argument(self):
        # oracle value; leading asymptotics 1/(2z) + 1/(4z^3) + ...
        assert dawson(20.0) == pytest.approx(0.025031367926403672, rel=1e-14)
        leading = 1 / 40 + 1 / (4 * 20**3) + 3 / (8 * 20**5)
        assert dawson(20.0) == pytest.approx(leading, rel=1e-6)


class TestSymmetryAndAccuracy:
    def test_odd_bit_for_bit(self, rng):
        z = rng.uniform(-40, 40, size=2000)
        left = dawson(-z)
        right = -dawson(z)
        assert np.array_equal(left, right)

    def test_oracle_agreement_production_grid(self):
        # independent series oracle vs the production path, 1e-12 relative
        grid = np.linspace(0.5, 10.0, 1000)
        prod = dawson(grid)
        worst = 0.0
        for z, p in zip(grid, prod):
            ref = float(dawson_oracle(z))
            worst = max(worst, abs(p - ref) / abs(ref))
        assert worst < 1e-12

    def test_accuracy_up_to_50(self):
        for z in [0.1, 3.0, 5.999, 6.001, 12.0, 30.0, 50.0]:
            ref = float(dawson_oracle(z))
            assert dawson(z) == pytest.approx(ref, rel=1e-12)

    def test_derivative_identity(self):
        # D'(z) = 1 - 2 z D(z), central differences h = 1e-5
        h = 1e-5
        for z in np.linspace(-5, 5, 101):
            fd = (dawson(z + h) - dawson(z - h)) / (2 * h)
            assert fd == pytest.approx(1 - 2 * z * dawson(z), abs=1e-6)

    def test_peak_location_and_value(self):
        # golden-section search on the oracle
        phi = (math.sqrt(5) - 1) / 2
        a, b = 0.5, 1.5
        c, d = b - phi * (b - a), a + phi * (b - a)
        while b - a > 1e-10:
            if dawson_oracle(c) > dawson_oracle(d):
                b, d = d, c
                c = b - phi * (b - a)
            else:
                a, c = c, d
                d = a + phi * (b - a)
        peak = 0.5 * (a + b)
        assert 0.92 < peak < 0.93
        assert 0.54 < float(dawson_oracle(peak)) < 0.55
        # production path peaks at the same point
        assert dawson(peak) == pytest.approx(float(dawson_oracle(peak)), rel=1e-13)


class TestDomainAndConfig:
    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite_scalar(self, bad):
        with pytest.raises(ValueError):
            dawson(bad)

    def test_non_finite_array(self):
        with pytest.raises(ValueError):
            dawson(np.array([0.1, math.nan]))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            DawsonEvalConfig(series_cutoff=-1.0)
        with pytest.raises(ValueError):
            DawsonEvalConfig(series_tol=0.0)
        with pytest.raises(ValueError):
            DawsonEvalConfig(series_tol=1e-9)  # too loose

    def test_custom_policy_changes_split_not_values(self):
        # any cutoff >= ~5.3 keeps the asymptotic branch below 1e-12
        cfg = DawsonEvalConfig(series_cutoff=5.5, series_tol=1e-15)
        for z in [0.5, 5.4, 5.6, 8.0]:
            assert dawson(z, config=cfg) == pytest.approx(dawson(z), rel=1e-12)

    def test_low_cutoff_floor_is_graceful(self):
        # cutting the series off early exposes the exp(-cutoff^2) floor of
        # the asymptotic branch; values stay sane, just less accurate
        cfg = DawsonEvalConfig(series_cutoff=3.0, series_tol=1e-15)
        z = 3.1
        assert dawson(z, config=cfg) == pytest.approx(dawson(z), rel=1e-3)

    def test_array_shape_preserved(self):
        z = np.linspace(-2, 2, 12).reshape(3, 4)
        out = dawson(z)
        assert out.shape == (3, 4)
