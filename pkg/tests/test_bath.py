"""Tests for bath spectral densities and fluctuation weights."""

import numpy as np
import pytest

from bath import BathSpec, fluctuation_weight, occupation, spectral_density, thermal_weight


class TestBathSpec:
    """Validation of bath parameters."""

    def test_valid_bath(self):
        bath = BathSpec(3, 0.01, 1e2)
        assert bath.has_closed_form
        assert not bath.is_vacuum

    def test_vacuum_flag(self):
        assert BathSpec(1, 0.25, 0.0).is_vacuum

    def test_general_dimension_has_no_closed_form(self):
        assert not BathSpec(2, 0.25, 1.0).has_closed_form

    @pytest.mark.parametrize(
        "d, c, theta",
        [(0, 0.25, 1.0), (1.5, 0.25, 1.0), (1, 0.0, 1.0), (1, -0.1, 1.0), (1, 0.25, -1e-3), (1, np.inf, 1.0)],
    )
    def test_invalid_parameters_raise(self, d, c, theta):
        with pytest.raises(ValueError):
            BathSpec(d, c, theta)


class TestSpectralDensity:
    """I_d(x) = c x^d exp(-x)."""

    def test_ohmic_value(self, ohmic):
        assert spectral_density(ohmic, 2.0) == pytest.approx(0.25 * 2.0 * np.exp(-2.0), rel=1e-14)

    def test_super_ohmic_peak_at_x_equals_d(self, super_ohmic):
        x = np.linspace(0.5, 6.0, 1101)
        values = spectral_density(super_ohmic, x)
        assert x[np.argmax(values)] == pytest.approx(3.0, abs=1e-2)

    def test_zero_frequency_is_zero(self, ohmic):
        assert spectral_density(ohmic, 0.0) == 0.0

    def test_negative_frequency_raises(self, ohmic):
        with pytest.raises(ValueError):
            spectral_density(ohmic, -1.0)

    def test_array_in_array_out(self, ohmic):
        out = spectral_density(ohmic, np.array([1.0, 2.0]))
        assert isinstance(out, np.ndarray) and out.shape == (2,)


class TestFluctuationWeights:
    """coth(x/2theta) = 1 + 2<N>, with a series at small x/theta."""

    def test_coth_identity(self):
        x = np.geomspace(1e-6, 50.0, 200)
        for theta in (1e-3, 1.0, 1e2):
            total = fluctuation_weight(theta, x, "total")
            split = fluctuation_weight(theta, x, "vacuum") + fluctuation_weight(theta, x, "thermal")
            np.testing.assert_allclose(total, split, rtol=1e-9)

    def test_coth_matches_numpy(self):
        x = np.array([0.01, 0.5, 2.0, 10.0])
        np.testing.assert_allclose(thermal_weight(1.0, x), 1.0 / np.tanh(x / 2.0), rtol=1e-12)

    def test_series_branch_is_continuous(self):
        theta = 1.0
        below = thermal_weight(theta, 2.0 * theta * 0.999e-4)
        above = thermal_weight(theta, 2.0 * theta * 1.001e-4)
        expected = 1.0 / np.tanh(np.array([0.999e-4, 1.001e-4]))
        assert below == pytest.approx(expected[0], rel=1e-12)
        assert above == pytest.approx(expected[1], rel=1e-12)

    def test_vacuum_weight_is_one(self):
        assert thermal_weight(0.0, 3.0) == 1.0
        assert occupation(0.0, 3.0) == 0.0

    def test_occupation_large_argument_does_not_overflow(self):
        assert occupation(1e-3, 50.0) == 0.0

    def test_zero_frequency_raises(self):
        with pytest.raises(ValueError):
            thermal_weight(1.0, 0.0)

    def test_unknown_fluctuations_raise(self):
        with pytest.raises(ValueError):
            fluctuation_weight(1.0, 1.0, "quantum")
