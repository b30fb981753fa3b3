import numpy as np
import pytest

from chirptf import (
    ComplexSignal,
    ConfigurationError,
    SampleGrid,
    TFRMatrix,
    magnitude_db,
    make_grid,
)


class TestMakeGrid:
    def test_classic_fast_grid(self):
        g = make_grid(256, 1 / 256, 1.0)
        assert g.n_dft == 256
        assert g.n_freq == 256

    def test_slow_grid(self):
        g = make_grid(240, 1 / 2, 1 / 256)
        assert g.n_dft == 512

    def test_rejects_incommensurate_steps(self):
        with pytest.raises(ConfigurationError):
            make_grid(64, 1 / 16, 0.07)

    def test_reciprocal_integer_product_is_valid(self):
        # 1/(dt*df) = 16*13 = 208 exactly
        assert make_grid(64, 1 / 16, 1 / 13).n_dft == 208

    def test_rejects_nonpositive_steps(self):
        with pytest.raises(ValueError):
            make_grid(64, -1 / 64, 1.0)
        with pytest.raises(ValueError):
            make_grid(64, 1 / 64, 0.0)

    def test_rejects_empty_record(self):
        with pytest.raises(ValueError):
            make_grid(0, 1 / 64, 1.0)

    def test_rejects_offgrid_f0(self):
        with pytest.raises(ConfigurationError):
            make_grid(64, 1 / 64, 1.0, f0=0.25)

    def test_signed_frequency_axis(self):
        g = make_grid(256, 1 / 256, 1.0, f0=-110.0, n_freq=220)
        assert g.bin0 == -110
        assert g.freqs()[0] == -110.0
        assert g.freqs()[-1] == 109.0

    def test_rejects_n_freq_beyond_period(self):
        with pytest.raises(ConfigurationError):
            make_grid(64, 1 / 64, 1.0, n_freq=65)

    def test_index_roundtrip(self):
        g = make_grid(100, 1 / 2, 1 / 256, t0=3.0, f0=-0.25, n_freq=300)
        for m in (0, 1, 57, 99):
            assert g.time_index(g.times()[m]) == m
        for r in (0, 128, 299):
            assert g.freq_index(g.freqs()[r]) == r


class TestSignalAndTFR:
    def test_signal_length_must_match(self):
        g = make_grid(16, 1 / 16, 1.0)
        with pytest.raises(ConfigurationError):
            ComplexSignal(np.zeros(15, complex), g)

    def test_tfr_shape_must_match(self):
        g = make_grid(16, 1 / 16, 1.0, n_freq=8)
        with pytest.raises(ConfigurationError):
            TFRMatrix(np.zeros((16, 16), complex), g)

    def test_tfr_rejects_nonfinite(self):
        g = make_grid(4, 1 / 4, 1.0, n_freq=4)
        bad = np.zeros((4, 4), complex)
        bad[1, 2] = np.nan
        with pytest.raises(ValueError):
            TFRMatrix(bad, g)


class TestMagnitudeDb:
    def _tfr(self, values):
        values = np.asarray(values, complex)
        n = max(values.shape) * 2
        g = make_grid(values.shape[0], 1.0 / n, 1.0, n_freq=values.shape[1])
        return TFRMatrix(values, g)

    def test_peak_is_zero_db(self):
        db = magnitude_db(self._tfr([[1.0, 2.0], [0.5, 1.0]]))
        assert db[0, 1] == 0.0

    def test_half_peak(self):
        db = magnitude_db(self._tfr([[1.0, 0.5], [0.25, 0.125]]))
        assert db[0, 1] == pytest.approx(-6.0205999, abs=1e-6)

    def test_zero_matrix_maps_to_floor(self):
        db = magnitude_db(self._tfr(np.zeros((3, 3))), floor_db=-80.0)
        assert np.all(db == -80.0)

    def test_floor_clamps(self):
        db = magnitude_db(self._tfr([[1.0, 1e-9]]), floor_db=-60.0)
        assert db[0, 1] == -60.0

    def test_rejects_nonnegative_floor(self):
        with pytest.raises(ValueError):
            magnitude_db(self._tfr([[1.0]]), floor_db=0.0)

    def test_invariant_under_complex_scaling(self, rng):
        vals = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        a = magnitude_db(self._tfr(vals))
        b = magnitude_db(self._tfr(vals * (3.7 - 2.2j)))
        np.testing.assert_allclose(a, b, atol=1e-12)
