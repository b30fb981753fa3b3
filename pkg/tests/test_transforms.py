import math

import numpy as np
import pytest

from chirptf import (
    ComplexSignal,
    ConfigurationError,
    SigmaField,
    TruncationConfig,
    astft_direct,
    astft_fft_freq,
    astft_fft_time,
    make_grid,
    s_transform,
    window_value,
)
from chirptf.backend import direct_sum, numpy_direct_sum
from chirptf.kernels import truncation_radii

from conftest import fast_path_sigma_range, random_signal


def rel_err(got, want):
    return np.abs(got.values - want.values).max() / np.abs(want.values).max()


class TestSigmaField:
    def test_kind_shapes(self):
        SigmaField.constant(0.1)
        SigmaField.per_time(np.full(8, 0.1))
        SigmaField.per_freq(np.full(4, 0.1))
        SigmaField.full(np.full((8, 4), 0.1))
        with pytest.raises(ValueError):
            SigmaField("constant", np.full(3, 0.1), 0.1, 0.1)

    def test_bounds_enforced(self):
        with pytest.raises(ValueError):
            SigmaField.per_time(np.array([0.1, 0.5]), bounds=(0.2, 0.4))

    def test_wrong_kind_for_fast_path(self):
        grid = make_grid(16, 1 / 16, 1.0)
        x = random_signal(grid, 0)
        fld = SigmaField.per_freq(np.full(16, 0.05))
        with pytest.raises(ConfigurationError):
            astft_fft_time(x, grid, fld)
        fld_t = SigmaField.per_time(np.full(16, 0.05))
        with pytest.raises(ConfigurationError):
            astft_fft_freq(x, grid, fld_t)


class TestDirect:
    def test_zero_signal(self):
        grid = make_grid(32, 1 / 32, 1.0)
        x = ComplexSignal(np.zeros(32, complex), grid)
        tfr = astft_direct(x, grid, SigmaField.constant(0.1))
        assert np.all(tfr.values == 0)

    def test_impulse_closed_form(self):
        grid = make_grid(64, 1 / 64, 1.0, n_freq=32)
        z = np.zeros(64, complex)
        l0 = 30
        z[l0] = 1.0
        x = ComplexSignal(z, grid)
        sigma = 0.05
        tfr = astft_direct(x, grid, SigmaField.constant(sigma))
        mags = np.abs(tfr.values)
        m = np.arange(64)
        want = grid.dt * window_value(sigma, (m - l0) * grid.dt)
        q = truncation_radii(np.array([sigma]), grid.dt, TruncationConfig(), 31)[0]
        want[np.abs(m - l0) > q] = 0.0
        np.testing.assert_allclose(mags, want[:, None].repeat(32, axis=1), atol=1e-15)

    def test_grid_mismatch(self):
        g1 = make_grid(32, 1 / 32, 1.0)
        g2 = make_grid(32, 1 / 32, 1.0, f0=1.0)
        x = random_signal(g1, 1)
        with pytest.raises(ConfigurationError):
            astft_direct(x, g2, SigmaField.constant(0.1))

    def test_linearity(self):
        grid = make_grid(48, 1 / 64, 1 / 2, n_freq=40)
        fld = SigmaField.per_time(np.linspace(0.05, 0.1, 48))
        x = random_signal(grid, 2)
        y = random_signal(grid, 3)
        a, b = 1.7 - 0.3j, -0.8 + 2.1j
        combo = ComplexSignal(a * x.samples + b * y.samples, grid)
        lhs = astft_direct(combo, grid, fld).values
        rhs = a * astft_direct(x, grid, fld).values + b * astft_direct(y, grid, fld).values
        np.testing.assert_allclose(lhs, rhs, atol=1e-12 * np.abs(rhs).max())

    def test_boundary_columns_flagged(self):
        grid = make_grid(64, 1 / 64, 1.0)
        x = random_signal(grid, 4)
        tfr = astft_direct(x, grid, SigmaField.constant(0.05))
        assert tfr.boundary is not None
        assert tfr.boundary[0] and tfr.boundary[-1]
        assert not tfr.boundary[32]


class TestFastPathOracleEquivalence:
    @pytest.mark.parametrize("n_dft", [64, 128, 256])
    def test_time_path(self, n_dft):
        grid = make_grid(n_dft // 2, 1.0 / n_dft, 1.0, f0=-(n_dft // 8) * 1.0, n_freq=n_dft // 2)
        x = random_signal(grid, n_dft)
        smin, smax = fast_path_sigma_range(grid)
        rng = np.random.default_rng(n_dft + 1)
        sig = np.exp(rng.uniform(np.log(smin), np.log(smax), grid.n_time))
        fld = SigmaField.per_time(sig)
        assert rel_err(astft_fft_time(x, grid, fld), astft_direct(x, grid, fld)) <= 1e-9

    @pytest.mark.parametrize("n_dft", [64, 128, 256])
    def test_freq_path(self, n_dft):
        grid = make_grid(n_dft // 2, 1.0 / n_dft, 1.0, f0=-(n_dft // 8) * 1.0, n_freq=n_dft // 2)
        x = random_signal(grid, 2 * n_dft)
        smin, smax = fast_path_sigma_range(grid)
        rng = np.random.default_rng(n_dft + 2)
        sig = np.exp(rng.uniform(np.log(smin), np.log(smax), grid.n_freq))
        fld = SigmaField.per_freq(sig)
        assert rel_err(astft_fft_freq(x, grid, fld), astft_direct(x, grid, fld)) <= 1e-9

    @pytest.mark.parametrize("path", ["time", "freq"])
    def test_periodic_extension_full_period(self, path):
        n = 128
        grid = make_grid(n, 1.0 / n, 1.0, f0=-32.0, n_freq=n)
        x = random_signal(grid, 77)
        kt = math.sqrt(2 * math.log(1e12))
        half = (n - 1) // 2
        smin, smax = kt / (2 * math.pi * half), half / (n * kt)
        rng = np.random.default_rng(78)
        tr = TruncationConfig(extension="periodic")
        if path == "time":
            fld = SigmaField.per_time(np.exp(rng.uniform(np.log(smin), np.log(smax), n)))
            fast = astft_fft_time(x, grid, fld, tr)
        else:
            fld = SigmaField.per_freq(np.exp(rng.uniform(np.log(smin), np.log(smax), n)))
            fast = astft_fft_freq(x, grid, fld, tr)
        ref = astft_direct(x, grid, fld, tr)
        assert rel_err(fast, ref) <= 1e-9
        assert not fast.boundary.any()

    def test_periodic_requires_full_period(self):
        grid = make_grid(32, 1 / 64, 1.0)
        x = random_signal(grid, 5)
        with pytest.raises(ConfigurationError):
            astft_direct(x, grid, SigmaField.constant(0.05), TruncationConfig(extension="periodic"))

    def test_record_longer_than_period_rejected_on_freq_path(self):
        grid = make_grid(96, 1 / 64, 1.0)
        x = random_signal(grid, 6)
        with pytest.raises(ConfigurationError):
            astft_fft_freq(x, grid, SigmaField.constant(0.05))

    def test_impulse_matches_direct_example(self):
        grid = make_grid(32, 1 / 64, 1.0, n_freq=64)
        z = np.zeros(32, complex)
        z[10] = 1.0
        x = ComplexSignal(z, grid)
        fld = SigmaField.constant(0.05)
        np.testing.assert_allclose(
            astft_fft_time(x, grid, fld).values,
            astft_direct(x, grid, fld).values,
            atol=1e-15,
        )

    def test_zero_signal_fast_paths(self):
        grid = make_grid(32, 1 / 64, 1.0)
        x = ComplexSignal(np.zeros(32, complex), grid)
        assert np.all(astft_fft_time(x, grid, SigmaField.constant(0.1)).values == 0)
        assert np.all(astft_fft_freq(x, grid, SigmaField.constant(0.1)).values == 0)


class TestTimeShiftCovariance:
    def test_interior_column_magnitudes(self):
        grid = make_grid(128, 1 / 128, 1.0, n_freq=64)
        rng = np.random.default_rng(9)
        base = np.zeros(128, complex)
        base[30:70] = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        shift = 20
        shifted = np.roll(base, shift)
        sigma = 0.03
        fld = SigmaField.constant(sigma)
        a = astft_direct(ComplexSignal(base, grid), grid, fld)
        b = astft_direct(ComplexSignal(shifted, grid), grid, fld)
        q = int(truncation_radii(np.array([sigma]), grid.dt, TruncationConfig(), 63)[0])
        cols = np.arange(q, 128 - q - shift)
        lhs = np.abs(b.values[cols + shift])
        rhs = np.abs(a.values[cols])
        assert np.abs(lhs - rhs).max() <= 1e-9 * np.abs(a.values).max()


class TestSTransform:
    def _band_grid(self):
        # rows 32..100: both fast-path truncations stay uncapped for the
        # 1/f^p widths used below
        return make_grid(128, 1 / 256, 1.0, f0=32.0, n_freq=69)

    def test_tone_ridge(self):
        grid = make_grid(128, 1 / 128, 1.0, f0=0.0, n_freq=64)
        t = grid.times()
        x = ComplexSignal(np.exp(2j * np.pi * 20.0 * t), grid)
        tfr = s_transform(x, grid, p=1.0)
        ridge = np.argmax(np.abs(tfr.values), axis=1)
        assert np.all(ridge == 20)

    def test_matches_direct_oracle_off_dc(self):
        grid = self._band_grid()
        x = random_signal(grid, 11)
        for p in (1.0, 0.8):
            st = s_transform(x, grid, p=p)
            fld = SigmaField.per_freq(1.0 / np.abs(grid.freqs()) ** p)
            ref = astft_direct(x, grid, fld)
            assert rel_err(st, ref) <= 1e-9

    def test_matches_fft_freq_with_inverse_width_field(self):
        grid = self._band_grid()
        x = random_signal(grid, 12)
        st = s_transform(x, grid, p=1.0)
        fld = SigmaField.per_freq(1.0 / np.abs(grid.freqs()))
        alt = astft_fft_freq(x, grid, fld)
        np.testing.assert_allclose(st.values, alt.values, rtol=0, atol=1e-14 * np.abs(st.values).max())

    def test_dc_row_is_signal_mean(self):
        grid = make_grid(64, 1 / 64, 1.0, f0=-8.0, n_freq=24)
        x = random_signal(grid, 13)
        tfr = s_transform(x, grid, p=1.0)
        dc = tfr.values[:, grid.freq_index(0.0)]
        np.testing.assert_allclose(dc, np.full(64, x.samples.mean()), atol=1e-15)

    def test_constant_signal_energy_in_dc_row(self):
        grid = make_grid(64, 1 / 64, 1.0, f0=-8.0, n_freq=24)
        x = ComplexSignal(np.full(64, 2.0 + 0j), grid)
        tfr = s_transform(x, grid, p=1.0)
        mags = np.abs(tfr.values)
        dc = grid.freq_index(0.0)
        interior = slice(16, 48)
        off_dc = np.delete(mags[interior], dc, axis=1)
        assert mags[interior, dc].min() > 50 * off_dc.max()

    def test_rejects_bad_p(self):
        grid = self._band_grid()
        x = random_signal(grid, 14)
        with pytest.raises(ValueError):
            s_transform(x, grid, p=0.0)


class TestBackends:
    def test_numpy_fallback_matches_active_backend(self):
        grid = make_grid(48, 1 / 96, 2.0, f0=-20.0, n_freq=40)
        x = random_signal(grid, 15)
        rng = np.random.default_rng(16)
        sigma = np.exp(rng.uniform(np.log(0.02), np.log(0.06), (48, 40)))
        q = truncation_radii(sigma, grid.dt, TruncationConfig(), (grid.n_dft - 1) // 2)
        a = direct_sum(x.samples, sigma, q, grid.bin0, grid.n_dft, grid.dt)
        b = numpy_direct_sum(x.samples, sigma, q, grid.bin0, grid.n_dft, grid.dt)
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-12 * np.abs(a).max())

    def test_numpy_fallback_matches_periodic(self):
        grid = make_grid(48, 1 / 48, 1.0, n_freq=48)
        x = random_signal(grid, 17)
        sigma = np.full((48, 48), 0.05)
        q = truncation_radii(sigma, grid.dt, TruncationConfig(), (grid.n_dft - 1) // 2)
        a = direct_sum(x.samples, sigma, q, 0, 48, grid.dt, periodic=True)
        b = numpy_direct_sum(x.samples, sigma, q, 0, 48, grid.dt, periodic=True)
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-12 * np.abs(a).max())
