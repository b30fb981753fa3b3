import math

import numpy as np
import pytest

from chirptf import (
    Component,
    DegenerateInputError,
    Envelope,
    NoiseSpec,
    SignalSpec,
    SinusoidalPhase,
    add_awgn,
    analytic_if,
    make_grid,
    synthesize,
)

from conftest import lfm_spec, sinfm_spec, two_lfm_spec


class TestSynthesize:
    def test_lfm_unit_start(self):
        grid = make_grid(64, 1 / 64, 1.0)
        x = synthesize(lfm_spec(-20.0, 100.0), grid)
        assert x.samples[0] == pytest.approx(1.0 + 0.0j)

    def test_two_lfm_formula_sample_by_sample(self):
        grid = make_grid(240, 0.5, 1 / 256, n_freq=260)
        x = synthesize(two_lfm_spec(), grid)
        t = grid.times()
        f1, f2, f3, f4 = 0.05, 0.5, 0.15, 2.0
        want = np.exp(2j * np.pi * (f1 * t + (f2 - f1) / 512 * t**2)) + np.exp(
            2j * np.pi * (f3 * t + (f4 - f3) / 512 * t**2)
        )
        np.testing.assert_allclose(x.samples, want, atol=1e-12)

    def test_sinusoidal_fm_formula(self):
        grid = make_grid(128, 1 / 128, 1.0, n_freq=64)
        x = synthesize(sinfm_spec(), grid)
        t = grid.times()
        want = np.exp(1j * (60 * np.pi * t + 3 * np.pi * np.cos(4 * np.pi * t)))
        np.testing.assert_allclose(x.samples, want, atol=1e-12)

    def test_real_output_flag(self):
        grid = make_grid(64, 1 / 64, 1.0)
        spec = SignalSpec(components=(Component(poly=(0.0, 10.0)),), real_output=True)
        x = synthesize(spec, grid)
        assert np.all(x.samples.imag == 0)
        np.testing.assert_allclose(x.samples.real, np.cos(2 * np.pi * 10.0 * grid.times()), atol=1e-12)

    def test_random_envelope_seed_determinism(self):
        grid = make_grid(64, 1 / 64, 1.0)
        spec = SignalSpec(
            components=(
                Component(poly=(0.0, 5.0), envelope=Envelope(kind="random_abs_gauss", seed=9)),
            )
        )
        a = synthesize(spec, grid)
        b = synthesize(spec, grid)
        np.testing.assert_array_equal(a.samples, b.samples)
        env = np.abs(a.samples)
        assert np.all(env >= 0)

    def test_sinusoidal_envelope(self):
        grid = make_grid(64, 1 / 64, 1.0)
        env = Envelope(kind="sinusoidal", c0=3.0, c1=-1.0, omega=0.2 * math.pi)
        spec = SignalSpec(components=(Component(poly=(0.0, 2.0), envelope=env),))
        x = synthesize(spec, grid)
        t = grid.times()
        np.testing.assert_allclose(
            np.abs(x.samples), 3.0 - np.cos(0.2 * math.pi * t), atol=1e-12
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            SignalSpec(components=())
        with pytest.raises(ValueError):
            Component(poly=(0.0,) * 8)
        with pytest.raises(ValueError):
            SinusoidalPhase(1.0, 1.0, "tan")
        with pytest.raises(ValueError):
            Envelope(kind="square")


class TestAnalyticIf:
    def test_polynomial_phase(self):
        spec = lfm_spec(-20.0, 100.0)
        t = np.linspace(0.0, 1.0, 11)
        (fi, fp), = analytic_if(spec, t)
        np.testing.assert_allclose(fi, 100.0 - 20.0 * t)
        np.testing.assert_allclose(fp, -20.0)

    def test_sinusoidal_fm_closed_form(self):
        t = np.linspace(0.0, 1.0, 257)
        (fi, fp), = analytic_if(sinfm_spec(), t)
        np.testing.assert_allclose(fi, 30.0 - 6 * math.pi * np.sin(4 * math.pi * t), atol=1e-12)
        np.testing.assert_allclose(fp, -24 * math.pi**2 * np.cos(4 * math.pi * t), atol=1e-9)

    def test_constant_phase(self):
        spec = SignalSpec(components=(Component(poly=(0.25,)),))
        (fi, fp), = analytic_if(spec, np.linspace(0, 1, 5))
        assert np.all(fi == 0)
        assert np.all(fp == 0)

    def test_matches_finite_differences(self):
        spec = SignalSpec(
            components=(
                Component(
                    poly=(0.1, 3.0, -2.0, 0.7),
                    sins=(SinusoidalPhase(0.8, 3.0, "sin"), SinusoidalPhase(-0.4, 7.0, "cos")),
                ),
            )
        )
        t = np.linspace(0.1, 0.9, 401)
        h = 1e-5
        comp = spec.components[0]
        (fi, fp), = analytic_if(spec, t)
        fi_num = (comp.phase(t + h) - comp.phase(t - h)) / (2 * h) / (2 * math.pi)
        fp_num = (comp.phase(t + h) - 2 * comp.phase(t) + comp.phase(t - h)) / h**2 / (2 * math.pi)
        assert np.max(np.abs(fi - fi_num)) / np.max(np.abs(fi)) <= 1e-6
        assert np.max(np.abs(fp - fp_num)) / np.max(np.abs(fp)) <= 1e-4


class TestAddAwgn:
    def test_infinite_snr_is_identity(self):
        grid = make_grid(64, 1 / 64, 1.0)
        x = synthesize(lfm_spec(-5.0, 20.0), grid)
        y = add_awgn(x, NoiseSpec(math.inf, 3))
        np.testing.assert_array_equal(x.samples, y.samples)

    def test_power_calibration(self):
        grid = make_grid(4096, 1 / 4096, 1.0)
        x = synthesize(lfm_spec(-100.0, 1000.0), grid)
        for snr in (0.0, 10.0):
            y = add_awgn(x, NoiseSpec(snr, 11))
            noise = y.samples - x.samples
            got = 10 * math.log10(
                np.mean(np.abs(x.samples) ** 2) / np.mean(np.abs(noise) ** 2)
            )
            assert abs(got - snr) <= 0.5

    def test_seeds_differ_but_power_matches(self):
        grid = make_grid(4096, 1 / 4096, 1.0)
        x = synthesize(lfm_spec(-100.0, 1000.0), grid)
        a = add_awgn(x, NoiseSpec(5.0, 1))
        b = add_awgn(x, NoiseSpec(5.0, 2))
        assert not np.array_equal(a.samples, b.samples)
        pa = np.mean(np.abs(a.samples - x.samples) ** 2)
        pb = np.mean(np.abs(b.samples - x.samples) ** 2)
        assert abs(10 * math.log10(pa / pb)) <= 0.5

    def test_real_signal_gets_real_noise(self):
        grid = make_grid(256, 1 / 256, 1.0)
        spec = SignalSpec(components=(Component(poly=(0.0, 30.0)),), real_output=True)
        x = synthesize(spec, grid)
        y = add_awgn(x, NoiseSpec(10.0, 4))
        assert np.all(y.samples.imag == 0)

    def test_zero_power_rejected(self):
        grid = make_grid(16, 1 / 16, 1.0)
        from chirptf import ComplexSignal

        x = ComplexSignal(np.zeros(16, complex), grid)
        with pytest.raises(DegenerateInputError):
            add_awgn(x, NoiseSpec(0.0, 0))
