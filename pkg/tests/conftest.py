"""Shared signal builders and helpers."""

import math

import numpy as np
import pytest

from chirptf import Component, SignalSpec, SinusoidalPhase, lfm_component, make_grid


def lfm_spec(a, b, amplitude=1.0):
    return SignalSpec(components=(lfm_component(a, b, amplitude),))


def two_lfm_spec():
    """Two crossing-rate linear FMs on the 120 s slow grid."""
    f1, f2, f3, f4 = 0.05, 0.5, 0.15, 2.0
    return SignalSpec(
        components=(
            Component(poly=(0.0, f1, (f2 - f1) / 512)),
            Component(poly=(0.0, f3, (f4 - f3) / 512)),
        )
    )


def two_lfm_grid():
    return make_grid(240, 0.5, 1 / 256, f0=0.0, n_freq=260)


def quintic_spec():
    """Monocomponent quintic-phase FM sweeping -102..99 Hz in 1 s."""
    return SignalSpec(
        components=(Component(poly=(0.0, -62.0, 8.0, -85.0, -25.0, 100.0)),)
    )


def quintic_grid():
    return make_grid(256, 1 / 256, 1.0, f0=-110.0, n_freq=220)


def sinfm_spec():
    """Sinusoidal FM around 30 Hz; exactly periodic over a 1 s record."""
    return SignalSpec(
        components=(
            Component(poly=(0.0, 30.0), sins=(SinusoidalPhase(1.5, 4 * math.pi, "cos"),)),
        )
    )


def sinfm_grid():
    return make_grid(128, 1 / 128, 1.0, f0=0.0, n_freq=64)


def lfm_sinfm_real_spec():
    """Real two-component test signal: LFM plus sinusoidal FM."""
    return SignalSpec(
        components=(
            Component(poly=(0.0, 100.0, -10.0)),
            Component(poly=(0.0, 40.0), sins=(SinusoidalPhase(2.0, 5 * math.pi, "sin"),)),
        ),
        real_output=True,
    )


def lfm_sinfm_real_grid():
    return make_grid(256, 1 / 256, 1.0, f0=0.0, n_freq=128)


def seamless_lfm(a, b, n_dft, df):
    """LFM whose ridge advances an integer number of bins per column and
    whose phase closes over one DFT period; with periodic extension the
    analysis plane is free of record-boundary effects."""
    dt = 1.0 / (n_dft * df)
    slope_bins = a * dt / df
    assert abs(slope_bins - round(slope_bins)) < 1e-9
    duration = n_dft * dt
    closure = a * duration * dt
    assert abs(closure - round(closure)) < 1e-9
    grid = make_grid(n_dft, dt, df, f0=0.0, n_freq=n_dft)
    return lfm_spec(a, b), grid


def fast_path_sigma_range(grid):
    """Width range where both FFT paths match the zero-extension direct
    path at the 1e-9 gate: truncated support fits one DFT period and the
    window tail cannot wrap into the record."""
    kt = math.sqrt(2.0 * math.log(1e12))
    half = (grid.n_dft - 1) // 2
    smax = min(half, grid.n_dft - grid.n_time) * grid.dt / kt
    smin = kt / (2.0 * math.pi * grid.df * half)
    assert smin < smax, "grid leaves no doubly-valid width range"
    return smin, smax


def random_signal(grid, seed):
    from chirptf import ComplexSignal

    rng = np.random.default_rng(seed)
    z = rng.standard_normal(grid.n_time) + 1j * rng.standard_normal(grid.n_time)
    return ComplexSignal(z, grid)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
