"""Closed-form oracles, concentration scoring, and the IF-MSE harness."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ComplexSignal, DegenerateInputError, SampleGrid, TFRMatrix
from .pipeline import AdaptiveResult, PipelineConfig, run_astft_t, run_astft_tf, run_astft_tf_fast, run_stft
from .signals import NoiseSpec, SignalSpec, add_awgn, analytic_if, synthesize


def analytic_lfm_envelope(a: float, b: float, sigma: float, t, f):
    """|ASTFT| of a unit linear FM (rate a, start frequency b) at constant width.

    (1 + 4 pi^2 sigma^4 a^2)^(-1/4) * exp(-2 pi^2 sigma^2 (f - b - a t)^2
    / (1 + 4 pi^2 sigma^4 a^2)); broadcasts over ``t`` and ``f``.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    t = np.asarray(t, dtype=float)
    f = np.asarray(f, dtype=float)
    d = 1.0 + 4.0 * math.pi**2 * sigma**4 * a * a
    out = d**-0.25 * np.exp(
        -2.0 * math.pi**2 * sigma**2 * (f - b - a * t) ** 2 / d
    )
    return out if out.ndim else float(out)


def envelope_variance(sigma_sq: float, a: float) -> float:
    """Frequency variance of the LFM envelope; minimal at sigma^2 = 1/(2 pi |a|)."""
    if sigma_sq <= 0:
        raise ValueError("sigma_sq must be positive")
    return (1.0 + 4.0 * math.pi**2 * a * a * sigma_sq**2) / (
        4.0 * math.pi**2 * sigma_sq
    )


def concentration_score(tfr: TFRMatrix, beta: float = 5.0) -> float:
    """Whole-plane power-sum score of the normalized magnitudes."""
    mags = np.abs(tfr.values)
    total = mags.sum()
    if total == 0.0:
        raise DegenerateInputError("zero TFR has no concentration score")
    return float(((mags / total) ** beta).sum())


def if_mse(estimated_if: np.ndarray, true_if: np.ndarray) -> float:
    """Mean squared instantaneous-frequency error in Hz^2."""
    est = np.asarray(estimated_if, dtype=float)
    ref = np.asarray(true_if, dtype=float)
    if est.shape != ref.shape:
        raise ValueError(f"length mismatch: {est.shape} vs {ref.shape}")
    return float(np.mean(np.abs(est - ref) ** 2))


def ridge_if_estimate(tfr: TFRMatrix) -> np.ndarray:
    """Per-column argmax IF estimate in Hz."""
    idx = np.argmax(np.abs(tfr.values), axis=1)
    return tfr.grid.f0 + idx * tfr.grid.df


@dataclass(frozen=True)
class MseReport:
    """IF-estimation MSE per method per SNR, averaged over seeded trials."""

    snr_db: tuple[float, ...]
    methods: tuple[str, ...]
    mse: np.ndarray  # (len(methods), len(snr_db))
    trials: int
    seed_base: int

    def __post_init__(self):
        mse = np.asarray(self.mse, dtype=float)
        if mse.shape != (len(self.methods), len(self.snr_db)):
            raise ValueError("mse shape must be (methods, snrs)")
        if np.any(mse < 0):
            raise ValueError("mse must be nonnegative")
        object.__setattr__(self, "mse", mse)
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        object.__setattr__(self, "methods", tuple(self.methods))


MSE_METHODS = ("astft-tf", "astft-tf-fast", "astft-t", "stft")


def _method_tfr(
    method: str,
    signal: ComplexSignal,
    grid: SampleGrid,
    cfg: PipelineConfig,
    fixed_sigma: float,
) -> TFRMatrix:
    if method == "astft-tf":
        return run_astft_tf(signal, grid, cfg).tfr
    if method == "astft-tf-fast":
        return run_astft_tf_fast(signal, grid, cfg).tfr
    if method == "astft-t":
        return run_astft_t(signal, grid, cfg).tfr
    if method == "stft":
        return run_stft(signal, grid, fixed_sigma, cfg.trunc)
    raise ValueError(f"unknown method {method!r}; choose from {MSE_METHODS}")


def run_mse_experiment(
    spec: SignalSpec,
    grid: SampleGrid,
    cfg: PipelineConfig,
    snrs_db,
    trials: int,
    methods=("astft-tf", "astft-t", "stft"),
    seed_base: int = 0,
    fixed_sigma: float | None = None,
) -> MseReport:
    """Noisy IF-estimation experiment: per-column ridge argmax vs truth.

    Trials are deterministic per ``seed_base``: trial k at SNR index s uses
    seed ``seed_base + 10_000 * s + k``.  The estimate is compared against
    the analytic IF of the component nearest (in mean distance) to it.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    methods = tuple(methods)
    if fixed_sigma is None:
        fixed_sigma = math.sqrt(cfg.bounds.sigma_min * cfg.bounds.sigma_max)
    clean = synthesize(spec, grid)
    truths = [fi for fi, _ in analytic_if(spec, grid.times())]
    snrs = tuple(float(s) for s in snrs_db)
    totals = np.zeros((len(methods), len(snrs)))
    for si, snr in enumerate(snrs):
        for k in range(trials):
            noisy = add_awgn(clean, NoiseSpec(snr, seed_base + 10_000 * si + k))
            for mi, method in enumerate(methods):
                tfr = _method_tfr(method, noisy, grid, cfg, fixed_sigma)
                est = ridge_if_estimate(tfr)
                totals[mi, si] += min(if_mse(est, truth) for truth in truths)
    return MseReport(snrs, methods, totals / trials, trials, seed_base)
