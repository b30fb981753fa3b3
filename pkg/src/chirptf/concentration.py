"""Concentration measures and window-width selection by grid search.

CM1/CM2 act on one normalized frequency row; CM3/CM4/CM5 act on a
stride-subsampled lattice of the whole plane, normalized over that same
lattice.  Larger values mean more concentrated energy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ComplexSignal, DegenerateInputError, SampleGrid
from .kernels import TruncationConfig
from .transforms import SigmaField, _fft_time_columns, astft_fft_freq, astft_fft_time

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class CMConfig:
    """Measure exponents, lattice stride, and the candidate sigma set."""

    alpha: float = 0.1
    beta: float = 5.0
    p_sub: int = 4
    candidates: np.ndarray | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0 < self.beta:
            raise ValueError(
                f"need 0 < alpha < 1 < beta, got alpha={self.alpha}, beta={self.beta}"
            )
        if self.p_sub < 1:
            raise ValueError(f"p_sub must be >= 1, got {self.p_sub}")
        if self.candidates is not None:
            cand = np.asarray(self.candidates, dtype=float)
            if cand.ndim != 1 or cand.size == 0:
                raise ValueError("candidates must be a non-empty 1-d array")
            if np.any(cand <= 0) or np.any(np.diff(cand) <= 0):
                raise ValueError("candidates must be positive and strictly increasing")
            object.__setattr__(self, "candidates", cand)


def log_candidates(sigma_min: float, sigma_max: float, count: int = 64) -> np.ndarray:
    """Log-spaced candidate widths covering [sigma_min, sigma_max]."""
    if not 0 < sigma_min <= sigma_max:
        raise ValueError("need 0 < sigma_min <= sigma_max")
    if count < 1:
        raise ValueError("count must be >= 1")
    if sigma_min == sigma_max or count == 1:
        return np.array([sigma_min])
    return np.geomspace(sigma_min, sigma_max, count)


def normalize_plane(values: np.ndarray) -> np.ndarray:
    """Magnitudes divided by their sum; the result sums to one."""
    mags = np.abs(np.asarray(values))
    if mags.size == 0:
        raise DegenerateInputError("cannot normalize an empty set")
    total = mags.sum()
    if total == 0.0:
        raise DegenerateInputError("cannot normalize an all-zero set")
    return mags / total


def _check_normalized(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if abs(values.sum() - 1.0) > _NORM_TOL:
        raise ValueError(
            f"input is not normalized (sums to {values.sum()!r}); "
            "apply normalize_plane first"
        )
    return values


def cm1(row: np.ndarray, alpha: float = 0.1) -> float:
    row = _check_normalized(row)
    return 1.0 / float((row**alpha).sum())


def cm2(row: np.ndarray, beta: float = 5.0) -> float:
    row = _check_normalized(row)
    return float((row**beta).sum())


def cm3(samples: np.ndarray, cfg: CMConfig) -> float:
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise DegenerateInputError("empty lattice")
    return 1.0 / float((samples**cfg.alpha).sum())


def cm4(samples: np.ndarray, cfg: CMConfig) -> float:
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise DegenerateInputError("empty lattice")
    return float((samples**cfg.beta).sum())


def cm5(samples: np.ndarray, cfg: CMConfig) -> float:
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise DegenerateInputError("empty lattice")
    s_beta = float((samples**cfg.beta).sum())
    s_alpha = float((samples**cfg.alpha).sum())
    return s_beta ** (1.0 / cfg.beta) / s_alpha ** (1.0 / cfg.alpha)


_MEASURES = {"cm3": cm3, "cm4": cm4, "cm5": cm5}


def lattice_stft(
    signal: ComplexSignal,
    grid: SampleGrid,
    sigma: float,
    stride: int,
    trunc: TruncationConfig = TruncationConfig(),
) -> np.ndarray:
    """|STFT| at the stride-subsampled lattice only (1/p^2 of the plane)."""
    cols = np.arange(0, grid.n_time, stride)
    sigma_t = np.full(grid.n_time, float(sigma))
    values = _fft_time_columns(signal.samples, grid, sigma_t, cols, trunc)
    return np.abs(values[:, ::stride])


def best_sigma_global(
    signal: ComplexSignal,
    grid: SampleGrid,
    cfg: CMConfig,
    measure: str = "cm5",
    trunc: TruncationConfig = TruncationConfig(),
):
    """Pick the constant width maximizing a plane measure over the lattice.

    Only stride-p lattice observations are computed and normalized, so the
    search cost stays at 1/p^2 of a full transform per candidate.  Ties go
    to the smaller candidate.  Returns ``(sigma, scores, tfr)`` with the
    full-plane transform at the winning width.
    """
    if cfg.candidates is None:
        raise ValueError("CMConfig.candidates must be set for the search")
    fn = _MEASURES.get(measure.lower())
    if fn is None:
        raise ValueError(f"measure must be one of {sorted(_MEASURES)}, got {measure!r}")
    scores = np.empty(len(cfg.candidates))
    for i, cand in enumerate(cfg.candidates):
        lattice = normalize_plane(lattice_stft(signal, grid, cand, cfg.p_sub, trunc))
        scores[i] = fn(lattice, cfg)
    best = int(np.argmax(scores))
    sigma = float(cfg.candidates[best])
    tfr = astft_fft_time(signal, grid, SigmaField.constant(sigma), trunc)
    return sigma, scores, tfr


def best_sigma_per_freq(
    signal: ComplexSignal,
    grid: SampleGrid,
    cfg: CMConfig,
    trunc: TruncationConfig = TruncationConfig(),
) -> SigmaField:
    """Per-row CM2 maximization over the candidate set.

    Each frequency row is normalized on its own before the measure.  Rows
    with no energy at any candidate get sigma_max and are listed under
    ``meta['zero_energy_rows']``.
    """
    if cfg.candidates is None:
        raise ValueError("CMConfig.candidates must be set for the search")
    cand = cfg.candidates
    scores = np.zeros((len(cand), grid.n_freq))
    seen_energy = np.zeros(grid.n_freq, dtype=bool)
    for i, sigma in enumerate(cand):
        mags = np.abs(
            astft_fft_freq(signal, grid, SigmaField.constant(sigma), trunc).values
        )
        row_sums = mags.sum(axis=0)
        ok = row_sums > 0.0
        seen_energy |= ok
        scores[i, ok] = (mags[:, ok] ** cfg.beta).sum(axis=0) / row_sums[ok] ** cfg.beta
    pick = np.argmax(scores, axis=0)
    sigma_f = cand[pick]
    sigma_f[~seen_energy] = cand[-1]
    meta = None
    if np.any(~seen_energy):
        meta = {"zero_energy_rows": np.flatnonzero(~seen_energy)}
    return SigmaField.per_freq(sigma_f, bounds=(cand[0], cand[-1]), meta=meta)
