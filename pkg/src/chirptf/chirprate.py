"""Chirp-rate estimation along ridge curves and the width laws built on it.

The slope of the first principal component of windowed (time, frequency)
ridge samples estimates the local chirp rate; with exactly two samples it
reduces to the plain difference quotient.  ``sigma_from_chirp`` maps the
rate to the concentration-optimal Gaussian width sigma^2 = 1/(2 pi |f'|),
and ``quasi_stationary_sigma`` implements the alternative running-sum
window rule controlled by the threshold xi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DegenerateInputError, SampleGrid
from .kernels import FWHM_FACTOR
from .ridge import RidgeCurve
from .transforms import SigmaField

_VERTICAL_TOL = 1e-12


@dataclass(frozen=True)
class PcaConfig:
    """Half-window size: the estimate at m uses samples m-K .. m+K."""

    K: int = 8

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")


@dataclass(frozen=True)
class SigmaBounds:
    sigma_min: float
    sigma_max: float

    def __post_init__(self):
        if not 0.0 < self.sigma_min <= self.sigma_max:
            raise ValueError(
                f"need 0 < sigma_min <= sigma_max, got "
                f"[{self.sigma_min}, {self.sigma_max}]"
            )

    @classmethod
    def default_for(cls, grid: SampleGrid) -> "SigmaBounds":
        """Widest window spans the record (FWHM = duration); narrowest two samples."""
        return cls(2.0 * grid.dt / FWHM_FACTOR, grid.duration / FWHM_FACTOR)

    def clamp(self, sigma):
        return np.clip(sigma, self.sigma_min, self.sigma_max)


@dataclass(frozen=True)
class QuasiStationaryConfig:
    """Threshold xi (Hz) for the accumulated-|f'| window test."""

    xi: float

    def __post_init__(self):
        if not self.xi > 0:
            raise ValueError(f"xi must be positive, got {self.xi}")


def pca_slope(measurements) -> float:
    """Slope of the first principal component of (T, F) measurements.

    Returns ``inf`` when the principal axis is vertical (the caller clamps
    the width to its lower bound); 0.0 when it is horizontal.
    """
    pts = np.asarray(measurements, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise DegenerateInputError("need at least two (T, F) measurements")
    t = pts[:, 0] - pts[:, 0].mean()
    f = pts[:, 1] - pts[:, 1].mean()
    c_tt = float(t @ t) / len(t)
    c_ff = float(f @ f) / len(t)
    c_tf = float(t @ f) / len(t)
    if c_tt == 0.0 and c_ff == 0.0:
        raise DegenerateInputError("all measurements identical")
    if abs(c_tf) < _VERTICAL_TOL * max(c_tt, c_ff):
        return 0.0 if c_tt >= c_ff else math.inf
    lam1 = 0.5 * (c_tt + c_ff + math.hypot(c_tt - c_ff, 2.0 * c_tf))
    return (lam1 - c_tt) / c_tf


def largest_eigenvalue(c_tt: float, c_ff: float, c_tf: float) -> float:
    """Closed-form largest eigenvalue of [[c_tt, c_tf], [c_tf, c_ff]]."""
    return 0.5 * (c_tt + c_ff + math.hypot(c_tt - c_ff, 2.0 * c_tf))


def chirp_along_curve(
    curve: RidgeCurve, grid: SampleGrid, cfg: PcaConfig = PcaConfig()
) -> RidgeCurve:
    """Fill the per-point chirp rate by windowed PCA over the curve.

    Windows shrink at the curve ends rather than padding; a two-point
    window degenerates to the difference quotient.
    """
    npts = len(curve)
    if npts < 3:
        raise DegenerateInputError(f"curve has {npts} points; need at least 3")
    t = curve.times(grid)
    f = curve.freqs(grid)
    chirp = np.empty(npts)
    for i in range(npts):
        lo = max(0, i - cfg.K)
        hi = min(npts - 1, i + cfg.K)
        chirp[i] = pca_slope(np.column_stack([t[lo : hi + 1], f[lo : hi + 1]]))
    return curve.with_chirp(chirp)


def diff_chirp(curve: RidgeCurve, grid: SampleGrid) -> np.ndarray:
    """First-difference chirp rate; the last point copies its predecessor."""
    if len(curve) < 2:
        raise DegenerateInputError("need at least two points")
    f = curve.freqs(grid)
    t = curve.times(grid)
    d = np.diff(f) / np.diff(t)
    return np.append(d, d[-1])


def sigma_from_chirp(f_prime, bounds: SigmaBounds):
    """Optimal width for a local chirp rate: sigma = sqrt(1/(2 pi |f'|)).

    Zero rate maps to sigma_max, infinite rate to sigma_min; everything
    is clamped into ``bounds``.  Accepts scalars or arrays.
    """
    fp = np.abs(np.asarray(f_prime, dtype=float))
    out = np.empty_like(fp)
    zero = fp == 0.0
    infinite = np.isinf(fp)
    regular = ~zero & ~infinite
    out[zero] = bounds.sigma_max
    out[infinite] = bounds.sigma_min
    out[regular] = bounds.clamp(np.sqrt(1.0 / (2.0 * np.pi * fp[regular])))
    return float(out) if out.ndim == 0 else out


def quasi_stationary_sigma(
    chirp_series: np.ndarray,
    grid: SampleGrid,
    qcfg: QuasiStationaryConfig,
    bounds: SigmaBounds,
) -> SigmaField:
    """Per-time width from the accumulated-|f'| quasi-stationarity test.

    At each index the window half-length l grows while the windowed sum of
    |f'| * dt stays within xi (window clipped at the record ends); the
    resulting length L = 2 l dt is read as the FWHM of the window.
    """
    fp = np.abs(np.asarray(chirp_series, dtype=float))
    if fp.shape != (grid.n_time,):
        raise ValueError("chirp series must cover every time index")
    n = grid.n_time
    cum = np.concatenate([[0.0], np.cumsum(fp * grid.dt)])
    sigma = np.empty(n)
    l_cap = n - 1
    for k in range(n):
        l_ok = 0
        lo_l, hi_l = 0, l_cap
        while lo_l <= hi_l:
            mid = (lo_l + hi_l) // 2
            s = cum[min(k + mid, n - 1) + 1] - cum[max(k - mid, 0)]
            if s <= qcfg.xi:
                l_ok = mid
                lo_l = mid + 1
            else:
                hi_l = mid - 1
        length = 2.0 * l_ok * grid.dt
        sigma[k] = length / FWHM_FACTOR
    return SigmaField.per_time(bounds.clamp(sigma), bounds=bounds)
