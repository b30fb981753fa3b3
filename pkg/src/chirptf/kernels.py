"""Gaussian window evaluation, spreads, FWHM, and truncation radii."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT_2PI = math.sqrt(2.0 * math.pi)
FWHM_FACTOR = 2.0 * math.sqrt(2.0 * math.log(2.0))


@dataclass(frozen=True)
class TruncationConfig:
    """Evaluation policy for the windowed sums.

    A term is dropped once its Gaussian factor falls to ``eps`` of the
    peak.  ``extension`` says how the signal continues past the record:
    ``zero`` (default) or ``periodic`` (record repeats; requires the
    record to fill one DFT period, matching the circular FFT paths).
    """

    eps: float = 1e-12
    extension: str = "zero"

    def __post_init__(self):
        if not 0.0 < self.eps <= 1.0:
            raise ValueError(f"eps must be in (0, 1], got {self.eps}")
        if self.extension not in ("zero", "periodic"):
            raise ValueError(
                f"extension must be 'zero' or 'periodic', got {self.extension!r}"
            )

    @property
    def tail_sigmas(self) -> float:
        """Window radius in units of sigma: exp(-r^2/2) = eps at r = this."""
        return math.sqrt(2.0 * math.log(1.0 / self.eps))


def _check_sigma(sigma: float) -> None:
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise ValueError(f"sigma must be positive and finite, got {sigma}")


def window_value(sigma: float, t):
    """Unit-area Gaussian window value(s) at time offset ``t``."""
    _check_sigma(sigma)
    t = np.asarray(t, dtype=float)
    out = np.exp(-(t * t) / (2.0 * sigma * sigma)) / (SQRT_2PI * sigma)
    return out if out.ndim else float(out)


def fwhm(sigma: float) -> float:
    """Full width at half maximum of the Gaussian window."""
    _check_sigma(sigma)
    return FWHM_FACTOR * sigma


def spreads(sigma: float) -> tuple[float, float, float]:
    """Temporal spread, spectral spread, and mask height-to-width ratio.

    Returns ``(delta_t_sq, delta_f_sq, gamma)`` with delta_t^2 = sigma^2/2,
    delta_f^2 = 1/(8 pi^2 sigma^2) and gamma = delta_f/delta_t = 1/(2 pi sigma^2).
    """
    _check_sigma(sigma)
    dt_sq = sigma * sigma / 2.0
    df_sq = 1.0 / (8.0 * math.pi**2 * sigma * sigma)
    gamma = 1.0 / (2.0 * math.pi * sigma * sigma)
    return dt_sq, df_sq, gamma


def truncation_radius(
    sigma: float,
    step: float,
    cfg: TruncationConfig = TruncationConfig(),
    cap: int | None = None,
) -> int:
    """Smallest Q with exp(-(Q*step)^2/(2 sigma^2)) <= eps, optionally capped.

    The spectral path uses the same rule with the dual width: pass
    ``sigma = spectral_dual_sigma(s)`` and ``step = df`` so the exponent
    becomes exp(-2 pi^2 s^2 (Q df)^2).  ``cap`` keeps the truncated support
    ``2Q+1`` within one DFT period (callers pass ``(n_dft - 1) // 2``).
    """
    _check_sigma(sigma)
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    q = int(math.ceil(sigma * cfg.tail_sigmas / step))
    if cap is not None:
        q = min(q, cap)
    return max(q, 0)


def spectral_dual_sigma(sigma) -> np.ndarray | float:
    """Width of the window's spectrum expressed as an equivalent sigma.

    exp(-2 pi^2 sigma^2 f^2) == exp(-f^2 / (2 s_f^2)) with s_f = 1/(2 pi sigma).
    """
    return 1.0 / (2.0 * np.pi * np.asarray(sigma, dtype=float))


def truncation_radii(sigma, step: float, cfg: TruncationConfig, cap: int) -> np.ndarray:
    """Vectorized ``truncation_radius`` over an array of sigmas."""
    sigma = np.asarray(sigma, dtype=float)
    if np.any(~np.isfinite(sigma)) or np.any(sigma <= 0):
        raise ValueError("all sigmas must be positive and finite")
    q = np.ceil(sigma * (cfg.tail_sigmas / step)).astype(np.int64)
    return np.minimum(q, cap)
