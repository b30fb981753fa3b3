"""STFT variants: direct-summation reference and the two FFT fast paths.

All transforms evaluate, for time column m and frequency row r (DFT bin
n = bin0 + r),

    X[m, r] = dt * sum_l x[l] * w_sigma((m - l) * dt) * exp(-2j pi n l / N)

with a unit-area Gaussian window of standard deviation sigma[m, n] and the
sum truncated where the window falls below the truncation threshold.  The
signal is zero-extended past the record; columns whose window support
leaves the record are flagged in ``TFRMatrix.boundary``.

``astft_direct`` is the permanent reference implementation (O(N^2 Q)).
``astft_fft_time`` reproduces it exactly for time-varying widths.
``astft_fft_freq`` windows the shifted spectrum instead; it is circular in
time, so it matches zero-extension only while the window tail cannot wrap
across the DFT period (n_time + Q_time(sigma) <= n_dft).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .core import ComplexSignal, ConfigurationError, SampleGrid, TFRMatrix
from .kernels import (
    SQRT_2PI,
    TruncationConfig,
    spectral_dual_sigma,
    truncation_radii,
)

_KINDS = ("constant", "per_time", "per_freq", "full")


@dataclass(frozen=True)
class SigmaField:
    """Gaussian width per TF point: a scalar, an axis vector, or a matrix.

    ``sigma_min``/``sigma_max`` are the bounds the values were clamped to;
    they ride along so downstream stages know the admissible range.
    ``meta`` carries producer annotations (e.g. zero-energy rows).
    """

    kind: str
    values: np.ndarray
    sigma_min: float
    sigma_max: float
    meta: dict | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        values = np.asarray(self.values, dtype=np.float64)
        expected_ndim = {"constant": 0, "per_time": 1, "per_freq": 1, "full": 2}
        if values.ndim != expected_ndim[self.kind]:
            raise ValueError(
                f"{self.kind} field expects {expected_ndim[self.kind]}-d values, "
                f"got shape {values.shape}"
            )
        if not (0.0 < self.sigma_min <= self.sigma_max):
            raise ValueError(
                f"need 0 < sigma_min <= sigma_max, got "
                f"[{self.sigma_min}, {self.sigma_max}]"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("sigma values must be finite")
        if values.size and (
            values.min() < self.sigma_min * (1 - 1e-12)
            or values.max() > self.sigma_max * (1 + 1e-12)
        ):
            raise ValueError(
                f"sigma values [{values.min()}, {values.max()}] fall outside "
                f"bounds [{self.sigma_min}, {self.sigma_max}]"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, sigma: float, bounds=None, meta=None) -> "SigmaField":
        return cls("constant", np.float64(sigma), *_resolve_bounds(bounds, sigma), meta)

    @classmethod
    def per_time(cls, values, bounds=None, meta=None) -> "SigmaField":
        return cls("per_time", values, *_resolve_bounds(bounds, values), meta)

    @classmethod
    def per_freq(cls, values, bounds=None, meta=None) -> "SigmaField":
        return cls("per_freq", values, *_resolve_bounds(bounds, values), meta)

    @classmethod
    def full(cls, values, bounds=None, meta=None) -> "SigmaField":
        return cls("full", values, *_resolve_bounds(bounds, values), meta)

    def as_full(self, grid: SampleGrid) -> np.ndarray:
        """Broadcast to an (n_time, n_freq) matrix on ``grid``."""
        shape = (grid.n_time, grid.n_freq)
        if self.kind == "constant":
            return np.full(shape, float(self.values))
        if self.kind == "per_time":
            self._check_len(grid.n_time, "n_time")
            return np.repeat(self.values[:, None], grid.n_freq, axis=1)
        if self.kind == "per_freq":
            self._check_len(grid.n_freq, "n_freq")
            return np.repeat(self.values[None, :], grid.n_time, axis=0)
        if self.values.shape != shape:
            raise ConfigurationError(
                f"full field shape {self.values.shape} does not match grid {shape}"
            )
        return self.values

    def time_vector(self, grid: SampleGrid) -> np.ndarray:
        if self.kind == "constant":
            return np.full(grid.n_time, float(self.values))
        if self.kind == "per_time":
            self._check_len(grid.n_time, "n_time")
            return self.values
        raise ConfigurationError(
            f"time-domain fast path needs a constant or per_time field, got {self.kind}"
        )

    def freq_vector(self, grid: SampleGrid) -> np.ndarray:
        if self.kind == "constant":
            return np.full(grid.n_freq, float(self.values))
        if self.kind == "per_freq":
            self._check_len(grid.n_freq, "n_freq")
            return self.values
        raise ConfigurationError(
            f"frequency-domain fast path needs a constant or per_freq field, got {self.kind}"
        )

    def _check_len(self, n: int, what: str) -> None:
        if self.values.shape[0] != n:
            raise ConfigurationError(
                f"{self.kind} field length {self.values.shape[0]} does not match "
                f"grid {what}={n}"
            )


def _resolve_bounds(bounds, values) -> tuple[float, float]:
    if bounds is not None:
        try:
            lo, hi = bounds.sigma_min, bounds.sigma_max
        except AttributeError:
            lo, hi = bounds
        return float(lo), float(hi)
    arr = np.asarray(values, dtype=float)
    return float(arr.min()), float(arr.max())


def _check_signal(signal: ComplexSignal, grid: SampleGrid) -> None:
    if signal.grid != grid:
        raise ConfigurationError("signal grid does not match transform grid")


def _check_periodic(grid: SampleGrid, trunc: TruncationConfig) -> bool:
    if trunc.extension != "periodic":
        return False
    if grid.n_time != grid.n_dft:
        raise ConfigurationError(
            f"periodic extension needs the record to fill one DFT period "
            f"(n_time={grid.n_time}, n_dft={grid.n_dft})"
        )
    return True


def _boundary_mask(n_time: int, q_per_col: np.ndarray, periodic: bool) -> np.ndarray:
    if periodic:
        return np.zeros(n_time, dtype=bool)
    m = np.arange(n_time)
    return (m - q_per_col < 0) | (m + q_per_col > n_time - 1)


def astft_direct(
    signal: ComplexSignal,
    grid: SampleGrid,
    sigma_field: SigmaField,
    trunc: TruncationConfig = TruncationConfig(),
) -> TFRMatrix:
    """Direct truncated summation for an arbitrary sigma[m, n] field.

    Reference implementation all fast paths are tested against; cost is
    O(n_time * n_freq * Q).
    """
    _check_signal(signal, grid)
    periodic = _check_periodic(grid, trunc)
    sigma = sigma_field.as_full(grid)
    cap = (grid.n_dft - 1) // 2
    q = truncation_radii(sigma, grid.dt, trunc, cap)
    values = backend.direct_sum(
        signal.samples, sigma, q, grid.bin0, grid.n_dft, grid.dt, periodic
    )
    return TFRMatrix(
        values, grid, boundary=_boundary_mask(grid.n_time, q.max(axis=1), periodic)
    )


def _fft_time_columns(
    x: np.ndarray,
    grid: SampleGrid,
    sigma_t: np.ndarray,
    cols: np.ndarray,
    trunc: TruncationConfig,
) -> np.ndarray:
    """Windowed-segment FFT evaluation of the selected time columns."""
    n_dft = grid.n_dft
    cap = (n_dft - 1) // 2
    q1 = truncation_radii(sigma_t[cols], grid.dt, trunc, cap)
    bad = 2 * q1 + 1 > n_dft
    if np.any(bad):
        m_bad = int(cols[np.argmax(bad)])
        raise ConfigurationError(
            f"window at column m={m_bad} needs {int(2 * q1[np.argmax(bad)] + 1)} "
            f"samples but the DFT length is {n_dft}"
        )
    n_sig = x.shape[0]
    periodic = trunc.extension == "periodic"
    x1 = np.zeros((len(cols), n_dft), np.complex128)
    for i, m in enumerate(cols):
        q = int(q1[i])
        s = sigma_t[m]
        if periodic:
            src = np.arange(m - q, m + q + 1) % n_sig
            offs = (q - np.arange(2 * q + 1)) * grid.dt
            x1[i, : 2 * q + 1] = (
                x[src] * np.exp(-(offs * offs) / (2.0 * s * s)) / (SQRT_2PI * s)
            )
            continue
        lo, hi = m - q, m + q
        src_lo, src_hi = max(0, lo), min(n_sig - 1, hi)
        if src_lo > src_hi:
            continue
        dst0 = src_lo - lo
        offs = (q - np.arange(dst0, dst0 + src_hi - src_lo + 1)) * grid.dt
        x1[i, dst0 : dst0 + src_hi - src_lo + 1] = (
            x[src_lo : src_hi + 1]
            * np.exp(-(offs * offs) / (2.0 * s * s))
            / (SQRT_2PI * s)
        )
    spec = np.fft.fft(x1, axis=1)
    rows = bin0_rows = grid.bin0 + np.arange(grid.n_freq, dtype=np.int64)
    picked = spec[:, bin0_rows % n_dft]
    shift = (np.asarray(cols, dtype=np.int64) - q1)[:, None] * rows[None, :]
    phase = np.exp((-2j * np.pi / n_dft) * (shift % n_dft))
    return grid.dt * phase * picked


def astft_fft_time(
    signal: ComplexSignal,
    grid: SampleGrid,
    sigma_field: SigmaField,
    trunc: TruncationConfig = TruncationConfig(),
) -> TFRMatrix:
    """FFT fast path for time-varying (or constant) window width.

    One length-N DFT of the truncated windowed segment per time column,
    then the segment-offset phase factor.  Matches ``astft_direct``
    exactly (same truncation, same zero-extension).
    """
    _check_signal(signal, grid)
    periodic = _check_periodic(grid, trunc)
    sigma_t = sigma_field.time_vector(grid)
    cols = np.arange(grid.n_time)
    values = _fft_time_columns(signal.samples, grid, sigma_t, cols, trunc)
    cap = (grid.n_dft - 1) // 2
    q1 = truncation_radii(sigma_t, grid.dt, trunc, cap)
    return TFRMatrix(values, grid, boundary=_boundary_mask(grid.n_time, q1, periodic))


def astft_fft_freq(
    signal: ComplexSignal,
    grid: SampleGrid,
    sigma_field: SigmaField,
    trunc: TruncationConfig = TruncationConfig(),
) -> TFRMatrix:
    """FFT fast path for frequency-varying (or constant) window width.

    Windows the shifted signal spectrum row by row (shift indices wrap
    modulo the DFT length) and inverse-transforms.  Time direction is
    circular with period n_dft; agreement with the zero-extension direct
    path requires the record plus window radius to fit in one period.
    """
    _check_signal(signal, grid)
    periodic = _check_periodic(grid, trunc)
    n_dft = grid.n_dft
    if grid.n_time > n_dft:
        raise ConfigurationError(
            f"record length {grid.n_time} exceeds the DFT period {n_dft}"
        )
    sigma_f = sigma_field.freq_vector(grid)
    cap = (n_dft - 1) // 2
    q2 = truncation_radii(spectral_dual_sigma(sigma_f), grid.df, trunc, cap)
    spectrum = grid.dt * np.fft.fft(signal.samples, n_dft)
    x1 = np.zeros((grid.n_freq, n_dft), np.complex128)
    for r in range(grid.n_freq):
        q = int(q2[r])
        n = grid.bin0 + r
        ks = np.arange(2 * q + 1, dtype=np.int64)
        x1[r, : 2 * q + 1] = spectrum[(ks - q + n) % n_dft] * np.exp(
            -2.0 * np.pi**2 * sigma_f[r] ** 2 * ((ks - q) * grid.df) ** 2
        )
    cols = n_dft * np.fft.ifft(x1, axis=1)
    m = np.arange(grid.n_time, dtype=np.int64)
    phase = np.exp((-2j * np.pi / n_dft) * ((m[:, None] * q2[None, :]) % n_dft))
    values = grid.df * phase * cols[:, : grid.n_time].T
    q_time = truncation_radii(sigma_f, grid.dt, trunc, cap)
    return TFRMatrix(
        values,
        grid,
        boundary=_boundary_mask(
            grid.n_time, np.full(grid.n_time, q_time.max()), periodic
        ),
    )


def s_transform(
    signal: ComplexSignal,
    grid: SampleGrid,
    p: float = 1.0,
    trunc: TruncationConfig = TruncationConfig(),
) -> TFRMatrix:
    """Stockwell-style transform: sigma(f) = 1/|f|^p via the spectral path.

    The f = 0 row (if the grid contains it) is the signal's time average
    replicated across time, the customary zero-frequency convention; the
    1/|f|^p width law is singular there.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    _check_signal(signal, grid)
    freqs = grid.freqs()
    nonzero = freqs != 0.0
    if not np.any(nonzero):
        raise ConfigurationError("grid has only the f=0 row; nothing to transform")
    sigma_f = np.empty(grid.n_freq)
    sigma_f[nonzero] = 1.0 / np.abs(freqs[nonzero]) ** p
    if np.any(~nonzero):
        sigma_f[~nonzero] = sigma_f[nonzero].max()
    field = SigmaField.per_freq(sigma_f)
    tfr = astft_fft_freq(signal, grid, field, trunc)
    if np.any(~nonzero):
        values = tfr.values.copy()
        values[:, ~nonzero] = signal.samples.mean()
        tfr = TFRMatrix(values, grid, boundary=tfr.boundary)
    return tfr
