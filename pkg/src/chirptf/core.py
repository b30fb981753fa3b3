"""Sample grids, signal/TFR containers, and magnitude utilities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GRID_TOL = 1e-9


class ConfigurationError(ValueError):
    """Inputs are structurally inconsistent (bad grid, incompatible field kind)."""


class DegenerateInputError(ValueError):
    """Input carries no usable information (all zeros, too few points)."""


@dataclass(frozen=True)
class SampleGrid:
    """Uniform time/frequency lattice shared by signals and transforms.

    Time column ``m`` sits at ``t0 + m*dt`` and frequency row ``r`` at
    ``f0 + r*df``.  ``f0`` may be negative (analytic signals).  ``n_dft``
    is the DFT length ``1/(dt*df)`` used by the FFT paths; frequency rows
    must live on that lattice, so ``f0`` must be an integer multiple of
    ``df`` and ``n_freq <= n_dft``.
    """

    n_time: int
    n_freq: int
    dt: float
    df: float
    t0: float = 0.0
    f0: float = 0.0

    @property
    def n_dft(self) -> int:
        return int(round(1.0 / (self.dt * self.df)))

    @property
    def bin0(self) -> int:
        """DFT bin index of frequency row 0."""
        return int(round(self.f0 / self.df))

    @property
    def duration(self) -> float:
        return self.n_time * self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_time)

    def freqs(self) -> np.ndarray:
        return self.f0 + self.df * np.arange(self.n_freq)

    def time_index(self, t: float) -> int:
        return int(round((t - self.t0) / self.dt))

    def freq_index(self, f: float) -> int:
        return int(round((f - self.f0) / self.df))


def make_grid(
    n_time: int,
    dt: float,
    df: float,
    t0: float = 0.0,
    f0: float = 0.0,
    n_freq: int | None = None,
) -> SampleGrid:
    """Build a validated grid; ``n_freq`` defaults to the full DFT length."""
    if n_time < 1:
        raise ValueError(f"n_time must be >= 1, got {n_time}")
    if dt <= 0 or df <= 0:
        raise ValueError(f"dt and df must be positive, got dt={dt}, df={df}")
    n_dft = int(round(1.0 / (dt * df)))
    if n_dft < 1 or abs(n_dft * dt * df - 1.0) > GRID_TOL:
        raise ConfigurationError(
            f"dt*df={dt * df!r} is not the reciprocal of an integer DFT length "
            f"(closest N={n_dft}, |N*dt*df - 1|={abs(n_dft * dt * df - 1.0):.3e})"
        )
    if n_freq is None:
        n_freq = n_dft
    if not 1 <= n_freq <= n_dft:
        raise ConfigurationError(f"n_freq must be in [1, {n_dft}], got {n_freq}")
    bin0 = round(f0 / df)
    if abs(bin0 * df - f0) > GRID_TOL * max(1.0, abs(f0)):
        raise ConfigurationError(
            f"f0={f0} is not an integer multiple of df={df}; frequency rows "
            "must sit on the DFT lattice"
        )
    return SampleGrid(n_time=n_time, n_freq=n_freq, dt=dt, df=df, t0=t0, f0=f0)


@dataclass(frozen=True)
class ComplexSignal:
    """Complex samples on the time axis of a grid."""

    samples: np.ndarray
    grid: SampleGrid

    def __post_init__(self):
        samples = np.ascontiguousarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1 or samples.shape[0] != self.grid.n_time:
            raise ConfigurationError(
                f"signal length {samples.shape} does not match grid n_time={self.grid.n_time}"
            )
        object.__setattr__(self, "samples", samples)

    def is_real(self) -> bool:
        return bool(np.all(self.samples.imag == 0.0))


@dataclass(frozen=True)
class TFRMatrix:
    """Complex time-frequency representation, row-major by time.

    ``boundary`` flags time columns whose (truncated) window support left
    the data record; values there come from zero-extension of the signal.
    """

    values: np.ndarray
    grid: SampleGrid
    boundary: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if values.shape != (self.grid.n_time, self.grid.n_freq):
            raise ConfigurationError(
                f"TFR shape {values.shape} does not match grid "
                f"({self.grid.n_time}, {self.grid.n_freq})"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("TFR contains non-finite entries")
        object.__setattr__(self, "values", values)


def magnitude_db(tfr: TFRMatrix, floor_db: float = -80.0) -> np.ndarray:
    """Peak-normalized magnitude in dB, clamped below at ``floor_db``.

    An all-zero TFR maps to ``floor_db`` everywhere.
    """
    if floor_db >= 0:
        raise ValueError(f"floor_db must be negative, got {floor_db}")
    mag = np.abs(tfr.values)
    peak = mag.max()
    if peak == 0.0:
        return np.full(mag.shape, floor_db)
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag / peak)
    return np.maximum(db, floor_db)
