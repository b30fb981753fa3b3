"""End-to-end assembly of the adaptive transforms.

All variants share the same estimation front end: a constant-width pilot
transform picked by CM5 grid search, ridge detection/tracing/pruning on
it, and windowed-PCA chirp rates along the surviving curves.  They differ
in how the chirp rates become a width field:

* ``run_astft_tf``       - dense 2-d interpolated field, direct transform
* ``run_astft_tf_fast``  - axis-averaged |f'| and an FFT fast path
* ``run_astft_t``        - quasi-stationary per-time widths (threshold xi)
* ``run_astft_f``        - no chirp stage; per-row CM2 width search
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .chirprate import (
    PcaConfig,
    QuasiStationaryConfig,
    SigmaBounds,
    chirp_along_curve,
    quasi_stationary_sigma,
    sigma_from_chirp,
)
from .concentration import CMConfig, best_sigma_global, best_sigma_per_freq, log_candidates
from .core import ComplexSignal, ConfigurationError, DegenerateInputError, SampleGrid, TFRMatrix
from .kernels import TruncationConfig
from .ridge import PeakConfig, RidgeCurve, detect_ridge_points, prune_curves, trace_curves
from .sigmafield import (
    ChirpField,
    average_chirp,
    choose_average_axis,
    interpolate_chirp_field,
    sigma_field_full,
)
from .transforms import SigmaField, astft_direct, astft_fft_freq, astft_fft_time

_FAST_PATHS = ("direct", "fft_time", "fft_freq", "auto")


@dataclass(frozen=True)
class PipelineConfig:
    cm: CMConfig
    peaks: PeakConfig
    pca: PcaConfig
    bounds: SigmaBounds
    quasi: QuasiStationaryConfig | None = None
    fast_path: str = "auto"
    trunc: TruncationConfig = field(default_factory=TruncationConfig)

    def __post_init__(self):
        if self.fast_path not in _FAST_PATHS:
            raise ValueError(f"fast_path must be one of {_FAST_PATHS}")
        if self.cm.candidates is None:
            raise ValueError("cm.candidates must be resolved (see PipelineConfig.for_grid)")

    @classmethod
    def for_grid(
        cls,
        grid: SampleGrid,
        xi: float | None = None,
        n_candidates: int = 64,
        fast_path: str = "auto",
        **overrides,
    ) -> "PipelineConfig":
        """Defaults tied to the grid: bounds from record length and sample
        step, log-spaced candidates between them."""
        bounds = overrides.pop("bounds", SigmaBounds.default_for(grid))
        cm = overrides.pop("cm", None)
        if cm is None:
            cm = CMConfig(candidates=log_candidates(bounds.sigma_min, bounds.sigma_max, n_candidates))
        elif cm.candidates is None:
            cm = replace(cm, candidates=log_candidates(bounds.sigma_min, bounds.sigma_max, n_candidates))
        return cls(
            cm=cm,
            peaks=overrides.pop("peaks", PeakConfig()),
            pca=overrides.pop("pca", PcaConfig()),
            bounds=bounds,
            quasi=QuasiStationaryConfig(xi) if xi is not None else overrides.pop("quasi", None),
            fast_path=fast_path,
            **overrides,
        )


@dataclass(frozen=True)
class AdaptiveResult:
    """Transform output plus the estimation intermediates."""

    tfr: TFRMatrix
    sigma_field: SigmaField
    curves: tuple[RidgeCurve, ...] = ()
    pilot_sigma: float | None = None
    pilot_tfr: TFRMatrix | None = None
    chirp_field: ChirpField | None = None
    axis: str | None = None
    warnings: tuple[str, ...] = ()


def _pilot_stage(signal: ComplexSignal, grid: SampleGrid, cfg: PipelineConfig):
    """CM5 pilot transform, ridge curves with chirp rates, and warnings."""
    warnings: list[str] = []
    try:
        pilot_sigma, _, pilot = best_sigma_global(
            signal, grid, cfg.cm, measure="cm5", trunc=cfg.trunc
        )
    except DegenerateInputError:
        warnings.append("degenerate signal: falling back to the largest candidate width")
        pilot_sigma = float(cfg.cm.candidates[-1])
        pilot = astft_fft_time(signal, grid, SigmaField.constant(pilot_sigma), cfg.trunc)
        return pilot_sigma, pilot, [], warnings
    points = detect_ridge_points(pilot, cfg.peaks)
    curves = prune_curves(trace_curves(points, cfg.peaks), cfg.peaks)
    with_chirp = []
    for c in curves:
        if len(c) < 3:
            warnings.append(f"curve starting at column {int(c.m[0])} too short for chirp estimation")
            continue
        with_chirp.append(chirp_along_curve(c, grid, cfg.pca))
    if not with_chirp and not warnings:
        warnings.append("no ridge curves survived pruning; using the pilot width")
    return pilot_sigma, pilot, with_chirp, warnings


def run_astft_tf(
    signal: ComplexSignal, grid: SampleGrid, cfg: PipelineConfig
) -> AdaptiveResult:
    """Full 2-d adaptive transform: interpolated chirp field, direct sum."""
    pilot_sigma, pilot, curves, warnings = _pilot_stage(signal, grid, cfg)
    if not curves:
        warnings.append("constant-width fallback")
        fld = SigmaField.constant(pilot_sigma, bounds=cfg.bounds)
        tfr = astft_direct(signal, grid, fld, cfg.trunc)
        return AdaptiveResult(
            tfr, fld, (), pilot_sigma, pilot, None, None, tuple(warnings)
        )
    chirp_field = interpolate_chirp_field(curves, grid)
    fld = sigma_field_full(chirp_field, cfg.bounds)
    tfr = astft_direct(signal, grid, fld, cfg.trunc)
    return AdaptiveResult(
        tfr, fld, tuple(curves), pilot_sigma, pilot, chirp_field, None, tuple(warnings)
    )


def _mean_rate(curves, grid: SampleGrid, axis: str, cfg: PipelineConfig) -> np.ndarray:
    """Axis-averaged |f'|, capped at the steepest slope tracing can follow.

    A curve constrained to max_jump_bins per column cannot witness a
    larger rate; estimates beyond the cap are end-of-curve artifacts.
    """
    cap = cfg.peaks.max_jump_bins * grid.df / grid.dt
    return np.minimum(average_chirp(curves, grid, axis), cap)


def run_astft_tf_fast(
    signal: ComplexSignal, grid: SampleGrid, cfg: PipelineConfig
) -> AdaptiveResult:
    """FFT-path variant: |f'| averaged along one axis picks the widths."""
    pilot_sigma, pilot, curves, warnings = _pilot_stage(signal, grid, cfg)
    if not curves:
        warnings.append("constant-width fallback")
        fld = SigmaField.constant(pilot_sigma, bounds=cfg.bounds)
        tfr = astft_fft_time(signal, grid, fld, cfg.trunc)
        return AdaptiveResult(
            tfr, fld, (), pilot_sigma, pilot, None, "time", tuple(warnings)
        )
    if cfg.fast_path == "fft_time":
        axis = "time"
    elif cfg.fast_path == "fft_freq":
        axis = "freq"
    else:
        axis = choose_average_axis(curves, grid)
    sigma_vec = sigma_from_chirp(_mean_rate(curves, grid, axis, cfg), cfg.bounds)
    if axis == "time":
        fld = SigmaField.per_time(sigma_vec, bounds=cfg.bounds)
        tfr = astft_fft_time(signal, grid, fld, cfg.trunc)
    else:
        fld = SigmaField.per_freq(sigma_vec, bounds=cfg.bounds)
        tfr = astft_fft_freq(signal, grid, fld, cfg.trunc)
    return AdaptiveResult(
        tfr, fld, tuple(curves), pilot_sigma, pilot, None, axis, tuple(warnings)
    )


def run_astft_t(
    signal: ComplexSignal, grid: SampleGrid, cfg: PipelineConfig
) -> AdaptiveResult:
    """Time-varying widths from the quasi-stationarity rule (needs xi)."""
    if cfg.quasi is None:
        raise ConfigurationError("run_astft_t needs cfg.quasi (threshold xi)")
    pilot_sigma, pilot, curves, warnings = _pilot_stage(signal, grid, cfg)
    if not curves:
        warnings.append("constant-width fallback")
        fld = SigmaField.constant(pilot_sigma, bounds=cfg.bounds)
        tfr = astft_fft_time(signal, grid, fld, cfg.trunc)
        return AdaptiveResult(tfr, fld, (), pilot_sigma, pilot, None, "time", tuple(warnings))
    mean_rate = _mean_rate(curves, grid, "time", cfg)
    fld = quasi_stationary_sigma(mean_rate, grid, cfg.quasi, cfg.bounds)
    tfr = astft_fft_time(signal, grid, fld, cfg.trunc)
    return AdaptiveResult(
        tfr, fld, tuple(curves), pilot_sigma, pilot, None, "time", tuple(warnings)
    )


def run_astft_f(
    signal: ComplexSignal, grid: SampleGrid, cfg: PipelineConfig
) -> AdaptiveResult:
    """Frequency-varying widths from the per-row CM2 search."""
    fld = best_sigma_per_freq(signal, grid, cfg.cm, cfg.trunc)
    tfr = astft_fft_freq(signal, grid, fld, cfg.trunc)
    warnings = ()
    if fld.meta and "zero_energy_rows" in fld.meta:
        warnings = (f"{len(fld.meta['zero_energy_rows'])} rows had no energy",)
    return AdaptiveResult(tfr, fld, (), None, None, None, "freq", warnings)


def run_stft(
    signal: ComplexSignal,
    grid: SampleGrid,
    sigma: float,
    trunc: TruncationConfig = TruncationConfig(),
) -> TFRMatrix:
    """Plain fixed-width STFT (FFT path)."""
    return astft_fft_time(signal, grid, SigmaField.constant(sigma), trunc)
