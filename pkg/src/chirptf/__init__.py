"""Adaptive short-time Fourier transforms driven by the local chirp rate."""

from .backend import ACTIVE_BACKEND
from .chirprate import (
    PcaConfig,
    QuasiStationaryConfig,
    SigmaBounds,
    chirp_along_curve,
    diff_chirp,
    pca_slope,
    quasi_stationary_sigma,
    sigma_from_chirp,
)
from .concentration import (
    CMConfig,
    best_sigma_global,
    best_sigma_per_freq,
    cm1,
    cm2,
    cm3,
    cm4,
    cm5,
    log_candidates,
    normalize_plane,
)
from .core import (
    ComplexSignal,
    ConfigurationError,
    DegenerateInputError,
    SampleGrid,
    TFRMatrix,
    magnitude_db,
    make_grid,
)
from .kernels import TruncationConfig, fwhm, spreads, truncation_radius, window_value
from .metrics import (
    MseReport,
    analytic_lfm_envelope,
    concentration_score,
    envelope_variance,
    if_mse,
    ridge_if_estimate,
    run_mse_experiment,
)
from .pipeline import (
    AdaptiveResult,
    PipelineConfig,
    run_astft_f,
    run_astft_t,
    run_astft_tf,
    run_astft_tf_fast,
    run_stft,
)
from .ridge import (
    PeakConfig,
    RidgeCurve,
    RidgePoint,
    detect_ridge_points,
    prune_curves,
    trace_curves,
)
from .sigmafield import (
    ChirpField,
    average_chirp,
    choose_average_axis,
    interpolate_chirp_field,
    sigma_field_full,
)
from .signals import (
    Component,
    Envelope,
    NoiseSpec,
    SignalSpec,
    SinusoidalPhase,
    add_awgn,
    analytic_if,
    lfm_component,
    synthesize,
)
from .transforms import (
    SigmaField,
    astft_direct,
    astft_fft_freq,
    astft_fft_time,
    s_transform,
)

__version__ = "0.1.0"
