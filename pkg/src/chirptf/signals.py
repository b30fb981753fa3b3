"""Parametric synthetic signals with analytic IF and chirp-rate ground truth.

A signal is a sum of components A_k(t) * exp(j phi_k(t)).  Phases are
polynomials in t plus sinusoidal terms, with coefficients in cycles, so
phi(t) = 2 pi * (poly(t) + sum_i cycles_i * trig(omega_i t)).  Both the
instantaneous frequency phi'/(2 pi) and its derivative come out in closed
form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ComplexSignal, DegenerateInputError, SampleGrid

_ENVELOPES = ("constant", "sinusoidal", "random_abs_gauss")
_TRIGS = ("sin", "cos")
MAX_POLY_DEGREE = 5


@dataclass(frozen=True)
class SinusoidalPhase:
    """Phase term 2 pi * cycles * sin(omega t) (or cos)."""

    cycles: float
    omega: float
    kind: str = "sin"

    def __post_init__(self):
        if self.kind not in _TRIGS:
            raise ValueError(f"kind must be sin or cos, got {self.kind!r}")


@dataclass(frozen=True)
class Envelope:
    """constant: c0;  sinusoidal: c0 + c1*cos(omega t);  random_abs_gauss:
    |standard normal| drawn from ``seed``."""

    kind: str = "constant"
    c0: float = 1.0
    c1: float = 0.0
    omega: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in _ENVELOPES:
            raise ValueError(f"envelope kind must be one of {_ENVELOPES}")

    def sample(self, t: np.ndarray) -> np.ndarray:
        if self.kind == "constant":
            return np.full(t.shape, self.c0)
        if self.kind == "sinusoidal":
            return self.c0 + self.c1 * np.cos(self.omega * t)
        rng = np.random.default_rng(self.seed)
        return np.abs(rng.standard_normal(t.shape))


@dataclass(frozen=True)
class Component:
    poly: tuple[float, ...] = (0.0,)
    sins: tuple[SinusoidalPhase, ...] = ()
    envelope: Envelope = field(default_factory=Envelope)

    def __post_init__(self):
        if len(self.poly) == 0:
            raise ValueError("poly must have at least the constant coefficient")
        if len(self.poly) - 1 > MAX_POLY_DEGREE:
            raise ValueError(f"poly degree is capped at {MAX_POLY_DEGREE}")
        object.__setattr__(self, "poly", tuple(float(c) for c in self.poly))
        object.__setattr__(self, "sins", tuple(self.sins))

    def phase(self, t: np.ndarray) -> np.ndarray:
        cyc = np.polynomial.polynomial.polyval(t, self.poly)
        for s in self.sins:
            trig = np.sin if s.kind == "sin" else np.cos
            cyc = cyc + s.cycles * trig(s.omega * t)
        return 2.0 * math.pi * cyc

    def f_inst(self, t: np.ndarray) -> np.ndarray:
        d1 = np.polynomial.polynomial.polyder(self.poly)
        out = np.polynomial.polynomial.polyval(t, d1) if d1.size else np.zeros_like(t)
        for s in self.sins:
            if s.kind == "sin":
                out = out + s.cycles * s.omega * np.cos(s.omega * t)
            else:
                out = out - s.cycles * s.omega * np.sin(s.omega * t)
        return out

    def f_prime(self, t: np.ndarray) -> np.ndarray:
        d2 = np.polynomial.polynomial.polyder(self.poly, 2)
        out = np.polynomial.polynomial.polyval(t, d2) if d2.size else np.zeros_like(t)
        for s in self.sins:
            if s.kind == "sin":
                out = out - s.cycles * s.omega**2 * np.sin(s.omega * t)
            else:
                out = out - s.cycles * s.omega**2 * np.cos(s.omega * t)
        return out


@dataclass(frozen=True)
class SignalSpec:
    components: tuple[Component, ...]
    real_output: bool = False

    def __post_init__(self):
        if len(self.components) == 0:
            raise ValueError("need at least one component")
        object.__setattr__(self, "components", tuple(self.components))


@dataclass(frozen=True)
class NoiseSpec:
    """Target SNR in dB (math.inf means no noise) and the generator seed."""

    snr_db: float
    seed: int = 0


def lfm_component(a: float, b: float, amplitude: float = 1.0) -> Component:
    """Linear FM: f_inst(t) = b + a*t, unit phase at t=0."""
    return Component(poly=(0.0, b, a / 2.0), envelope=Envelope(c0=amplitude))


def synthesize(spec: SignalSpec, grid: SampleGrid) -> ComplexSignal:
    """Sample the component sum on the grid's time axis."""
    t = grid.times()
    total = np.zeros(grid.n_time, dtype=np.complex128)
    for comp in spec.components:
        total += comp.envelope.sample(t) * np.exp(1j * comp.phase(t))
    if spec.real_output:
        total = total.real.astype(np.complex128)
    return ComplexSignal(total, grid)


def analytic_if(spec: SignalSpec, t) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per component, (f_inst, f_prime) evaluated at times ``t``."""
    t = np.asarray(t, dtype=float)
    return [(c.f_inst(t), c.f_prime(t)) for c in spec.components]


def add_awgn(signal: ComplexSignal, noise: NoiseSpec) -> ComplexSignal:
    """White Gaussian noise calibrated to the target SNR over the record.

    Real-valued records get real noise; complex records get circular
    complex noise.  Deterministic per seed.
    """
    if math.isinf(noise.snr_db) and noise.snr_db > 0:
        return signal
    x = signal.samples
    p_sig = float(np.mean(np.abs(x) ** 2))
    if p_sig == 0.0:
        raise DegenerateInputError("cannot calibrate noise against a zero signal")
    p_noise = p_sig * 10.0 ** (-noise.snr_db / 10.0)
    rng = np.random.default_rng(noise.seed)
    if signal.is_real():
        w = rng.standard_normal(x.shape) * math.sqrt(p_noise)
    else:
        w = (
            rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
        ) * math.sqrt(p_noise / 2.0)
    return ComplexSignal(x + w, signal.grid)
