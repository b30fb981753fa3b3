"""File formats: TFR1 binaries, PGM spectrograms, CSVs, and signal specs.

TFR1 layout (little-endian): magic ``TFR1``, u32 n_time, u32 n_freq,
f64 t0, dt, f0, df, then n_time*n_freq complex cells as interleaved
re/im f64, row-major by time.  Writes are atomic (temp file + rename)
and round-trip bit-exactly.
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

from .core import ComplexSignal, SampleGrid, TFRMatrix, magnitude_db, make_grid
from .metrics import MseReport
from .signals import Component, Envelope, SignalSpec, SinusoidalPhase

_TFR_MAGIC = b"TFR1"
_TFR_HEADER = struct.Struct("<4sII4d")


class SpecParseError(ValueError):
    """Signal spec file could not be parsed."""


def atomic_write_bytes(path: str, payload: bytes) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp_", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_tfr(path: str, tfr: TFRMatrix) -> None:
    g = tfr.grid
    header = _TFR_HEADER.pack(_TFR_MAGIC, g.n_time, g.n_freq, g.t0, g.dt, g.f0, g.df)
    payload = np.ascontiguousarray(tfr.values, dtype="<c16").tobytes()
    atomic_write_bytes(path, header + payload)


def read_tfr(path: str) -> TFRMatrix:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _TFR_HEADER.size:
        raise ValueError(f"{path}: truncated TFR1 header")
    magic, n_time, n_freq, t0, dt, f0, df = _TFR_HEADER.unpack_from(raw)
    if magic != _TFR_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    expect = n_time * n_freq * 16
    body = raw[_TFR_HEADER.size :]
    if len(body) != expect:
        raise ValueError(f"{path}: payload is {len(body)} bytes, expected {expect}")
    values = np.frombuffer(body, dtype="<c16").reshape(n_time, n_freq)
    grid = make_grid(n_time, dt, df, t0=t0, f0=f0, n_freq=n_freq)
    return TFRMatrix(values.astype(np.complex128), grid)


def write_pgm(path: str, tfr: TFRMatrix, floor_db: float = -60.0) -> None:
    """8-bit P5 spectrogram: time left-to-right, frequency bottom-to-top."""
    db = magnitude_db(tfr, floor_db)
    img = db.T[::-1]  # rows: high freq first
    scaled = np.rint((db.T[::-1] - floor_db) * (255.0 / -floor_db))
    pixels = np.clip(scaled, 0, 255).astype(np.uint8)
    h, w = img.shape
    atomic_write_bytes(path, f"P5\n{w} {h}\n255\n".encode() + pixels.tobytes())


def write_signal_csv(path: str, signal: ComplexSignal) -> None:
    lines = ["t,re,im"]
    t = signal.grid.times()
    for i in range(signal.grid.n_time):
        s = signal.samples[i]
        lines.append(f"{t[i]!r},{s.real!r},{s.imag!r}")
    atomic_write_bytes(path, ("\n".join(lines) + "\n").encode())


def read_signal_csv(path: str) -> tuple[np.ndarray, np.ndarray]:
    """Returns (times, complex samples); the caller supplies grid frequency axes."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "t,re,im":
            raise ValueError(f"{path}: expected header 't,re,im', got {header!r}")
        t, z = [], []
        for ln, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"{path}:{ln}: expected 3 fields")
            t.append(float(parts[0]))
            z.append(complex(float(parts[1]), float(parts[2])))
    return np.asarray(t), np.asarray(z, dtype=np.complex128)


def grid_from_times(t: np.ndarray, df: float, f0: float = 0.0, n_freq: int | None = None) -> SampleGrid:
    if t.size < 2:
        raise ValueError("need at least two samples to infer dt")
    dt = float(t[1] - t[0])
    if dt <= 0 or np.max(np.abs(np.diff(t) - dt)) > 1e-9 * max(1.0, abs(dt)):
        raise ValueError("time axis is not uniformly spaced")
    return make_grid(t.size, dt, df, t0=float(t[0]), f0=f0, n_freq=n_freq)


def write_ifest_csv(path: str, rows) -> None:
    """Rows of (t, component_id, f_inst_hz, f_prime_hz_per_s)."""
    lines = ["t,component_id,f_inst_hz,f_prime_hz_per_s"]
    for t, cid, fi, fp in rows:
        lines.append(f"{float(t)!r},{int(cid)},{float(fi)!r},{float(fp)!r}")
    atomic_write_bytes(path, ("\n".join(lines) + "\n").encode())


def write_mse_csv(path: str, report: MseReport) -> None:
    lines = ["snr_db,method,mse,trials"]
    for mi, method in enumerate(report.methods):
        for si, snr in enumerate(report.snr_db):
            lines.append(f"{snr!r},{method},{report.mse[mi, si]!r},{report.trials}")
    atomic_write_bytes(path, ("\n".join(lines) + "\n").encode())


def _parse_envelope(args: list[str], ln: int) -> Envelope:
    kind = args[0]
    try:
        if kind == "constant":
            return Envelope(kind="constant", c0=float(args[1]) if len(args) > 1 else 1.0)
        if kind == "sinusoidal":
            return Envelope(kind="sinusoidal", c0=float(args[1]), c1=float(args[2]), omega=float(args[3]))
        if kind == "random_abs_gauss":
            return Envelope(kind="random_abs_gauss", seed=int(args[1]) if len(args) > 1 else 0)
    except (IndexError, ValueError) as exc:
        raise SpecParseError(f"line {ln}: bad envelope arguments {args[1:]!r}") from exc
    raise SpecParseError(f"line {ln}: unknown envelope kind {kind!r}")


def parse_signal_spec(text: str) -> SignalSpec:
    """Line-oriented ``key = value`` description of a synthetic signal.

    Global keys come first (``real = true|false``), then one ``[component]``
    block per component with ``envelope``, ``poly`` (phase polynomial
    coefficients in cycles, constant term first) and zero or more ``sin``
    lines (``cycles omega sin|cos``).
    """
    real_output = False
    components: list[Component] = []
    current: dict | None = None

    def finish(block, ln):
        if block is None:
            return
        if "poly" not in block and not block["sins"]:
            raise SpecParseError(f"line {ln}: component has no phase terms")
        components.append(
            Component(
                poly=tuple(block.get("poly", (0.0,))),
                sins=tuple(block["sins"]),
                envelope=block.get("envelope", Envelope()),
            )
        )

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[component]":
            finish(current, ln)
            current = {"sins": []}
            continue
        if "=" not in line:
            raise SpecParseError(f"line {ln}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        args = value.split()
        if current is None:
            if key == "real":
                if args[0].lower() not in ("true", "false"):
                    raise SpecParseError(f"line {ln}: real must be true or false")
                real_output = args[0].lower() == "true"
            else:
                raise SpecParseError(f"line {ln}: unknown global key {key!r}")
            continue
        if key == "envelope":
            current["envelope"] = _parse_envelope(args, ln)
        elif key == "poly":
            try:
                current["poly"] = tuple(float(a) for a in args)
            except ValueError as exc:
                raise SpecParseError(f"line {ln}: bad poly coefficients") from exc
        elif key == "sin":
            try:
                kind = args[2] if len(args) > 2 else "sin"
                current["sins"].append(SinusoidalPhase(float(args[0]), float(args[1]), kind))
            except (IndexError, ValueError) as exc:
                raise SpecParseError(f"line {ln}: sin needs 'cycles omega [sin|cos]'") from exc
        else:
            raise SpecParseError(f"line {ln}: unknown component key {key!r}")
    finish(current, "end")
    if not components:
        raise SpecParseError("spec defines no components")
    return SignalSpec(components=tuple(components), real_output=real_output)


def load_signal_spec(path: str) -> SignalSpec:
    with open(path) as fh:
        return parse_signal_spec(fh.read())
