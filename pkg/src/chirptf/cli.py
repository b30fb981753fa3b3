"""Command-line front end.

Exit codes: 0 on success, 1 on runtime failure, 2 on usage errors
(including missing input files).  Worker parallelism of the accelerated
kernels follows the CHIRPTF_THREADS environment variable (0 = auto).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .core import ComplexSignal, make_grid
from .fileio import (
    SpecParseError,
    grid_from_times,
    load_signal_spec,
    read_signal_csv,
    write_ifest_csv,
    write_mse_csv,
    write_pgm,
    write_signal_csv,
    write_tfr,
)
from .metrics import run_mse_experiment
from .pipeline import (
    PipelineConfig,
    run_astft_f,
    run_astft_t,
    run_astft_tf,
    run_astft_tf_fast,
    run_stft,
)
from .signals import NoiseSpec, add_awgn, analytic_if, synthesize
from .transforms import s_transform

_METHODS = ("astft-tf", "astft-tf-fast", "astft-t", "astft-f", "stft", "s-transform")


class UsageError(Exception):
    pass


def _require_file(path: str) -> str:
    if not os.path.isfile(path):
        raise UsageError(f"input file not found: {path}")
    return path


def _add_grid_flags(p: argparse.ArgumentParser, with_time: bool) -> None:
    if with_time:
        p.add_argument("--n", type=int, required=True, help="number of time samples")
        p.add_argument("--dt", type=float, required=True, help="sample interval (s)")
        p.add_argument("--t0", type=float, default=0.0, help="start time (s)")
    p.add_argument("--df", type=float, required=True, help="frequency bin width (Hz)")
    p.add_argument("--f0", type=float, default=0.0, help="frequency of bin 0 (Hz)")
    p.add_argument("--n-freq", type=int, default=None, help="number of frequency rows")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chirptf", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a signal from a spec file")
    p.add_argument("spec", help="signal spec file")
    _add_grid_flags(p, with_time=True)
    p.add_argument("--snr", type=float, default=math.inf, help="add noise at this SNR (dB)")
    p.add_argument("--seed", type=int, default=0, help="noise generator seed")
    p.add_argument("-o", "--out", required=True, help="output CSV (t,re,im)")

    p = sub.add_parser("analyze", help="compute a TFR from a signal CSV")
    p.add_argument("input", help="signal CSV (t,re,im)")
    p.add_argument("--method", choices=_METHODS, required=True)
    _add_grid_flags(p, with_time=False)
    p.add_argument("--sigma", type=float, default=None, help="window width for stft")
    p.add_argument("--xi", type=float, default=None, help="threshold for astft-t")
    p.add_argument("--p", type=float, default=1.0, help="width exponent for s-transform")
    p.add_argument("--floor-db", type=float, default=-60.0, help="PGM dynamic range floor")
    p.add_argument("-o", "--out", required=True, help="output TFR1 file")
    p.add_argument("--pgm", default=None, help="also write a P5 spectrogram")

    p = sub.add_parser("ifest", help="estimate per-component IF and chirp rate")
    p.add_argument("input", help="signal CSV (t,re,im)")
    _add_grid_flags(p, with_time=False)
    p.add_argument("-o", "--out", required=True, help="output CSV")

    p = sub.add_parser("bench-mse", help="IF-estimation MSE versus SNR")
    p.add_argument("spec", help="signal spec file")
    _add_grid_flags(p, with_time=True)
    p.add_argument("--snr", required=True, help="lo:step:hi range or comma list (dB; inf allowed)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--methods", default="astft-tf,astft-t,stft", help="comma-separated methods")
    p.add_argument("--xi", type=float, default=None, help="threshold for astft-t runs")
    p.add_argument("--fixed-sigma", type=float, default=None, help="width of the stft baseline")
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("-o", "--out", required=True, help="output CSV")
    return ap


def _parse_snr_values(text: str) -> list[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"--snr range must be lo:step:hi, got {text!r}")
        try:
            lo, step, hi = (float(v) for v in parts)
        except ValueError as exc:
            raise UsageError(f"--snr range must be numeric, got {text!r}") from exc
        if step <= 0 or hi < lo:
            raise UsageError(f"--snr range must satisfy step > 0 and hi >= lo, got {text!r}")
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return [lo + i * step for i in range(n)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"--snr values must be numeric, got {text!r}") from exc


def _sigma_summary(field) -> str:
    vals = np.atleast_1d(np.asarray(field.values, dtype=float))
    if vals.size == 1 or vals.min() == vals.max():
        return f"sigma: constant {vals.min():.6g} s"
    return (
        f"sigma[{field.kind}]: min {vals.min():.6g} s, "
        f"mean {vals.mean():.6g} s, max {vals.max():.6g} s"
    )


def _cmd_synth(args) -> int:
    spec = load_signal_spec(_require_file(args.spec))
    grid = make_grid(args.n, args.dt, args.df, t0=args.t0, f0=args.f0, n_freq=args.n_freq)
    signal = synthesize(spec, grid)
    if not (math.isinf(args.snr) and args.snr > 0):
        signal = add_awgn(signal, NoiseSpec(args.snr, args.seed))
    write_signal_csv(args.out, signal)
    t = grid.times()
    for k, (fi, fp) in enumerate(analytic_if(spec, t)):
        print(
            f"component {k}: f_inst [{fi.min():.6g}, {fi.max():.6g}] Hz, "
            f"f' [{fp.min():.6g}, {fp.max():.6g}] Hz/s"
        )
    print(f"wrote {grid.n_time} samples to {args.out}")
    return 0


def _load_input_grid(args):
    t, z = read_signal_csv(_require_file(args.input))
    grid = grid_from_times(t, args.df, f0=args.f0, n_freq=args.n_freq)
    return ComplexSignal(z, grid), grid


def _cmd_analyze(args) -> int:
    signal, grid = _load_input_grid(args)
    method = args.method
    if method == "stft" and args.sigma is None:
        raise UsageError("--sigma is required for method stft")
    if method == "astft-t" and args.xi is None:
        raise UsageError("--xi is required for method astft-t")
    curves = ()
    if method == "stft":
        tfr = run_stft(signal, grid, args.sigma)
        print(f"sigma: constant {args.sigma:.6g} s")
    elif method == "s-transform":
        tfr = s_transform(signal, grid, p=args.p)
        print(f"sigma: 1/|f|^{args.p:.6g}")
    else:
        cfg = PipelineConfig.for_grid(grid, xi=args.xi)
        runner = {
            "astft-tf": run_astft_tf,
            "astft-tf-fast": run_astft_tf_fast,
            "astft-t": run_astft_t,
            "astft-f": run_astft_f,
        }[method]
        result = runner(signal, grid, cfg)
        tfr = result.tfr
        curves = result.curves
        print(_sigma_summary(result.sigma_field))
        for w in result.warnings:
            print(f"warning: {w}", file=sys.stderr)
    print(f"curves: {len(curves)}")
    write_tfr(args.out, tfr)
    if args.pgm:
        if args.floor_db >= 0:
            raise UsageError("--floor-db must be negative")
        write_pgm(args.pgm, tfr, args.floor_db)
    return 0


def _cmd_ifest(args) -> int:
    signal, grid = _load_input_grid(args)
    cfg = PipelineConfig.for_grid(grid)
    result = run_astft_tf(signal, grid, cfg)
    rows = []
    for cid, curve in enumerate(result.curves):
        t = curve.times(grid)
        f = curve.freqs(grid)
        chirp = curve.chirp if curve.chirp is not None else np.zeros(len(curve))
        rows.extend(zip(t, [cid] * len(curve), f, chirp))
    write_ifest_csv(args.out, rows)
    print(f"curves: {len(result.curves)}; wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_bench_mse(args) -> int:
    spec = load_signal_spec(_require_file(args.spec))
    grid = make_grid(args.n, args.dt, args.df, t0=args.t0, f0=args.f0, n_freq=args.n_freq)
    snrs = _parse_snr_values(args.snr)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    if not methods:
        raise UsageError("--methods must name at least one method")
    if "astft-t" in methods and args.xi is None:
        raise UsageError("--xi is required when astft-t is benchmarked")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    cfg = PipelineConfig.for_grid(grid, xi=args.xi)
    report = run_mse_experiment(
        spec,
        grid,
        cfg,
        snrs,
        args.trials,
        methods=methods,
        seed_base=args.seed_base,
        fixed_sigma=args.fixed_sigma,
    )
    write_mse_csv(args.out, report)
    print(f"wrote {len(methods) * len(snrs)} rows to {args.out}")
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "analyze": _cmd_analyze,
    "ifest": _cmd_ifest,
    "bench-mse": _cmd_bench_mse,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, SpecParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
