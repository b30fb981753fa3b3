"""Hot direct-summation kernel: numba @njit with a pure-numpy fallback.

The backend is picked once at import from ``CHIRPTF_BACKEND``:

* ``auto`` (default) - numba if it imports, numpy otherwise
* ``numba``          - require numba, fail loudly if missing
* ``numpy``          - force the vectorized fallback

``CHIRPTF_THREADS`` (0 = auto) caps numba's worker threads.  Both paths
compute the same sums; per-cell work is independent so results do not
depend on the thread schedule.
"""

from __future__ import annotations

import math
import os

import numpy as np

_ENV_BACKEND = "CHIRPTF_BACKEND"
_ENV_THREADS = "CHIRPTF_THREADS"

SQRT_2PI = math.sqrt(2.0 * math.pi)


def _direct_numpy(x, sigma, q, bin0, n_dft, dt, periodic):
    """Vectorized direct summation; one matvec per time column."""
    n_time, n_freq = sigma.shape
    n_sig = x.shape[0]
    out = np.empty((n_time, n_freq), np.complex128)
    rows = (bin0 + np.arange(n_freq, dtype=np.int64))[:, None]
    c0 = dt / SQRT_2PI
    for m in range(n_time):
        qm = q[m]
        qmax = int(qm.max())
        if periodic:
            ls = np.arange(m - qmax, m + qmax + 1, dtype=np.int64)
            xs = x[ls % n_sig]
        else:
            lo = max(0, m - qmax)
            hi = min(n_sig - 1, m + qmax)
            ls = np.arange(lo, hi + 1, dtype=np.int64)
            xs = x[ls]
        toff = (m - ls) * dt
        sig_m = sigma[m][:, None]
        w = np.exp(-(toff[None, :] ** 2) / (2.0 * sig_m * sig_m))
        w[np.abs(m - ls)[None, :] > qm[:, None]] = 0.0
        phase = np.exp((-2j * np.pi / n_dft) * ((rows * ls[None, :]) % n_dft))
        out[m] = (c0 / sigma[m]) * ((w * phase) @ xs)
    return out


def _make_numba_kernel():
    import numba

    threads = int(os.environ.get(_ENV_THREADS, "0") or "0")
    if threads > 0:
        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))

    @numba.njit(cache=True, parallel=True)
    def _direct_numba(x, sigma, q, bin0, n_dft, dt, periodic):
        n_time, n_freq = sigma.shape
        n_sig = x.shape[0]
        out = np.empty((n_time, n_freq), np.complex128)
        c0 = dt / SQRT_2PI
        two_pi = 2.0 * np.pi
        for m in numba.prange(n_time):
            for r in range(n_freq):
                s = sigma[m, r]
                qq = q[m, r]
                lo = m - qq
                hi = m + qq
                if not periodic:
                    if lo < 0:
                        lo = 0
                    if hi > n_sig - 1:
                        hi = n_sig - 1
                inv2 = 1.0 / (2.0 * s * s)
                n = bin0 + r
                acc = 0.0 + 0.0j
                for l in range(lo, hi + 1):
                    toff = (m - l) * dt
                    w = math.exp(-toff * toff * inv2)
                    ang = -two_pi * ((n * l) % n_dft) / n_dft
                    acc += x[l % n_sig] * w * complex(math.cos(ang), math.sin(ang))
                out[m, r] = (c0 / s) * acc
        return out

    return _direct_numba


def _select():
    choice = os.environ.get(_ENV_BACKEND, "auto").strip().lower() or "auto"
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"{_ENV_BACKEND} must be one of auto/numba/numpy, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy", _direct_numpy
    try:
        return "numba", _make_numba_kernel()
    except ImportError:
        if choice == "numba":
            raise
        return "numpy", _direct_numpy


ACTIVE_BACKEND, _direct_kernel = _select()


def direct_sum(x, sigma, q, bin0, n_dft, dt, periodic=False):
    """Direct windowed summation over the whole plane.

    ``sigma`` and ``q`` are full (n_time, n_freq) matrices of window widths
    and truncation radii; ``bin0`` is the DFT bin of frequency row 0.
    ``periodic`` repeats the record instead of zero-extending it.
    """
    x = np.ascontiguousarray(x, dtype=np.complex128)
    sigma = np.ascontiguousarray(sigma, dtype=np.float64)
    q = np.ascontiguousarray(q, dtype=np.int64)
    return _direct_kernel(x, sigma, q, int(bin0), int(n_dft), float(dt), bool(periodic))


def numpy_direct_sum(x, sigma, q, bin0, n_dft, dt, periodic=False):
    """Fallback path regardless of the active backend (used by benchmarks)."""
    x = np.ascontiguousarray(x, dtype=np.complex128)
    sigma = np.ascontiguousarray(sigma, dtype=np.float64)
    q = np.ascontiguousarray(q, dtype=np.int64)
    return _direct_numpy(x, sigma, q, int(bin0), int(n_dft), float(dt), bool(periodic))
