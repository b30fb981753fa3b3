"""Dense chirp-rate fields from ridge curves, and axis-averaged variants.

On-ridge chirp rates are spread over the whole plane by triangle-based
linear interpolation inside the convex hull of the ridge sites and by
nearest-site lookup outside it (distances in grid-index units).  The
axis-averaged variants feed the FFT fast paths, which need the width to
vary along one axis only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator
from scipy.spatial import QhullError

from .core import DegenerateInputError, SampleGrid
from .chirprate import SigmaBounds, sigma_from_chirp
from .ridge import RidgeCurve
from .transforms import SigmaField


@dataclass(frozen=True)
class ChirpField:
    """Sparse on-ridge chirp rates and, once interpolated, the dense field."""

    m: np.ndarray
    n: np.ndarray
    f_prime: np.ndarray
    filled: np.ndarray | None = None


def _gather_sites(curves: list[RidgeCurve]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ms, ns, fps = [], [], []
    for c in curves:
        if c.chirp is None:
            raise ValueError("curve has no chirp values; run chirp_along_curve first")
        keep = np.isfinite(c.chirp)
        ms.append(c.m[keep])
        ns.append(c.n[keep])
        fps.append(c.chirp[keep])
    m = np.concatenate(ms) if ms else np.array([], dtype=np.int64)
    if m.size == 0:
        raise DegenerateInputError("no finite on-ridge chirp rates to interpolate")
    return m, np.concatenate(ns), np.concatenate(fps)


def interpolate_chirp_field(curves: list[RidgeCurve], grid: SampleGrid) -> ChirpField:
    """Dense f'[m, n] from on-ridge samples.

    Linear inside the convex hull of the sites, nearest site outside;
    exactly collinear sites degenerate to 1-d interpolation along time
    replicated across frequency.
    """
    if not curves:
        raise DegenerateInputError("need at least one curve")
    m, n, fp = _gather_sites(curves)
    mm, nn = np.meshgrid(
        np.arange(grid.n_time), np.arange(grid.n_freq), indexing="ij"
    )
    if m.size == 1:
        return ChirpField(m, n, fp, np.full((grid.n_time, grid.n_freq), fp[0]))
    pts = np.column_stack([m, n]).astype(float)
    dense = None
    try:
        lin = LinearNDInterpolator(pts, fp)
        dense = lin(mm, nn)
    except QhullError:
        order = np.argsort(m, kind="stable")
        xs, inv = np.unique(m[order], return_inverse=True)
        ys = np.zeros(xs.size)
        np.add.at(ys, inv, fp[order])
        counts = np.bincount(inv)
        ys /= counts
        per_time = np.interp(np.arange(grid.n_time), xs, ys)
        dense = np.repeat(per_time[:, None], grid.n_freq, axis=1)
    if np.any(np.isnan(dense)):
        near = NearestNDInterpolator(pts, fp)
        hole = np.isnan(dense)
        dense[hole] = near(mm[hole], nn[hole])
    return ChirpField(m, n, fp, dense)


def sigma_field_full(chirp_field: ChirpField, bounds: SigmaBounds) -> SigmaField:
    """Elementwise width law applied to the dense chirp field."""
    if chirp_field.filled is None:
        raise ValueError("chirp field has not been interpolated")
    return SigmaField.full(sigma_from_chirp(chirp_field.filled, bounds), bounds=bounds)


def _fill_nearest(values: np.ndarray, have: np.ndarray) -> np.ndarray:
    """Fill gaps with the value at the nearest filled index (ties: lower)."""
    idx = np.flatnonzero(have)
    out = values.copy()
    missing = np.flatnonzero(~have)
    if missing.size == 0:
        return out
    pos = np.searchsorted(idx, missing)
    left = idx[np.clip(pos - 1, 0, idx.size - 1)]
    right = idx[np.clip(pos, 0, idx.size - 1)]
    pick = np.where(np.abs(missing - left) <= np.abs(right - missing), left, right)
    out[missing] = values[pick]
    return out


def average_chirp(curves: list[RidgeCurve], grid: SampleGrid, axis: str) -> np.ndarray:
    """Mean |f'| per time index (axis='time') or per frequency row ('freq').

    Indices no curve touches inherit the nearest computed value.
    """
    if axis not in ("time", "freq"):
        raise ValueError(f"axis must be 'time' or 'freq', got {axis!r}")
    if not curves:
        raise DegenerateInputError("need at least one curve")
    m, n, fp = _gather_sites(curves)
    size = grid.n_time if axis == "time" else grid.n_freq
    key = m if axis == "time" else n
    sums = np.zeros(size)
    counts = np.zeros(size)
    np.add.at(sums, key, np.abs(fp))
    np.add.at(counts, key, 1.0)
    have = counts > 0
    if not np.any(have):
        raise DegenerateInputError("curves do not touch the grid")
    means = np.zeros(size)
    means[have] = sums[have] / counts[have]
    return _fill_nearest(means, have)


def _median_cv(values_by_index: np.ndarray, key: np.ndarray, size: int) -> float:
    cvs = []
    for idx in range(size):
        vals = values_by_index[key == idx]
        if vals.size == 0:
            continue
        mean = vals.mean()
        cvs.append(0.0 if mean == 0.0 else float(vals.std() / mean))
    return float(np.median(cvs)) if cvs else 0.0


def choose_average_axis(curves: list[RidgeCurve], grid: SampleGrid) -> str:
    """Axis whose |f'| values are most alike across components.

    Compares the median coefficient of variation per time index against
    the per-frequency one; ties (including single-component signals)
    resolve to 'time'.
    """
    if not curves:
        raise DegenerateInputError("need at least one curve")
    m, n, fp = _gather_sites(curves)
    fp = np.abs(fp)
    cv_time = _median_cv(fp, m, grid.n_time)
    cv_freq = _median_cv(fp, n, grid.n_freq)
    return "time" if cv_time <= cv_freq else "freq"
