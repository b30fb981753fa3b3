"""Ridge detection, greedy curve tracing, and pruning of spurious curves."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .core import SampleGrid, TFRMatrix


class RidgePoint(NamedTuple):
    m: int
    n: int
    mag: float


@dataclass(frozen=True)
class PeakConfig:
    """Detection and pruning thresholds.

    ``min_rel_height`` is a fraction of the column maximum;
    ``min_curve_energy`` a fraction of the summed magnitude of all traced
    curves; ``max_jump_bins`` caps the per-column frequency jump a curve
    may take.
    """

    max_components: int = 2
    min_rel_height: float = 0.1
    min_curve_len: int = 8
    min_curve_energy: float = 0.01
    max_jump_bins: int = 10

    def __post_init__(self):
        if self.max_components < 1:
            raise ValueError("max_components must be >= 1")
        if not 0.0 < self.min_rel_height <= 1.0:
            raise ValueError("min_rel_height must be in (0, 1]")
        if self.min_curve_len < 1 or self.min_curve_energy < 0:
            raise ValueError("pruning thresholds must be positive")
        if self.max_jump_bins < 1:
            raise ValueError("max_jump_bins must be >= 1")


@dataclass(frozen=True)
class RidgeCurve:
    """One traced component: consecutive time columns, one point each."""

    m: np.ndarray
    n: np.ndarray
    mag: np.ndarray
    chirp: np.ndarray | None = None

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.int64)
        n = np.asarray(self.n, dtype=np.int64)
        mag = np.asarray(self.mag, dtype=np.float64)
        if not (m.shape == n.shape == mag.shape) or m.ndim != 1:
            raise ValueError("m, n, mag must be 1-d arrays of equal length")
        if m.size > 1 and np.any(np.diff(m) <= 0):
            raise ValueError("time indices must be strictly increasing")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mag", mag)

    def __len__(self) -> int:
        return int(self.m.size)

    def energy(self) -> float:
        return float(self.mag.sum())

    def times(self, grid: SampleGrid) -> np.ndarray:
        return grid.t0 + self.m * grid.dt

    def freqs(self, grid: SampleGrid) -> np.ndarray:
        return grid.f0 + self.n * grid.df

    def with_chirp(self, chirp: np.ndarray) -> "RidgeCurve":
        chirp = np.asarray(chirp, dtype=np.float64)
        if chirp.shape != self.m.shape:
            raise ValueError("chirp length must match the curve length")
        return replace(self, chirp=chirp)


def _local_maxima(col: np.ndarray) -> list[int]:
    """Indices of local maxima; plateaus contribute their center index."""
    out = []
    n = col.size
    i = 0
    while i < n:
        j = i
        while j + 1 < n and col[j + 1] == col[i]:
            j += 1
        left_ok = i == 0 or col[i - 1] < col[i]
        right_ok = j == n - 1 or col[j + 1] < col[i]
        if left_ok and right_ok and col[i] > 0:
            out.append((i + j) // 2)
        i = j + 1
    return out


def detect_ridge_points(tfr: TFRMatrix, cfg: PeakConfig) -> list[list[RidgePoint]]:
    """Per time column, the strongest local maxima along frequency.

    Keeps at most ``max_components`` maxima per column, each at least
    ``min_rel_height`` of the column peak; returned in frequency order.
    """
    mags = np.abs(tfr.values)
    out: list[list[RidgePoint]] = []
    for m in range(mags.shape[0]):
        col = mags[m]
        peak = col.max()
        if peak <= 0.0:
            out.append([])
            continue
        cands = [n for n in _local_maxima(col) if col[n] >= cfg.min_rel_height * peak]
        cands.sort(key=lambda n: (-col[n], n))
        kept = sorted(cands[: cfg.max_components])
        out.append([RidgePoint(m, n, float(col[n])) for n in kept])
    return out


def trace_curves(
    points: list[list[RidgePoint]], cfg: PeakConfig
) -> list[RidgeCurve]:
    """Greedy nearest-frequency continuation of per-column points.

    Each active curve extends to the unclaimed point in the next column
    minimizing |dn|, accepted iff |dn| <= max_jump_bins; conflicts resolve
    by smaller |dn|, then higher magnitude.  Unclaimed points open new
    curves; a curve with no continuation closes.
    """
    finished: list[list[RidgePoint]] = []
    active: list[list[RidgePoint]] = []
    for col in points:
        pairs = []
        for ci, curve in enumerate(active):
            last_n = curve[-1].n
            for pi, pt in enumerate(col):
                dn = abs(pt.n - last_n)
                if dn <= cfg.max_jump_bins:
                    pairs.append((dn, -pt.mag, ci, pi))
        pairs.sort()
        used_c: set[int] = set()
        used_p: set[int] = set()
        for dn, _negmag, ci, pi in pairs:
            if ci in used_c or pi in used_p:
                continue
            active[ci].append(col[pi])
            used_c.add(ci)
            used_p.add(pi)
        still_active = []
        for ci, curve in enumerate(active):
            (still_active if ci in used_c else finished).append(curve)
        for pi, pt in enumerate(col):
            if pi not in used_p:
                still_active.append([pt])
        active = still_active
    finished.extend(active)
    finished.sort(key=lambda c: (c[0].m, c[0].n))
    return [
        RidgeCurve(
            np.array([p.m for p in c]),
            np.array([p.n for p in c]),
            np.array([p.mag for p in c]),
        )
        for c in finished
    ]


def prune_curves(curves: list[RidgeCurve], cfg: PeakConfig) -> list[RidgeCurve]:
    """Drop curves that are too short or carry too small a share of energy."""
    total = sum(c.energy() for c in curves)
    if total == 0.0:
        return []
    return [
        c
        for c in curves
        if len(c) >= cfg.min_curve_len and c.energy() >= cfg.min_curve_energy * total
    ]
