"""Feature pre-binning for tree training.

Each feature is quantized once per fit into at most ``max_bins``
ordered bins; split search then scans bin boundaries with histogram
counts instead of sorting rows at every node. When a feature has no
more distinct values than the bin budget the bins are exactly its
unique values, so the search coincides with an exhaustive scan over
every value boundary. Bins always keep the lowest and highest raw
value they contain, letting thresholds be placed strictly between the
training values of adjacent bins.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_BINS = 64


@dataclass
class BinnedMatrix:
    """Per-feature bin codes plus the raw value range of every bin."""

    codes: np.ndarray          # (n, d) uint8 bin index per cell
    lower: list[np.ndarray]    # per feature: lowest raw value in each bin
    upper: list[np.ndarray]    # per feature: highest raw value in each bin
    n_bins: np.ndarray         # per feature bin count

    @property
    def stride(self) -> int:
        return int(self.n_bins.max())


def bin_matrix(X: np.ndarray, max_bins: int = MAX_BINS) -> BinnedMatrix:
    if not 2 <= max_bins <= 256:
        raise ValueError(f"max_bins must be in [2, 256], got {max_bins}")
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    codes = np.empty((n, d), dtype=np.uint8)
    lower: list[np.ndarray] = []
    upper: list[np.ndarray] = []
    n_bins = np.empty(d, dtype=np.int64)
    for f in range(d):
        col = X[:, f]
        uniq = np.unique(col)
        if len(uniq) <= max_bins:
            ups = uniq
        else:
            # Right edges at quantiles, then snapped to the largest data
            # value they cover; empty bins disappear in the dedup.
            qs = np.quantile(col, np.linspace(0.0, 1.0, max_bins + 1)[1:])
            sc = np.sort(col)
            pos = np.searchsorted(sc, qs, side="right")
            pos = np.maximum(pos, 1)
            ups = np.unique(sc[pos - 1])
            if ups[-1] < sc[-1]:
                ups = np.append(ups, sc[-1])
        code = np.searchsorted(ups, col, side="left").astype(np.uint8)
        sc = np.sort(col)
        starts = np.searchsorted(sc, np.concatenate(([-np.inf], ups[:-1])), side="right")
        lower.append(sc[starts])
        upper.append(ups)
        codes[:, f] = code
        n_bins[f] = len(ups)
    return BinnedMatrix(codes=codes, lower=lower, upper=upper, n_bins=n_bins)


def boundary_threshold(bm: BinnedMatrix, feature: int, bin_index: int) -> float:
    """Split value between a bin and its right neighbor.

    Placed halfway between the highest training value of the left bin
    and the lowest of the right bin, and guarded so every left-bin value
    routes left and every right-bin value routes right under x <= t.
    """
    left_top = bm.upper[feature][bin_index]
    right_bottom = bm.lower[feature][bin_index + 1]
    threshold = 0.5 * (left_top + right_bottom)
    if threshold >= right_bottom:  # adjacent floats
        threshold = left_top
    return float(threshold)
