"""Boosted regression trees on logistic loss.

Each round fits a tree to first/second-order statistics of the loss
(g = p - y, h = p(1 - p)) over pre-binned features. Leaf values are
Newton steps with L1 shrinkage applied by soft-thresholding the
gradient sum; split gain uses the same shrunken scores. Row and column
subsampling draw from a per-round stream spawned off the model seed,
so training is deterministic and independent of evaluation order.
"""
from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .base import ScoringModel, validate_training_data
from .binning import MAX_BINS, BinnedMatrix, bin_matrix, boundary_threshold
from .trees import Tree, _node_histograms, tree_predict

__all__ = [
    "soft_threshold",
    "best_newton_split",
    "build_newton_tree",
    "GradientBoostedTreesModel",
    "fit_gbdt",
]

_GAIN_EPS = 1e-12
_PROB_CLIP = 1e-12


def soft_threshold(g, alpha: float):
    return np.sign(g) * np.maximum(np.abs(g) - alpha, 0.0)


def _leaf_score(G, H, l1: float, l2: float):
    t = soft_threshold(G, l1)
    denom = H + l2
    safe = np.where(denom > 0.0, denom, 1.0)
    return np.where(denom > 0.0, t * t / safe, 0.0)


def leaf_value(G: float, H: float, l1: float, l2: float) -> float:
    denom = H + l2
    if denom <= 0.0:
        return 0.0
    return float(-soft_threshold(G, l1) / denom)


def best_newton_split(
    bm: BinnedMatrix,
    idx: np.ndarray,
    feats: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    l1: float,
    l2: float,
    min_child_weight: float,
) -> tuple[float, int, int, float]:
    """Highest-gain bin boundary; feature -1 when nothing clears the floor."""
    G, H = float(g[idx].sum()), float(h[idx].sum())
    parent = float(_leaf_score(np.float64(G), np.float64(H), l1, l2))
    _, gl_hist, hl_hist = _node_histograms(bm, idx, feats, [g[idx], h[idx]])
    GL = gl_hist.cumsum(axis=1)[:, :-1]
    HL = hl_hist.cumsum(axis=1)[:, :-1]
    GR = G - GL
    HR = H - HL
    gain = 0.5 * (_leaf_score(GL, HL, l1, l2) + _leaf_score(GR, HR, l1, l2) - parent)
    boundary = np.arange(bm.stride - 1)[None, :]
    valid = (
        (HL >= min_child_weight)
        & (HR >= min_child_weight)
        & (boundary < (bm.n_bins[feats] - 1)[:, None])
    )
    gain = np.where(valid, gain, -np.inf)
    j = int(np.argmax(gain))  # feature-major order: earlier feature wins ties
    best = float(gain.ravel()[j])
    if best <= _GAIN_EPS:
        return 0.0, -1, -1, 0.0
    f_pos, b = divmod(j, bm.stride - 1)
    f = int(feats[f_pos])
    return best, f, int(b), boundary_threshold(bm, f, int(b))


def build_newton_tree(
    bm: BinnedMatrix,
    g: np.ndarray,
    h: np.ndarray,
    max_depth: int,
    feats: np.ndarray,
    l1: float,
    l2: float,
    min_child_weight: float,
    root_idx: Optional[np.ndarray] = None,
) -> Tree:
    feature, threshold, left, right, value = [], [], [], [], []

    def grow(idx: np.ndarray, depth: int) -> int:
        node = len(feature)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(leaf_value(float(g[idx].sum()), float(h[idx].sum()), l1, l2))
        if depth >= max_depth or len(idx) < 2:
            return node
        gain, f, b, thr = best_newton_split(bm, idx, feats, g, h, l1, l2, min_child_weight)
        if f < 0:
            return node
        mask = bm.codes[idx, f] <= b
        feature[node] = f
        threshold[node] = thr
        left[node] = grow(idx[mask], depth + 1)
        right[node] = grow(idx[~mask], depth + 1)
        return node

    grow(np.arange(bm.codes.shape[0]) if root_idx is None else root_idx, 0)
    return Tree(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        value=np.array(value, dtype=np.float64),
    )


class GradientBoostedTreesModel(ScoringModel):
    kind = "gbdt"

    def __init__(self, feature_names, base_score: float, learning_rate: float,
                 trees: list[Tree], params: dict):
        super().__init__(feature_names)
        self.base_score = float(base_score)
        self.learning_rate = float(learning_rate)
        self.trees = trees
        self.params = params

    @classmethod
    def fit(
        cls,
        X,
        y,
        feature_names,
        learning_rate: float = 0.01,
        n_estimators: int = 100,
        max_depth: int = 15,
        subsample: float = 1.0,
        colsample: float = 0.7,
        l1_reg: float = 1.0,
        l2_reg: float = 1.0,
        min_child_weight: float = 1.0,
        max_bins: int = MAX_BINS,
        seed: int = 0,
    ) -> "GradientBoostedTreesModel":
        if learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {learning_rate}")
        if n_estimators < 0:
            raise ValueError(f"n_estimators must be >= 0, got {n_estimators}")
        if not 0.0 < subsample <= 1.0 or not 0.0 < colsample <= 1.0:
            raise ValueError("subsample and colsample must be in (0, 1]")
        if max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {max_depth}")
        X, y = validate_training_data(X, y)
        n, d = X.shape
        pbar = min(max(float(y.mean()), _PROB_CLIP), 1.0 - _PROB_CLIP)
        base = math.log(pbar / (1.0 - pbar))

        bm = bin_matrix(X, max_bins)
        seeds = np.random.SeedSequence(seed).spawn(max(n_estimators, 1))
        margin = np.full(n, base)
        yf = y.astype(np.float64)
        trees: list[Tree] = []
        n_rows = max(1, round(subsample * n))
        n_cols = max(1, round(colsample * d))
        for m in range(n_estimators):
            rng = np.random.default_rng(seeds[m])
            p = 1.0 / (1.0 + np.exp(-margin))
            g = p - yf
            h = p * (1.0 - p)
            rows = np.sort(rng.choice(n, size=n_rows, replace=False)) if n_rows < n else np.arange(n)
            cols = np.sort(rng.choice(d, size=n_cols, replace=False)) if n_cols < d else np.arange(d)
            tree = build_newton_tree(
                bm, g, h, max_depth, cols, l1_reg, l2_reg, min_child_weight, root_idx=rows
            )
            trees.append(tree)
            margin += learning_rate * tree_predict(tree, X)
        params = {
            "learning_rate": learning_rate,
            "n_estimators": n_estimators,
            "max_depth": max_depth,
            "subsample": subsample,
            "colsample": colsample,
            "l1_reg": l1_reg,
            "l2_reg": l2_reg,
            "min_child_weight": min_child_weight,
            "max_bins": max_bins,
            "seed": seed,
        }
        return cls(feature_names, base, learning_rate, trees, params)

    def predict_margin(self, X: np.ndarray, n_trees: Optional[int] = None) -> np.ndarray:
        """Raw margin after the first ``n_trees`` rounds (all by default)."""
        X = np.asarray(X, dtype=np.float64)
        use = self.trees if n_trees is None else self.trees[:n_trees]
        margin = np.full(X.shape[0], self.base_score)
        for tree in use:
            margin += self.learning_rate * tree_predict(tree, X)
        return margin

    def _proba(self, X: np.ndarray) -> np.ndarray:
        z = self.predict_margin(X)
        return np.where(z >= 0, 1.0 / (1.0 + np.exp(-np.abs(z))),
                        np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))))

    def _state_dict(self) -> dict:
        return {
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "trees": [t.to_dict() for t in self.trees],
            "params": self.params,
        }

    @classmethod
    def _from_state(cls, feature_names: Sequence[str], state: dict) -> "GradientBoostedTreesModel":
        return cls(
            feature_names,
            state["base_score"],
            state["learning_rate"],
            [Tree.from_dict(t) for t in state["trees"]],
            state["params"],
        )


def fit_gbdt(X, y, feature_names, **params) -> GradientBoostedTreesModel:
    return GradientBoostedTreesModel.fit(X, y, feature_names, **params)
