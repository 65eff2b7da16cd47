"""CART-style decision trees and bagged random forests.

Split search runs on pre-binned features: every boundary between
consecutive occupied bins is scored by weighted Gini impurity from
histogram counts, lowest cost wins, ties go to the earlier feature and
then the lower threshold. With fewer distinct values than the bin
budget this is an exhaustive scan over every value boundary. Leaf
predictions are late-class fractions; a forest averages them over
bootstrap trees with per-split uniform feature subsampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .base import ScoringModel, validate_training_data
from .binning import MAX_BINS, BinnedMatrix, bin_matrix, boundary_threshold

__all__ = [
    "Tree",
    "tree_predict",
    "best_gini_split",
    "build_gini_tree",
    "DecisionTreeModel",
    "RandomForestModel",
    "fit_decision_tree",
    "fit_random_forest",
]


@dataclass
class Tree:
    """Flat array representation; feature == -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Tree":
        return cls(
            feature=np.array(raw["feature"], dtype=np.int64),
            threshold=np.array(raw["threshold"], dtype=np.float64),
            left=np.array(raw["left"], dtype=np.int64),
            right=np.array(raw["right"], dtype=np.int64),
            value=np.array(raw["value"], dtype=np.float64),
        )


def tree_predict(tree: Tree, X: np.ndarray) -> np.ndarray:
    """Leaf value per row; rows route left on value <= threshold."""
    node = np.zeros(X.shape[0], dtype=np.int64)
    rows = np.arange(X.shape[0])
    while True:
        active = tree.feature[node] >= 0
        if not active.any():
            return tree.value[node]
        idx = rows[active]
        cur = node[idx]
        go_left = X[idx, tree.feature[cur]] <= tree.threshold[cur]
        node[idx] = np.where(go_left, tree.left[cur], tree.right[cur])


def _node_histograms(
    bm: BinnedMatrix, idx: np.ndarray, feats: np.ndarray, weights: list[np.ndarray]
) -> list[np.ndarray]:
    """Per-feature bin histograms: counts first, then one per weight array."""
    stride = bm.stride
    flat = bm.codes[np.ix_(idx, feats)].astype(np.int64)
    flat += np.arange(len(feats), dtype=np.int64) * stride
    flat = flat.ravel()
    size = len(feats) * stride
    out = [np.bincount(flat, minlength=size).reshape(len(feats), stride).astype(np.float64)]
    for w in weights:
        out.append(
            np.bincount(flat, weights=np.repeat(w, len(feats)), minlength=size)
            .reshape(len(feats), stride)
        )
    return out


def best_gini_split(
    bm: BinnedMatrix,
    idx: np.ndarray,
    feats: np.ndarray,
    y: np.ndarray,
    min_samples_leaf: int = 1,
) -> tuple[float, int, int, float]:
    """Lowest weighted-Gini bin boundary over the given features.

    Returns (cost, feature, bin, threshold); feature is -1 when no
    boundary satisfies the leaf-size constraint.
    """
    m = len(idx)
    counts, lates = _node_histograms(bm, idx, feats, [y[idx].astype(np.float64)])
    nl = counts.cumsum(axis=1)[:, :-1]
    ll = lates.cumsum(axis=1)[:, :-1]
    nr = m - nl
    lr = float(y[idx].sum()) - ll
    with np.errstate(invalid="ignore", divide="ignore"):
        gini_left = 1.0 - (ll / nl) ** 2 - ((nl - ll) / nl) ** 2
        gini_right = 1.0 - (lr / nr) ** 2 - ((nr - lr) / nr) ** 2
        cost = (nl * gini_left + nr * gini_right) / m
    boundary = np.arange(bm.stride - 1)[None, :]
    valid = (
        (nl >= min_samples_leaf)
        & (nr >= min_samples_leaf)
        & (boundary < (bm.n_bins[feats] - 1)[:, None])
    )
    cost = np.where(valid, cost, np.inf)
    j = int(np.argmin(cost))  # feature-major order: earlier feature wins ties
    f_pos, b = divmod(j, bm.stride - 1)
    best = float(cost.ravel()[j])
    if not np.isfinite(best):
        return math.inf, -1, -1, 0.0
    f = int(feats[f_pos])
    return best, f, int(b), boundary_threshold(bm, f, int(b))


def build_gini_tree(
    bm: BinnedMatrix,
    y: np.ndarray,
    max_depth: int,
    min_samples_split: int = 2,
    min_samples_leaf: int = 1,
    max_features: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    root_idx: Optional[np.ndarray] = None,
) -> Tree:
    """Grow a classification tree; leaf values are late fractions."""
    d = bm.codes.shape[1]
    all_feats = np.arange(d)
    feature, threshold, left, right, value = [], [], [], [], []

    def grow(idx: np.ndarray, depth: int) -> int:
        node = len(feature)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        yn = y[idx]
        value.append(float(yn.mean()))
        if depth >= max_depth or len(idx) < min_samples_split or yn.min() == yn.max():
            return node
        if max_features is not None and max_features < d:
            feats = rng.choice(d, size=max_features, replace=False)
        else:
            feats = all_feats
        cost, f, b, thr = best_gini_split(bm, idx, feats, y, min_samples_leaf)
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


class DecisionTreeModel(ScoringModel):
    kind = "decision_tree"

    def __init__(self, feature_names, tree: Tree, params: dict):
        super().__init__(feature_names)
        self.tree = tree
        self.params = params

    @classmethod
    def fit(
        cls,
        X,
        y,
        feature_names,
        max_depth: int = 15,
        min_samples_split: int = 2,
        min_samples_leaf: int = 1,
        max_bins: int = MAX_BINS,
    ) -> "DecisionTreeModel":
        if max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {max_depth}")
        X, y = validate_training_data(X, y)
        bm = bin_matrix(X, max_bins)
        tree = build_gini_tree(bm, y, max_depth, min_samples_split, min_samples_leaf)
        params = {
            "max_depth": max_depth,
            "min_samples_split": min_samples_split,
            "min_samples_leaf": min_samples_leaf,
            "max_bins": max_bins,
        }
        return cls(feature_names, tree, params)

    def _proba(self, X: np.ndarray) -> np.ndarray:
        return tree_predict(self.tree, X)

    def _state_dict(self) -> dict:
        return {"tree": self.tree.to_dict(), "params": self.params}

    @classmethod
    def _from_state(cls, feature_names: Sequence[str], state: dict) -> "DecisionTreeModel":
        return cls(feature_names, Tree.from_dict(state["tree"]), state["params"])


class RandomForestModel(ScoringModel):
    kind = "random_forest"

    def __init__(self, feature_names, trees: list[Tree], params: dict):
        super().__init__(feature_names)
        self.trees = trees
        self.params = params

    @classmethod
    def fit(
        cls,
        X,
        y,
        feature_names,
        n_estimators: int = 100,
        max_depth: int = 15,
        min_samples_split: int = 2,
        min_samples_leaf: int = 1,
        max_features: str | int = "sqrt",
        max_bins: int = MAX_BINS,
        seed: int = 0,
    ) -> "RandomForestModel":
        if max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {max_depth}")
        if n_estimators < 1:
            raise ValueError(f"n_estimators must be >= 1, got {n_estimators}")
        X, y = validate_training_data(X, y)
        n, d = X.shape
        if max_features == "sqrt":
            mf = max(1, int(math.sqrt(d)))
        else:
            mf = int(max_features)
            if not 1 <= mf <= d:
                raise ValueError(f"max_features must be in [1, {d}], got {mf}")
        bm = bin_matrix(X, max_bins)
        # One spawned stream per tree: results do not depend on build order.
        seeds = np.random.SeedSequence(seed).spawn(n_estimators)
        trees = []
        for child in seeds:
            rng = np.random.default_rng(child)
            boot = rng.integers(0, n, size=n)
            trees.append(
                build_gini_tree(
                    bm, y, max_depth, min_samples_split, min_samples_leaf, mf, rng,
                    root_idx=boot,
                )
            )
        params = {
            "n_estimators": n_estimators,
            "max_depth": max_depth,
            "min_samples_split": min_samples_split,
            "min_samples_leaf": min_samples_leaf,
            "max_features": max_features,
            "max_bins": max_bins,
            "seed": seed,
        }
        return cls(feature_names, trees, params)

    def _proba(self, X: np.ndarray) -> np.ndarray:
        acc = np.zeros(X.shape[0])
        for tree in self.trees:
            acc += tree_predict(tree, X)
        return acc / len(self.trees)

    def _state_dict(self) -> dict:
        return {"trees": [t.to_dict() for t in self.trees], "params": self.params}

    @classmethod
    def _from_state(cls, feature_names: Sequence[str], state: dict) -> "RandomForestModel":
        return cls(feature_names, [Tree.from_dict(t) for t in state["trees"]], state["params"])


def fit_decision_tree(X, y, feature_names, **params) -> DecisionTreeModel:
    return DecisionTreeModel.fit(X, y, feature_names, **params)


def fit_random_forest(X, y, feature_names, **params) -> RandomForestModel:
    return RandomForestModel.fit(X, y, feature_names, **params)
