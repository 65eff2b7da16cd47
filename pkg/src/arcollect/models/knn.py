"""k-nearest-neighbors scorer on standardized features."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .base import ScoringModel, StandardScaler, validate_training_data

_CHUNK = 256  # query rows per distance block, bounds memory on big test sets


def nearest_neighbor_indices(X_train: np.ndarray, X_query: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k nearest training rows per query row.

    Squared Euclidean distance; exact distance ties resolve to the
    lower training-row index (stable sort on distances).
    """
    X_train = np.asarray(X_train, dtype=np.float64)
    X_query = np.asarray(X_query, dtype=np.float64)
    if not 1 <= k <= X_train.shape[0]:
        raise ValueError(f"k must be in [1, {X_train.shape[0]}], got {k}")
    out = np.empty((X_query.shape[0], k), dtype=np.int64)
    sq_train = (X_train**2).sum(axis=1)
    for start in range(0, X_query.shape[0], _CHUNK):
        block = X_query[start: start + _CHUNK]
        d2 = sq_train[None, :] - 2.0 * block @ X_train.T + (block**2).sum(axis=1)[:, None]
        order = np.argsort(d2, axis=1, kind="stable")
        out[start: start + len(block)] = order[:, :k]
    return out


class KnnModel(ScoringModel):
    kind = "knn"

    def __init__(self, feature_names, scaler: StandardScaler, X_train, y_train, n_neighbors: int):
        super().__init__(feature_names)
        self.scaler = scaler
        self.X_train = np.asarray(X_train, dtype=np.float64)
        self.y_train = np.asarray(y_train, dtype=np.int64)
        self.n_neighbors = int(n_neighbors)

    @classmethod
    def fit(cls, X, y, feature_names, n_neighbors: int = 49) -> "KnnModel":
        X, y = validate_training_data(X, y)
        if not 1 <= n_neighbors <= X.shape[0]:
            raise ValueError(f"n_neighbors must be in [1, {X.shape[0]}], got {n_neighbors}")
        scaler = StandardScaler.fit(X)
        return cls(feature_names, scaler, scaler.transform(X), y, n_neighbors)

    def _proba(self, X: np.ndarray) -> np.ndarray:
        neighbors = nearest_neighbor_indices(
            self.X_train, self.scaler.transform(X), self.n_neighbors
        )
        return self.y_train[neighbors].mean(axis=1)

    def _state_dict(self) -> dict:
        return {
            "scaler": self.scaler.to_dict(),
            "X_train": self.X_train.tolist(),
            "y_train": self.y_train.tolist(),
            "n_neighbors": self.n_neighbors,
        }

    @classmethod
    def _from_state(cls, feature_names: Sequence[str], state: dict) -> "KnnModel":
        return cls(
            feature_names,
            StandardScaler.from_dict(state["scaler"]),
            np.array(state["X_train"], dtype=np.float64),
            np.array(state["y_train"], dtype=np.int64),
            state["n_neighbors"],
        )


def fit_knn(X, y, feature_names, **params) -> KnnModel:
    return KnnModel.fit(X, y, feature_names, **params)
