"""Scoring contract and shared preprocessing for the classifier suite."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

MODEL_FORMAT = "arcollect-model"
MODEL_FORMAT_VERSION = 1


class ScoringModel:
    """Base for all classifiers: schema-checked probability of late.

    Subclasses implement ``_proba`` plus ``_state_dict``/``_from_state``
    for the JSON document, and a ``fit`` classmethod.
    """

    kind: str = "?"

    def __init__(self, feature_names: Sequence[str]):
        self.feature_names = [str(n) for n in feature_names]

    def predict_proba(self, X: np.ndarray, columns: Optional[Sequence[str]] = None) -> np.ndarray:
        """P(late) for each row of X; schema mismatches are errors."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.feature_names):
            raise ValueError(
                f"{self.kind}: expected matrix with {len(self.feature_names)} columns, "
                f"got shape {X.shape}"
            )
        if columns is not None and list(columns) != self.feature_names:
            raise ValueError(f"{self.kind}: feature schema mismatch at predict time")
        p = np.asarray(self._proba(X), dtype=np.float64)
        return np.clip(p, 0.0, 1.0)

    def _proba(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_FORMAT_VERSION,
            "kind": self.kind,
            "feature_names": self.feature_names,
            "state": self._state_dict(),
        }

    def _state_dict(self) -> dict:
        raise NotImplementedError

    @classmethod
    def _from_state(cls, feature_names: Sequence[str], state: dict) -> "ScoringModel":
        raise NotImplementedError

    @classmethod
    def fit(cls, X, y, feature_names, **params) -> "ScoringModel":
        raise NotImplementedError


class StandardScaler:
    """Per-feature standardization fitted on training rows only.

    Zero-variance features pass through unscaled so constant columns
    (one-hots of absent countries) stay harmless.
    """

    def __init__(self, mean: np.ndarray, scale: np.ndarray):
        self.mean = np.asarray(mean, dtype=np.float64)
        self.scale = np.asarray(scale, dtype=np.float64)

    @classmethod
    def fit(cls, X: np.ndarray) -> "StandardScaler":
        X = np.asarray(X, dtype=np.float64)
        mean = X.mean(axis=0)
        sd = X.std(axis=0)
        scale = np.where(sd == 0.0, 1.0, sd)
        return cls(mean=np.where(sd == 0.0, 0.0, mean), scale=scale)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.scale

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, raw: dict) -> "StandardScaler":
        return cls(mean=np.array(raw["mean"]), scale=np.array(raw["scale"]))


def validate_training_data(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise ValueError(f"y shape {y.shape} does not match X rows {X.shape[0]}")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("y must contain only 0 (on time) and 1 (late)")
    return X, y.astype(np.int64)
