"""Classifier suite behind a single probability-of-late contract.

Every model is trained from scratch on numpy arrays and exposes
``predict_proba(X) -> P(late)`` plus versioned JSON serialization.
Models that are sensitive to feature scale (logistic regression, k-NN,
the MLP) fit a standard scaler on their training data internally; tree
models consume raw features.
"""
from __future__ import annotations

import json
from typing import Optional, Sequence

import numpy as np

from .base import MODEL_FORMAT, MODEL_FORMAT_VERSION, ScoringModel, StandardScaler
from .naive_bayes import GaussianNaiveBayes, fit_naive_bayes
from .logistic import LogisticRegressionModel, fit_logistic_regression
from .knn import KnnModel, fit_knn
from .trees import DecisionTreeModel, RandomForestModel, fit_decision_tree, fit_random_forest
from .gbdt import GradientBoostedTreesModel, fit_gbdt
from .mlp import MlpModel, fit_mlp
from .grids import GridSearchResult, default_grids, grid_points, grid_search

__all__ = [
    "MODEL_FORMAT",
    "MODEL_FORMAT_VERSION",
    "ScoringModel",
    "StandardScaler",
    "GaussianNaiveBayes",
    "LogisticRegressionModel",
    "KnnModel",
    "DecisionTreeModel",
    "RandomForestModel",
    "GradientBoostedTreesModel",
    "MlpModel",
    "EnsembleModel",
    "MODEL_KINDS",
    "fit_naive_bayes",
    "fit_logistic_regression",
    "fit_knn",
    "fit_decision_tree",
    "fit_random_forest",
    "fit_gbdt",
    "fit_mlp",
    "fit_model",
    "save_model",
    "load_model",
    "model_from_dict",
    "GridSearchResult",
    "default_grids",
    "grid_points",
    "grid_search",
]


class EnsembleModel(ScoringModel):
    """Mean of random-forest and boosted-trees probabilities."""

    kind = "ensemble"

    def __init__(self, feature_names: Sequence[str], members: list[ScoringModel]):
        super().__init__(feature_names)
        if not members:
            raise ValueError("ensemble needs at least one member model")
        self.members = members

    @classmethod
    def fit(cls, X, y, feature_names, *, member_params: Optional[dict] = None, seed: int = 0):
        params = member_params or {}
        rf = RandomForestModel.fit(
            X, y, feature_names, seed=seed, **params.get("random_forest", {})
        )
        gbdt = GradientBoostedTreesModel.fit(
            X, y, feature_names, seed=seed + 1, **params.get("gbdt", {})
        )
        return cls(feature_names, [rf, gbdt])

    def _proba(self, X: np.ndarray) -> np.ndarray:
        stacked = np.stack([m.predict_proba(X) for m in self.members])
        return stacked.mean(axis=0)

    def _state_dict(self) -> dict:
        return {"members": [m.to_dict() for m in self.members]}

    @classmethod
    def _from_state(cls, feature_names, state):
        members = [model_from_dict(raw) for raw in state["members"]]
        return cls(feature_names, members)


MODEL_KINDS: dict[str, type[ScoringModel]] = {
    "naive_bayes": GaussianNaiveBayes,
    "logistic_regression": LogisticRegressionModel,
    "knn": KnnModel,
    "decision_tree": DecisionTreeModel,
    "random_forest": RandomForestModel,
    "gbdt": GradientBoostedTreesModel,
    "mlp": MlpModel,
    "ensemble": EnsembleModel,
}

# Kinds whose fit() accepts a seed (the rest are deterministic anyway).
_SEEDED = {"random_forest", "gbdt", "mlp", "ensemble"}


def fit_model(
    kind: str,
    X: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str],
    params: Optional[dict] = None,
    seed: int = 0,
) -> ScoringModel:
    """Train a model by kind name. Unknown kinds list the valid ones."""
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}; valid kinds: {sorted(MODEL_KINDS)}")
    kwargs = dict(params or {})
    if kind in _SEEDED:
        kwargs.setdefault("seed", seed)
    return MODEL_KINDS[kind].fit(X, y, feature_names, **kwargs)


def model_from_dict(raw: dict) -> ScoringModel:
    if raw.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a model document (format={raw.get('format')!r})")
    if raw.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model document version {raw.get('version')!r}")
    kind = raw.get("kind")
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}; valid kinds: {sorted(MODEL_KINDS)}")
    return MODEL_KINDS[kind]._from_state(raw["feature_names"], raw["state"])


def save_model(model: ScoringModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model.to_dict(), fh, sort_keys=True, separators=(",", ":"))


def load_model(path) -> ScoringModel:
    with open(path) as fh:
        return model_from_dict(json.load(fh))
