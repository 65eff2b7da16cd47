"""Cross-validated grid search over per-model hyperparameter grids."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = ["default_grids", "grid_points", "grid_search", "GridSearchResult"]


def default_grids() -> dict[str, dict[str, list]]:
    """Candidate values per model kind; first entries are the defaults.

    Kinds without tunable hyperparameters get an empty grid.
    """
    return {
        "naive_bayes": {},
        "logistic_regression": {
            "penalty": ["l2", "l1"],
            "C": [0.5, 1, 5, 10, 20, 50],
            "class_weight": [None, "balanced"],
            "max_iter": [100, 50, 10],
        },
        "knn": {"n_neighbors": list(range(29, 100))},
        "decision_tree": {"max_depth": [3, 7, 15]},
        "random_forest": {"max_depth": [15, 7], "n_estimators": [100]},
        "gbdt": {
            "subsample": [1.0, 0.7],
            "colsample": [0.7, 1.0],
            "l1_reg": [1.0, 10.0],
            "max_depth": [15, 7, 3],
        },
        "mlp": {"class_weight_late": [3, 1.6, 2, 4]},
    }


def grid_points(grid: dict[str, Sequence]) -> list[dict]:
    """Cartesian product in declaration order; empty grid -> [{}]."""
    if not grid:
        return [{}]
    for name, values in grid.items():
        if not values:
            raise ValueError(f"grid entry {name!r} has no candidate values")
    names = list(grid)
    return [dict(zip(names, combo)) for combo in itertools.product(*grid.values())]


def _accuracy_at_half(probs: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean((probs >= 0.5).astype(np.int64) == y))


@dataclass(frozen=True)
class GridSearchResult:
    best_params: dict
    best_score: float
    # One record per (grid point, fold): params, fold index, metric value.
    table: tuple[dict, ...]

    def mean_scores(self) -> list[tuple[dict, float]]:
        out = []
        seen: dict[str, list[float]] = {}
        order: dict[str, dict] = {}
        for rec in self.table:
            key = repr(sorted(rec["params"].items()))
            seen.setdefault(key, []).append(rec["metric"])
            order.setdefault(key, rec["params"])
        for key, params in order.items():
            vals = seen[key]
            out.append((params, sum(vals) / len(vals)))
        return out


def grid_search(
    model_kind: str,
    X: np.ndarray,
    y: np.ndarray,
    folds,
    grid: Optional[dict[str, Sequence]] = None,
    metric: Callable[[np.ndarray, np.ndarray], float] = _accuracy_at_half,
    seed: int = 0,
    feature_names: Optional[Sequence[str]] = None,
) -> GridSearchResult:
    """Evaluate every grid point on every fold, pick the best mean metric.

    Ties break toward the earlier point in grid enumeration order.
    ``folds`` must be chronological CV folds whose indices refer to rows
    of X/y.
    """
    from . import fit_model  # local import, avoids a package-level cycle

    if grid is None:
        grid = default_grids().get(model_kind, {})
    points = grid_points(grid)
    names = feature_names if feature_names is not None else [f"f{i}" for i in range(X.shape[1])]

    table = []
    best_params, best_score = None, -np.inf
    for params in points:
        fold_scores = []
        for fold_i, (train_idx, val_idx) in enumerate(folds.folds):
            tr = np.asarray(train_idx, dtype=np.int64)
            va = np.asarray(val_idx, dtype=np.int64)
            model = fit_model(model_kind, X[tr], y[tr], names, params=params, seed=seed)
            score = float(metric(model.predict_proba(X[va]), y[va]))
            fold_scores.append(score)
            table.append({"params": dict(params), "fold": fold_i, "metric": score})
        mean = sum(fold_scores) / len(fold_scores)
        if mean > best_score:
            best_params, best_score = dict(params), mean
    return GridSearchResult(best_params=best_params, best_score=float(best_score), table=tuple(table))
