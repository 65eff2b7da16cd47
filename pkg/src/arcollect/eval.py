"""Metrics and the three evaluation experiments.

Covers threshold accuracy, ROC/AUC with tie grouping, per-month
accuracy, the window-size sweep, and the region-robustness study that
contrasts one combined model with per-region models.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .dates import months_between
from .domain import COUNTRY_REGION, GRACE_DAYS_DEFAULT, Invoice, Snapshot
from .features import (
    FeatureVector,
    WindowSize,
    design_matrix,
    featurize_portfolio,
    fit_imputation,
    impute,
    label_vector,
)
from .models import fit_model
from .splits import SplitSpec, time_split

__all__ = [
    "accuracy",
    "baseline_share",
    "RocCurve",
    "roc_auc",
    "accuracy_by_month",
    "spearman_rho",
    "EvalReport",
    "build_eval_report",
    "RegionRobustnessTable",
    "region_robustness",
    "SweepResult",
    "window_sweep",
]


def _check_pair(preds, labels) -> tuple[np.ndarray, np.ndarray]:
    preds = np.asarray(preds, dtype=np.float64)
    labels = np.asarray(labels)
    if preds.shape != labels.shape or preds.ndim != 1:
        raise ValueError(f"shape mismatch: preds {preds.shape} vs labels {labels.shape}")
    if len(preds) == 0:
        raise ValueError("empty prediction set")
    return preds, labels.astype(np.int64)


def accuracy(preds, labels, threshold: float = 0.5) -> float:
    """Share of thresholded probabilities matching the labels."""
    preds, labels = _check_pair(preds, labels)
    return float(np.mean((preds >= threshold).astype(np.int64) == labels))


def baseline_share(labels) -> float:
    """Accuracy of always predicting the majority class."""
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) == 0:
        raise ValueError("empty label set")
    late = float(labels.mean())
    return max(late, 1.0 - late)


@dataclass(frozen=True)
class RocCurve:
    """Threshold-sweep curve from (0,0) to (1,1), plus trapezoid AUC."""

    points: tuple[tuple[float, float], ...]
    auc: float

    def __post_init__(self) -> None:
        fprs = [p[0] for p in self.points]
        tprs = [p[1] for p in self.points]
        if self.points[0] != (0.0, 0.0) or self.points[-1] != (1.0, 1.0):
            raise ValueError("ROC curve must start at (0,0) and end at (1,1)")
        if any(b < a for a, b in zip(fprs, fprs[1:])) or any(
            b < a for a, b in zip(tprs, tprs[1:])
        ):
            raise ValueError("ROC curve must be monotone in both coordinates")

    def to_dict(self) -> dict:
        return {"points": [list(p) for p in self.points], "auc": self.auc}


def roc_auc(scores, labels) -> RocCurve:
    """ROC by descending-score sweep with tie grouping; AUC by trapezoid."""
    scores, labels = _check_pair(scores, labels)
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs both classes present")
    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    y = labels[order]
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < len(s):
        j = i
        while j < len(s) and s[j] == s[i]:  # one point per distinct score
            tp += int(y[j])
            fp += 1 - int(y[j])
            j += 1
        points.append((fp / n_neg, tp / n_pos))
        i = j
    auc = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        auc += (x1 - x0) * (y0 + y1) / 2.0
    return RocCurve(points=tuple(points), auc=float(auc))


def accuracy_by_month(preds, labels, months: Sequence[str]) -> dict[str, float]:
    """Per-month accuracy; months with no rows simply do not appear."""
    preds, labels = _check_pair(preds, labels)
    if len(months) != len(preds):
        raise ValueError("months must align with rows")
    out: dict[str, float] = {}
    keys = np.asarray(months)
    for key in sorted(set(months)):
        mask = keys == key
        out[key] = accuracy(preds[mask], labels[mask])
    return out


def spearman_rho(x, y) -> float:
    """Rank correlation (average ranks for ties)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise ValueError("need two equal-length 1-D arrays with >= 2 entries")

    def ranks(v: np.ndarray) -> np.ndarray:
        order = np.argsort(v, kind="stable")
        r = np.empty(len(v))
        sv = v[order]
        i = 0
        while i < len(v):
            j = i
            while j < len(v) and sv[j] == sv[i]:
                j += 1
            r[order[i:j]] = (i + j - 1) / 2.0
            i = j
        return r

    rx, ry = ranks(x), ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    denom = math.sqrt(float(rx @ rx) * float(ry @ ry))
    if denom == 0.0:
        return 0.0
    return float(rx @ ry) / denom


@dataclass(frozen=True)
class EvalReport:
    """Test-set report: accuracies, baseline, ROC per model kind."""

    baseline: float
    accuracy: dict[str, float]
    per_month: dict[str, dict[str, float]]
    per_region: dict[str, dict[str, float]]
    roc: dict[str, RocCurve]

    def to_dict(self) -> dict:
        return {
            "baseline": self.baseline,
            "accuracy": self.accuracy,
            "per_month": self.per_month,
            "per_region": self.per_region,
            "roc": {k: v.to_dict() for k, v in self.roc.items()},
        }


def build_eval_report(
    probs_by_kind: dict[str, np.ndarray],
    labels: np.ndarray,
    months: Sequence[str],
    countries: Sequence[str],
) -> EvalReport:
    regions = [COUNTRY_REGION[c] for c in countries]
    per_month = {}
    per_region = {}
    acc = {}
    roc = {}
    for kind, probs in probs_by_kind.items():
        acc[kind] = accuracy(probs, labels)
        per_month[kind] = accuracy_by_month(probs, labels, months)
        per_region[kind] = accuracy_by_month(probs, labels, regions)
        roc[kind] = roc_auc(probs, labels)
    return EvalReport(
        baseline=baseline_share(labels),
        accuracy=acc,
        per_month=per_month,
        per_region=per_region,
        roc=roc,
    )


def _fit_and_score(train_rows, test_sets, model_kind, params, countries, seed):
    """Fit on train_rows (own imputation) and score each labeled test set."""
    stats = fit_imputation(train_rows)
    tr = [impute(r, stats) for r in train_rows]
    X, columns = design_matrix(tr, countries)
    model = fit_model(model_kind, X, label_vector(tr), columns, params=params, seed=seed)
    scores = []
    for rows in test_sets:
        if not rows:
            scores.append(None)
            continue
        te = [impute(r, stats) for r in rows]
        Xt, _ = design_matrix(te, countries)
        scores.append(accuracy(model.predict_proba(Xt), label_vector(te)))
    return scores


@dataclass(frozen=True)
class RegionRobustnessTable:
    """Accuracy of combined vs region-only training.

    ``None`` cells are the dashes: region-only models are never scored
    on the other region, and their general column equals their own
    region's accuracy.
    """

    rows: tuple[dict, ...]

    def to_rows(self) -> list[list[str]]:
        out = [["train_regions", "na_accuracy", "la_accuracy", "general_accuracy"]]
        for row in self.rows:
            out.append(
                [row["train_regions"]]
                + [
                    "-" if row[k] is None else f"{row[k]:.4f}"
                    for k in ("na_accuracy", "la_accuracy", "general_accuracy")
                ]
            )
        return out


def region_robustness(
    train_rows: Sequence[FeatureVector],
    test_rows: Sequence[FeatureVector],
    model_kind: str = "gbdt",
    params: Optional[dict] = None,
    countries: Sequence[str] = tuple(sorted(COUNTRY_REGION)),
    seed: int = 0,
) -> RegionRobustnessTable:
    """Train combined/NA-only/LA-only models, score per-region test sets."""

    def by_region(rows, region):
        return [r for r in rows if COUNTRY_REGION[r.country] == region]

    na_train, la_train = by_region(train_rows, "NA"), by_region(train_rows, "LA")
    na_test, la_test = by_region(test_rows, "NA"), by_region(test_rows, "LA")
    if not (na_train and la_train and na_test and la_test):
        raise ValueError("region robustness needs both regions in train and test")

    both = _fit_and_score(
        list(train_rows), [na_test, la_test, list(test_rows)], model_kind, params, countries, seed
    )
    na_only = _fit_and_score(na_train, [na_test], model_kind, params, countries, seed)
    la_only = _fit_and_score(la_train, [la_test], model_kind, params, countries, seed)

    rows = (
        {
            "train_regions": "NA+LA",
            "na_accuracy": both[0],
            "la_accuracy": both[1],
            "general_accuracy": both[2],
        },
        {
            "train_regions": "NA",
            "na_accuracy": na_only[0],
            "la_accuracy": None,
            "general_accuracy": na_only[0],
        },
        {
            "train_regions": "LA",
            "na_accuracy": None,
            "la_accuracy": la_only[0],
            "general_accuracy": la_only[0],
        },
    )
    return RegionRobustnessTable(rows=rows)


@dataclass(frozen=True)
class SweepResult:
    """Accuracy per model kind over the window-size range."""

    w_values: tuple[int, ...]
    accuracy: dict[str, tuple[float, ...]]
    best_w: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "w_values": list(self.w_values),
            "accuracy": {k: list(v) for k, v in self.accuracy.items()},
            "best_w": self.best_w,
        }


def window_sweep(
    invoices: Sequence[Invoice],
    snapshot: Snapshot,
    model_kinds: Sequence[str],
    split_spec: SplitSpec,
    w_values: Sequence[int] = tuple(range(3, 13)),
    params_by_kind: Optional[dict[str, dict]] = None,
    countries: Sequence[str] = tuple(sorted(COUNTRY_REGION)),
    grace_days: int = GRACE_DAYS_DEFAULT,
    seed: int = 0,
) -> SweepResult:
    """Refeaturize per window size, train each kind, report test accuracy."""
    dates = [inv.creation_date for inv in invoices]
    span = months_between(min(dates), max(dates))
    if span < max(w_values) + 1:
        raise ValueError(
            f"data spans {span} months; the sweep needs at least {max(w_values) + 1}"
        )
    params_by_kind = params_by_kind or {}
    acc: dict[str, list[float]] = {kind: [] for kind in model_kinds}
    for w in w_values:
        rows = featurize_portfolio(invoices, snapshot, WindowSize(w), grace_days)
        labeled = [r for r in rows if r.label is not None]
        train, test = time_split(labeled, split_spec)
        stats = fit_imputation(train)
        tr = [impute(r, stats) for r in train]
        te = [impute(r, stats) for r in test]
        X_tr, columns = design_matrix(tr, countries)
        X_te, _ = design_matrix(te, countries)
        y_tr, y_te = label_vector(tr), label_vector(te)
        for kind in model_kinds:
            model = fit_model(kind, X_tr, y_tr, columns, params=params_by_kind.get(kind), seed=seed)
            acc[kind].append(accuracy(model.predict_proba(X_te), y_te))
    best = {
        kind: int(w_values[int(np.argmax(values))]) for kind, values in acc.items()
    }
    return SweepResult(
        w_values=tuple(int(w) for w in w_values),
        accuracy={k: tuple(v) for k, v in acc.items()},
        best_w=best,
    )
