"""Regularized logistic regression trained by (proximal) gradient descent.

L2 uses plain gradient steps on the smooth objective; L1 uses ISTA:
a gradient step on the smooth part followed by soft-thresholding of the
coefficients. The step size comes from a power-iteration bound on the
curvature, so training is deterministic with no line search.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .base import ScoringModel, StandardScaler, validate_training_data

PENALTIES = ("l1", "l2")


def class_balance_weights(y: np.ndarray) -> np.ndarray:
    """Per-row weights n / (2 * n_class); mean weight is exactly 1."""
    n = len(y)
    counts = np.bincount(y, minlength=2)
    if counts.min() == 0:
        raise ValueError("balanced class weights need both classes present")
    return n / (2.0 * counts[y])


def nll_loss_and_grad(
    w: np.ndarray,
    b: float,
    X: np.ndarray,
    y: np.ndarray,
    sample_weight: Optional[np.ndarray] = None,
    l2: float = 0.0,
) -> tuple[float, np.ndarray, float]:
    """Smooth objective: weighted mean log-loss plus (l2/2)*||w||^2.

    Returns (loss, grad_w, grad_b). The intercept is never penalized.
    """
    n = X.shape[0]
    omega = np.ones(n) if sample_weight is None else sample_weight
    z = X @ w + b
    # log(1 + exp(-s z)) with s = +-1, stable for large |z|
    s = 2.0 * y - 1.0
    losses = np.logaddexp(0.0, -s * z)
    loss = float(omega @ losses) / n + 0.5 * l2 * float(w @ w)
    p = _sigmoid(z)
    resid = omega * (p - y)
    grad_w = X.T @ resid / n + l2 * w
    grad_b = float(resid.sum()) / n
    return loss, grad_w, grad_b


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _curvature_bound(X: np.ndarray, omega: np.ndarray) -> float:
    # lambda_max of [X 1]^T diag(omega) [X 1] / n via power iteration;
    # 0.25 * that bounds the logistic Hessian.
    n = X.shape[0]
    Xa = np.hstack([X, np.ones((n, 1))])
    v = np.ones(Xa.shape[1]) / np.sqrt(Xa.shape[1])
    lam = 1.0
    for _ in range(40):
        u = Xa.T @ (omega * (Xa @ v)) / n
        norm = float(np.linalg.norm(u))
        if norm == 0.0:
            return 1.0
        lam, v = norm, u / norm
    return lam


class LogisticRegressionModel(ScoringModel):
    kind = "logistic_regression"

    def __init__(self, feature_names, scaler: StandardScaler, coef, intercept, params: dict):
        super().__init__(feature_names)
        self.scaler = scaler
        self.coef = np.asarray(coef, dtype=np.float64)
        self.intercept = float(intercept)
        self.params = params

    @classmethod
    def fit(
        cls,
        X,
        y,
        feature_names,
        penalty: str = "l2",
        C: float = 0.5,
        class_weight: Optional[str] = None,
        max_iter: int = 100,
    ) -> "LogisticRegressionModel":
        if penalty not in PENALTIES:
            raise ValueError(f"penalty must be one of {PENALTIES}, got {penalty!r}")
        if C <= 0:
            raise ValueError(f"C must be > 0, got {C}")
        if class_weight not in (None, "balanced"):
            raise ValueError(f"class_weight must be None or 'balanced', got {class_weight!r}")
        if max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {max_iter}")
        X, y = validate_training_data(X, y)
        scaler = StandardScaler.fit(X)
        Xs = scaler.transform(X)
        n, d = Xs.shape
        omega = class_balance_weights(y) if class_weight == "balanced" else np.ones(n)
        reg = 1.0 / (C * n)

        step = 1.0 / (0.25 * _curvature_bound(Xs, omega) + reg)
        w = np.zeros(d)
        b = 0.0
        for _ in range(max_iter):
            if penalty == "l2":
                loss, gw, gb = nll_loss_and_grad(w, b, Xs, y, omega, l2=reg)
                w = w - step * gw
            else:
                loss, gw, gb = nll_loss_and_grad(w, b, Xs, y, omega, l2=0.0)
                w = w - step * gw
                w = np.sign(w) * np.maximum(np.abs(w) - step * reg, 0.0)
            b = b - step * gb
            if not np.isfinite(loss):
                raise RuntimeError(
                    f"logistic regression diverged: loss={loss}, "
                    f"|w|={np.abs(w).max():.3g}, step={step:.3g}"
                )
        params = {"penalty": penalty, "C": C, "class_weight": class_weight, "max_iter": max_iter}
        return cls(feature_names, scaler, w, b, params)

    def _proba(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self.scaler.transform(X) @ self.coef + self.intercept)

    def _state_dict(self) -> dict:
        return {
            "scaler": self.scaler.to_dict(),
            "coef": self.coef.tolist(),
            "intercept": self.intercept,
            "params": self.params,
        }

    @classmethod
    def _from_state(cls, feature_names: Sequence[str], state: dict) -> "LogisticRegressionModel":
        return cls(
            feature_names,
            StandardScaler.from_dict(state["scaler"]),
            state["coef"],
            state["intercept"],
            state["params"],
        )


def fit_logistic_regression(X, y, feature_names, **params) -> LogisticRegressionModel:
    return LogisticRegressionModel.fit(X, y, feature_names, **params)
