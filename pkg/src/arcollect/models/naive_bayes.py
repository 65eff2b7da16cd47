"""Gaussian naive Bayes with log-space posterior arithmetic."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .base import ScoringModel, validate_training_data

VAR_FLOOR = 1e-9


class GaussianNaiveBayes(ScoringModel):
    kind = "naive_bayes"

    def __init__(self, feature_names, theta, var, log_prior):
        super().__init__(feature_names)
        self.theta = np.asarray(theta, dtype=np.float64)      # (2, d) class means
        self.var = np.asarray(var, dtype=np.float64)          # (2, d) class variances
        self.log_prior = np.asarray(log_prior, dtype=np.float64)

    @classmethod
    def fit(cls, X, y, feature_names) -> "GaussianNaiveBayes":
        X, y = validate_training_data(X, y)
        if len(np.unique(y)) < 2:
            raise ValueError("naive Bayes needs training rows from both classes")
        theta = np.stack([X[y == c].mean(axis=0) for c in (0, 1)])
        var = np.stack([X[y == c].var(axis=0) for c in (0, 1)])
        var = np.maximum(var, VAR_FLOOR)
        prior = np.array([(y == c).mean() for c in (0, 1)])
        return cls(feature_names, theta, var, np.log(prior))

    def class_log_posterior(self, X: np.ndarray) -> np.ndarray:
        """Normalized log P(class | x), shape (n, 2)."""
        X = np.asarray(X, dtype=np.float64)
        joint = np.empty((X.shape[0], 2))
        for c in (0, 1):
            ll = -0.5 * np.log(2.0 * np.pi * self.var[c]) \
                 - (X - self.theta[c]) ** 2 / (2.0 * self.var[c])
            joint[:, c] = self.log_prior[c] + ll.sum(axis=1)
        norm = np.logaddexp(joint[:, 0], joint[:, 1])
        return joint - norm[:, None]

    def _proba(self, X: np.ndarray) -> np.ndarray:
        return np.exp(self.class_log_posterior(X)[:, 1])

    def _state_dict(self) -> dict:
        return {
            "theta": self.theta.tolist(),
            "var": self.var.tolist(),
            "log_prior": self.log_prior.tolist(),
        }

    @classmethod
    def _from_state(cls, feature_names: Sequence[str], state: dict) -> "GaussianNaiveBayes":
        return cls(feature_names, state["theta"], state["var"], state["log_prior"])


def fit_naive_bayes(X, y, feature_names) -> GaussianNaiveBayes:
    return GaussianNaiveBayes.fit(X, y, feature_names)
