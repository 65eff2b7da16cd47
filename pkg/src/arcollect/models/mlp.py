"""Fully-connected net with rectified-linear hidden layers.

Single-logit output trained on class-weighted cross-entropy by
mini-batch gradient descent. The late class carries a configurable
weight (default 3) to counter imbalance. Forward/backward passes are
plain numpy; ``loss_and_grads`` is exposed so the analytic gradients
can be checked against finite differences.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .base import ScoringModel, StandardScaler, validate_training_data

__all__ = ["MlpModel", "fit_mlp", "init_layers", "loss_and_grads", "forward_logits"]

DEFAULT_HIDDEN = (64, 32, 16, 8)  # four hidden layers


def init_layers(
    n_inputs: int, hidden_sizes: Sequence[int], rng: np.random.Generator
) -> list[tuple[np.ndarray, np.ndarray]]:
    """He-initialized (weights, bias) per layer; final layer is 1 logit."""
    sizes = [n_inputs, *hidden_sizes, 1]
    layers = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        W = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out))
        layers.append((W, np.zeros(fan_out)))
    return layers


def forward_logits(layers, X: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Logits plus per-layer activations (inputs to each layer)."""
    acts = [X]
    a = X
    for i, (W, b) in enumerate(layers):
        z = a @ W + b
        a = np.maximum(z, 0.0) if i < len(layers) - 1 else z
        acts.append(a)
    return a[:, 0], acts


def loss_and_grads(layers, X: np.ndarray, y: np.ndarray, late_weight: float):
    """Weighted cross-entropy and gradients for every weight and bias.

    loss = mean_i omega_i * (log(1 + e^{z_i}) - y_i z_i),
    omega_i = late_weight when y_i = 1 else 1.
    """
    n = X.shape[0]
    z, acts = forward_logits(layers, X)
    omega = np.where(y == 1, late_weight, 1.0)
    loss = float(np.mean(omega * (np.logaddexp(0.0, z) - y * z)))
    p = np.where(z >= 0, 1.0 / (1.0 + np.exp(-np.abs(z))),
                 np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))))
    delta = (omega * (p - y) / n)[:, None]
    grads = [None] * len(layers)
    for i in range(len(layers) - 1, -1, -1):
        W, _ = layers[i]
        grads[i] = (acts[i].T @ delta, delta.sum(axis=0))
        if i > 0:
            delta = (delta @ W.T) * (acts[i] > 0.0)
    return loss, grads


class MlpModel(ScoringModel):
    kind = "mlp"

    def __init__(self, feature_names, scaler: StandardScaler, layers, params: dict):
        super().__init__(feature_names)
        self.scaler = scaler
        self.layers = layers
        self.params = params

    @classmethod
    def fit(
        cls,
        X,
        y,
        feature_names,
        hidden_sizes: Sequence[int] = DEFAULT_HIDDEN,
        epochs: int = 30,
        batch_size: int = 64,
        learning_rate: float = 0.05,
        class_weight_late: float = 3.0,
        seed: int = 0,
    ) -> "MlpModel":
        if epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {epochs}")
        if class_weight_late <= 0:
            raise ValueError(f"class_weight_late must be > 0, got {class_weight_late}")
        X, y = validate_training_data(X, y)
        scaler = StandardScaler.fit(X)
        Xs = scaler.transform(X)
        rng = np.random.default_rng(seed)
        layers = init_layers(Xs.shape[1], hidden_sizes, rng)
        n = Xs.shape[0]
        for _ in range(epochs):
            order = rng.permutation(n)
            for start in range(0, n, batch_size):
                batch = order[start: start + batch_size]
                loss, grads = loss_and_grads(layers, Xs[batch], y[batch], class_weight_late)
                if not np.isfinite(loss):
                    raise RuntimeError(f"MLP training diverged: loss={loss}")
                layers = [
                    (W - learning_rate * gW, b - learning_rate * gb)
                    for (W, b), (gW, gb) in zip(layers, grads)
                ]
        params = {
            "hidden_sizes": list(hidden_sizes),
            "epochs": epochs,
            "batch_size": batch_size,
            "learning_rate": learning_rate,
            "class_weight_late": class_weight_late,
            "seed": seed,
        }
        return cls(feature_names, scaler, layers, params)

    def _proba(self, X: np.ndarray) -> np.ndarray:
        z, _ = forward_logits(self.layers, self.scaler.transform(X))
        return np.where(z >= 0, 1.0 / (1.0 + np.exp(-np.abs(z))),
                        np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))))

    def _state_dict(self) -> dict:
        return {
            "scaler": self.scaler.to_dict(),
            "layers": [{"W": W.tolist(), "b": b.tolist()} for W, b in self.layers],
            "params": self.params,
        }

    @classmethod
    def _from_state(cls, feature_names: Sequence[str], state: dict) -> "MlpModel":
        layers = [(np.array(l["W"]), np.array(l["b"])) for l in state["layers"]]
        return cls(feature_names, StandardScaler.from_dict(state["scaler"]), layers, state["params"])


def fit_mlp(X, y, feature_names, **params) -> MlpModel:
    return MlpModel.fit(X, y, feature_names, **params)
