"""SVG figure rendering for pipeline reports.

Everything draws through the Agg backend and strips volatile SVG
metadata, so rendering works headless and reruns produce identical
bytes. Numbers behind every figure are also emitted as CSV by the CLI;
the figures exist for humans.
"""
from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

plt.rcParams["svg.hashsalt"] = "arcollect"

_COLORS = plt.rcParams["axes.prop_cycle"].by_key()["color"]

__all__ = [
    "plot_window_sweep",
    "plot_accuracy_per_month",
    "plot_roc_curves",
    "plot_savings_boxplots",
]


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_window_sweep(
    w_values: Sequence[int], accuracy: Mapping[str, Sequence[float]], path
) -> None:
    """Accuracy per model across history-window sizes."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for i, (kind, values) in enumerate(sorted(accuracy.items())):
        ax.plot(w_values, values, marker="o", label=kind, color=_COLORS[i % len(_COLORS)])
    ax.set_xlabel("window size (months)")
    ax.set_ylabel("test accuracy")
    ax.set_xticks(list(w_values))
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def plot_accuracy_per_month(
    per_month: Mapping[str, Mapping[str, float]], baseline: float, path
) -> None:
    """Per-month test accuracy lines, one per model, with the baseline."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    months = sorted({m for series in per_month.values() for m in series})
    for i, (kind, series) in enumerate(sorted(per_month.items())):
        ys = [series.get(m) for m in months]
        ax.plot(months, ys, marker="o", label=kind, color=_COLORS[i % len(_COLORS)])
    ax.axhline(baseline, color="gray", linestyle="--", linewidth=1, label="baseline")
    ax.set_xlabel("month")
    ax.set_ylabel("accuracy")
    ax.tick_params(axis="x", rotation=45)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def plot_roc_curves(roc: Mapping[str, dict], path) -> None:
    """ROC per model; legend carries the AUC values."""
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    for i, (kind, curve) in enumerate(sorted(roc.items())):
        xs = [p[0] for p in curve["points"]]
        ys = [p[1] for p in curve["points"]]
        ax.plot(xs, ys, label=f"{kind} (AUC {curve['auc']:.3f})", color=_COLORS[i % len(_COLORS)])
    ax.plot([0, 1], [0, 1], color="gray", linestyle="--", linewidth=1)
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.legend(fontsize=8, loc="lower right")
    fig.tight_layout()
    _save(fig, path)


def plot_savings_boxplots(
    months: Sequence[str],
    n_calls: Sequence[int],
    p_grid: Sequence[float],
    diffs: Mapping[tuple[str, int, int], Sequence[float]],
    path,
) -> None:
    """Savings-difference box plots: one row per month, one column per n."""
    nrows, ncols = len(months), len(n_calls)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.2 * ncols, 2.6 * nrows), squeeze=False,
        sharey="row",
    )
    for r, month in enumerate(months):
        for c, n in enumerate(n_calls):
            ax = axes[r][c]
            data = [list(diffs[(month, n, p_idx)]) for p_idx in range(len(p_grid))]
            ax.boxplot(data, tick_labels=[f"{p:g}" for p in p_grid], flierprops={"markersize": 2})
            ax.axhline(0.0, color="gray", linewidth=0.8)
            if r == 0:
                ax.set_title(f"n = {n}", fontsize=9)
            if c == 0:
                ax.set_ylabel(f"{month}\nsavings diff (USD)", fontsize=8)
            if r == nrows - 1:
                ax.set_xlabel("contact success probability p", fontsize=8)
            ax.tick_params(labelsize=7)
    fig.tight_layout()
    _save(fig, path)
