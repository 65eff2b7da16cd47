"""Chronological train/test partitioning and time-ordered CV folds.

Random shuffling would mix future invoices into training data, so every
partition here is by invoice creation date, with invoice_id breaking
date ties deterministically.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence, TypeVar

__all__ = ["SplitSpec", "CvFolds", "time_split", "time_series_folds"]


class DatedRow(Protocol):
    creation_date: dt.date
    invoice_id: str


R = TypeVar("R", bound=DatedRow)


@dataclass(frozen=True)
class SplitSpec:
    """Either an explicit cutoff date or a train fraction, never both."""

    cutoff_date: Optional[dt.date] = None
    train_fraction: Optional[float] = None

    def __post_init__(self) -> None:
        if (self.cutoff_date is None) == (self.train_fraction is None):
            raise ValueError("set exactly one of cutoff_date / train_fraction")
        if self.train_fraction is not None and not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


@dataclass(frozen=True)
class CvFolds:
    """Expanding-window folds: (train_indices, validation_indices) pairs.

    Indices refer to the row list the folds were built from. Within every
    fold all training rows are strictly older than all validation rows.
    """

    k: int
    folds: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"fold count must be >= 2, got {self.k}")
        if len(self.folds) != self.k:
            raise ValueError("fold list does not match k")


def _chronological(rows: Sequence[R]) -> list[int]:
    return sorted(range(len(rows)), key=lambda i: (rows[i].creation_date, rows[i].invoice_id))


def time_split(rows: Sequence[R], spec: SplitSpec) -> tuple[list[R], list[R]]:
    """Partition rows so training strictly precedes testing in time.

    Cutoff mode: train = creation_date < cutoff. Fraction mode: the
    chronologically first round(fraction * n) rows train; a date tie at
    the boundary is split by invoice_id.
    """
    if not rows:
        raise ValueError("cannot split an empty row list")
    order = _chronological(rows)
    if spec.cutoff_date is not None:
        lo = rows[order[0]].creation_date
        hi = rows[order[-1]].creation_date
        if not lo < spec.cutoff_date <= hi:
            raise ValueError(
                f"cutoff {spec.cutoff_date} outside data range ({lo} .. {hi}]; "
                "both sides of the split must be nonempty"
            )
        train = [rows[i] for i in order if rows[i].creation_date < spec.cutoff_date]
        test = [rows[i] for i in order if rows[i].creation_date >= spec.cutoff_date]
    else:
        n_train = round(spec.train_fraction * len(rows))
        n_train = min(max(n_train, 1), len(rows) - 1)
        train = [rows[i] for i in order[:n_train]]
        test = [rows[i] for i in order[n_train:]]
    return train, test


def time_series_folds(train_rows: Sequence[R], k: int) -> CvFolds:
    """Expanding-window folds over k+1 chronological blocks.

    Fold i trains on blocks 1..i and validates on block i+1. Block
    boundaries are nudged forward so a run of equal creation dates is
    never split, keeping max(train date) < min(validation date) exact.
    """
    n = len(train_rows)
    if k < 2:
        raise ValueError(f"fold count must be >= 2, got {k}")
    if n < 2 * k:
        raise ValueError(f"need at least {2 * k} rows for {k} folds, got {n}")
    order = _chronological(train_rows)
    dates = [train_rows[i].creation_date for i in order]

    cuts = []
    for j in range(1, k + 1):
        cut = round(n * j / (k + 1))
        while 0 < cut < n and dates[cut - 1] == dates[cut]:
            cut += 1
        cuts.append(cut)
    cuts.append(n)
    if any(b <= a for a, b in zip(cuts, cuts[1:])) or cuts[0] == 0:
        raise ValueError("too few distinct creation dates to form chronological folds")

    folds = []
    for i in range(k):
        train_idx = tuple(order[: cuts[i]])
        val_idx = tuple(order[cuts[i]: cuts[i + 1]])
        folds.append((train_idx, val_idx))
    return CvFolds(k=k, folds=tuple(folds))
