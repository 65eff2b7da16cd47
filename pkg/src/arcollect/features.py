"""Windowed history features for invoices.

For every invoice, the customer's invoices created inside the trailing
window (``w`` calendar months before the invoice's creation date) are
split into a paid pool (settled strictly before the reference date) and
an outstanding pool (everything else). Counts, sums, day statistics,
recency lags, and a payment-frequency count are computed from those
pools; settlement information dated on or after the reference date is
never used, so the features are leakage-free by construction.

Statistics over empty pools are MISSING (``None``) until imputation,
which replaces them with training means.
"""
from __future__ import annotations

import bisect
import csv
import dataclasses
import datetime as dt
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dates import add_months, month_key
from .domain import (
    GRACE_DAYS_DEFAULT,
    KNOWN_COUNTRIES,
    Invoice,
    PaymentClass,
    Snapshot,
    label_invoice,
)

__all__ = [
    "WindowSize",
    "FeatureVector",
    "ImputationStats",
    "MISSING_CAPABLE",
    "NUMERIC_COLUMNS",
    "compute_features",
    "featurize_portfolio",
    "fit_imputation",
    "impute",
    "design_matrix",
    "label_vector",
    "write_features_csv",
    "read_features_csv",
]

W_MIN, W_MAX = 3, 12


@dataclass(frozen=True, slots=True)
class WindowSize:
    """History window in months; the sweep range is 3..12."""

    months: int

    def __post_init__(self) -> None:
        if not W_MIN <= self.months <= W_MAX:
            raise ValueError(f"window must be in [{W_MIN}, {W_MAX}] months, got {self.months}")


@dataclass(frozen=True, slots=True)
class FeatureVector:
    """Invoice-level fields plus windowed history aggregates.

    The four day-statistics are None when their pool is empty; every
    other field is always defined. Lags take values 1 (settled before
    the reference date), 0 (not settled), -1 (no such prior invoice).
    """

    invoice_id: str
    customer_id: str
    country: str
    creation_date: dt.date
    label: Optional[PaymentClass]
    base_amount: float
    days_to_due: int
    paid_lag_1: int
    paid_lag_2: int
    paid_lag_3: int
    total_paid_invoices: int
    sum_amount_paid_invoices: float
    total_invoices_late: int
    sum_amount_late_invoices: float
    total_outstanding_invoices: int
    total_outstanding_late: int
    sum_total_outstanding: float
    sum_late_outstanding: float
    average_days_late: Optional[float]
    average_days_outstanding_late: Optional[float]
    std_dev_invoices_late: Optional[float]
    std_dev_outstanding_late: Optional[float]
    payment_frequency_difference: int

    @property
    def creation_month(self) -> str:
        return month_key(self.creation_date)

    def country_onehot(self, countries: Sequence[str] = KNOWN_COUNTRIES) -> list[int]:
        return [1 if c == self.country else 0 for c in countries]


# Day-statistic features that can be MISSING before imputation.
MISSING_CAPABLE = (
    "average_days_late",
    "average_days_outstanding_late",
    "std_dev_invoices_late",
    "std_dev_outstanding_late",
)

# Model-input column order (one-hot country columns are appended by
# design_matrix). creation_month stays metadata: it drives splits and
# per-month reports, not predictions.
NUMERIC_COLUMNS = (
    "base_amount",
    "days_to_due",
    "paid_lag_1",
    "paid_lag_2",
    "paid_lag_3",
    "total_paid_invoices",
    "sum_amount_paid_invoices",
    "total_invoices_late",
    "sum_amount_late_invoices",
    "total_outstanding_invoices",
    "total_outstanding_late",
    "sum_total_outstanding",
    "sum_late_outstanding",
    "average_days_late",
    "average_days_outstanding_late",
    "std_dev_invoices_late",
    "std_dev_outstanding_late",
    "payment_frequency_difference",
)


def _mean_std(values: list[float]) -> tuple[Optional[float], Optional[float]]:
    # Population standard deviation: defined (0.0) for singleton pools.
    if not values:
        return None, None
    mean = math.fsum(values) / len(values)
    var = math.fsum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(var)


def compute_features(
    inv: Invoice,
    history: Sequence[Invoice],
    window: WindowSize,
    grace_days: int = GRACE_DAYS_DEFAULT,
    label: Optional[PaymentClass] = None,
) -> FeatureVector:
    """Pre-imputation feature vector for one invoice.

    ``history`` holds invoices of the same customer (any range; the
    window filter is applied here). Settlements dated on or after the
    invoice's creation date are treated as unknown.
    """
    for h in history:
        if h.customer_id != inv.customer_id:
            raise ValueError(
                f"history for {inv.customer_id} contains invoice "
                f"{h.invoice_id} of customer {h.customer_id}"
            )
    ref = inv.creation_date
    lo = add_months(ref, -window.months)
    in_window = [h for h in history if lo <= h.creation_date < ref]
    return _features_from_window(inv, in_window, ref, grace_days, label)


def _features_from_window(
    inv: Invoice,
    in_window: list[Invoice],
    ref: dt.date,
    grace_days: int,
    label: Optional[PaymentClass],
) -> FeatureVector:
    paid_amounts: list[float] = []
    late_amounts: list[float] = []
    out_amounts: list[float] = []
    out_late_amounts: list[float] = []
    late_days: list[float] = []
    out_late_days: list[float] = []
    settle_dates: set[dt.date] = set()

    for h in in_window:
        paid = h.settled_date is not None and h.settled_date < ref
        if paid:
            paid_amounts.append(h.base_amount)
            settle_dates.add(h.settled_date)
            days = (h.settled_date - h.due_date).days
            if days > grace_days:
                late_amounts.append(h.base_amount)
                late_days.append(float(days))
        else:
            out_amounts.append(h.base_amount)
            days = (ref - h.due_date).days
            if days > grace_days:
                out_late_amounts.append(h.base_amount)
                out_late_days.append(float(days))

    # Most recent first; creation-date ties broken by invoice_id so the
    # lag features are reproducible.
    recent = sorted(in_window, key=lambda h: (h.creation_date, h.invoice_id), reverse=True)
    lags = []
    for k in range(3):
        if k < len(recent):
            h = recent[k]
            lags.append(1 if (h.settled_date is not None and h.settled_date < ref) else 0)
        else:
            lags.append(-1)

    avg_late, std_late = _mean_std(late_days)
    avg_out_late, std_out_late = _mean_std(out_late_days)

    return FeatureVector(
        invoice_id=inv.invoice_id,
        customer_id=inv.customer_id,
        country=inv.country,
        creation_date=inv.creation_date,
        label=label,
        base_amount=inv.base_amount,
        days_to_due=(inv.due_date - inv.creation_date).days,
        paid_lag_1=lags[0],
        paid_lag_2=lags[1],
        paid_lag_3=lags[2],
        total_paid_invoices=len(paid_amounts),
        sum_amount_paid_invoices=math.fsum(paid_amounts),
        total_invoices_late=len(late_amounts),
        sum_amount_late_invoices=math.fsum(late_amounts),
        total_outstanding_invoices=len(out_amounts),
        total_outstanding_late=len(out_late_amounts),
        sum_total_outstanding=math.fsum(out_amounts),
        sum_late_outstanding=math.fsum(out_late_amounts),
        average_days_late=avg_late,
        average_days_outstanding_late=avg_out_late,
        std_dev_invoices_late=std_late,
        std_dev_outstanding_late=std_out_late,
        payment_frequency_difference=len(settle_dates),
    )


def featurize_portfolio(
    invoices: Sequence[Invoice],
    snapshot: Snapshot,
    window: WindowSize,
    grace_days: int = GRACE_DAYS_DEFAULT,
) -> list[FeatureVector]:
    """Feature vectors for every invoice, labels attached where resolvable.

    Rows come back sorted by (creation_date, invoice_id). Unresolvable
    invoices (outstanding, not yet past grace at the snapshot) keep
    ``label=None`` and are excluded from supervised matrices downstream.
    """
    for inv in invoices:
        if inv.creation_date > snapshot.as_of_date:
            raise ValueError(
                f"{inv.invoice_id} created {inv.creation_date}, after snapshot "
                f"{snapshot.as_of_date}"
            )
    by_customer: dict[str, list[Invoice]] = {}
    for inv in invoices:
        by_customer.setdefault(inv.customer_id, []).append(inv)
    for group in by_customer.values():
        group.sort(key=lambda h: (h.creation_date, h.invoice_id))

    rows = []
    for inv in sorted(invoices, key=lambda i: (i.creation_date, i.invoice_id)):
        group = by_customer[inv.customer_id]
        ref = inv.creation_date
        lo = add_months(ref, -window.months)
        dates = [h.creation_date for h in group]
        start = bisect.bisect_left(dates, lo)
        stop = bisect.bisect_left(dates, ref)
        rows.append(
            _features_from_window(
                inv,
                group[start:stop],
                ref,
                grace_days,
                label_invoice(inv, snapshot, grace_days),
            )
        )
    return rows


@dataclass(frozen=True)
class ImputationStats:
    """Training means for the MISSING-capable day statistics."""

    means: dict[str, float]

    def __post_init__(self) -> None:
        missing = set(MISSING_CAPABLE) - set(self.means)
        if missing:
            raise ValueError(f"imputation stats lack features: {sorted(missing)}")


def fit_imputation(train_rows: Sequence[FeatureVector]) -> ImputationStats:
    """Mean of each day-statistic over training rows where it is present.

    A feature missing in every training row imputes to 0.0 (with a
    warning): there is no information to do better.
    """
    if not train_rows:
        raise ValueError("cannot fit imputation on an empty training set")
    means = {}
    for name in MISSING_CAPABLE:
        values = [getattr(r, name) for r in train_rows if getattr(r, name) is not None]
        if values:
            means[name] = math.fsum(values) / len(values)
        else:
            warnings.warn(f"feature {name} missing in every training row; imputing 0.0")
            means[name] = 0.0
    return ImputationStats(means=means)


def impute(fv: FeatureVector, stats: ImputationStats) -> FeatureVector:
    """Replace MISSING day statistics with training means. Idempotent."""
    updates = {
        name: stats.means[name]
        for name in MISSING_CAPABLE
        if getattr(fv, name) is None
    }
    return dataclasses.replace(fv, **updates) if updates else fv


def design_matrix(
    rows: Sequence[FeatureVector], countries: Sequence[str] = KNOWN_COUNTRIES
) -> tuple[np.ndarray, list[str]]:
    """Model-input matrix with documented column order.

    Rows must be imputed (no MISSING values). One-hot country columns
    follow the numeric block, in the order given by ``countries``.
    """
    columns = list(NUMERIC_COLUMNS) + [f"country_{c}" for c in countries]
    X = np.empty((len(rows), len(columns)), dtype=np.float64)
    for i, row in enumerate(rows):
        for j, name in enumerate(NUMERIC_COLUMNS):
            value = getattr(row, name)
            if value is None:
                raise ValueError(
                    f"row {row.invoice_id}: {name} is MISSING; impute before building matrices"
                )
            X[i, j] = value
        X[i, len(NUMERIC_COLUMNS):] = row.country_onehot(countries)
    return X, columns


def label_vector(rows: Sequence[FeatureVector]) -> np.ndarray:
    """Labels as 1 = late, 0 = on time; unlabeled rows are an error."""
    y = np.empty(len(rows), dtype=np.int64)
    for i, row in enumerate(rows):
        if row.label is None:
            raise ValueError(f"row {row.invoice_id} has no label")
        y[i] = 1 if row.label is PaymentClass.LATE else 0
    return y


_CSV_META = ("invoice_id", "customer_id", "country", "creation_date")
_CSV_HEADER = _CSV_META + NUMERIC_COLUMNS + ("label",)
_INT_FIELDS = {
    "days_to_due",
    "paid_lag_1",
    "paid_lag_2",
    "paid_lag_3",
    "total_paid_invoices",
    "total_invoices_late",
    "total_outstanding_invoices",
    "total_outstanding_late",
    "payment_frequency_difference",
}


def write_features_csv(rows: Sequence[FeatureVector], path) -> None:
    """Persist feature rows; MISSING cells are empty, label column last."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_HEADER)
        for row in rows:
            record = [row.invoice_id, row.customer_id, row.country, row.creation_date.isoformat()]
            for name in NUMERIC_COLUMNS:
                value = getattr(row, name)
                if value is None:
                    record.append("")
                elif name in _INT_FIELDS:
                    record.append(str(int(value)))
                else:
                    record.append(repr(float(value)))
            record.append(row.label.value if row.label is not None else "")
            writer.writerow(record)


def read_features_csv(path) -> list[FeatureVector]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != _CSV_HEADER:
            raise ValueError(f"{path}: unexpected feature CSV header")
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(_CSV_HEADER):
                raise ValueError(f"{path}, line {lineno}: wrong field count")
            values = dict(zip(_CSV_HEADER, record))
            kwargs: dict = {
                "invoice_id": values["invoice_id"],
                "customer_id": values["customer_id"],
                "country": values["country"],
                "creation_date": dt.date.fromisoformat(values["creation_date"]),
                "label": PaymentClass(values["label"]) if values["label"] else None,
            }
            for name in NUMERIC_COLUMNS:
                cell = values[name]
                if cell == "":
                    kwargs[name] = None
                elif name in _INT_FIELDS:
                    kwargs[name] = int(cell)
                else:
                    kwargs[name] = float(cell)
            rows.append(FeatureVector(**kwargs))
    return rows
