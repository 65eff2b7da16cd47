"""Core receivables types and the on-time/late labeling rule.

An invoice counts as late when it is settled (or remains unsettled)
more than ``grace_days`` after its due date; the default grace period
is five days, matching payment-processing lag in the source system.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from enum import Enum
from typing import Optional

__all__ = [
    "GRACE_DAYS_DEFAULT",
    "COUNTRY_REGION",
    "KNOWN_COUNTRIES",
    "Region",
    "PaymentClass",
    "Invoice",
    "Snapshot",
    "label_invoice",
    "INVOICE_CSV_HEADER",
]

GRACE_DAYS_DEFAULT = 5

# Country code -> region. The portfolio covers the United States plus six
# Latin American countries; region is always derived, never stored.
COUNTRY_REGION = {
    "US": "NA",
    "AR": "LA",
    "BR": "LA",
    "CL": "LA",
    "CO": "LA",
    "EC": "LA",
    "MX": "LA",
}
KNOWN_COUNTRIES = tuple(sorted(COUNTRY_REGION))


class Region(str, Enum):
    NA = "NA"
    LA = "LA"


class PaymentClass(str, Enum):
    ON_TIME = "on_time"
    LATE = "late"


@dataclass(frozen=True, slots=True)
class Invoice:
    """One receivable. Immutable; dates are whole calendar days."""

    invoice_id: str
    customer_id: str
    country: str
    base_amount: float
    creation_date: dt.date
    due_date: dt.date
    settled_date: Optional[dt.date] = None

    def __post_init__(self) -> None:
        if self.country not in COUNTRY_REGION:
            raise ValueError(
                f"{self.invoice_id}: unknown country {self.country!r}, "
                f"expected one of {KNOWN_COUNTRIES}"
            )
        if not self.base_amount > 0:
            raise ValueError(f"{self.invoice_id}: base_amount must be > 0, got {self.base_amount}")
        if self.creation_date > self.due_date:
            raise ValueError(
                f"{self.invoice_id}: creation_date {self.creation_date} after due_date {self.due_date}"
            )
        if self.settled_date is not None and self.settled_date < self.creation_date:
            raise ValueError(
                f"{self.invoice_id}: settled_date {self.settled_date} before "
                f"creation_date {self.creation_date}"
            )

    @property
    def region(self) -> Region:
        return Region(COUNTRY_REGION[self.country])

    @property
    def is_settled(self) -> bool:
        return self.settled_date is not None


@dataclass(frozen=True, slots=True)
class Snapshot:
    """End of observed data; everything after this date is unknown."""

    as_of_date: dt.date


def label_invoice(
    inv: Invoice, snap: Snapshot, grace_days: int = GRACE_DAYS_DEFAULT
) -> Optional[PaymentClass]:
    """Ground-truth payment class of an invoice, or None if unresolved.

    Settled invoices are on time when settled no more than ``grace_days``
    after the due date, late otherwise. Unsettled invoices are late once
    the snapshot date is more than ``grace_days`` past due; before that
    they cannot be labeled and are excluded from supervised sets.
    """
    if grace_days < 0:
        raise ValueError(f"grace_days must be >= 0, got {grace_days}")
    if inv.settled_date is not None:
        delta = (inv.settled_date - inv.due_date).days
        return PaymentClass.LATE if delta > grace_days else PaymentClass.ON_TIME
    if (snap.as_of_date - inv.due_date).days > grace_days:
        return PaymentClass.LATE
    return None


# Canonical invoice CSV schema; settled_date is empty for outstanding
# invoices, amounts carry at most two fraction digits, dates ISO-8601.
INVOICE_CSV_HEADER = (
    "invoice_id",
    "customer_id",
    "country",
    "base_amount",
    "creation_date",
    "due_date",
    "settled_date",
)
