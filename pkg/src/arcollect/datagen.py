"""Synthetic receivables portfolios with persistent, drifting payment behavior.

Stands in for a proprietary bank dataset. Each customer gets a latent
lateness propensity that evolves month to month as an AR(1) process, so
recent invoices are positively correlated in lateness and windowed
history features have something to learn. An optional per-customer
drift slope lowers lateness log-odds over calendar months, modeling
customers that pay less late as time goes on.
"""
from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .dates import add_months, month_end, month_index, month_key, parse_month
from .domain import (
    COUNTRY_REGION,
    GRACE_DAYS_DEFAULT,
    INVOICE_CSV_HEADER,
    Invoice,
    Snapshot,
)

__all__ = [
    "CustomerProfile",
    "PortfolioConfig",
    "PortfolioCsvError",
    "default_customers_per_country",
    "generate_portfolio",
    "write_portfolio_csv",
    "read_portfolio_csv",
]

# Month-to-month persistence of the latent lateness state. Long memory
# (high rho, modest wiggle) keeps the no-drift regime insensitive to the
# feature window, so window-size effects are attributable to drift.
LATENT_RHO = 0.98
LATENT_SD = 0.7

# Log-odds bump from the outcome of the customer's previous invoice
# (+ when it was late, - when on time). This delinquency-spiral term is
# what makes recent history features genuinely predictive.
OUTCOME_FEEDBACK = 0.2

# Improving customers also settle fewer days late: lateness-day scale
# follows exp(coupling * drift_slope * months_from_midpoint).
DAYS_DRIFT_COUPLING = 1.2

# Cross-customer draw parameters (base propensity, billing, amounts).
# The propensity Beta is U-shaped: most customers are reliably early or
# reliably late, which is what collectors report anecdotally.
_BASE_PROB_BETA = (0.9, 0.75)
_DRIFT_SLOPE_MEAN = -0.3
_DRIFT_SLOPE_SD = 0.12
_DRIFT_SLOPE_MAX = -0.05
_RATE_LOG_MEAN = math.log(5.5)
_RATE_LOG_SD = 0.7
_AMOUNT_LOG_MEAN_CENTER = math.log(8000.0)
_AMOUNT_LOG_MEAN_SD = 0.7
_PAYMENT_TERMS = (30, 45, 60)
_PAYMENT_TERMS_P = (0.5, 0.3, 0.2)

_PROB_FLOOR, _PROB_CEIL = 0.02, 0.98
_ONTIME_EARLIEST = -10  # on-time settle offset drawn from [here, grace]


def default_customers_per_country() -> dict[str, int]:
    """Country mix proportional to the reference portfolio, about 50x smaller."""
    return {"US": 86, "AR": 1, "BR": 16, "CL": 6, "CO": 10, "EC": 1, "MX": 12}


@dataclass(frozen=True, slots=True)
class CustomerProfile:
    """Latent payment-behavior parameters of one synthetic customer."""

    customer_id: str
    country: str
    base_lateness_prob: float
    lateness_days_mean: float
    lateness_days_dispersion: float
    invoice_rate: float
    amount_log_mean: float
    amount_log_sd: float
    drift_slope: float
    payment_terms_days: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.base_lateness_prob <= 1.0:
            raise ValueError(f"{self.customer_id}: base_lateness_prob outside [0, 1]")
        for name in ("lateness_days_mean", "lateness_days_dispersion"):
            if getattr(self, name) < 0:
                raise ValueError(f"{self.customer_id}: {name} must be >= 0")
        if not self.invoice_rate > 0:
            raise ValueError(f"{self.customer_id}: invoice_rate must be > 0")


@dataclass(frozen=True)
class PortfolioConfig:
    """Shape of a synthetic portfolio; the seed makes it reproducible."""

    customers_per_country: dict[str, int] = field(default_factory=default_customers_per_country)
    start_month: dt.date = dt.date(2018, 11, 1)
    end_month: dt.date = dt.date(2019, 11, 1)
    drift_enabled: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        for country, count in self.customers_per_country.items():
            if country not in COUNTRY_REGION:
                raise ValueError(f"unknown country in config: {country!r}")
            if count < 0:
                raise ValueError(f"negative customer count for {country}")
        if self.start_month.replace(day=1) >= self.end_month.replace(day=1):
            raise ValueError(
                f"start_month {month_key(self.start_month)} must precede "
                f"end_month {month_key(self.end_month)}"
            )

    @property
    def n_months(self) -> int:
        return month_index(self.end_month, self.start_month) + 1

    def to_dict(self) -> dict:
        return {
            "customers_per_country": dict(sorted(self.customers_per_country.items())),
            "start_month": month_key(self.start_month),
            "end_month": month_key(self.end_month),
            "drift_enabled": self.drift_enabled,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "PortfolioConfig":
        known = {"customers_per_country", "start_month", "end_month", "drift_enabled", "seed"}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown portfolio config fields: {sorted(unknown)}")
        kwargs: dict = {}
        if "customers_per_country" in raw:
            kwargs["customers_per_country"] = {
                str(k): int(v) for k, v in raw["customers_per_country"].items()
            }
        for key in ("start_month", "end_month"):
            if key in raw:
                kwargs[key] = parse_month(raw[key])
        if "drift_enabled" in raw:
            kwargs["drift_enabled"] = bool(raw["drift_enabled"])
        if "seed" in raw:
            kwargs["seed"] = int(raw["seed"])
        return cls(**kwargs)


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _logit(p: float) -> float:
    return math.log(p / (1.0 - p))


def _draw_profiles(cfg: PortfolioConfig, rng: np.random.Generator) -> list[CustomerProfile]:
    profiles = []
    for country in sorted(cfg.customers_per_country):
        for i in range(cfg.customers_per_country[country]):
            base_prob = float(rng.beta(*_BASE_PROB_BETA))
            if cfg.drift_enabled:
                slope = min(
                    _DRIFT_SLOPE_MAX,
                    float(rng.normal(_DRIFT_SLOPE_MEAN, _DRIFT_SLOPE_SD)),
                )
            else:
                slope = 0.0
            profiles.append(
                CustomerProfile(
                    customer_id=f"{country}{i + 1:04d}",
                    country=country,
                    base_lateness_prob=min(max(base_prob, _PROB_FLOOR), _PROB_CEIL),
                    lateness_days_mean=float(rng.uniform(8.0, 30.0)),
                    lateness_days_dispersion=float(rng.uniform(3.0, 10.0)),
                    invoice_rate=float(rng.lognormal(_RATE_LOG_MEAN, _RATE_LOG_SD)),
                    amount_log_mean=float(rng.normal(_AMOUNT_LOG_MEAN_CENTER, _AMOUNT_LOG_MEAN_SD)),
                    amount_log_sd=float(rng.uniform(0.3, 0.8)),
                    drift_slope=slope,
                    payment_terms_days=int(rng.choice(_PAYMENT_TERMS, p=_PAYMENT_TERMS_P)),
                )
            )
    return profiles


def generate_portfolio(
    cfg: PortfolioConfig, grace_days: int = GRACE_DAYS_DEFAULT
) -> tuple[list[Invoice], Snapshot]:
    """Generate a portfolio plus the snapshot that censors it.

    Deterministic for a given config. Every invoice settles eventually in
    the underlying process; settlements falling after the snapshot date
    are censored to "outstanding", exactly as a system extract would
    report them. Invoices come back sorted by (creation_date, invoice_id).
    """
    if sum(cfg.customers_per_country.values()) == 0:
        raise ValueError("config has zero customers")
    rng = np.random.default_rng(cfg.seed)
    profiles = _draw_profiles(cfg, rng)
    as_of = month_end(cfg.end_month)
    mid_month = (cfg.n_months - 1) / 2.0

    invoices: list[Invoice] = []
    serial = 0
    for prof in profiles:
        base_logit = _logit(prof.base_lateness_prob)
        latent = float(rng.normal(0.0, LATENT_SD))
        eps_sd = LATENT_SD * math.sqrt(1.0 - LATENT_RHO**2)
        prev_outcome = 0.0  # +1 after a late invoice, -1 after an on-time one
        for m in range(cfg.n_months):
            if m > 0:
                latent = LATENT_RHO * latent + float(rng.normal(0.0, eps_sd))
            month_first = add_months(cfg.start_month, m)
            days_in_month = (month_end(month_first) - month_first).days + 1
            days_scale = math.exp(DAYS_DRIFT_COUPLING * prof.drift_slope * (m - mid_month))
            for _ in range(int(rng.poisson(prof.invoice_rate))):
                serial += 1
                creation = month_first + dt.timedelta(days=int(rng.integers(0, days_in_month)))
                due = creation + dt.timedelta(days=prof.payment_terms_days)
                p_late = _sigmoid(
                    base_logit
                    + prof.drift_slope * (m - mid_month)
                    + latent
                    + OUTCOME_FEEDBACK * prev_outcome
                )
                p_late = min(max(p_late, _PROB_FLOOR), _PROB_CEIL)
                late = rng.random() < p_late
                prev_outcome = 1.0 if late else -1.0
                if late:
                    offset = max(
                        grace_days + 1,
                        int(round(rng.normal(
                            prof.lateness_days_mean * days_scale,
                            prof.lateness_days_dispersion * days_scale,
                        ))),
                    )
                else:
                    offset = int(rng.integers(_ONTIME_EARLIEST, grace_days + 1))
                settled: Optional[dt.date] = due + dt.timedelta(days=offset)
                if settled > as_of:
                    settled = None
                amount = max(1.0, round(float(rng.lognormal(prof.amount_log_mean, prof.amount_log_sd)), 2))
                invoices.append(
                    Invoice(
                        invoice_id=f"INV{serial:06d}",
                        customer_id=prof.customer_id,
                        country=prof.country,
                        base_amount=amount,
                        creation_date=creation,
                        due_date=due,
                        settled_date=settled,
                    )
                )
    invoices.sort(key=lambda inv: (inv.creation_date, inv.invoice_id))
    return invoices, Snapshot(as_of_date=as_of)


class PortfolioCsvError(ValueError):
    """Malformed portfolio CSV; message names the offending line."""


def write_portfolio_csv(invoices: Sequence[Invoice], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(INVOICE_CSV_HEADER)
        for inv in invoices:
            writer.writerow(
                [
                    inv.invoice_id,
                    inv.customer_id,
                    inv.country,
                    f"{inv.base_amount:.2f}",
                    inv.creation_date.isoformat(),
                    inv.due_date.isoformat(),
                    inv.settled_date.isoformat() if inv.settled_date else "",
                ]
            )


def read_portfolio_csv(path) -> list[Invoice]:
    invoices = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != INVOICE_CSV_HEADER:
            raise PortfolioCsvError(
                f"{path}: bad header {header!r}, expected {list(INVOICE_CSV_HEADER)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(INVOICE_CSV_HEADER):
                raise PortfolioCsvError(f"{path}, line {lineno}: expected "
                                        f"{len(INVOICE_CSV_HEADER)} fields, got {len(row)}")
            try:
                invoices.append(
                    Invoice(
                        invoice_id=row[0],
                        customer_id=row[1],
                        country=row[2],
                        base_amount=float(row[3]),
                        creation_date=dt.date.fromisoformat(row[4]),
                        due_date=dt.date.fromisoformat(row[5]),
                        settled_date=dt.date.fromisoformat(row[6]) if row[6] else None,
                    )
                )
            except ValueError as exc:
                raise PortfolioCsvError(f"{path}, line {lineno}: {exc}") from exc
    return invoices
