"""Paired Monte-Carlo comparison of collection policies.

Each simulated month, both policies rank the month's customers (risk
ranking vs value-greedy), the top n are contacted, and every truly-late
invoice of a contacted customer is collected with probability p.
On-time invoices are always collected. Both policies see the same
uniform draw per invoice, so at p = 0 the savings difference is exactly
zero and at p > 0 the comparison is not confounded by sampling noise.

Every grid cell derives its own random stream from
(seed, month, n, p, run), making results independent of evaluation
order and bit-reproducible.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .domain import PaymentClass
from .features import FeatureVector
from .ranking import invoice_risk, rank_customers_by_risk, rank_customers_greedy

__all__ = [
    "SimConfig",
    "SimInvoice",
    "SimResult",
    "simulate_month",
    "run_simulation",
    "build_cohorts",
    "cell_rng",
]

logger = logging.getLogger(__name__)

DEFAULT_P_GRID = tuple(i / 10 for i in range(11))


@dataclass(frozen=True)
class SimConfig:
    n_calls: tuple[int, ...] = (100, 200, 300)
    p_grid: tuple[float, ...] = DEFAULT_P_GRID
    runs: int = 100
    months: Optional[tuple[str, ...]] = None  # default: every cohort month
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.n_calls or any(n < 1 for n in self.n_calls):
            raise ValueError("n_calls must be a nonempty list of counts >= 1")
        if not self.p_grid or any(not 0.0 <= p <= 1.0 for p in self.p_grid):
            raise ValueError("p_grid values must lie in [0, 1]")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")

    def to_dict(self) -> dict:
        return {
            "n_calls": list(self.n_calls),
            "p_grid": list(self.p_grid),
            "runs": self.runs,
            "months": list(self.months) if self.months else None,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "SimConfig":
        known = {"n_calls", "p_grid", "runs", "months", "seed"}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown simulation config fields: {sorted(unknown)}")
        kwargs: dict = {}
        if "n_calls" in raw:
            kwargs["n_calls"] = tuple(int(n) for n in raw["n_calls"])
        if "p_grid" in raw:
            kwargs["p_grid"] = tuple(float(p) for p in raw["p_grid"])
        if "runs" in raw:
            kwargs["runs"] = int(raw["runs"])
        if raw.get("months") is not None:
            kwargs["months"] = tuple(str(m) for m in raw["months"])
        if "seed" in raw:
            kwargs["seed"] = int(raw["seed"])
        return cls(**kwargs)


@dataclass(frozen=True, slots=True)
class SimInvoice:
    """Month-cohort invoice: model score plus synthetic ground truth."""

    invoice_id: str
    customer_id: str
    value: float
    p_late: float
    truly_late: bool


@dataclass(frozen=True)
class _MonthState:
    """Pre-computed rankings and pools for one month's cohort."""

    risk_order: tuple[str, ...]
    greedy_order: tuple[str, ...]
    ontime_total: float
    late_values: np.ndarray      # values of truly-late invoices, invoice_id order
    late_customers: tuple[str, ...]
    late_total: float


def _prepare_month(invoices: Sequence[SimInvoice]) -> _MonthState:
    if not invoices:
        raise ValueError("month cohort is empty")
    risks: dict[str, list] = {}
    values: dict[str, list[float]] = {}
    for inv in invoices:
        risks.setdefault(inv.customer_id, []).append(
            invoice_risk(inv.invoice_id, inv.value, inv.p_late)
        )
        values.setdefault(inv.customer_id, []).append(inv.value)
    risk_order = tuple(r.customer_id for r in rank_customers_by_risk(risks))
    greedy_order = tuple(g.customer_id for g in rank_customers_greedy(values))
    late = sorted(
        (inv for inv in invoices if inv.truly_late), key=lambda inv: inv.invoice_id
    )
    ontime = math.fsum(inv.value for inv in invoices if not inv.truly_late)
    return _MonthState(
        risk_order=risk_order,
        greedy_order=greedy_order,
        ontime_total=ontime,
        late_values=np.array([inv.value for inv in late], dtype=np.float64),
        late_customers=tuple(inv.customer_id for inv in late),
        late_total=math.fsum(inv.value for inv in late),
    )


def _collect(
    state: _MonthState, n: int, p: float, rng: np.random.Generator
) -> tuple[float, float]:
    """Collected dollars under (risk, greedy) with shared per-invoice draws."""
    if n > len(state.risk_order):
        logger.info(
            "contacting all %d customers (n=%d exceeds cohort)", len(state.risk_order), n
        )
    top_risk = frozenset(state.risk_order[:n])
    top_greedy = frozenset(state.greedy_order[:n])
    draws = rng.random(len(state.late_values))
    success = draws < p
    model_extra = []
    greedy_extra = []
    for value, customer, ok in zip(state.late_values, state.late_customers, success):
        if not ok:
            continue
        if customer in top_risk:
            model_extra.append(float(value))
        if customer in top_greedy:
            greedy_extra.append(float(value))
    return (
        state.ontime_total + math.fsum(model_extra),
        state.ontime_total + math.fsum(greedy_extra),
    )


def simulate_month(
    invoices: Sequence[SimInvoice], n: int, p: float, rng: np.random.Generator
) -> tuple[float, float]:
    """One run over one month: (collected under risk, collected under greedy)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    return _collect(_prepare_month(invoices), n, p, rng)


def cell_rng(seed: int, month_idx: int, n_idx: int, p_idx: int, run: int) -> np.random.Generator:
    """Independent stream for one grid cell; pure function of its key."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=(seed, month_idx, n_idx, p_idx, run))
    )


@dataclass(frozen=True)
class SimResult:
    months: tuple[str, ...]
    n_calls: tuple[int, ...]
    p_grid: tuple[float, ...]
    runs: int
    seed: int
    # (month, n, p_idx) -> savings differences over runs
    diffs: dict[tuple[str, int, int], np.ndarray] = field(repr=False)

    def cell(self, month: str, n: int, p_idx: int) -> np.ndarray:
        return self.diffs[(month, n, p_idx)]

    def summary(self) -> dict:
        cells = []
        for month in self.months:
            for n in self.n_calls:
                for p_idx, p in enumerate(self.p_grid):
                    d = self.diffs[(month, n, p_idx)]
                    q1, q2, q3 = (float(np.percentile(d, q)) for q in (25, 50, 75))
                    cells.append(
                        {
                            "month": month,
                            "n": n,
                            "p": p,
                            "mean": float(d.mean()),
                            "median": q2,
                            "q1": q1,
                            "q3": q3,
                        }
                    )
        return {
            "months": list(self.months),
            "n_calls": list(self.n_calls),
            "p_grid": list(self.p_grid),
            "runs": self.runs,
            "seed": self.seed,
            "cells": cells,
        }

    def write_tidy_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["month", "n", "p", "run", "savings_diff"])
            for month in self.months:
                for n in self.n_calls:
                    for p_idx, p in enumerate(self.p_grid):
                        for run, diff in enumerate(self.diffs[(month, n, p_idx)]):
                            writer.writerow([month, n, repr(float(p)), run, repr(float(diff))])


def build_cohorts(
    rows: Sequence[FeatureVector], probs: Sequence[float]
) -> dict[str, list[SimInvoice]]:
    """Group labeled feature rows plus model scores into month cohorts."""
    if len(rows) != len(probs):
        raise ValueError("probs must align with rows")
    cohorts: dict[str, list[SimInvoice]] = {}
    for row, p in zip(rows, probs):
        if row.label is None:
            raise ValueError(f"row {row.invoice_id} has no ground-truth label")
        cohorts.setdefault(row.creation_month, []).append(
            SimInvoice(
                invoice_id=row.invoice_id,
                customer_id=row.customer_id,
                value=row.base_amount,
                p_late=float(p),
                truly_late=row.label is PaymentClass.LATE,
            )
        )
    return cohorts


def run_simulation(
    cohorts: dict[str, Sequence[SimInvoice]], cfg: SimConfig
) -> SimResult:
    """Execute the full (month, n, p, run) grid; deterministic given seed."""
    months = cfg.months if cfg.months is not None else tuple(sorted(cohorts))
    missing = [m for m in months if m not in cohorts]
    if missing:
        raise ValueError(f"months not present in cohorts: {missing}")
    diffs: dict[tuple[str, int, int], np.ndarray] = {}
    for month_idx, month in enumerate(months):
        state = _prepare_month(cohorts[month])
        for n_idx, n in enumerate(cfg.n_calls):
            for p_idx, p in enumerate(cfg.p_grid):
                out = np.empty(cfg.runs, dtype=np.float64)
                for run in range(cfg.runs):
                    rng = cell_rng(cfg.seed, month_idx, n_idx, p_idx, run)
                    model_usd, greedy_usd = _collect(state, n, p, rng)
                    out[run] = model_usd - greedy_usd
                diffs[(month, n, p_idx)] = out
    return SimResult(
        months=tuple(months),
        n_calls=tuple(cfg.n_calls),
        p_grid=tuple(cfg.p_grid),
        runs=cfg.runs,
        seed=cfg.seed,
        diffs=diffs,
    )
