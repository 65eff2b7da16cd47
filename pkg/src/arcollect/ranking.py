"""Risk-weighted customer prioritization versus the value-greedy policy.

An invoice's risk is its dollar value times its probability of being
late; customers are ranked by the mean risk of their invoices. The
incumbent policy ranks customers by total open dollars instead. Kendall
tau compares the two orders.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

__all__ = [
    "InvoiceRisk",
    "CustomerRank",
    "GreedyEntry",
    "invoice_risk",
    "rank_customers_by_risk",
    "rank_customers_greedy",
    "kendall_tau",
    "top_k_overlap",
]


@dataclass(frozen=True, slots=True)
class InvoiceRisk:
    """Expected delinquent dollars of one invoice."""

    invoice_id: str
    value: float
    p_late: float
    risk: float


def invoice_risk(invoice_id: str, value: float, p_late: float) -> InvoiceRisk:
    """risk = value * p_late; the expected dollars at stake."""
    if not value > 0:
        raise ValueError(f"{invoice_id}: value must be > 0, got {value}")
    if not 0.0 <= p_late <= 1.0:
        raise ValueError(f"{invoice_id}: p_late must be in [0, 1], got {p_late}")
    return InvoiceRisk(invoice_id=invoice_id, value=value, p_late=p_late, risk=value * p_late)


@dataclass(frozen=True, slots=True)
class CustomerRank:
    customer_id: str
    mean_risk: float
    n_invoices: int
    position: int


@dataclass(frozen=True, slots=True)
class GreedyEntry:
    customer_id: str
    total_value: float
    n_invoices: int
    position: int


def rank_customers_by_risk(
    risks_by_customer: Mapping[str, Sequence[InvoiceRisk]]
) -> list[CustomerRank]:
    """Descending mean invoice risk; ties break by customer_id ascending."""
    entries = []
    for customer_id, risks in risks_by_customer.items():
        if not risks:
            raise ValueError(f"customer {customer_id} has no invoices")
        mean = sum(r.risk for r in risks) / len(risks)
        entries.append((customer_id, mean, len(risks)))
    entries.sort(key=lambda e: (-e[1], e[0]))
    return [
        CustomerRank(customer_id=c, mean_risk=m, n_invoices=n, position=i + 1)
        for i, (c, m, n) in enumerate(entries)
    ]


def rank_customers_greedy(
    values_by_customer: Mapping[str, Sequence[float]]
) -> list[GreedyEntry]:
    """Descending total dollars per customer; same tie rule as the risk rank."""
    entries = []
    for customer_id, values in values_by_customer.items():
        if not values:
            raise ValueError(f"customer {customer_id} has no invoices")
        entries.append((customer_id, sum(values), len(values)))
    entries.sort(key=lambda e: (-e[1], e[0]))
    return [
        GreedyEntry(customer_id=c, total_value=t, n_invoices=n, position=i + 1)
        for i, (c, t, n) in enumerate(entries)
    ]


def kendall_tau(order_a: Sequence[Hashable], order_b: Sequence[Hashable]) -> float:
    """Rank correlation between two total orders of the same elements.

    Tie-adjusted form over the implied rank vectors; since both inputs
    are total orders the ranks are distinct and the adjustment reduces
    to (concordant - discordant) / (n choose 2). Computed by counting
    inversions with a merge sort.
    """
    if len(set(order_a)) != len(order_a) or len(set(order_b)) != len(order_b):
        raise ValueError("orders must not contain duplicate elements")
    if set(order_a) != set(order_b):
        raise ValueError("orders must rank the same element set")
    n = len(order_a)
    if n < 2:
        raise ValueError("need at least two elements to compare orders")
    pos_b = {element: i for i, element in enumerate(order_b)}
    sequence = [pos_b[element] for element in order_a]

    def count_inversions(seq: list[int]) -> tuple[list[int], int]:
        if len(seq) <= 1:
            return seq, 0
        mid = len(seq) // 2
        left, inv_l = count_inversions(seq[:mid])
        right, inv_r = count_inversions(seq[mid:])
        merged = []
        inv = inv_l + inv_r
        i = j = 0
        while i < len(left) and j < len(right):
            if left[i] <= right[j]:
                merged.append(left[i])
                i += 1
            else:
                merged.append(right[j])
                j += 1
                inv += len(left) - i
        merged.extend(left[i:])
        merged.extend(right[j:])
        return merged, inv

    _, discordant = count_inversions(sequence)
    total = n * (n - 1) // 2
    return (total - 2 * discordant) / total


def top_k_overlap(order_a: Sequence[Hashable], order_b: Sequence[Hashable], k: int) -> float:
    """Fraction of shared elements among the two top-k prefixes."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    k = min(k, len(order_a), len(order_b))
    return len(set(order_a[:k]) & set(order_b[:k])) / k
