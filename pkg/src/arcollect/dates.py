"""Calendar-month arithmetic on plain ``datetime.date`` values.

All pipeline logic works on whole days; months are calendar months
(window bounds, drift indexing, report grouping), so the handful of
helpers here is all the date handling the package needs.
"""
from __future__ import annotations

import calendar
import datetime as dt

__all__ = [
    "add_months",
    "month_key",
    "month_index",
    "month_start",
    "month_end",
    "parse_month",
    "months_between",
]


def add_months(day: dt.date, months: int) -> dt.date:
    """Shift ``day`` by ``months`` calendar months, clamping to month end.

    add_months(2019-03-31, -1) == 2019-02-28.
    """
    total = day.year * 12 + (day.month - 1) + months
    year, month = divmod(total, 12)
    month += 1
    last = calendar.monthrange(year, month)[1]
    return dt.date(year, month, min(day.day, last))


def month_key(day: dt.date) -> str:
    """Grouping key of the calendar month containing ``day``, 'YYYY-MM'."""
    return f"{day.year:04d}-{day.month:02d}"


def parse_month(key: str) -> dt.date:
    """First day of the month written as 'YYYY-MM'."""
    year, _, month = key.partition("-")
    try:
        return dt.date(int(year), int(month), 1)
    except ValueError as exc:
        raise ValueError(f"not a YYYY-MM month: {key!r}") from exc


def month_start(day: dt.date) -> dt.date:
    return day.replace(day=1)


def month_end(day: dt.date) -> dt.date:
    last = calendar.monthrange(day.year, day.month)[1]
    return day.replace(day=last)


def month_index(day: dt.date, origin: dt.date) -> int:
    """Number of whole calendar months from ``origin``'s month to ``day``'s."""
    return (day.year - origin.year) * 12 + (day.month - origin.month)


def months_between(first: dt.date, last: dt.date) -> int:
    """Count of calendar months touched by the inclusive range."""
    return month_index(last, first) + 1
