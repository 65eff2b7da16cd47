import datetime as dt

import pytest

from arcollect.dates import (
    add_months,
    month_end,
    month_index,
    month_key,
    months_between,
    parse_month,
)


def test_add_months_clamps_to_month_end():
    assert add_months(dt.date(2019, 3, 31), -1) == dt.date(2019, 2, 28)
    assert add_months(dt.date(2019, 1, 31), 1) == dt.date(2019, 2, 28)
    assert add_months(dt.date(2020, 1, 31), 1) == dt.date(2020, 2, 29)


def test_add_months_round_trip_on_safe_days():
    day = dt.date(2019, 6, 15)
    for k in range(-24, 25):
        assert add_months(add_months(day, k), -k) == day


def test_month_key_and_parse():
    assert month_key(dt.date(2019, 7, 23)) == "2019-07"
    assert parse_month("2019-07") == dt.date(2019, 7, 1)
    with pytest.raises(ValueError):
        parse_month("201907")


def test_month_index_and_between():
    origin = dt.date(2018, 11, 1)
    assert month_index(dt.date(2018, 11, 30), origin) == 0
    assert month_index(dt.date(2019, 11, 1), origin) == 12
    assert months_between(dt.date(2018, 11, 5), dt.date(2019, 11, 20)) == 13


def test_month_end():
    assert month_end(dt.date(2019, 2, 1)) == dt.date(2019, 2, 28)
    assert month_end(dt.date(2020, 2, 10)) == dt.date(2020, 2, 29)
