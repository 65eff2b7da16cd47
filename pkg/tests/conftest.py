"""Shared fixtures: a desk-scale portfolio is expensive enough to reuse."""
import datetime as dt

import pytest

from arcollect.datagen import PortfolioConfig, generate_portfolio
from arcollect.features import WindowSize, featurize_portfolio


def small_portfolio_config(seed: int = 7, drift: bool = True) -> PortfolioConfig:
    """A few dozen customers over ten months; keeps unit tests quick."""
    return PortfolioConfig(
        customers_per_country={"US": 12, "BR": 5, "MX": 4, "CL": 3, "CO": 3, "AR": 1, "EC": 1},
        start_month=dt.date(2018, 11, 1),
        end_month=dt.date(2019, 8, 1),
        drift_enabled=drift,
        seed=seed,
    )


@pytest.fixture(scope="session")
def small_portfolio():
    return generate_portfolio(small_portfolio_config())


@pytest.fixture(scope="session")
def small_features(small_portfolio):
    invoices, snapshot = small_portfolio
    return featurize_portfolio(invoices, snapshot, WindowSize(3))


@pytest.fixture(scope="session")
def default_portfolio():
    return generate_portfolio(PortfolioConfig(seed=11))
