"""Receivables analytics: late-payment prediction, risk ranking, and
collector-call simulation on synthetic invoice portfolios."""

__version__ = "0.1.0"
