import datetime as dt
from collections import defaultdict

import numpy as np
import pytest

from arcollect.datagen import (
    PortfolioConfig,
    PortfolioCsvError,
    default_customers_per_country,
    generate_portfolio,
    read_portfolio_csv,
    write_portfolio_csv,
)
from arcollect.dates import month_index, month_key
from arcollect.domain import Invoice, PaymentClass, label_invoice
from arcollect.eval import spearman_rho

from conftest import small_portfolio_config


@pytest.fixture(scope="module")
def five_default_portfolios():
    return {seed: generate_portfolio(PortfolioConfig(seed=seed)) for seed in (1, 2, 3, 4, 5)}


def labeled_by_month(invoices, snapshot, complete_only=True):
    """Per-month (count, late) over months whose labels are complete.

    Labels of the final two generated months are censored by the
    snapshot (settlements after it are unknown), so trend measurements
    stop two months early.
    """
    per_month = defaultdict(lambda: [0, 0])
    last = max(inv.creation_date for inv in invoices)
    for inv in invoices:
        if complete_only and month_index(last, inv.creation_date) < 2:
            continue
        label = label_invoice(inv, snapshot)
        if label is None:
            continue
        key = month_key(inv.creation_date)
        per_month[key][0] += 1
        per_month[key][1] += label is PaymentClass.LATE
    return {k: (n, late / n) for k, (n, late) in sorted(per_month.items())}


class TestGeneration:
    def test_deterministic_given_seed(self, tmp_path):
        cfg = small_portfolio_config(seed=42)
        a, snap_a = generate_portfolio(cfg)
        b, snap_b = generate_portfolio(cfg)
        assert snap_a == snap_b
        write_portfolio_csv(a, tmp_path / "a.csv")
        write_portfolio_csv(b, tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_different_seeds_differ(self):
        a, _ = generate_portfolio(small_portfolio_config(seed=1))
        b, _ = generate_portfolio(small_portfolio_config(seed=2))
        assert [i.invoice_id for i in a] != [i.invoice_id for i in b] or a != b

    def test_invariants_hold_for_every_invoice(self, small_portfolio):
        invoices, snapshot = small_portfolio
        assert invoices
        for inv in invoices:
            assert inv.creation_date <= inv.due_date
            assert inv.creation_date <= snapshot.as_of_date
            if inv.settled_date is not None:
                assert inv.settled_date <= snapshot.as_of_date
        assert len({inv.invoice_id for inv in invoices}) == len(invoices)

    def test_empty_config_rejected(self):
        with pytest.raises(ValueError, match="zero customers"):
            generate_portfolio(
                PortfolioConfig(customers_per_country={"US": 0}, seed=1)
            )

    def test_portfolio_scale(self, five_default_portfolios):
        sizes = [len(invoices) for invoices, _ in five_default_portfolios.values()]
        assert all(7_000 <= n <= 14_000 for n in sizes)

    def test_class_mix_brackets_reference_shares(self, five_default_portfolios):
        for invoices, snapshot in five_default_portfolios.values():
            labels = [label_invoice(inv, snapshot) for inv in invoices]
            labeled = [l for l in labels if l is not None]
            late = sum(1 for l in labeled if l is PaymentClass.LATE) / len(labeled)
            assert 0.45 <= late <= 0.65

    def test_drift_disabled_is_stationary(self):
        # first three months vs a late fully-labeled stretch, five seeds
        diffs = []
        for seed in (1, 2, 3, 4, 5):
            invoices, snapshot = generate_portfolio(
                PortfolioConfig(seed=seed, drift_enabled=False)
            )
            per_month = labeled_by_month(invoices, snapshot)
            months = list(per_month)
            early = [per_month[m] for m in months[:3]]
            late_stretch = [per_month[m] for m in months[-3:]]
            rate = lambda chunk: sum(n * r for n, r in chunk) / sum(n for n, _ in chunk)
            diffs.append(abs(rate(early) - rate(late_stretch)))
        assert float(np.median(diffs)) < 0.03

    def test_drift_enabled_trends_down(self, five_default_portfolios):
        for invoices, snapshot in five_default_portfolios.values():
            per_month = labeled_by_month(invoices, snapshot)
            months = list(per_month)
            rates = [per_month[m][1] for m in months]
            assert spearman_rho(range(len(months)), rates) < 0

    def test_previous_lateness_predicts_next(self, five_default_portfolios):
        # signal floor: lift of P(late | previous late) over the base rate
        lifts = []
        for invoices, snapshot in five_default_portfolios.values():
            sequences = defaultdict(list)
            for inv in invoices:
                label = label_invoice(inv, snapshot)
                if label is not None:
                    sequences[inv.customer_id].append(
                        (inv.creation_date, inv.invoice_id, label is PaymentClass.LATE)
                    )
            pairs_prev = pairs_both = total = late_total = 0
            for seq in sequences.values():
                seq.sort()
                for (_, _, a), (_, _, b) in zip(seq, seq[1:]):
                    pairs_prev += a
                    pairs_both += a and b
                total += len(seq)
                late_total += sum(s[2] for s in seq)
            lifts.append((pairs_both / pairs_prev) / (late_total / total))
        assert float(np.median(lifts)) >= 1.2


class TestCsvRoundTrip:
    def test_empty_list(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_portfolio_csv([], path)
        assert path.read_text().strip() == (
            "invoice_id,customer_id,country,base_amount,creation_date,due_date,settled_date"
        )
        assert read_portfolio_csv(path) == []

    def test_round_trip_identity(self, small_portfolio, tmp_path):
        invoices, _ = small_portfolio
        path = tmp_path / "portfolio.csv"
        write_portfolio_csv(invoices, path)
        assert read_portfolio_csv(path) == list(invoices)

    def test_write_read_write_is_stable(self, small_portfolio, tmp_path):
        invoices, _ = small_portfolio
        first = tmp_path / "one.csv"
        second = tmp_path / "two.csv"
        write_portfolio_csv(invoices, first)
        write_portfolio_csv(read_portfolio_csv(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(PortfolioCsvError, match="header"):
            read_portfolio_csv(path)

    def test_invariant_violation_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "invoice_id,customer_id,country,base_amount,creation_date,due_date,settled_date\n"
            "INV1,US0001,US,10.00,2019-01-05,2019-02-04,2019-02-10\n"
            "INV2,US0001,US,10.00,2019-01-05,2019-02-04,2019-01-01\n"
        )
        with pytest.raises(PortfolioCsvError, match="line 3"):
            read_portfolio_csv(path)

    def test_wrong_field_count_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "invoice_id,customer_id,country,base_amount,creation_date,due_date,settled_date\n"
            "INV1,US0001,US,10.00\n"
        )
        with pytest.raises(PortfolioCsvError, match="line 2"):
            read_portfolio_csv(path)


def test_default_mix_mirrors_reference_proportions():
    counts = default_customers_per_country()
    assert set(counts) == {"US", "AR", "BR", "CL", "CO", "EC", "MX"}
    assert counts["US"] == max(counts.values())
    assert counts["EC"] == min(counts.values()) == 1  # under-represented countries survive
