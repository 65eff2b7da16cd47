import datetime as dt

import pytest
from hypothesis import given, strategies as st

from arcollect.domain import Invoice, PaymentClass, Snapshot, label_invoice


def make_invoice(due="2019-01-10", settled=None, created="2019-01-01", amount=100.0):
    return Invoice(
        invoice_id="INV1",
        customer_id="US0001",
        country="US",
        base_amount=amount,
        creation_date=dt.date.fromisoformat(created),
        due_date=dt.date.fromisoformat(due),
        settled_date=dt.date.fromisoformat(settled) if settled else None,
    )


SNAP = Snapshot(as_of_date=dt.date(2019, 12, 31))


class TestLabelingRule:
    def test_settled_within_grace_is_on_time(self):
        # five days after due is the boundary of the grace period
        inv = make_invoice(settled="2019-01-15")
        assert label_invoice(inv, SNAP) is PaymentClass.ON_TIME

    def test_settled_past_grace_is_late(self):
        inv = make_invoice(settled="2019-01-16")
        assert label_invoice(inv, SNAP) is PaymentClass.LATE

    def test_unsettled_recent_has_no_label(self):
        inv = make_invoice()
        assert label_invoice(inv, Snapshot(as_of_date=dt.date(2019, 1, 12))) is None

    def test_settled_on_due_date_is_on_time(self):
        inv = make_invoice(settled="2019-01-10")
        assert label_invoice(inv, SNAP) is PaymentClass.ON_TIME

    def test_early_settlement_is_on_time(self):
        inv = make_invoice(settled="2019-01-07")
        assert label_invoice(inv, SNAP) is PaymentClass.ON_TIME

    def test_unsettled_past_grace_is_late(self):
        inv = make_invoice()
        assert label_invoice(inv, Snapshot(as_of_date=dt.date(2019, 1, 16))) is PaymentClass.LATE
        assert label_invoice(inv, Snapshot(as_of_date=dt.date(2019, 1, 15))) is None

    def test_boundary_exactness_per_grace(self):
        for grace in (0, 3, 5, 11):
            on_time = make_invoice(settled=(dt.date(2019, 1, 10) + dt.timedelta(days=grace)).isoformat())
            late = make_invoice(settled=(dt.date(2019, 1, 10) + dt.timedelta(days=grace + 1)).isoformat())
            assert label_invoice(on_time, SNAP, grace) is PaymentClass.ON_TIME
            assert label_invoice(late, SNAP, grace) is PaymentClass.LATE

    def test_negative_grace_rejected(self):
        with pytest.raises(ValueError):
            label_invoice(make_invoice(settled="2019-01-10"), SNAP, grace_days=-1)

    @given(delta=st.integers(min_value=-9, max_value=90), grace=st.integers(0, 30))
    def test_monotone_in_grace_days(self, delta, grace):
        # widening the grace period never flips on-time to late
        settled = dt.date(2019, 1, 10) + dt.timedelta(days=delta)
        inv = make_invoice(settled=settled.isoformat())
        if label_invoice(inv, SNAP, grace) is PaymentClass.ON_TIME:
            assert label_invoice(inv, SNAP, grace + 1) is PaymentClass.ON_TIME

    def test_pure_function(self):
        inv = make_invoice(settled="2019-01-20")
        assert label_invoice(inv, SNAP) == label_invoice(inv, SNAP)


class TestInvoiceInvariants:
    def test_rejects_nonpositive_amount(self):
        with pytest.raises(ValueError, match="base_amount"):
            make_invoice(amount=0.0)

    def test_rejects_creation_after_due(self):
        with pytest.raises(ValueError, match="creation_date"):
            make_invoice(due="2018-12-31")

    def test_rejects_settled_before_creation(self):
        with pytest.raises(ValueError, match="settled_date"):
            make_invoice(settled="2018-12-30")

    def test_rejects_unknown_country(self):
        with pytest.raises(ValueError, match="country"):
            Invoice(
                invoice_id="X",
                customer_id="C",
                country="ZZ",
                base_amount=1.0,
                creation_date=dt.date(2019, 1, 1),
                due_date=dt.date(2019, 1, 2),
            )

    def test_region_derivation(self):
        assert make_invoice().region.value == "NA"
        br = Invoice(
            invoice_id="X",
            customer_id="BR0001",
            country="BR",
            base_amount=1.0,
            creation_date=dt.date(2019, 1, 1),
            due_date=dt.date(2019, 1, 2),
        )
        assert br.region.value == "LA"

    def test_immutability(self):
        inv = make_invoice()
        with pytest.raises(AttributeError):
            inv.base_amount = 5.0
