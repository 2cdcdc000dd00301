"""Loan/balance-sheet CSV parsing, calendar binning and round-trips."""

import gzip
import io
from datetime import date

import pytest

from tailbank import LoanRecord, ParseError, TimeBin, bin_records, parse_loans
from tailbank.ingestion import (
    LOAN_COLUMNS,
    bin_for_date,
    open_text,
    parse_balance_sheets,
    write_loans_csv,
)

HEADER = ",".join(LOAN_COLUMNS)


def loans_csv(*rows):
    return io.StringIO("\n".join([HEADER, *rows]) + "\n")


class TestParseLoans:
    def test_basic_row(self):
        parsed = parse_loans(loans_csv("A,B,10.5,4.2,2020-01-05,2020-01-06"))
        (rec,) = parsed.records
        assert rec.issuer == "A" and rec.receiver == "B"
        assert rec.size == 10.5 and rec.interest_rate == 4.2
        assert rec.reporting_date == date(2020, 1, 5)
        assert parsed.dropped_long_maturity == 0

    def test_one_day_span_retained(self):
        parsed = parse_loans(loans_csv("A,B,1,1,2020-01-05,2020-01-06"))
        assert len(parsed.records) == 1

    def test_thirty_day_span_dropped_and_counted(self):
        parsed = parse_loans(
            loans_csv(
                "A,B,1,1,2020-01-05,2020-02-04",
                "A,B,2,1,2020-01-05,2020-01-07",
            )
        )
        assert len(parsed.records) == 1
        assert parsed.dropped_long_maturity == 1

    def test_zero_size_rejected_with_line_number(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_loans(loans_csv("A,B,0,1,2020-01-05,2020-01-06"))

    def test_self_loan_rejected(self):
        with pytest.raises(ParseError, match="self-loan"):
            parse_loans(loans_csv("A,A,1,1,2020-01-05,2020-01-06"))

    def test_maturity_before_reporting_rejected(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_loans(loans_csv("A,B,1,1,2020-01-05,2020-01-04"))

    def test_bad_date_rejected(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_loans(loans_csv("A,B,1,1,not-a-date,2020-01-06"))

    def test_bad_number_names_column(self):
        with pytest.raises(ParseError, match="size"):
            parse_loans(loans_csv("A,B,abc,1,2020-01-05,2020-01-06"))

    def test_wrong_header_rejected(self):
        with pytest.raises(ParseError, match="header"):
            parse_loans(io.StringIO("a,b,c\n1,2,3\n"))

    def test_wrong_field_count_names_line(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_loans(
                loans_csv("A,B,1,1,2020-01-05,2020-01-06", "A,B,1,1,2020-01-05")
            )

    def test_empty_stream(self):
        parsed = parse_loans(io.StringIO(""))
        assert parsed.records == []


class TestParseBalanceSheets:
    def test_two_banks_one_month(self):
        recs = parse_balance_sheets(
            io.StringIO("bank,month,assets,capital\nA,2020-01,100,20\nB,2020-01,50,5\n")
        )
        assert len(recs) == 2
        assert recs[0].total_assets == 100.0

    def test_duplicate_key_names_pair(self):
        with pytest.raises(ParseError, match="A.*2020-01"):
            parse_balance_sheets(
                io.StringIO(
                    "bank,month,assets,capital\nA,2020-01,100,20\nA,2020-01,90,10\n"
                )
            )

    def test_negative_capital_retained(self):
        recs = parse_balance_sheets(
            io.StringIO("bank,month,assets,capital\nA,2020-01,100,-5\n")
        )
        assert recs[0].capital == -5.0

    def test_bad_month_rejected(self):
        with pytest.raises(ParseError, match="month"):
            parse_balance_sheets(
                io.StringIO("bank,month,assets,capital\nA,Jan-2020,100,20\n")
            )


class TestBinning:
    def test_same_month_same_bin(self):
        assert bin_for_date(date(2020, 1, 15), "month") == bin_for_date(
            date(2020, 1, 30), "month"
        )

    def test_month_boundary_adjacent_bins(self):
        a = bin_for_date(date(2020, 1, 31), "month")
        b = bin_for_date(date(2020, 2, 1), "month")
        assert a.end == b.start

    def test_week_starts_monday(self):
        b = bin_for_date(date(2020, 1, 8), "week")  # a Wednesday
        assert b.start == date(2020, 1, 6)
        assert (b.end - b.start).days == 7

    def test_quarter_and_year(self):
        q = bin_for_date(date(2020, 11, 15), "quarter")
        assert q.start == date(2020, 10, 1) and q.end == date(2021, 1, 1)
        y = bin_for_date(date(2020, 11, 15), "year")
        assert y.start == date(2020, 1, 1) and y.end == date(2021, 1, 1)

    def test_december_rolls_over(self):
        b = bin_for_date(date(2020, 12, 31), "month")
        assert b.end == date(2021, 1, 1)

    def test_partition_preserves_counts(self):
        rows = [
            f"A,B,1,1,2020-{m:02d}-{d:02d},2020-{m:02d}-{d + 1:02d}"
            for m in (1, 2, 3)
            for d in (3, 10, 20)
        ]
        records = parse_loans(loans_csv(*rows)).records
        for granularity in ("week", "month", "quarter", "year"):
            binned = bin_records(records, granularity)
            assert sum(len(v) for v in binned.values()) == len(records)
            assert list(binned) == sorted(binned, key=lambda b: b.start)

    def test_unknown_granularity(self):
        with pytest.raises(ValueError):
            bin_for_date(date(2020, 1, 1), "fortnight")


class TestRoundTrip:
    def test_write_then_parse_identical(self, tmp_path):
        records = parse_loans(
            loans_csv(
                "A,B,10.123456789,4.25,2020-01-05,2020-01-06",
                "B,C,0.001,14.99,2020-01-07,2020-01-12",
            )
        ).records
        path = tmp_path / "loans.csv"
        write_loans_csv(records, path)
        with open_text(path) as fh:
            again = parse_loans(fh).records
        assert again == records

    def test_gzip_transparent(self, tmp_path):
        text = HEADER + "\nA,B,1.5,2.0,2020-01-05,2020-01-06\n"
        path = tmp_path / "loans.csv.gz"
        with gzip.open(path, "wt", encoding="utf-8") as fh:
            fh.write(text)
        with open_text(path) as fh:
            parsed = parse_loans(fh)
        assert len(parsed.records) == 1


class TestTimeBin:
    def test_label(self):
        b = TimeBin("month", date(2020, 1, 1), date(2020, 2, 1))
        assert b.label == "2020-01-01"

    def test_end_after_start(self):
        with pytest.raises(ValueError):
            TimeBin("month", date(2020, 2, 1), date(2020, 1, 1))
