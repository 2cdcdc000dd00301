"""CSV ingestion of loans and balance sheets, and calendar time binning.

Loan files carry the columns ``issuer,receiver,size,rate,reporting_date,
maturity_date`` (ISO dates, UTF-8, '.' decimals); balance files carry
``bank,month,assets,capital``. Files ending in ``.gz`` are transparently
decompressed. Only loans with a maturity span of at most seven days are
retained; longer ones are dropped and counted.

Loans are binned by reporting date. The data describe repayment rather
than issuance timing, so for the retained (<= 7 day) loans this choice is
off by at most one bin at weekly granularity.
"""

from __future__ import annotations

import csv
import gzip
import io
import re
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path

from .errors import ParseError

__all__ = [
    "LoanRecord",
    "BalanceSheetRecord",
    "TimeBin",
    "LoanParse",
    "parse_loans",
    "parse_balance_sheets",
    "bin_records",
    "bin_for_date",
    "write_loans_csv",
    "open_text",
    "GRANULARITIES",
    "LOAN_COLUMNS",
    "BALANCE_COLUMNS",
    "MAX_MATURITY_DAYS",
]

GRANULARITIES = ("week", "month", "quarter", "year")
LOAN_COLUMNS = ["issuer", "receiver", "size", "rate", "reporting_date", "maturity_date"]
BALANCE_COLUMNS = ["bank", "month", "assets", "capital"]
MAX_MATURITY_DAYS = 7

_MONTH_RE = re.compile(r"^\d{4}-\d{2}$")


@dataclass(frozen=True)
class LoanRecord:
    issuer: str
    receiver: str
    size: float
    interest_rate: float
    reporting_date: date
    maturity_date: date


@dataclass(frozen=True)
class BalanceSheetRecord:
    bank: str
    month: str  # "YYYY-MM"
    total_assets: float
    capital: float


@dataclass(frozen=True, order=True)
class TimeBin:
    granularity: str
    start: date
    end: date  # exclusive

    def __post_init__(self):
        if self.granularity not in GRANULARITIES:
            raise ValueError(f"unknown granularity {self.granularity!r}")
        if not self.end > self.start:
            raise ValueError("bin end must be after start")

    @property
    def label(self) -> str:
        return self.start.isoformat()


@dataclass(frozen=True)
class LoanParse:
    """Parsed loans plus the count of long-maturity rows dropped."""

    records: list[LoanRecord]
    dropped_long_maturity: int


def open_text(path: str | Path):
    """Open a possibly gzip-compressed text file for reading."""
    path = Path(path)
    if path.suffix == ".gz":
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, encoding="utf-8")


def _parse_date(value: str, line_no: int, column: str) -> date:
    try:
        return date.fromisoformat(value.strip())
    except ValueError as exc:
        raise ParseError(f"line {line_no}: bad {column} {value!r}") from exc


def _parse_float(value: str, line_no: int, column: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise ParseError(f"line {line_no}: bad {column} {value!r}") from exc


def parse_loans(source) -> LoanParse:
    """Parse a loan CSV stream; raises ParseError (with line number) on
    malformed or invariant-violating rows."""
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None:
        return LoanParse(records=[], dropped_long_maturity=0)
    if [h.strip() for h in header] != LOAN_COLUMNS:
        raise ParseError(f"expected loan header {','.join(LOAN_COLUMNS)!r}")
    records: list[LoanRecord] = []
    dropped = 0
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(LOAN_COLUMNS):
            raise ParseError(f"line {line_no}: expected {len(LOAN_COLUMNS)} fields")
        issuer, receiver = row[0].strip(), row[1].strip()
        size = _parse_float(row[2], line_no, "size")
        rate = _parse_float(row[3], line_no, "rate")
        reported = _parse_date(row[4], line_no, "reporting_date")
        maturity = _parse_date(row[5], line_no, "maturity_date")
        if not issuer or not receiver:
            raise ParseError(f"line {line_no}: empty bank id")
        if issuer == receiver:
            raise ParseError(f"line {line_no}: self-loan for bank {issuer!r}")
        if size <= 0:
            raise ParseError(f"line {line_no}: non-positive size {size}")
        if maturity < reported:
            raise ParseError(f"line {line_no}: maturity before reporting date")
        if (maturity - reported).days > MAX_MATURITY_DAYS:
            dropped += 1
            continue
        records.append(
            LoanRecord(
                issuer=issuer,
                receiver=receiver,
                size=size,
                interest_rate=rate,
                reporting_date=reported,
                maturity_date=maturity,
            )
        )
    return LoanParse(records=records, dropped_long_maturity=dropped)


def parse_balance_sheets(source) -> list[BalanceSheetRecord]:
    """Parse a balance-sheet CSV stream; duplicate (bank, month) keys are
    an error. Negative values pass through (filtered at measure level)."""
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None:
        return []
    if [h.strip() for h in header] != BALANCE_COLUMNS:
        raise ParseError(f"expected balance header {','.join(BALANCE_COLUMNS)!r}")
    records: list[BalanceSheetRecord] = []
    seen: set[tuple[str, str]] = set()
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(BALANCE_COLUMNS):
            raise ParseError(f"line {line_no}: expected {len(BALANCE_COLUMNS)} fields")
        bank, month = row[0].strip(), row[1].strip()
        if not _MONTH_RE.match(month):
            raise ParseError(f"line {line_no}: bad month {month!r}, want YYYY-MM")
        key = (bank, month)
        if key in seen:
            raise ParseError(f"line {line_no}: duplicate record for {key}")
        seen.add(key)
        records.append(
            BalanceSheetRecord(
                bank=bank,
                month=month,
                total_assets=_parse_float(row[2], line_no, "assets"),
                capital=_parse_float(row[3], line_no, "capital"),
            )
        )
    return records


def bin_for_date(day: date, granularity: str) -> TimeBin:
    """The calendar bin containing the given date. Weeks start Monday;
    quarters are calendar quarters."""
    if granularity == "week":
        start = day - timedelta(days=day.weekday())
        return TimeBin("week", start, start + timedelta(days=7))
    if granularity == "month":
        start = day.replace(day=1)
        end = date(start.year + (start.month == 12), start.month % 12 + 1, 1)
        return TimeBin("month", start, end)
    if granularity == "quarter":
        q_month = 3 * ((day.month - 1) // 3) + 1
        start = date(day.year, q_month, 1)
        end = (
            date(day.year + 1, 1, 1)
            if q_month == 10
            else date(day.year, q_month + 3, 1)
        )
        return TimeBin("quarter", start, end)
    if granularity == "year":
        return TimeBin("year", date(day.year, 1, 1), date(day.year + 1, 1, 1))
    raise ValueError(f"unknown granularity {granularity!r}")


def bin_records(
    loans: list[LoanRecord], granularity: str
) -> dict[TimeBin, list[LoanRecord]]:
    """Partition loans into calendar bins by reporting date, keyed in
    chronological order."""
    buckets: dict[TimeBin, list[LoanRecord]] = {}
    for ln in loans:
        buckets.setdefault(bin_for_date(ln.reporting_date, granularity), []).append(ln)
    return dict(sorted(buckets.items(), key=lambda kv: kv[0].start))


def write_loans_csv(records: list[LoanRecord], path: str | Path) -> None:
    """Write loans in the canonical CSV layout (round-trips through
    parse_loans)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LOAN_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.issuer,
                    r.receiver,
                    repr(r.size),
                    repr(r.interest_rate),
                    r.reporting_date.isoformat(),
                    r.maturity_date.isoformat(),
                ]
            )
