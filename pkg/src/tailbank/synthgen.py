"""Synthetic interbank loan streams with known ground truth.

The generator stands in for proprietary loan data: per bin, each bank
issues a number of loans governed by its activity propensity, to
counterparties chosen proportionally to their propensity, with sizes
drawn from a configurable law. Every draw is controlled by seeds derived
from (seed, stream, bin index), so serial and parallel generation agree.
Bootstrap resampling of measure series lives here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, timedelta

import numpy as np

from . import distributions as dist
from .distributions import DistributionSpec
from .ingestion import LoanRecord, TimeBin, bin_for_date

__all__ = ["RegimePhase", "MarketConfig", "generate_market", "bootstrap_resample"]

DEFAULT_BOOTSTRAP_REPS = 1000


@dataclass(frozen=True)
class RegimePhase:
    """Scales bank participation and loan volume over a range of bins
    (inclusive start, exclusive end), e.g. growth or crisis phases."""

    start_bin: int
    end_bin: int
    bank_scale: float = 1.0
    loan_scale: float = 1.0


@dataclass(frozen=True)
class MarketConfig:
    n_banks: int
    n_bins: int
    loan_size_law: DistributionSpec
    seed: int
    granularity: str = "month"
    start: date = date(2001, 1, 1)
    activity_law: DistributionSpec | None = None
    fixed_loans_per_bank: int | None = None
    regime_schedule: tuple[RegimePhase, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n_banks < 2:
            raise ValueError("need at least two banks")
        if self.n_bins < 1:
            raise ValueError("need at least one bin")
        if self.activity_law is None and self.fixed_loans_per_bank is None:
            raise ValueError("set either activity_law or fixed_loans_per_bank")


def _phase_scales(config: MarketConfig, bin_index: int) -> tuple[float, float]:
    for phase in config.regime_schedule:
        if phase.start_bin <= bin_index < phase.end_bin:
            return phase.bank_scale, phase.loan_scale
    return 1.0, 1.0


def _bins(config: MarketConfig) -> list[TimeBin]:
    bins = []
    cursor = config.start
    for _ in range(config.n_bins):
        b = bin_for_date(cursor, config.granularity)
        bins.append(b)
        cursor = b.end
    return bins


def generate_market(config: MarketConfig) -> list[LoanRecord]:
    """Generate the loan stream; byte-identical for a fixed config."""
    bank_ids = [f"B{i:04d}" for i in range(config.n_banks)]
    if config.activity_law is not None:
        propensity = dist.sample(
            config.activity_law,
            config.n_banks,
            seed=np.random.SeedSequence([config.seed, 0]).generate_state(1)[0],
        )
        # undo the sampler's sort so propensities attach to banks randomly
        rng0 = np.random.default_rng(np.random.SeedSequence([config.seed, 1]))
        propensity = propensity[rng0.permutation(config.n_banks)]
    else:
        propensity = np.ones(config.n_banks)

    records: list[LoanRecord] = []
    for b_idx, bin_ in enumerate(_bins(config)):
        records.extend(_generate_bin(config, bank_ids, propensity, b_idx, bin_))
    return records


def _generate_bin(config, bank_ids, propensity, b_idx, bin_) -> list[LoanRecord]:
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 2, b_idx]))
    bank_scale, loan_scale = _phase_scales(config, b_idx)
    n_active = max(2, int(round(config.n_banks * bank_scale)))
    active = np.arange(len(bank_ids))[:n_active]
    prop = propensity[active]
    weights = prop / prop.sum()

    if config.fixed_loans_per_bank is not None:
        counts = np.full(n_active, int(round(config.fixed_loans_per_bank * loan_scale)))
    else:
        counts = rng.poisson(prop * loan_scale)
    total = int(counts.sum())
    if total == 0:
        return []

    sizes = dist.sample(
        config.loan_size_law,
        total,
        seed=np.random.SeedSequence([config.seed, 3, b_idx]).generate_state(1)[0],
    )
    sizes = sizes[rng.permutation(total)]

    issuers = np.repeat(np.arange(n_active), counts)
    # counterparty proportional to propensity, never the issuer
    receivers = rng.choice(n_active, size=total, p=weights)
    clash = receivers == issuers
    while np.any(clash):
        receivers[clash] = rng.choice(n_active, size=int(clash.sum()), p=weights)
        clash = receivers == issuers

    n_days = (bin_.end - bin_.start).days
    day_offsets = rng.integers(0, n_days, size=total)
    spans = rng.integers(1, 8, size=total)
    rates = np.round(rng.uniform(1.0, 15.0, size=total), 2)

    records = []
    for k in range(total):
        reported = bin_.start + timedelta(days=int(day_offsets[k]))
        records.append(
            LoanRecord(
                issuer=bank_ids[active[issuers[k]]],
                receiver=bank_ids[active[receivers[k]]],
                size=float(sizes[k]),
                interest_rate=float(rates[k]),
                reporting_date=reported,
                maturity_date=reported + timedelta(days=int(spans[k])),
            )
        )
    records.sort(key=lambda r: (r.reporting_date, r.issuer, r.receiver, r.size))
    return records


def bootstrap_resample(values, n_reps: int = DEFAULT_BOOTSTRAP_REPS, seed: int = 0):
    """Uniform with-replacement resamples of the original length,
    deterministic per seed."""
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        raise ValueError("cannot bootstrap an empty series")
    if n_reps < 1:
        raise ValueError("n_reps must be >= 1")
    n = len(values)
    out = []
    for r in range(n_reps):
        rng = np.random.default_rng(np.random.SeedSequence([seed, r]))
        out.append(values[rng.integers(0, n, size=n)])
    return out
