"""Heavy-tailed distribution fitting, model selection and interbank
network measures."""

from .distributions import (
    DistributionKind,
    DistributionSpec,
    FitResult,
    ccdf,
    fit_mle,
    fit_power_law,
    loglikelihood,
    pdf,
    sample,
)
from .errors import (
    DegenerateDataError,
    DomainError,
    InconclusiveDataError,
    MissingDataError,
    ParameterError,
    ParseError,
    TailbankError,
)
from .estimator import TailModelSelector
from .ingestion import (
    BalanceSheetRecord,
    LoanRecord,
    TimeBin,
    bin_records,
    parse_balance_sheets,
    parse_loans,
)
from .network import Measure, MeasureSeries, NetworkViews, build_networks
from .selection import (
    PairComparison,
    RankingReport,
    compare_pair,
    fit_full_range,
    p_value,
    rank_candidates,
)
from .synthgen import MarketConfig, RegimePhase, bootstrap_resample, generate_market
from .tail import TailSelection, ks_statistic, select_xmin, tail_fraction

__version__ = "0.1.0"

__all__ = [
    "DistributionKind",
    "DistributionSpec",
    "FitResult",
    "pdf",
    "ccdf",
    "sample",
    "fit_power_law",
    "fit_mle",
    "loglikelihood",
    "TailSelection",
    "ks_statistic",
    "select_xmin",
    "tail_fraction",
    "PairComparison",
    "RankingReport",
    "compare_pair",
    "p_value",
    "rank_candidates",
    "fit_full_range",
    "TailModelSelector",
    "Measure",
    "MeasureSeries",
    "NetworkViews",
    "build_networks",
    "LoanRecord",
    "BalanceSheetRecord",
    "TimeBin",
    "parse_loans",
    "parse_balance_sheets",
    "bin_records",
    "MarketConfig",
    "RegimePhase",
    "generate_market",
    "bootstrap_resample",
    "TailbankError",
    "ParameterError",
    "DomainError",
    "DegenerateDataError",
    "InconclusiveDataError",
    "ParseError",
    "MissingDataError",
]
