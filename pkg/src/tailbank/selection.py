"""Likelihood-ratio model selection among the five candidate families.

Pairwise comparisons use the variance-normalized mean log-density
difference (a Vuong-style statistic) with a two-sided normal p-value.
Candidates are ranked by the sum of their normalized ratios against all
rivals; the winner's rivals that are not significantly worse at the chosen
level are reported as alternates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from . import distributions as dist
from .distributions import DistributionKind, FitResult
from .errors import DegenerateDataError, DomainError, InconclusiveDataError
from .tail import DEFAULT_MIN_TAIL

__all__ = [
    "PairComparison",
    "RankingReport",
    "compare_pair",
    "p_value",
    "rank_candidates",
    "fit_full_range",
    "DEFAULT_LEVEL",
]

DEFAULT_LEVEL = 0.01

# Floating-point slop below which two log-density sequences count as identical.
_IDENTICAL_TOL = 1e-12


@dataclass(frozen=True)
class PairComparison:
    first: DistributionKind
    second: DistributionKind
    r_norm: float
    sigma12: float
    p_value: float

    def swapped(self) -> "PairComparison":
        return PairComparison(
            first=self.second,
            second=self.first,
            r_norm=-self.r_norm,
            sigma12=self.sigma12,
            p_value=self.p_value,
        )


@dataclass(frozen=True)
class RankingReport:
    fits: dict[DistributionKind, FitResult]
    pairs: list[PairComparison]
    g_scores: dict[DistributionKind, float]
    best: DistributionKind
    alternates: list[DistributionKind]
    regime: str  # "tail" | "full_range"
    excluded: list[DistributionKind] = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return bool(self.excluded)

    def pair(self, a: DistributionKind, b: DistributionKind) -> PairComparison:
        for pc in self.pairs:
            if pc.first is a and pc.second is b:
                return pc
            if pc.first is b and pc.second is a:
                return pc.swapped()
        raise KeyError((a, b))


def p_value(r_norm: float) -> float:
    """Two-sided standard-normal tail mass beyond |r_norm|."""
    return float(erfc(abs(r_norm) / math.sqrt(2.0)))


def compare_pair(fit1: FitResult, fit2: FitResult, samples) -> PairComparison:
    """Normalized loglikelihood ratio of two fits over the same tail."""
    if fit1.spec.x_min != fit2.spec.x_min:
        raise DomainError("fits must share the same x_min")
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    if n == 0:
        raise DomainError("empty sample")
    diff = np.asarray(dist.logpdf(fit1.spec, samples)) - np.asarray(
        dist.logpdf(fit2.spec, samples)
    )
    sigma = float(np.sqrt(np.mean((diff - diff.mean()) ** 2)))
    # variance at rounding-noise level counts as zero (constant difference)
    spread = float(np.max(np.abs(diff)))
    if sigma <= _IDENTICAL_TOL * max(1.0, spread):
        if spread <= _IDENTICAL_TOL:
            return PairComparison(fit1.spec.kind, fit2.spec.kind, 0.0, 0.0, 1.0)
        raise DegenerateDataError(
            "zero variance with nonzero mean log-density difference"
        )
    r = float(np.sum(diff) / (sigma * math.sqrt(n)))
    return PairComparison(fit1.spec.kind, fit2.spec.kind, r, sigma, p_value(r))


def rank_candidates(
    samples,
    x_min: float,
    level: float = DEFAULT_LEVEL,
    min_tail: int = DEFAULT_MIN_TAIL,
    regime: str = "tail",
    warm_start: dict[DistributionKind, FitResult] | None = None,
) -> RankingReport:
    """Fit all five families at x_min and rank them by g-score.

    Families whose fit fails or does not converge are excluded from the
    ranking and listed in ``excluded``; ``warm_start`` optionally seeds the
    two-parameter optimizers from previous fits (used by the bootstrap).
    """
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    samples = np.sort(np.asarray(samples, dtype=float))
    tail = samples[samples >= x_min]
    if len(tail) < min_tail:
        raise InconclusiveDataError(
            f"tail holds {len(tail)} points, below min_tail={min_tail}"
        )
    fits: dict[DistributionKind, FitResult] = {}
    excluded: list[DistributionKind] = []
    for kind in DistributionKind:
        x0 = None
        if warm_start and kind in warm_start:
            x0 = list(warm_start[kind].spec.params.values())
        try:
            fr = dist.fit_mle(kind, tail, x_min, x0=x0)
        except DegenerateDataError:
            excluded.append(kind)
            continue
        if fr.converged and np.isfinite(fr.loglik):
            fits[kind] = fr
        else:
            excluded.append(kind)
    if not fits:
        raise InconclusiveDataError("no candidate family could be fitted")

    kinds = [k for k in DistributionKind if k in fits]
    pairs: list[PairComparison] = []
    for i, a in enumerate(kinds):
        for b in kinds[i + 1 :]:
            pairs.append(compare_pair(fits[a], fits[b], tail))

    g = {k: 0.0 for k in kinds}
    for pc in pairs:
        g[pc.first] += pc.r_norm
        g[pc.second] -= pc.r_norm
    best = max(kinds, key=lambda k: g[k])

    report = RankingReport(
        fits=fits,
        pairs=pairs,
        g_scores=g,
        best=best,
        alternates=[],
        regime=regime,
        excluded=excluded,
    )
    alternates = [
        k for k in kinds if k is not best and report.pair(best, k).p_value >= level
    ]
    return RankingReport(
        fits=fits,
        pairs=pairs,
        g_scores=g,
        best=best,
        alternates=alternates,
        regime=regime,
        excluded=excluded,
    )


def fit_full_range(
    samples,
    level: float = DEFAULT_LEVEL,
    min_tail: int = DEFAULT_MIN_TAIL,
    warm_start: dict[DistributionKind, FitResult] | None = None,
) -> RankingReport:
    """Rank the candidates over the entire data range (x_min = smallest sample)."""
    samples = np.asarray(samples, dtype=float)
    if len(samples) == 0:
        raise DomainError("empty sample")
    if np.any(samples <= 0):
        raise DomainError("samples must be positive")
    return rank_candidates(
        samples,
        x_min=float(samples.min()),
        level=level,
        min_tail=min_tail,
        regime="full_range",
        warm_start=warm_start,
    )
