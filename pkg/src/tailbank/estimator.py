"""Sklearn-style front end for tail detection and model selection."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils import check_array

from . import distributions as dist
from . import selection, tail

__all__ = ["TailModelSelector"]


def _as_positive_1d(X) -> np.ndarray:
    X = check_array(X, ensure_2d=False, dtype=float)
    X = np.ravel(X)
    if X.size == 0:
        raise ValueError("empty input")
    if np.any(X <= 0):
        raise ValueError("all values must be strictly positive")
    return X


class TailModelSelector(BaseEstimator):
    """Detects a tail cut-off (or uses the full range) and ranks the five
    candidate families by normalized loglikelihood ratios.

    Parameters
    ----------
    regime : "tail" fits above the KS-selected cut-off, "full" fits the
        entire range.
    min_tail : smallest usable tail size.
    level : significance level for alternate best-fit candidates.
    """

    def __init__(self, regime: str = "tail", min_tail: int = 10, level: float = 0.01):
        self.regime = regime
        self.min_tail = min_tail
        self.level = level

    def fit(self, X, y=None):
        if self.regime not in ("tail", "full"):
            raise ValueError("regime must be 'tail' or 'full'")
        X = _as_positive_1d(X)
        if self.regime == "tail":
            sel = tail.select_xmin(X, min_tail=self.min_tail)
            self.x_min_ = sel.x_min_hat
            self.alpha_pl_ = sel.alpha_hat
            self.ks_z_ = sel.ks_z
            self.tail_fraction_ = sel.tail_fraction
            report = selection.rank_candidates(
                X, self.x_min_, level=self.level, min_tail=self.min_tail
            )
        else:
            report = selection.fit_full_range(
                X, level=self.level, min_tail=self.min_tail
            )
            self.x_min_ = float(np.min(X))
            pl = report.fits.get(dist.DistributionKind.POWER_LAW)
            self.alpha_pl_ = pl.spec.alpha if pl else None
            self.ks_z_ = None
            self.tail_fraction_ = 1.0
        self.report_ = report
        self.best_kind_ = report.best
        self.best_spec_ = report.fits[report.best].spec
        self.n_tail_ = report.fits[report.best].n_tail
        return self

    def _check_fitted(self):
        if not hasattr(self, "report_"):
            raise NotFittedError("call fit first")

    def ccdf(self, x):
        """Complementary CDF of the best-fit family at x (x >= x_min_)."""
        self._check_fitted()
        return dist.ccdf(self.best_spec_, x)

    def score(self, X, y=None) -> float:
        """Mean log-density of the tail of X under the best fit."""
        self._check_fitted()
        X = _as_positive_1d(X)
        tail_x = X[X >= self.best_spec_.x_min]
        if tail_x.size == 0:
            raise ValueError("no samples at or above the fitted x_min")
        return dist.loglikelihood(self.best_spec_, tail_x) / tail_x.size
