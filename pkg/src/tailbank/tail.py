"""Kolmogorov-Smirnov tail cut-off detection.

Every distinct sample value is a candidate cut-off; for each one we compute
the closed-form power-law exponent over the points at or above it and the
KS distance between the empirical and fitted CDFs. The candidate with the
smallest KS distance wins, ties going to the smaller cut-off. The scan is
O(N^2) in the worst case, so the inner loops are jit-compiled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numba
from numba import njit

# the TBB shipped with this image is too old; avoid the noisy fallback warning
numba.config.THREADING_LAYER = "workqueue"

from . import distributions as dist
from .errors import DegenerateDataError, DomainError, InconclusiveDataError

__all__ = ["TailSelection", "ks_statistic", "select_xmin", "tail_fraction"]

DEFAULT_MIN_TAIL = 10


@dataclass(frozen=True)
class TailSelection:
    """The selected cut-off and the power-law fit at that cut-off."""

    x_min_hat: float
    alpha_hat: float
    ks_z: float
    n_tail: int
    tail_fraction: float


def ks_statistic(spec: dist.DistributionSpec, samples) -> float:
    """Max deviation between the tail's empirical CDF and the model CDF."""
    samples = np.sort(np.asarray(samples, dtype=float))
    n = len(samples)
    if n == 0:
        raise DomainError("empty tail")
    if samples[0] < spec.x_min:
        raise DomainError("sample below x_min")
    model_cdf = 1.0 - np.asarray(dist.ccdf(spec, samples))
    steps_hi = np.arange(1, n + 1) / n
    steps_lo = np.arange(0, n) / n
    return float(max(np.max(steps_hi - model_cdf), np.max(model_cdf - steps_lo)))


@njit(cache=True, fastmath=True)
def _scan_kernel(xs, logs, min_tail):  # pragma: no cover - exercised via wrapper
    n = xs.size
    suffix = np.empty(n + 1)
    suffix[n] = 0.0
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + logs[i]
    n_cand = n - min_tail + 1
    best_j = -1
    best_z = np.inf
    best_alpha = np.nan
    for j in range(n_cand):
        if j > 0 and xs[j] == xs[j - 1]:
            continue
        nt = n - j
        s = suffix[j] - nt * logs[j]
        if s <= 0.0:
            continue
        alpha = 1.0 + nt / s
        c = alpha - 1.0
        lxm = logs[j]
        # coarse strided pass: a lower bound on Z; prunes candidates that
        # cannot beat the running best without touching every tail point
        stride = nt // 32
        if stride > 1:
            z_lb = 0.0
            for i in range(j, n, stride):
                p = 1.0 - np.exp(-c * (logs[i] - lxm))
                d_hi = (i - j + 1) / nt - p
                d_lo = p - (i - j) / nt
                if d_hi > z_lb:
                    z_lb = d_hi
                if d_lo > z_lb:
                    z_lb = d_lo
            if z_lb >= best_z:
                continue
        z = 0.0
        for i in range(j, n):
            p = 1.0 - np.exp(-c * (logs[i] - lxm))
            d_hi = (i - j + 1) / nt - p
            d_lo = p - (i - j) / nt
            if d_hi > z:
                z = d_hi
            if d_lo > z:
                z = d_lo
            if z >= best_z:
                break
        if z < best_z:
            best_z = z
            best_j = j
            best_alpha = alpha
    return best_j, best_alpha, best_z


def select_xmin(samples, min_tail: int = DEFAULT_MIN_TAIL) -> TailSelection:
    """Scan all candidate cut-offs and return the KS-optimal tail selection.

    Raises InconclusiveDataError when no candidate leaves at least
    ``min_tail`` usable points.
    """
    xs = np.sort(np.asarray(samples, dtype=float))
    if len(xs) and xs[0] <= 0:
        raise DomainError("samples must be positive")
    n = len(xs)
    if n < min_tail:
        raise InconclusiveDataError(
            f"{n} samples cannot satisfy min_tail={min_tail}"
        )
    j, alpha, z = _scan_kernel(xs, np.log(xs), min_tail)
    if j < 0:
        raise InconclusiveDataError("no candidate cut-off leaves a usable tail")
    nt = n - j
    return TailSelection(
        x_min_hat=float(xs[j]),
        alpha_hat=float(alpha),
        ks_z=float(z),
        n_tail=int(nt),
        tail_fraction=nt / n,
    )


def tail_fraction(selection: TailSelection, n_total: int) -> float:
    """Share of the sample at or above the selected cut-off."""
    if not n_total >= selection.n_tail >= 1:
        raise DegenerateDataError("n_total must be >= n_tail >= 1")
    return selection.n_tail / n_total
