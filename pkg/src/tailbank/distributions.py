"""Five candidate heavy-tailed families on [x_min, inf).

Each family is normalized to unit mass on [x_min, inf). The power law and
exponential have closed-form constants; the stretched exponential and
log-normal reduce to elementary/erfc expressions; the truncated power law
needs the upper incomplete gamma function with a possibly negative first
argument, which we evaluate with mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import mpmath as mp
import numpy as np
from scipy import optimize
from scipy.stats import norm

from .errors import DegenerateDataError, DomainError, ParameterError

__all__ = [
    "DistributionKind",
    "DistributionSpec",
    "FitResult",
    "pdf",
    "logpdf",
    "ccdf",
    "sample",
    "fit_power_law",
    "fit_mle",
    "loglikelihood",
]

# Optimizer settings for the two-parameter families.
_MAXITER = 10_000
_FATOL = 1e-8
_SEXP_BETA_BOUNDS = (1e-3, 50.0)
_SEXP_MAX_LOG_LAM = 700.0


class DistributionKind(Enum):
    """The candidate families, in stable report-column order."""

    POWER_LAW = "power_law"
    TRUNCATED_POWER_LAW = "truncated_power_law"
    EXPONENTIAL = "exponential"
    STRETCHED_EXPONENTIAL = "stretched_exponential"
    LOG_NORMAL = "log_normal"

    @property
    def short(self) -> str:
        return _SHORT_NAMES[self]

    @property
    def param_names(self) -> tuple[str, ...]:
        return _PARAM_NAMES[self]


_SHORT_NAMES = {
    DistributionKind.POWER_LAW: "PL",
    DistributionKind.TRUNCATED_POWER_LAW: "TPL",
    DistributionKind.EXPONENTIAL: "Exp",
    DistributionKind.STRETCHED_EXPONENTIAL: "SExp",
    DistributionKind.LOG_NORMAL: "LN",
}

_PARAM_NAMES = {
    DistributionKind.POWER_LAW: ("alpha",),
    DistributionKind.TRUNCATED_POWER_LAW: ("alpha", "lam"),
    DistributionKind.EXPONENTIAL: ("lam",),
    DistributionKind.STRETCHED_EXPONENTIAL: ("lam", "beta"),
    DistributionKind.LOG_NORMAL: ("mu", "sigma"),
}


@dataclass(frozen=True)
class DistributionSpec:
    """A candidate family with concrete parameters and support bound.

    The normalization constant is always derived from (kind, params, x_min),
    never stored.
    """

    kind: DistributionKind
    x_min: float
    alpha: float | None = None
    lam: float | None = None
    beta: float | None = None
    mu: float | None = None
    sigma: float | None = None

    def __post_init__(self):
        k = self.kind
        # the power laws diverge at 0; the other supports close at 0
        if k in (DistributionKind.POWER_LAW, DistributionKind.TRUNCATED_POWER_LAW):
            if not self.x_min > 0:
                raise ParameterError(f"x_min must be positive, got {self.x_min}")
        elif self.x_min < 0:
            raise ParameterError(f"x_min must be >= 0, got {self.x_min}")
        for name in k.param_names:
            if getattr(self, name) is None:
                raise ParameterError(f"{k.short} requires parameter {name!r}")
        for name in ("alpha", "lam", "beta", "mu", "sigma"):
            if name not in k.param_names and getattr(self, name) is not None:
                raise ParameterError(f"{k.short} does not take parameter {name!r}")
        if k is DistributionKind.POWER_LAW and not self.alpha > 1:
            raise ParameterError(f"power law needs alpha > 1, got {self.alpha}")
        if k is DistributionKind.TRUNCATED_POWER_LAW:
            # lam = 0 is the analytic power-law limit and then needs alpha > 1
            if self.lam < 0:
                raise ParameterError(f"lam must be >= 0, got {self.lam}")
            if self.lam == 0 and not self.alpha > 1:
                raise ParameterError("truncated power law with lam=0 needs alpha > 1")
        if k in (DistributionKind.EXPONENTIAL, DistributionKind.STRETCHED_EXPONENTIAL):
            if not self.lam > 0:
                raise ParameterError(f"lam must be positive, got {self.lam}")
        if k is DistributionKind.STRETCHED_EXPONENTIAL and not self.beta > 0:
            raise ParameterError(f"beta must be positive, got {self.beta}")
        if k is DistributionKind.LOG_NORMAL and not self.sigma > 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")

    @property
    def params(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.kind.param_names}


@dataclass(frozen=True)
class FitResult:
    """A fitted family with its maximized loglikelihood over the tail."""

    spec: DistributionSpec
    loglik: float
    n_tail: int
    converged: bool = True


def _check_domain(spec: DistributionSpec, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x < spec.x_min):
        raise DomainError(f"value below x_min={spec.x_min}")
    return x


def _sexp_pow(lam: float, x, b: float):
    """(lam * x) ** b computed in log space so huge lam cannot overflow."""
    with np.errstate(divide="ignore"):
        out = np.exp(b * (math.log(lam) + np.log(x)))
    return out


def _tpl_log_mass(alpha: float, lam: float, x_min: float) -> float:
    """ln of the unnormalized mass  int_{x_min}^inf x^-alpha e^(-lam x) dx."""
    if lam == 0.0:
        # analytic power-law limit, requires alpha > 1
        return -math.log(alpha - 1.0) + (1.0 - alpha) * math.log(x_min)
    z = lam * x_min
    g = mp.gammainc(1.0 - alpha, z)
    if g <= 0:
        raise ParameterError("truncated power law mass underflowed")
    return float((alpha - 1.0) * mp.log(lam) + mp.log(g))


def logpdf(spec: DistributionSpec, x) -> np.ndarray | float:
    """Natural log of the normalized density; vectorized over x."""
    scalar = np.isscalar(x)
    x = _check_domain(spec, x)
    k, xm = spec.kind, spec.x_min
    if k is DistributionKind.POWER_LAW:
        a = spec.alpha
        out = math.log(a - 1.0) + (a - 1.0) * math.log(xm) - a * np.log(x)
    elif k is DistributionKind.EXPONENTIAL:
        lam = spec.lam
        out = math.log(lam) + lam * xm - lam * x
    elif k is DistributionKind.STRETCHED_EXPONENTIAL:
        lam, b = spec.lam, spec.beta
        # powers of lam*x via logs: lam*x can overflow where (lam*x)**b is finite
        log_c = math.log(b) + b * math.log(lam) + _sexp_pow(lam, xm, b)
        out = log_c + (b - 1.0) * np.log(x) - _sexp_pow(lam, x, b)
    elif k is DistributionKind.LOG_NORMAL:
        mu, s = spec.mu, spec.sigma
        z0 = (math.log(xm) - mu) / s if xm > 0 else -np.inf
        logx = np.log(x)
        out = (
            -math.log(s)
            - 0.5 * math.log(2.0 * math.pi)
            - norm.logsf(z0)
            - logx
            - (logx - mu) ** 2 / (2.0 * s * s)
        )
    elif k is DistributionKind.TRUNCATED_POWER_LAW:
        a, lam = spec.alpha, spec.lam
        out = -_tpl_log_mass(a, lam, xm) - a * np.log(x) - lam * x
    else:  # pragma: no cover
        raise ParameterError(f"unknown kind {k}")
    return float(out) if scalar else np.asarray(out)


def pdf(spec: DistributionSpec, x) -> np.ndarray | float:
    """Normalized density on [x_min, inf)."""
    return np.exp(logpdf(spec, x))


def ccdf(spec: DistributionSpec, x) -> np.ndarray | float:
    """P(X >= x) under the normalized family; ccdf(x_min) = 1."""
    scalar = np.isscalar(x)
    x = _check_domain(spec, x)
    k, xm = spec.kind, spec.x_min
    if k is DistributionKind.POWER_LAW:
        out = (x / xm) ** (1.0 - spec.alpha)
    elif k is DistributionKind.EXPONENTIAL:
        out = np.exp(-spec.lam * (x - xm))
    elif k is DistributionKind.STRETCHED_EXPONENTIAL:
        lam, b = spec.lam, spec.beta
        out = np.exp(_sexp_pow(lam, xm, b) - _sexp_pow(lam, x, b))
    elif k is DistributionKind.LOG_NORMAL:
        mu, s = spec.mu, spec.sigma
        z0 = (math.log(xm) - mu) / s if xm > 0 else -np.inf
        out = np.exp(norm.logsf((np.log(x) - mu) / s) - norm.logsf(z0))
    elif k is DistributionKind.TRUNCATED_POWER_LAW:
        a, lam = spec.alpha, spec.lam
        if lam == 0.0:
            out = (x / xm) ** (1.0 - a)
        else:
            log_total = _tpl_log_mass(a, lam, xm)
            flat = np.atleast_1d(x)
            vals = np.empty(flat.shape)
            for i, xi in enumerate(flat):
                g = mp.gammainc(1.0 - a, lam * xi)
                if g <= 0:
                    vals[i] = 0.0
                else:
                    vals[i] = float(
                        mp.exp((a - 1.0) * mp.log(lam) + mp.log(g) - log_total)
                    )
            out = vals.reshape(np.shape(x))
    else:  # pragma: no cover
        raise ParameterError(f"unknown kind {k}")
    out = np.clip(out, 0.0, 1.0)
    return float(out) if scalar else np.asarray(out)


def sample(spec: DistributionSpec, n: int, seed: int) -> np.ndarray:
    """Draw n values >= x_min, sorted ascending; deterministic per seed.

    Inverse-CDF sampling wherever the quantile function is elementary;
    rejection from a power-law or exponential envelope for the truncated
    power law.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    k, xm = spec.kind, spec.x_min
    if k is DistributionKind.POWER_LAW:
        u = rng.random(n)
        out = xm * u ** (-1.0 / (spec.alpha - 1.0))
    elif k is DistributionKind.EXPONENTIAL:
        out = xm - np.log(rng.random(n)) / spec.lam
    elif k is DistributionKind.STRETCHED_EXPONENTIAL:
        lam, b = spec.lam, spec.beta
        u = rng.random(n)
        out = ((lam * xm) ** b - np.log(u)) ** (1.0 / b) / lam
    elif k is DistributionKind.LOG_NORMAL:
        mu, s = spec.mu, spec.sigma
        z0 = (math.log(xm) - mu) / s if xm > 0 else -np.inf
        sf0 = norm.sf(z0)
        u = rng.random(n)
        out = np.exp(mu + s * norm.isf(u * sf0))
    elif k is DistributionKind.TRUNCATED_POWER_LAW:
        out = _sample_tpl(spec, n, rng)
    else:  # pragma: no cover
        raise ParameterError(f"unknown kind {k}")
    out = np.maximum(out, xm)
    out.sort()
    return out


def _sample_tpl(spec: DistributionSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    a, lam, xm = spec.alpha, spec.lam, spec.x_min
    if lam == 0.0:
        u = rng.random(n)
        return xm * u ** (-1.0 / (a - 1.0))
    if a < 0:
        raise ParameterError("truncated power-law sampler requires alpha >= 0")
    chunks: list[np.ndarray] = []
    remaining = n
    while remaining > 0:
        m = max(2 * remaining, 1024)
        u = rng.random(m)
        v = rng.random(m)
        if a > 1:
            # power-law proposal, exponential acceptance
            x = xm * u ** (-1.0 / (a - 1.0))
            acc = v < np.exp(-lam * (x - xm))
        else:
            # shifted-exponential proposal, power acceptance (0 <= a <= 1)
            x = xm - np.log(u) / lam
            acc = v < (x / xm) ** (-a)
        got = x[acc]
        chunks.append(got[:remaining])
        remaining -= min(len(got), remaining)
    return np.concatenate(chunks)


def _tail(samples: np.ndarray, x_min: float) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    if np.any(samples <= 0):
        raise DomainError("all samples must be positive")
    tail = samples[samples >= x_min]
    return np.sort(tail)


def fit_power_law(samples, x_min: float) -> FitResult:
    """Closed-form ML estimate of the power-law exponent over the tail."""
    tail = _tail(samples, x_min)
    n = len(tail)
    if n < 1:
        raise DegenerateDataError("no samples at or above x_min")
    s = float(np.sum(np.log(tail / x_min)))
    if s <= 0:
        raise DegenerateDataError("all tail samples equal x_min")
    alpha = 1.0 + n / s
    spec = DistributionSpec(DistributionKind.POWER_LAW, x_min=x_min, alpha=alpha)
    ll = n * math.log(alpha - 1.0) + n * (alpha - 1.0) * math.log(x_min) - alpha * float(
        np.sum(np.log(tail))
    )
    return FitResult(spec=spec, loglik=ll, n_tail=n, converged=True)


def _minimize(neg_ll, x0, bounds, n):
    # objective is scaled per point so fatol acts as a relative tolerance
    res = optimize.minimize(
        lambda p: neg_ll(p) / n,
        x0=np.asarray(x0, dtype=float),
        method="Nelder-Mead",
        bounds=bounds,
        options={"maxiter": _MAXITER, "fatol": _FATOL, "xatol": 1e-5},
    )
    return res.x, float(-res.fun) * n, bool(res.success) and np.isfinite(res.fun)


def fit_mle(kind: DistributionKind, samples, x_min: float, x0=None) -> FitResult:
    """Maximum-likelihood fit of one family to the tail above x_min.

    Closed forms for the power law and exponential; Nelder-Mead from a
    moment-based start for the two-parameter families. An explicit ``x0``
    overrides the default start (used to warm-start bootstrap refits).
    """
    if kind is DistributionKind.POWER_LAW:
        return fit_power_law(samples, x_min)
    tail = _tail(samples, x_min)
    n = len(tail)
    if n < 2:
        raise DegenerateDataError("need at least two tail samples")
    log_tail = np.log(tail)
    s_log = float(np.sum(log_tail))
    s_x = float(np.sum(tail))
    mean = s_x / n

    if kind is DistributionKind.EXPONENTIAL:
        if mean <= x_min:
            raise DegenerateDataError("tail mean equals x_min")
        lam = 1.0 / (mean - x_min)
        spec = DistributionSpec(kind, x_min=x_min, lam=lam)
        ll = n * (math.log(lam) + lam * x_min) - lam * s_x
        return FitResult(spec=spec, loglik=ll, n_tail=n, converged=True)

    if kind is DistributionKind.LOG_NORMAL:
        mu0, sd0 = float(np.mean(log_tail)), float(np.std(log_tail))
        if sd0 == 0.0:
            raise DegenerateDataError("zero-variance tail")
        s2_log = float(np.sum(log_tail**2))
        log_xm = math.log(x_min)
        half_log_2pi = 0.5 * math.log(2.0 * math.pi)

        def neg_ll(p):
            mu, s = p
            if s <= 0:
                return np.inf
            z0 = (log_xm - mu) / s
            quad = (s2_log - 2.0 * mu * s_log + n * mu * mu) / (2.0 * s * s)
            ll = -n * (math.log(s) + half_log_2pi + norm.logsf(z0)) - s_log - quad
            return -ll if np.isfinite(ll) else np.inf

        p, ll, ok = _minimize(
            neg_ll, x0 if x0 is not None else [mu0, sd0],
            [(None, None), (1e-12, None)], n,
        )
        spec = DistributionSpec(kind, x_min=x_min, mu=float(p[0]), sigma=float(p[1]))
        return FitResult(spec=spec, loglik=ll, n_tail=n, converged=ok)

    if kind is DistributionKind.STRETCHED_EXPONENTIAL:
        if np.all(tail == tail[0]):
            raise DegenerateDataError("zero-variance tail")
        # For fixed beta the scale has the closed form
        #   lam^beta = n / sum(x_i^beta - x_min^beta),
        # which reduces the fit to a 1-D profile search over beta:
        #   ll(beta) = n (ln beta + ln lam^beta - 1) + (beta - 1) sum(ln x).
        xm_pow = (lambda b: x_min**b) if x_min > 0 else (lambda b: 0.0)

        def log_lam_hat(b):
            with np.errstate(over="ignore"):
                s_pow = float(np.sum(np.exp(b * log_tail))) - n * xm_pow(b)
            if not np.isfinite(s_pow) or s_pow <= 0:
                return None
            return math.log(n / s_pow) / b

        def profile(b):
            log_lam = log_lam_hat(b)
            if log_lam is None:
                return np.inf
            ll = n * (math.log(b) + b * log_lam - 1.0) + (b - 1.0) * s_log
            if not np.isfinite(ll):
                return np.inf
            # steer the search away from scales that overflow a float;
            # near-degenerate fits (beta -> 0) otherwise drive lam past 1e308
            return -ll / n + max(0.0, log_lam - _SEXP_MAX_LOG_LAM) * 1e-3

        res = optimize.minimize_scalar(
            profile, method="bounded", bounds=_SEXP_BETA_BOUNDS,
            options={"xatol": 1e-8},
        )
        b = float(res.x)
        log_lam = log_lam_hat(b)
        ok = bool(res.success) and np.isfinite(res.fun) and log_lam is not None
        lam = (
            math.exp(min(log_lam, _SEXP_MAX_LOG_LAM))
            if log_lam is not None
            else (1.0 / (mean - x_min) if mean > x_min else 1.0)
        )
        with np.errstate(over="ignore"):
            s_pow = float(np.sum(np.exp(b * log_tail)))
            lam_b = math.exp(b * math.log(lam))
            lxm_b = lam_b * xm_pow(b)
            ll = (
                n * (math.log(b) + b * math.log(lam) + lxm_b)
                + (b - 1.0) * s_log
                - lam_b * s_pow
            )
        if not np.isfinite(ll):
            ll, ok = float(-res.fun) * n, False
        spec = DistributionSpec(kind, x_min=x_min, lam=lam, beta=b)
        return FitResult(spec=spec, loglik=ll, n_tail=n, converged=ok)

    if kind is DistributionKind.TRUNCATED_POWER_LAW:
        if np.all(tail == tail[0]):
            raise DegenerateDataError("zero-variance tail")
        s_pl = s_log - n * math.log(x_min)
        alpha0 = 1.0 + n / s_pl if s_pl > 0 else 1.5
        lam0 = 1.0 / float(tail[-1])

        def neg_ll(p):
            a, lam = p
            if lam < 0 or (lam == 0 and a <= 1):
                return np.inf
            try:
                log_mass = _tpl_log_mass(a, lam, x_min)
            except ParameterError:
                return np.inf
            ll = -n * log_mass - a * s_log - lam * s_x
            return -ll if np.isfinite(ll) else np.inf

        p, ll, ok = _minimize(
            neg_ll,
            x0 if x0 is not None else [alpha0, lam0],
            [(-10.0, 20.0), (0.0, None)],
            n,
        )
        spec = DistributionSpec(kind, x_min=x_min, alpha=float(p[0]), lam=float(p[1]))
        return FitResult(spec=spec, loglik=ll, n_tail=n, converged=ok)

    raise ParameterError(f"unknown kind {kind}")  # pragma: no cover


def loglikelihood(spec: DistributionSpec, samples) -> float:
    """Sum of log-densities of the samples under the spec."""
    samples = np.asarray(samples, dtype=float)
    return float(np.sum(logpdf(spec, samples)))
