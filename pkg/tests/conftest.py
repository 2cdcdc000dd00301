"""Shared fixtures and oracles for the test suite."""

import numpy as np
import pytest

from tailbank import DistributionKind, DistributionSpec


def spec_pl(alpha=2.5, x_min=1.0):
    return DistributionSpec(DistributionKind.POWER_LAW, x_min=x_min, alpha=alpha)


def spec_tpl(alpha=2.0, lam=1e-3, x_min=1.0):
    return DistributionSpec(
        DistributionKind.TRUNCATED_POWER_LAW, x_min=x_min, alpha=alpha, lam=lam
    )


def spec_exp(lam=0.5, x_min=1.0):
    return DistributionSpec(DistributionKind.EXPONENTIAL, x_min=x_min, lam=lam)


def spec_sexp(lam=0.29, beta=0.55, x_min=1.0):
    return DistributionSpec(
        DistributionKind.STRETCHED_EXPONENTIAL, x_min=x_min, lam=lam, beta=beta
    )


def spec_ln(mu=0.0, sigma=1.0, x_min=1.0):
    return DistributionSpec(
        DistributionKind.LOG_NORMAL, x_min=x_min, mu=mu, sigma=sigma
    )


REFERENCE_SPECS = {
    DistributionKind.POWER_LAW: spec_pl(),
    DistributionKind.TRUNCATED_POWER_LAW: spec_tpl(lam=0.01),
    DistributionKind.EXPONENTIAL: spec_exp(),
    DistributionKind.STRETCHED_EXPONENTIAL: spec_sexp(),
    DistributionKind.LOG_NORMAL: spec_ln(),
}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260824)
