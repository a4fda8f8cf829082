import numpy as np
import pytest

from critjac import coeffs


@pytest.fixture(scope="session")
def laguerre0():
    m = coeffs.laguerre_model(0.0)
    return m, coeffs.classify(m)


@pytest.fixture(scope="session")
def laguerre1():
    m = coeffs.laguerre_model(1.0)
    return m, coeffs.classify(m)


def power(sigma, alpha, beta, gamma=1.0):
    m = coeffs.power_model(sigma, alpha, beta, gamma)
    return m, coeffs.classify(m)


def loglog_slope(ns, values):
    """Least-squares slope of log(values) against log(ns)."""
    ns = np.asarray(ns, dtype=float)
    A = np.vstack([np.log(ns), np.ones_like(ns)]).T
    return float(np.linalg.lstsq(A, np.log(np.asarray(values)), rcond=None)[0][0])


def log_sample_indices(lo, hi, count=40):
    return np.unique(np.logspace(np.log10(lo), np.log10(hi), count).astype(int))
