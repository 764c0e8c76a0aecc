# src/measures/poisson.py
"""
Poisson kernels and Poisson mixtures of discrete mixing measures.
"""

import logging

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from src.errors import InvalidConfigurationError
from src.measures.discrete import CountDistribution, DiscreteMeasure

logger = logging.getLogger(__name__)


def poisson_pmf_matrix(ks, xs) -> np.ndarray:
    """
    Poisson pmf f(k; x) for every pair, shape (len(ks), len(xs)).

    Evaluated as exp(k ln x - x - lgamma(k + 1)) so large k does not
    overflow.
    """
    k = np.asarray(ks, dtype=float)[:, None]
    x = np.asarray(xs, dtype=float)[None, :]
    return np.exp(k * np.log(x) - x - gammaln(k + 1.0))


def poisson_cdf_matrix(k_max: int, xs) -> np.ndarray:
    """Poisson CDF h(k; x) for k = 0..k_max, shape (k_max + 1, len(xs))."""
    return np.cumsum(poisson_pmf_matrix(np.arange(k_max + 1), xs), axis=0)


def choose_k_max(top_atom: float, tol: float = 1e-10) -> int:
    """
    Smallest k whose Poisson(top_atom) tail mass is below ``tol``.

    A Poisson mixture is stochastically dominated by the Poisson law of
    its largest atom, so the same k bounds the tail of the whole mixture.
    Capped at 10 * top_atom + 50.
    """
    if top_atom <= 0:
        raise InvalidConfigurationError("top_atom must be positive.")
    cap = int(np.ceil(10 * top_atom + 50))
    tails = poisson.sf(np.arange(cap + 1), top_atom)
    below = np.flatnonzero(tails < tol)
    return int(below[0]) if below.size else cap


def poisson_mixture(q: DiscreteMeasure, k_max: int) -> CountDistribution:
    """
    Poisson Q-mixture lambda_k = sum_j w_j f(k; x_j) for k = 0..k_max.

    The mass beyond k_max is returned as the ``tail`` of the result; a
    large tail means k_max was too small for this mixing measure.
    """
    if k_max < 0:
        raise InvalidConfigurationError(f"k_max must be >= 0, got {k_max}.")

    lam = poisson_pmf_matrix(np.arange(k_max + 1), q.locations) @ q.weights
    tail = max(0.0, 1.0 - float(lam.sum()))
    if tail > 1e-6:
        logger.debug("Poisson mixture truncated at k=%d leaves tail %.3g", k_max, tail)
    return CountDistribution(lam, tail=tail)
