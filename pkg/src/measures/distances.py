# src/measures/distances.py
"""
CDF evaluation and the distances used to compare measures.
"""

import numpy as np
from scipy.stats import wasserstein_distance

from src.measures.discrete import CountDistribution, DiscreteMeasure


def cdf_eval(m: DiscreteMeasure | CountDistribution, x: float) -> float:
    """
    Right-continuous CDF F(x; m).

    For a CountDistribution the argument is a count k; values past k_max
    return 1 - tail.
    """
    if isinstance(m, DiscreteMeasure):
        idx = np.searchsorted(m.locations, x, side="right")
        return float(min(1.0, m.weights[:idx].sum()))

    k = int(np.floor(x))
    if k < 0:
        return 0.0
    return float(min(1.0, m.probs[: k + 1].sum()))


def wasserstein(p: DiscreteMeasure, q: DiscreteMeasure) -> float:
    """
    d_W(p, q) = integral of |F(x; p) - F(x; q)| dx.

    Both CDFs are step functions, so the integral is an exact sum over the
    merged atom grid.
    """
    return float(
        wasserstein_distance(p.locations, q.locations, p.weights, q.weights)
    )


def _common_range(p: CountDistribution, q: CountDistribution) -> int:
    return max(p.k_max, q.k_max)


def ks_distance(p: CountDistribution, q: CountDistribution) -> float:
    """sup_k |F(k; p) - F(k; q)| over k = 0..max(k_max(p), k_max(q))."""
    k_max = _common_range(p, q)
    return float(np.max(np.abs(p.cdf_values(k_max) - q.cdf_values(k_max))))


def l1_distance(p: CountDistribution, q: CountDistribution) -> float:
    """sum_k |p_k - q_k| over the union of the dense supports (tails ignored)."""
    k_max = _common_range(p, q)
    return float(np.abs(p.padded(k_max) - q.padded(k_max)).sum())
