# src/goodturing/estimator.py
"""
Occupancy counts, the Good-Turing pseudo-empirical measure, and the
quantities it is compared against.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable

import numpy as np
from scipy.stats import binom

from src.errors import DegenerateInputError, InvalidMeasureError, MismatchedSourceError
from src.measures import CountDistribution, poisson_mixture
from src.sources import PiecewiseDensity, RareEventsSource, SampleRecord, limit_distribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OccupancyCounts:
    """
    ``varphi[k]`` is the number of symbols seen exactly k times, k >= 1.

    Stored densely with ``varphi[0] == 0``; entries past the largest
    observed count are implicitly zero.
    """

    varphi: np.ndarray
    n: int

    def __post_init__(self):
        v = np.array(self.varphi, dtype=np.int64).ravel()
        if v.size == 0:
            v = np.zeros(1, dtype=np.int64)
        if v[0] != 0:
            raise InvalidMeasureError("varphi[0] is not an occupancy count; it must be 0.")
        if np.any(v < 0):
            raise InvalidMeasureError("Occupancy counts must be non-negative.")
        if v.size - 1 > self.n and np.any(v[self.n + 1 :]):
            raise InvalidMeasureError("No symbol can appear more than n times.")
        total = int(np.dot(np.arange(v.size), v))
        if total != self.n:
            raise InvalidMeasureError(f"sum_k k * varphi[k] = {total}, expected n={self.n}.")
        v.setflags(write=False)
        object.__setattr__(self, "varphi", v)

    def as_mapping(self) -> dict[int, int]:
        ks = np.flatnonzero(self.varphi)
        return dict(zip(ks.tolist(), self.varphi[ks].tolist()))

    @property
    def distinct(self) -> int:
        """Number of distinct symbols observed."""
        return int(self.varphi.sum())


def _histogram(counts: np.ndarray, n: int) -> OccupancyCounts:
    varphi = np.bincount(counts) if counts.size else np.zeros(1, dtype=np.int64)
    varphi[0] = 0
    return OccupancyCounts(varphi=varphi, n=n)


def occupancy(rec: SampleRecord) -> OccupancyCounts:
    """Histogram of the count histogram."""
    return _histogram(rec.counts, rec.n)


def occupancy_from_symbols(symbols: Iterable[Hashable]) -> OccupancyCounts:
    """Occupancy counts of a raw symbol sequence (no source needed)."""
    counts = np.fromiter(Counter(symbols).values(), dtype=np.int64)
    return _histogram(counts, int(counts.sum()))


def gt_estimator(occ: OccupancyCounts) -> CountDistribution:
    """
    Good-Turing estimator phi_{n,k} = (k + 1) varphi_{n,k+1} / n.

    The masses sum to one: sum_k (k+1) varphi_{k+1} = sum_j j varphi_j = n.
    """
    if occ.n < 1:
        raise DegenerateInputError("Good-Turing needs at least one sample.")
    j = np.arange(1, occ.varphi.size)
    phi = j * occ.varphi[1:] / occ.n
    if phi.size == 0:
        raise DegenerateInputError("No symbols observed.")
    return CountDistribution.trimmed(phi)


def true_gamma(s: RareEventsSource, rec: SampleRecord) -> CountDistribution:
    """
    gamma_{n,k}: total probability of the symbols drawn exactly k times.

    k = 0 collects the unseen symbols (the missing mass).
    """
    if rec.counts.size != s.alphabet_size or rec.n != s.n:
        raise MismatchedSourceError(
            f"Record (n={rec.n}, {rec.counts.size} symbols) does not come from "
            f"source (n={s.n}, {s.alphabet_size} symbols)."
        )
    gamma = np.bincount(rec.counts, weights=s.probs)
    return CountDistribution.trimmed(gamma / gamma.sum())


def mixture_target(g: PiecewiseDensity, k_max: int, alpha: float = 1.0) -> CountDistribution:
    """lambda: Poisson P-mixture of the limit law of a step density."""
    return poisson_mixture(limit_distribution(g, alpha), k_max)


def expected_gt_estimator(s: RareEventsSource, k_max: int) -> CountDistribution:
    """
    Closed-form E[phi_n]: a Binomial(x/n, n-1) mixture over P_n.

    E[phi_{n,k}] = sum_a p_a * C(n-1, k) p_a^k (1 - p_a)^(n-1-k).
    """
    ks = np.arange(min(k_max, s.n - 1) + 1)
    mean = binom.pmf(ks[:, None], s.n - 1, s.probs[None, :]) @ s.probs
    tail = max(0.0, 1.0 - float(mean.sum()))
    return CountDistribution(mean, tail=tail)
