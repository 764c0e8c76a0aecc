# src/sources/quantize.py
"""
Rare-events sources obtained by quantizing a density, sampling from them,
and the ground-truth measures P_n (shadow) and P (limit).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.errors import (
    InvalidConfigurationError,
    InvalidMeasureError,
    MismatchedSourceError,
    UnsupportedDensityError,
)
from src.measures import DiscreteMeasure
from src.sources.density import PiecewiseDensity

logger = logging.getLogger(__name__)

PROB_SUM_TOL = 1e-12
SUPPORT_TOL = 1e-9


def make_generator(seed: int) -> np.random.Generator:
    """
    The package RNG: Philox4x64-10 (counter-based) seeded via SeedSequence.

    Every random draw in RareLoom goes through this function.
    """
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True, eq=False)
class RareEventsSource:
    """
    One member (A_n, p_n) of a rare-events source.

    Symbols are the indices 0..len(probs)-1. ``density`` is set when the
    source was built by ``quantize`` and links back to g.
    """

    n: int
    alpha: float
    probs: np.ndarray
    density: PiecewiseDensity | None = None

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).ravel()
        if self.n < 1:
            raise InvalidConfigurationError(f"n must be >= 1, got {self.n}.")
        if p.size == 0 or np.any(p <= 0) or not np.all(np.isfinite(p)):
            raise InvalidMeasureError("Symbol probabilities must be positive and finite.")
        if abs(p.sum() - 1.0) > PROB_SUM_TOL:
            raise InvalidMeasureError(f"Probabilities sum to {p.sum()!r}, expected 1.")

        if self.density is not None:
            # on the quantization grid N * p_n(a) lies within [c_lo, c_hi]
            scaled = p * p.size
            if scaled.min() < self.density.c_lo * (1 - SUPPORT_TOL) or scaled.max() > (
                self.density.c_hi * (1 + SUPPORT_TOL)
            ):
                raise InvalidMeasureError(
                    "Quantized probabilities leave the density bounds "
                    f"[{self.density.c_lo}, {self.density.c_hi}]."
                )

        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def alphabet_size(self) -> int:
        return int(self.probs.size)


@dataclass(frozen=True, eq=False)
class SampleRecord:
    """
    Sufficient statistic of n i.i.d. draws: ``counts[a]`` is the number of
    times symbol a was drawn (zeros included for unseen symbols).
    """

    counts: np.ndarray
    n: int
    seed: int

    def __post_init__(self):
        c = np.array(self.counts, dtype=np.int64).ravel()
        if np.any(c < 0):
            raise InvalidMeasureError("Counts must be non-negative.")
        if int(c.sum()) != self.n:
            raise InvalidMeasureError(f"Counts sum to {int(c.sum())}, expected n={self.n}.")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    def as_mapping(self) -> dict[int, int]:
        """Observed symbols only: ``{symbol: count}``."""
        seen = np.flatnonzero(self.counts)
        return dict(zip(seen.tolist(), self.counts[seen].tolist()))


# ---------------------------------------------------------
# 1. Building sources
# ---------------------------------------------------------
def quantize(g: PiecewiseDensity, n: int, alpha: float = 1.0) -> RareEventsSource:
    """
    Quantize g on floor(alpha * n) equal cells.

    p_n(a) is the exact integral of g over the a-th cell; the affine
    antiderivative makes this closed-form even across piece boundaries.
    """
    if n < 1:
        raise InvalidConfigurationError(f"n must be >= 1, got {n}.")
    size = math.floor(alpha * n)
    if size < 1:
        raise InvalidConfigurationError(
            f"floor(alpha * n) = floor({alpha} * {n}) = 0: empty alphabet."
        )

    edges = np.arange(size + 1) / size
    cumulative = g.integral(edges)
    probs = np.diff(cumulative)
    probs = probs / cumulative[-1]

    return RareEventsSource(n=n, alpha=alpha, probs=probs, density=g)


def shadow_distribution(s: RareEventsSource) -> DiscreteMeasure:
    """P_n: law of n * p_n(X) with X ~ p_n. Equal values are aggregated."""
    return DiscreteMeasure(s.n * s.probs, s.probs)


def limit_distribution(g: PiecewiseDensity, alpha: float = 1.0) -> DiscreteMeasure:
    """
    P: law of g(W) / alpha with W ~ g, available in closed form for step
    densities. The 1/alpha factor is the weak limit of n / floor(alpha * n).

    Raises
    ------
    UnsupportedDensityError
        If any piece has a non-zero slope; g(W) is then continuous.
    """
    if not g.is_step:
        raise UnsupportedDensityError(
            "The limit law of g(W) is only discrete for piecewise-constant g."
        )
    levels = np.array([p.b for p in g.pieces]) / alpha
    weights = np.array([p.b * (p.hi - p.lo) for p in g.pieces])
    return DiscreteMeasure.from_unnormalized(levels, weights)


def quantization_bound(g: PiecewiseDensity, n: int) -> float:
    """
    Upper bound (L + 1)(c_hi - c_lo) / n on d_W(P_n, P) for alpha = 1,
    where L is the number of jumps of g.
    """
    return (g.n_discontinuities + 1) * (g.c_hi - g.c_lo) / n


# ---------------------------------------------------------
# 2. Sampling
# ---------------------------------------------------------
def sample(s: RareEventsSource, seed: int) -> SampleRecord:
    """
    Draw n i.i.d. symbols from p_n by inverse CDF and return their counts.

    Identical (source, seed) pairs give identical records.
    """
    rng = make_generator(seed)
    cumulative = np.cumsum(s.probs)
    u = rng.random(s.n) * cumulative[-1]
    symbols = np.searchsorted(cumulative, u, side="right")
    np.minimum(symbols, s.alphabet_size - 1, out=symbols)
    counts = np.bincount(symbols, minlength=s.alphabet_size)
    return SampleRecord(counts=counts, n=s.n, seed=seed)


# ---------------------------------------------------------
# 3. Finite-n estimands
# ---------------------------------------------------------
def entropy_target(s: RareEventsSource) -> float:
    """H(p_n) - log n = -integral of log x dP_n."""
    return float(-np.dot(s.probs, np.log(s.n * s.probs)))


def alphabet_target(s: RareEventsSource) -> float:
    """|A_n| / n = integral of 1/x dP_n."""
    return s.alphabet_size / s.n


def sequence_logprob(s: RareEventsSource, rec: SampleRecord) -> float:
    """(1/n) log p_n(X_1, ..., X_n) + log n for the drawn sequence."""
    if rec.counts.size != s.alphabet_size:
        raise MismatchedSourceError(
            f"Record covers {rec.counts.size} symbols, source has {s.alphabet_size}."
        )
    return float(np.dot(rec.counts, np.log(s.probs)) / rec.n + np.log(s.n))
