# src/mixing/common.py
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from src.errors import DegenerateInputError
from src.measures import CountDistribution

GRID_CLIP = (0.01, 100.0)


@dataclass(frozen=True)
class FitDiagnostics:
    """
    Summary of one mixing-distribution fit.

    objective : final pseudo-log-likelihood (NPMLE) or KS objective (min-distance)
    iterations : EM updates (NPMLE) or refinement rounds (min-distance)
    converged : stopping rule met before the iteration cap
    max_directional_derivative : NPMLE optimality certificate, None otherwise
    history : objective after every iteration / round
    """

    objective: float
    iterations: int
    converged: bool
    max_directional_derivative: float | None = None
    history: tuple[float, ...] = field(default_factory=tuple)


def default_bounds(phi: CountDistribution) -> tuple[float, float]:
    """
    Search interval for mixing atoms pinned near the observed counts:
    [max(k_lo / 2, 0.01), 2 * k_hi] clipped to [0.01, 100], where k_lo and
    k_hi are the smallest and largest k with positive mass.
    """
    ks = np.flatnonzero(phi.probs > 0)
    if ks.size == 0 or ks[-1] == 0:
        raise DegenerateInputError(
            "All mass sits at k = 0; the likelihood is maximized only as x -> 0."
        )
    lo = max(ks[0] / 2.0, GRID_CLIP[0])
    hi = 2.0 * ks[-1]
    lo = float(np.clip(lo, *GRID_CLIP))
    hi = float(np.clip(hi, *GRID_CLIP))
    if hi <= lo:
        lo = hi / 2.0
    return lo, hi


def epsilon_schedule(n: int, exponent: float = 0.6) -> float:
    """Precision eps_n = n^(-exponent) for minimum-distance fits."""
    return float(n) ** (-exponent)
