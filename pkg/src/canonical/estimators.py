# src/canonical/estimators.py
"""
Plug-in estimators: integrate a tapered integrand against an estimate of
the shadow law.

    entropy     H(p_n) - log n          -int log_{D_n} x dP
    seqprob     (1/n) log p_n(X^n) + log n   (negated entropy)
    alphabet    |A_n| / n               int (1/x)_{D_n} dP
    support     [c_lo, c_hi]            tapered power means with q_n
    occupancy   lambda_k                int x^k e^-x / k! dP   (no taper)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from src.canonical.schedule import Schedule, support_plan, tapered
from src.canonical.taper import TaperedFunction, integrate, log, poisson_pmf, reciprocal
from src.errors import InvalidConfigurationError
from src.measures import DiscreteMeasure

logger = logging.getLogger(__name__)


def estimate_entropy(p_tilde: DiscreteMeasure, sch: Schedule, n: int) -> float:
    """-int log x tapered at D_n; estimates H(p_n) - log n."""
    return -integrate(p_tilde, tapered(log(), sch, n))


def estimate_seq_logprob(p_tilde: DiscreteMeasure, sch: Schedule, n: int) -> float:
    """Estimate of (1/n) log p_n(X_1, ..., X_n) + log n."""
    return -estimate_entropy(p_tilde, sch, n)


def estimate_alphabet_size(p_tilde: DiscreteMeasure, sch: Schedule, n: int) -> float:
    """int x^-1 tapered at D_n; estimates |A_n| / n."""
    return integrate(p_tilde, tapered(reciprocal(), sch, n))


def estimate_occupancy_mass(p_tilde: DiscreteMeasure, k: int) -> float:
    """
    Smoothed Good-Turing mass of the symbols seen k times.

    The Poisson pmf is bounded, so no taper is needed (D = inf).
    """
    if k < 0:
        raise InvalidConfigurationError(f"k must be >= 0, got {k}.")
    return integrate(p_tilde, TaperedFunction(poisson_pmf(k), math.inf))


# ---------------------------------------------------------------------
# Support interval
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class SupportEstimate:
    """
    lower     (int x_D^-q dP)^(-1/q), converges to c_lo
    upper     (int x_D^q dP)^(1/q), converges to c_hi
    raw_lower (int x_D^-q dP)^(1/q) = 1 / lower
    """

    lower: float
    upper: float
    raw_lower: float
    q: float
    taper_lo: float
    taper_hi: float

    def as_tuple(self) -> tuple[float, float]:
        return self.lower, self.upper


def _log_power_sum(p: DiscreteMeasure, q: float, lower: float, upper: float) -> float:
    """log int x_clamped^q dP, evaluated without forming x^q."""
    log_x = np.log(np.clip(p.locations, lower, upper))
    return float(logsumexp(q * log_x, b=p.weights))


def power_mean_bounds(p: DiscreteMeasure, q: float, lower: float, upper: float) -> SupportEstimate:
    """
    Tapered power means of order -q and +q.

    Parameters
    ----------
    p : DiscreteMeasure
    q : float
        Positive power.
    lower, upper : float
        Taper clamps, 0 < lower <= upper.
    """
    if q <= 0:
        raise InvalidConfigurationError(f"q must be positive, got {q}.")
    if not 0 < lower <= upper:
        raise InvalidConfigurationError(f"Need 0 < lower <= upper, got [{lower}, {upper}].")

    if p.n_atoms == 1:
        c = float(np.clip(p.locations[0], lower, upper))
        return SupportEstimate(
            lower=c, upper=c, raw_lower=1.0 / c, q=q, taper_lo=lower, taper_hi=upper
        )

    neg = _log_power_sum(p, -q, lower, upper) / q
    pos = _log_power_sum(p, q, lower, upper) / q
    return SupportEstimate(
        lower=math.exp(-neg),
        upper=math.exp(pos),
        raw_lower=math.exp(neg),
        q=q,
        taper_lo=lower,
        taper_hi=upper,
    )


def estimate_support(p_tilde: DiscreteMeasure, sch: Schedule, n: int) -> SupportEstimate:
    """
    Estimate the support interval [c_lo, c_hi] of the limit law.

    q_n and the clamps come from ``support_plan``; for power(s) this is
    q_n = ln n / ln ln n with D_n = n^(s / (2 q_n)).

    Raises
    ------
    ScheduleError
        If n < 16.
    """
    plan = support_plan(sch, n)
    estimate = power_mean_bounds(p_tilde, plan.q, plan.lower, plan.upper)
    logger.debug(
        "support n=%d q=%.3g clamps=[%.3g, %.3g] -> [%.4g, %.4g]",
        n,
        plan.q,
        plan.lower,
        plan.upper,
        estimate.lower,
        estimate.upper,
    )
    return estimate
