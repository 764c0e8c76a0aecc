# src/canonical/schedule.py
"""
Growth rules for the taper level D_n and the support power q_n.

All logarithms are natural.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from src.canonical.taper import Integrand, TaperedFunction
from src.errors import InvalidConfigurationError, ScheduleError

logger = logging.getLogger(__name__)

SCHEDULE_KINDS = ("fixed", "power", "fallback", "known_bounds")

# Smallest n for which q_n = ln n / ln ln n is meaningful (ln ln n > 1)
SUPPORT_MIN_N = 16


@dataclass(frozen=True)
class Schedule:
    """
    kind = "fixed":        D_n = D
    kind = "power":        D_n = n^(s / r), r the integrand's Lipschitz order
    kind = "fallback":     D_n = exp((ln n)^epsilon), for an unknown rate s
    kind = "known_bounds": taper at [d_min, d_max]; either bound may be None
    """

    kind: str
    D: float | None = None
    s: float | None = None
    epsilon: float | None = None
    d_min: float | None = None
    d_max: float | None = None

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise InvalidConfigurationError(
                f"Unknown schedule kind {self.kind!r}; expected one of {SCHEDULE_KINDS}."
            )
        if self.kind == "fixed" and not (self.D is not None and self.D >= 1):
            raise InvalidConfigurationError("fixed schedule needs D >= 1.")
        if self.kind in ("power", "known_bounds") and not (self.s is not None and self.s > 0):
            raise InvalidConfigurationError(f"{self.kind} schedule needs s > 0.")
        if self.kind == "fallback" and not (self.epsilon is not None and 0 < self.epsilon < 1):
            raise InvalidConfigurationError("fallback schedule needs epsilon in (0, 1).")
        if self.kind == "known_bounds":
            if self.d_min is None and self.d_max is None:
                raise InvalidConfigurationError("known_bounds needs d_min, d_max or both.")
            if self.d_min is not None and self.d_min <= 0:
                raise InvalidConfigurationError("d_min must be positive.")
            if self.d_min is not None and self.d_max is not None and self.d_max <= self.d_min:
                raise InvalidConfigurationError("Need d_min < d_max.")

    @classmethod
    def fixed(cls, D: float) -> "Schedule":
        return cls("fixed", D=float(D))

    @classmethod
    def power(cls, s: float) -> "Schedule":
        return cls("power", s=float(s))

    @classmethod
    def fallback(cls, epsilon: float = 0.5) -> "Schedule":
        return cls("fallback", epsilon=float(epsilon))

    @classmethod
    def known_bounds(cls, d_min: float | None, d_max: float | None, s: float = 1.0) -> "Schedule":
        return cls(
            "known_bounds",
            s=float(s),
            d_min=None if d_min is None else float(d_min),
            d_max=None if d_max is None else float(d_max),
        )

    @property
    def both_bounds_known(self) -> bool:
        return self.kind == "known_bounds" and self.d_min is not None and self.d_max is not None


def schedule_D(sch: Schedule, n: int, lipschitz_order: float = 1.0) -> float:
    """
    Taper level D_n for an integrand whose Lipschitz constant grows like
    D^lipschitz_order (1 for log, 2 for the reciprocal).

    For ``known_bounds`` the returned value is the upper clamp; a missing
    upper bound grows like the power schedule.
    """
    if n < 1:
        raise ScheduleError(f"n must be >= 1, got {n}.")
    if lipschitz_order <= 0:
        raise InvalidConfigurationError("lipschitz_order must be positive.")

    if sch.kind == "fixed":
        return sch.D
    if sch.kind == "power":
        return float(n) ** (sch.s / lipschitz_order)
    if sch.kind == "fallback":
        return math.exp(math.log(n) ** sch.epsilon)
    if sch.d_max is None:
        return float(n) ** (sch.s / lipschitz_order)
    return sch.d_max


def tapered(base: Integrand, sch: Schedule, n: int) -> TaperedFunction:
    """``base`` tapered at the level the schedule prescribes for sample size n."""
    if sch.kind == "known_bounds":
        grown = float(n) ** (sch.s / base.lipschitz_order)
        upper = grown if sch.d_max is None else sch.d_max
        lower = 1.0 / grown if sch.d_min is None else sch.d_min
        if upper < lower:
            raise ScheduleError(
                f"Grown clamp crossed the known bound at n={n}: [{lower}, {upper}]."
            )
        return TaperedFunction(base, D=upper, lower=lower)
    return TaperedFunction(base, D=schedule_D(sch, n, base.lipschitz_order))


# ---------------------------------------------------------------------
# Support endpoints
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class SupportPlan:
    """Power q_n and the clamps [lower, upper] used by the support estimator."""

    q: float
    lower: float
    upper: float


def support_q(n: int) -> float:
    """q_n = ln n / ln ln n."""
    if n < 3:
        raise ScheduleError(f"q_n = ln n / ln ln n needs n >= 3, got {n}.")
    return math.log(n) / math.log(math.log(n))


def support_plan(sch: Schedule, n: int) -> SupportPlan:
    """
    q_n and taper clamps for the support endpoints.

    power(s):      q_n = ln n / ln ln n, D_n = n^(s / (2 q_n))
    fallback:      q_n as above, D_n = n^(1 / (q_n sqrt(ln ln n)))
    fixed(D):      q_n as above, clamps [1/D, D]
    known_bounds:  both bounds -> q_n = (s/2) ln n / ln(d_max / d_min);
                   one bound   -> q_n as above, the missing clamp grows
                   like n^(s / (2 q_n))

    Raises
    ------
    ScheduleError
        If n < 16.
    """
    if n < SUPPORT_MIN_N:
        raise ScheduleError(f"Support estimation needs n >= {SUPPORT_MIN_N}, got {n}.")
    log_n = math.log(n)

    if sch.both_bounds_known:
        q = 0.5 * sch.s * log_n / math.log(sch.d_max / sch.d_min)
        return SupportPlan(q=q, lower=sch.d_min, upper=sch.d_max)

    q = support_q(n)
    if sch.kind == "fixed":
        D = sch.D
    elif sch.kind == "fallback":
        D = math.exp(log_n / (q * math.sqrt(math.log(log_n))))
    else:
        D = math.exp(sch.s * log_n / (2.0 * q))

    if sch.kind == "known_bounds":
        lower = 1.0 / D if sch.d_min is None else sch.d_min
        upper = D if sch.d_max is None else sch.d_max
        if upper <= lower:
            raise ScheduleError(
                f"Grown clamp crossed the known bound at n={n}: [{lower}, {upper}]."
            )
        return SupportPlan(q=q, lower=lower, upper=upper)

    logger.debug("support plan n=%d: q=%.4g D=%.4g", n, q, D)
    return SupportPlan(q=q, lower=1.0 / D, upper=D)
