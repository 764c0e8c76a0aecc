from src.canonical.estimators import (
    SupportEstimate,
    estimate_alphabet_size,
    estimate_entropy,
    estimate_occupancy_mass,
    estimate_seq_logprob,
    estimate_support,
    power_mean_bounds,
)
from src.canonical.schedule import (
    Schedule,
    SupportPlan,
    schedule_D,
    support_plan,
    support_q,
    tapered,
)
from src.canonical.taper import (
    Integrand,
    TaperedFunction,
    integrate,
    lipschitz_constant,
    log,
    neg_log,
    poisson_pmf,
    power,
    reciprocal,
    taper_eval,
)

__all__ = [
    "Integrand",
    "Schedule",
    "SupportEstimate",
    "SupportPlan",
    "TaperedFunction",
    "estimate_alphabet_size",
    "estimate_entropy",
    "estimate_occupancy_mass",
    "estimate_seq_logprob",
    "estimate_support",
    "integrate",
    "lipschitz_constant",
    "log",
    "neg_log",
    "poisson_pmf",
    "power",
    "power_mean_bounds",
    "reciprocal",
    "schedule_D",
    "support_plan",
    "support_q",
    "taper_eval",
    "tapered",
]
