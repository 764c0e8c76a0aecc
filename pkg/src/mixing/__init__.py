from src.mixing.common import FitDiagnostics, default_bounds, epsilon_schedule
from src.mixing.min_distance import (
    MinDistConfig,
    fit_weights_chebyshev,
    min_distance,
    objective_k_max,
)
from src.mixing.npmle import NpmleConfig, npmle

__all__ = [
    "FitDiagnostics",
    "MinDistConfig",
    "NpmleConfig",
    "default_bounds",
    "epsilon_schedule",
    "fit_weights_chebyshev",
    "min_distance",
    "npmle",
    "objective_k_max",
]
