from src.goodturing.estimator import (
    OccupancyCounts,
    expected_gt_estimator,
    gt_estimator,
    mixture_target,
    occupancy,
    occupancy_from_symbols,
    true_gamma,
)

__all__ = [
    "OccupancyCounts",
    "expected_gt_estimator",
    "gt_estimator",
    "mixture_target",
    "occupancy",
    "occupancy_from_symbols",
    "true_gamma",
]
