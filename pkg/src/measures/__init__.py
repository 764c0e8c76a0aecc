from src.measures.discrete import CountDistribution, DiscreteMeasure
from src.measures.distances import cdf_eval, ks_distance, l1_distance, wasserstein
from src.measures.poisson import (
    choose_k_max,
    poisson_cdf_matrix,
    poisson_mixture,
    poisson_pmf_matrix,
)

__all__ = [
    "CountDistribution",
    "DiscreteMeasure",
    "cdf_eval",
    "choose_k_max",
    "ks_distance",
    "l1_distance",
    "poisson_cdf_matrix",
    "poisson_mixture",
    "poisson_pmf_matrix",
    "wasserstein",
]
