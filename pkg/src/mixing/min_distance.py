# src/mixing/min_distance.py
"""
Minimum Kolmogorov-Smirnov distance estimate of an m-atom mixing measure.

The infimum over all measures with at most m atoms is approached by an
exhaustive search over m-tuples of a coarse location grid with a Chebyshev
(minimax) weight fit per tuple. The best tuples from distinct basins are
then refined over the whole search interval: a joint Nelder-Mead step on
the log-locations followed by bounded per-location minimization, repeated
until a round improves the objective by less than eps.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize, minimize_scalar

from src.errors import BudgetExceededError, InvalidConfigurationError
from src.measures import (
    CountDistribution,
    DiscreteMeasure,
    choose_k_max,
    poisson_cdf_matrix,
    wasserstein,
)
from src.mixing.common import FitDiagnostics, default_bounds

logger = logging.getLogger(__name__)

LP_OPTIONS = {
    "presolve": True,
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}

# Minimum Wasserstein gap between refinement starts, relative to the mean location
START_SEPARATION = 0.1
NM_ITERS_PER_ATOM = 100


@dataclass(frozen=True)
class MinDistConfig:
    m: int
    epsilon: float
    search_lo: float
    search_hi: float
    coarse_grid: int = 25
    refine_rounds: int = 10
    starts: int = 4
    max_tuples: int = 5_000

    def __post_init__(self):
        if self.m < 1:
            raise InvalidConfigurationError("m must be >= 1.")
        if self.epsilon <= 0:
            raise InvalidConfigurationError("epsilon must be positive.")
        if not 0 < self.search_lo < self.search_hi:
            raise InvalidConfigurationError(
                f"Need 0 < search_lo < search_hi, got [{self.search_lo}, {self.search_hi}]."
            )
        if self.coarse_grid < 1 or self.refine_rounds < 0:
            raise InvalidConfigurationError("coarse_grid >= 1 and refine_rounds >= 0 required.")
        if self.starts < 1:
            raise InvalidConfigurationError("starts must be >= 1.")

    @classmethod
    def from_phi(cls, phi: CountDistribution, m: int, epsilon: float, **overrides):
        """Config with the search interval derived from the data."""
        lo, hi = default_bounds(phi)
        params = {"m": m, "epsilon": epsilon, "search_lo": lo, "search_hi": hi}
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**params)

    def coarse_locations(self) -> np.ndarray:
        return np.geomspace(self.search_lo, self.search_hi, self.coarse_grid)


def objective_k_max(phi: CountDistribution, search_hi: float) -> int:
    """Largest k on which the KS objective is evaluated."""
    return max(phi.k_max, choose_k_max(search_hi))


def _ks_objective(cdf_matrix: np.ndarray, weights: np.ndarray, target: np.ndarray) -> float:
    return float(np.max(np.abs(cdf_matrix @ weights - target)))


def _chebyshev_fit(cdf_matrix: np.ndarray, target: np.ndarray):
    """min_w max_k |H w - F| over the simplex, as an LP in (w, t)."""
    n_k, m = cdf_matrix.shape
    if m == 1:
        w = np.ones(1)
        return w, _ks_objective(cdf_matrix, w, target)

    c = np.zeros(m + 1)
    c[-1] = 1.0
    ones = np.ones((n_k, 1))
    a_ub = np.vstack([np.hstack([cdf_matrix, -ones]), np.hstack([-cdf_matrix, -ones])])
    b_ub = np.concatenate([target, -target])
    a_eq = np.concatenate([np.ones(m), [0.0]])[None, :]
    bounds = [(0.0, None)] * m + [(0.0, None)]

    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=[1.0],
        bounds=bounds,
        method="highs",
        options=LP_OPTIONS,
    )
    if res.status != 0:
        # The simplex is compact so an optimum exists; fall back to the best vertex
        logger.debug("linprog status %d (%s); using best vertex", res.status, res.message)
        vertex_scores = [
            _ks_objective(cdf_matrix, np.eye(m)[j], target) for j in range(m)
        ]
        w = np.eye(m)[int(np.argmin(vertex_scores))]
    else:
        w = np.clip(res.x[:m], 0.0, None)
        w /= w.sum()
    return w, _ks_objective(cdf_matrix, w, target)


def fit_weights_chebyshev(locations, phi: CountDistribution, k_max: int):
    """
    Best simplex weights for fixed atom locations under the KS objective.

    Solves  min_w sup_{k <= k_max} |sum_j w_j h(k; x_j) - F(k; phi)|  with
    h the Poisson CDF.

    Returns
    -------
    (weights, objective) where objective is re-evaluated from the weights.
    """
    locs = np.asarray(locations, dtype=float)
    if locs.size == 0 or np.any(locs <= 0):
        raise InvalidConfigurationError("Locations must be positive and non-empty.")
    if np.unique(locs).size != locs.size:
        raise InvalidConfigurationError("Locations must be distinct.")
    if k_max < 0:
        raise InvalidConfigurationError("k_max must be >= 0.")

    target = phi.cdf_values(k_max)
    return _chebyshev_fit(poisson_cdf_matrix(k_max, locs), target)


class _TupleSearch:
    """Objective evaluations over location tuples with a shared target CDF."""

    def __init__(self, phi: CountDistribution, k_max: int):
        self.k_max = k_max
        self.target = phi.cdf_values(k_max)
        self.evaluations = 0

    def fit(self, locations: np.ndarray):
        self.evaluations += 1
        locations = np.unique(locations)
        return _chebyshev_fit(poisson_cdf_matrix(self.k_max, locations), self.target)

    def score(self, locations: np.ndarray) -> float:
        return self.fit(locations)[1]


def _measure(locs: np.ndarray, weights: np.ndarray) -> DiscreteMeasure:
    keep = weights > 0
    return DiscreteMeasure.from_unnormalized(locs[keep], weights[keep])


# ---------------------------------------------------------------------
# Coarse search
# ---------------------------------------------------------------------
def _coarse_starts(search: _TupleSearch, grid: np.ndarray, m: int, starts: int):
    """
    Best coarse m-tuples from distinct basins.

    Tuples are ranked by objective (ties broken lexicographically). A tuple
    is kept only if its fitted measure lies further than START_SEPARATION
    times its mean location (Wasserstein) from every tuple already kept,
    so near-copies of one basin do not use up the starts.
    """
    scored = []
    for combo in itertools.combinations(range(grid.size), m):
        locs = grid[list(combo)]
        weights, value = search.fit(locs)
        scored.append((value, combo, locs, weights))
    scored.sort(key=lambda item: (item[0], item[1]))

    kept = []
    for value, _, locs, weights in scored:
        measure = _measure(locs, weights)
        radius = START_SEPARATION * float(measure.locations @ measure.weights)
        if all(wasserstein(measure, other) > radius for _, _, other in kept):
            kept.append((locs, value, measure))
            if len(kept) == starts:
                break
    return [(locs, value) for locs, value, _ in kept]


# ---------------------------------------------------------------------
# Refinement
# ---------------------------------------------------------------------
def _clip_locations(z: np.ndarray, cfg: MinDistConfig) -> np.ndarray:
    return np.unique(np.clip(np.exp(z), cfg.search_lo, cfg.search_hi))


def _joint_step(search: _TupleSearch, locs: np.ndarray, cfg: MinDistConfig, step: float):
    """Nelder-Mead on the log-locations over the whole search interval."""
    lo, hi = math.log(cfg.search_lo), math.log(cfg.search_hi)
    z0 = np.clip(np.log(locs), lo, hi)
    simplex = [z0]
    for j in range(z0.size):
        vertex = z0.copy()
        vertex[j] += step if z0[j] + step <= hi else -step
        simplex.append(vertex)

    res = minimize(
        lambda z: search.score(_clip_locations(z, cfg)),
        z0,
        method="Nelder-Mead",
        bounds=[(lo, hi)] * z0.size,
        options={
            "initial_simplex": np.array(simplex),
            "xatol": 1e-3,
            "fatol": 0.1 * cfg.epsilon,
            "maxiter": NM_ITERS_PER_ATOM * z0.size,
            "maxfev": 2 * NM_ITERS_PER_ATOM * z0.size,
        },
    )
    return _clip_locations(res.x, cfg), float(res.fun)


def _coordinate_sweep(search: _TupleSearch, locs: np.ndarray, value: float, cfg: MinDistConfig):
    """Bounded scalar minimization of each location between its neighbours."""
    for j in range(locs.size):
        lower = locs[j - 1] if j > 0 else cfg.search_lo
        upper = locs[j + 1] if j + 1 < locs.size else cfg.search_hi
        if upper - lower <= cfg.epsilon:
            continue

        def along(x, j=j):
            trial = locs.copy()
            trial[j] = x
            return search.score(trial)

        res = minimize_scalar(
            along, bounds=(lower, upper), method="bounded", options={"xatol": cfg.epsilon}
        )
        if res.fun < value:
            locs = locs.copy()
            locs[j] = res.x
            value = float(res.fun)
    return locs, value


def _refine(search: _TupleSearch, locs: np.ndarray, value: float, cfg: MinDistConfig, step: float):
    """Alternate joint and per-location steps until a round gains less than eps."""
    history = [value]
    converged = False
    rounds = 0

    for rounds in range(1, cfg.refine_rounds + 1):
        start = value
        trial, trial_value = _joint_step(search, locs, cfg, step)
        if trial_value < value:
            locs, value = trial, trial_value
        locs, value = _coordinate_sweep(search, locs, value, cfg)

        history.append(value)
        if start - value < cfg.epsilon:
            converged = True
            break

    return locs, value, rounds, converged, history


def _fit_atoms(search: _TupleSearch, cfg: MinDistConfig, m: int):
    grid = cfg.coarse_locations()
    step = math.log(cfg.search_hi / cfg.search_lo) / max(cfg.coarse_grid - 1, 1)

    best = None
    for locs, coarse_value in _coarse_starts(search, grid, m, cfg.starts):
        refined = _refine(search, locs, coarse_value, cfg, step)
        logger.debug(
            "min_distance m=%d: start %s coarse %.4g -> %.4g",
            m,
            np.round(locs, 4),
            coarse_value,
            refined[1],
        )
        if best is None or refined[1] < best[1]:
            best = refined
    locs, _, rounds, converged, history = best

    weights, _ = search.fit(locs)
    estimate = _measure(np.unique(locs), weights)

    # Report the objective of the measure actually returned
    final = _ks_objective(
        poisson_cdf_matrix(search.k_max, estimate.locations), estimate.weights, search.target
    )
    if not converged:
        logger.info(
            "min_distance m=%d hit refine_rounds=%d before the gain fell below %.3g",
            m,
            cfg.refine_rounds,
            cfg.epsilon,
        )
    diagnostics = FitDiagnostics(
        objective=final,
        iterations=rounds,
        converged=converged,
        history=tuple(history),
    )
    return estimate, diagnostics


def min_distance(phi: CountDistribution, cfg: MinDistConfig):
    """
    Minimum-distance estimator with precision eps over <= m-atom measures.

    Budgets 1..m are searched in turn and the best fit is kept, so the
    result for m is never worse than the result for any smaller budget.

    Returns
    -------
    (DiscreteMeasure, FitDiagnostics)
        The diagnostics objective is sup_k |F(k; pi(Q)) - F(k; phi)| for the
        returned Q over k = 0..objective_k_max(phi, cfg.search_hi).

    Raises
    ------
    BudgetExceededError
        If the exhaustive coarse search would exceed ``cfg.max_tuples``.
    """
    m = min(cfg.m, cfg.coarse_grid)
    total = sum(math.comb(cfg.coarse_grid, j) for j in range(1, m + 1))
    if total > cfg.max_tuples:
        raise BudgetExceededError(
            f"{total} location tuples for m={m} on a {cfg.coarse_grid}-point grid "
            f"exceed the budget of {cfg.max_tuples}; lower coarse_grid."
        )

    search = _TupleSearch(phi, objective_k_max(phi, cfg.search_hi))
    best = None
    for atoms in range(1, m + 1):
        fit = _fit_atoms(search, cfg, atoms)
        if best is None or fit[1].objective < best[1].objective:
            best = fit

    logger.debug("min_distance used %d LP solves", search.evaluations)
    return best
