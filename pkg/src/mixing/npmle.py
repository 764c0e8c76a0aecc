# src/mixing/npmle.py
"""
Nonparametric maximum (pseudo-)likelihood estimate of the mixing measure.

Maximizes  sum_k phi_k log( integral f(k; x) dQ(x) )  over Q restricted to
a logarithmic grid, using EM (multiplicative weight updates). The
directional derivative

    D(x) = sum_k phi_k f(k; x) / fhat_k - 1

is non-positive everywhere on the grid at the grid-restricted optimum, so
its maximum is reported as a certificate and used as the stopping rule.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.errors import DegenerateInputError, InvalidConfigurationError, NumericFailureError
from src.measures import CountDistribution, DiscreteMeasure, poisson_pmf_matrix
from src.mixing.common import FitDiagnostics, default_bounds

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NpmleConfig:
    grid_lo: float
    grid_hi: float
    grid_points: int = 400
    max_iters: int = 20_000
    dd_tol: float = 1e-4
    weight_floor: float = 1e-8
    merge_adjacent: bool = False

    def __post_init__(self):
        if not 0 < self.grid_lo < self.grid_hi:
            raise InvalidConfigurationError(
                f"Need 0 < grid_lo < grid_hi, got [{self.grid_lo}, {self.grid_hi}]."
            )
        if self.grid_points < 2:
            raise InvalidConfigurationError("grid_points must be >= 2.")
        if self.max_iters < 1:
            raise InvalidConfigurationError("max_iters must be >= 1.")
        if self.dd_tol <= 0 or self.weight_floor <= 0:
            raise InvalidConfigurationError("dd_tol and weight_floor must be positive.")

    @classmethod
    def from_phi(cls, phi: CountDistribution, **overrides) -> "NpmleConfig":
        """Config with the grid bounds derived from the data."""
        lo, hi = default_bounds(phi)
        params = {"grid_lo": lo, "grid_hi": hi}
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**params)

    def grid(self) -> np.ndarray:
        return np.geomspace(self.grid_lo, self.grid_hi, self.grid_points)

    def spacing_at(self, x: float) -> float:
        """Distance from x to the next grid point up (log grid)."""
        ratio = (self.grid_hi / self.grid_lo) ** (1.0 / (self.grid_points - 1))
        return x * (ratio - 1.0)


def _merge_runs(grid: np.ndarray, w: np.ndarray, alive: np.ndarray):
    """Collapse each run of consecutive surviving grid points to its weighted mean."""
    idx = np.flatnonzero(alive)
    run = np.concatenate(([0], np.cumsum(np.diff(idx) > 1)))
    mass = np.bincount(run, weights=w[idx])
    centre = np.bincount(run, weights=w[idx] * grid[idx]) / mass
    return centre, mass


def _pruned(w: np.ndarray, floor: float) -> np.ndarray:
    """Weights with entries below ``floor`` zeroed and the rest renormalized."""
    kept = np.where(w >= floor, w, 0.0)
    return kept / kept.sum()


def _certificate(kernel: np.ndarray, weights_k: np.ndarray, fhat: np.ndarray) -> float:
    """max over grid points of D(x) = sum_k phi_k f(k; x) / fhat_k - 1."""
    return float((kernel.T @ (weights_k / fhat)).max() - 1.0)


def npmle(phi: CountDistribution, cfg: NpmleConfig | None = None):
    """
    Fit the grid-restricted NPMLE of the mixing measure.

    The returned measure keeps the grid points whose weight reaches
    ``weight_floor``. The reported objective is the pseudo-log-likelihood
    of that measure. The directional derivative is the grid-solution
    certificate, or that of the merged measure when ``merge_adjacent`` is set.

    Parameters
    ----------
    phi : CountDistribution
        Pseudo-empirical measure (Good-Turing estimator) or any pmf on counts.
    cfg : NpmleConfig, optional
        Defaults to ``NpmleConfig.from_phi(phi)``.

    Returns
    -------
    (DiscreteMeasure, FitDiagnostics)

    Raises
    ------
    DegenerateInputError
        If phi puts all its mass at k = 0.
    NumericFailureError
        If the likelihood becomes non-finite.
    """
    if phi.probs[1:].sum() <= 0:
        raise DegenerateInputError(
            "All mass sits at k = 0; the likelihood is maximized only as x -> 0."
        )
    cfg = cfg or NpmleConfig.from_phi(phi)

    ks = np.flatnonzero(phi.probs > 0)
    weights_k = phi.probs[ks]
    grid = cfg.grid()
    kernel = poisson_pmf_matrix(ks, grid)

    w = np.full(grid.size, 1.0 / grid.size)
    fhat = kernel @ w

    def objective(f):
        with np.errstate(divide="ignore"):
            value = float(np.dot(weights_k, np.log(f)))
        if not np.isfinite(value):
            raise NumericFailureError(
                "Pseudo-likelihood is not finite; the grid misses the data range."
            )
        return value

    history = [objective(fhat)]
    converged = False
    iterations = 0
    max_dd = np.inf

    for iterations in range(cfg.max_iters + 1):
        gradient = kernel.T @ (weights_k / fhat)
        max_dd = float(gradient.max() - 1.0)
        if max_dd <= cfg.dd_tol:
            converged = True
            break
        if iterations == cfg.max_iters:
            break

        w = w * gradient
        w /= w.sum()
        fhat = kernel @ w
        history.append(objective(fhat))

    w = _pruned(w, cfg.weight_floor)
    alive = w > 0
    if cfg.merge_adjacent:
        locations, mass = _merge_runs(grid, w, alive)
        estimate = DiscreteMeasure.from_unnormalized(locations, mass)
        f_est = poisson_pmf_matrix(ks, estimate.locations) @ estimate.weights
        # merged atoms leave the grid; certify the merged measure instead
        max_dd = _certificate(kernel, weights_k, f_est)
        converged = converged and max_dd <= cfg.dd_tol
    else:
        estimate = DiscreteMeasure.from_unnormalized(grid[alive], w[alive])
        f_est = poisson_pmf_matrix(ks, estimate.locations) @ estimate.weights

    if not converged:
        logger.warning(
            "NPMLE stopped after %d iterations with max directional derivative %.3g",
            iterations,
            max_dd,
        )
    else:
        logger.debug("NPMLE converged in %d iterations (max dd %.3g)", iterations, max_dd)

    diagnostics = FitDiagnostics(
        objective=objective(f_est),
        iterations=iterations,
        converged=converged,
        max_directional_derivative=max_dd,
        history=tuple(history),
    )
    return estimate, diagnostics
