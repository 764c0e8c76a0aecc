import numpy as np
import pytest

from src.errors import BudgetExceededError, DegenerateInputError, InvalidConfigurationError
from src.goodturing import gt_estimator, occupancy
from src.measures import (
    CountDistribution,
    DiscreteMeasure,
    ks_distance,
    poisson_cdf_matrix,
    poisson_mixture,
    poisson_pmf_matrix,
    wasserstein,
)
from src.mixing import (
    MinDistConfig,
    NpmleConfig,
    default_bounds,
    epsilon_schedule,
    fit_weights_chebyshev,
    min_distance,
    npmle,
    objective_k_max,
)
from src.sources import quantize, sample


# ---------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------
def test_default_bounds():
    phi = CountDistribution.from_mapping({2: 0.5, 7: 0.5})
    assert default_bounds(phi) == (1.0, 14.0)
    lo, hi = default_bounds(CountDistribution.from_mapping({0: 0.4, 80: 0.6}))
    assert (lo, hi) == (0.01, 100.0)


def test_default_bounds_rejects_all_zero():
    with pytest.raises(DegenerateInputError):
        default_bounds(CountDistribution.point_mass(0))


def test_epsilon_schedule():
    assert epsilon_schedule(10**5) == pytest.approx(10 ** (-3.0))
    assert epsilon_schedule(1000, exponent=0.5) == pytest.approx(1000**-0.5)


# ---------------------------------------------------------
# NPMLE
# ---------------------------------------------------------
def test_npmle_recovers_poisson_one(poisson_one):
    est, diag = npmle(poisson_one)
    assert wasserstein(est, DiscreteMeasure.point_mass(1.0)) <= 0.05
    assert diag.converged


def test_npmle_single_spike():
    phi = CountDistribution.point_mass(5)
    cfg = NpmleConfig.from_phi(phi)
    est, _ = npmle(phi, cfg)
    # 5 falls between two grid points; the fit sits on one or both of them
    assert est.n_atoms <= 2
    assert np.all(np.abs(est.locations - 5.0) <= cfg.spacing_at(5.0))


@pytest.mark.parametrize(
    "phi",
    [
        CountDistribution.from_mapping({0: 0.3, 1: 0.3, 3: 0.4}),
        CountDistribution.from_mapping({1: 0.5, 9: 0.5}),
    ],
)
def test_npmle_likelihood_never_decreases(phi):
    _, diag = npmle(phi, NpmleConfig.from_phi(phi, max_iters=500))
    steps = np.diff(diag.history)
    assert np.all(steps >= -1e-10)
    assert diag.iterations <= 500


def _certificate_of(phi, est, grid):
    """Directional derivative over ``grid`` and pseudo-log-likelihood of ``est``."""
    ks = np.flatnonzero(phi.probs > 0)
    f = poisson_pmf_matrix(ks, est.locations) @ est.weights
    dd = (poisson_pmf_matrix(ks, grid).T @ (phi.probs[ks] / f)).max() - 1.0
    return dd, float(np.dot(phi.probs[ks], np.log(f)))


def test_npmle_certificate(two_atom_mixture):
    # a negligible floor keeps the returned measure equal to the grid solution
    cfg = NpmleConfig.from_phi(two_atom_mixture, grid_points=200, weight_floor=1e-300)
    est, diag = npmle(two_atom_mixture, cfg)
    dd, loglik = _certificate_of(two_atom_mixture, est, cfg.grid())
    assert dd == pytest.approx(diag.max_directional_derivative, rel=1e-6, abs=1e-9)
    assert loglik == pytest.approx(diag.objective, rel=1e-12)
    if diag.converged:
        assert dd <= cfg.dd_tol + 1e-9
    assert est.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(est.locations >= cfg.grid_lo * (1 - 1e-12))
    assert np.all(est.locations <= cfg.grid_hi * (1 + 1e-12))


def test_npmle_keeps_separate_atoms(two_atom_mixture, two_atom):
    est, _ = npmle(two_atom_mixture)
    assert est.n_atoms > 1
    assert wasserstein(est, two_atom) < 0.3


def test_npmle_merged_diagnostics_describe_returned_measure(two_atom_mixture):
    cfg = NpmleConfig.from_phi(two_atom_mixture, grid_points=200, merge_adjacent=True)
    est, diag = npmle(two_atom_mixture, cfg)
    dd, loglik = _certificate_of(two_atom_mixture, est, cfg.grid())
    assert diag.max_directional_derivative == pytest.approx(dd, rel=1e-9)
    assert diag.objective == pytest.approx(loglik, rel=1e-12)
    assert diag.converged == (dd <= cfg.dd_tol)


def test_npmle_atoms_stay_on_grid(two_atom_mixture):
    cfg = NpmleConfig.from_phi(two_atom_mixture, grid_points=100)
    est, _ = npmle(two_atom_mixture, cfg)
    grid = cfg.grid()
    assert all(np.isclose(grid, x, rtol=0, atol=1e-12).any() for x in est.locations)


def test_npmle_degenerate_input():
    with pytest.raises(DegenerateInputError):
        npmle(CountDistribution.point_mass(0))


def test_npmle_config_validation():
    with pytest.raises(InvalidConfigurationError):
        NpmleConfig(grid_lo=2.0, grid_hi=1.0)
    with pytest.raises(InvalidConfigurationError):
        NpmleConfig(grid_lo=0.1, grid_hi=1.0, grid_points=1)


# ---------------------------------------------------------
# Chebyshev weight fit
# ---------------------------------------------------------
def test_chebyshev_single_location(poisson_one):
    weights, objective = fit_weights_chebyshev([2.0], poisson_one, 30)
    expected = np.max(np.abs(poisson_cdf_matrix(30, [2.0])[:, 0] - poisson_one.cdf_values(30)))
    np.testing.assert_array_equal(weights, [1.0])
    assert objective == pytest.approx(expected, abs=1e-15)


def test_chebyshev_recovers_two_atom_weights(two_atom_mixture):
    weights, objective = fit_weights_chebyshev([0.5, 1.5], two_atom_mixture, 30)
    np.testing.assert_allclose(weights, [0.25, 0.75], atol=1e-6)
    assert objective < 1e-8


def test_chebyshev_picks_the_matching_location(poisson_one):
    weights, objective = fit_weights_chebyshev([0.5, 1.0, 2.0], poisson_one, 30)
    assert weights[1] == pytest.approx(1.0, abs=1e-6)
    assert objective < 1e-8


def test_chebyshev_rejects_duplicates(poisson_one):
    with pytest.raises(InvalidConfigurationError):
        fit_weights_chebyshev([1.0, 1.0], poisson_one, 30)


# ---------------------------------------------------------
# Minimum distance
# ---------------------------------------------------------
def test_min_distance_single_atom(poisson_one):
    cfg = MinDistConfig.from_phi(poisson_one, m=1, epsilon=1e-4)
    est, diag = min_distance(poisson_one, cfg)
    assert est.n_atoms == 1
    assert est.locations[0] == pytest.approx(1.0, abs=0.01)
    assert diag.objective <= 0.01


def test_min_distance_two_atoms(two_atom_mixture, two_atom):
    cfg = MinDistConfig.from_phi(two_atom_mixture, m=2, epsilon=1e-4)
    est, _ = min_distance(two_atom_mixture, cfg)
    assert est.n_atoms <= 2
    assert wasserstein(est, two_atom) <= 0.1


def test_min_distance_larger_budget_is_no_worse(poisson_one):
    one = MinDistConfig.from_phi(poisson_one, m=1, epsilon=1e-3, coarse_grid=12)
    three = MinDistConfig.from_phi(poisson_one, m=3, epsilon=1e-3, coarse_grid=12)
    est, diag3 = min_distance(poisson_one, three)
    _, diag1 = min_distance(poisson_one, one)
    assert diag3.objective <= diag1.objective
    assert est.n_atoms <= 3


def test_min_distance_objective_is_reproducible(two_atom_mixture):
    cfg = MinDistConfig.from_phi(two_atom_mixture, m=2, epsilon=1e-3, coarse_grid=15)
    est, diag = min_distance(two_atom_mixture, cfg)
    k_max = objective_k_max(two_atom_mixture, cfg.search_hi)
    recomputed = ks_distance(poisson_mixture(est, k_max), two_atom_mixture)
    assert recomputed == pytest.approx(diag.objective, abs=1e-12)


def test_min_distance_atoms_stay_in_search_interval(two_atom_mixture):
    cfg = MinDistConfig(m=2, epsilon=1e-3, search_lo=0.2, search_hi=5.0, coarse_grid=10)
    est, _ = min_distance(two_atom_mixture, cfg)
    assert est.locations.min() >= 0.2
    assert est.locations.max() <= 5.0


def test_min_distance_budget(poisson_one):
    cfg = MinDistConfig.from_phi(poisson_one, m=4, epsilon=1e-3)
    with pytest.raises(BudgetExceededError):
        min_distance(poisson_one, cfg)


def test_min_distance_reports_unconverged_when_capped(two_atom_mixture):
    cfg = MinDistConfig.from_phi(two_atom_mixture, m=2, epsilon=1e-12, refine_rounds=1)
    _, diag = min_distance(two_atom_mixture, cfg)
    assert not diag.converged
    assert diag.iterations == 1
    assert len(diag.history) == 2


@pytest.mark.slow
def test_min_distance_reaches_the_true_locations_fit(two_step, two_atom):
    n = 100_000
    phi = gt_estimator(occupancy(sample(quantize(two_step, n), 1)))
    eps = epsilon_schedule(n)
    cfg = MinDistConfig.from_phi(phi, m=2, epsilon=eps)
    _, diag = min_distance(phi, cfg)
    _, at_truth = fit_weights_chebyshev(
        two_atom.locations, phi, objective_k_max(phi, cfg.search_hi)
    )
    assert diag.objective <= at_truth + eps


def test_min_dist_config_validation():
    with pytest.raises(InvalidConfigurationError):
        MinDistConfig(m=0, epsilon=0.1, search_lo=0.1, search_hi=1.0)
    with pytest.raises(InvalidConfigurationError):
        MinDistConfig(m=1, epsilon=0.0, search_lo=0.1, search_hi=1.0)
    with pytest.raises(InvalidConfigurationError):
        MinDistConfig(m=1, epsilon=0.1, search_lo=0.1, search_hi=1.0, starts=0)
