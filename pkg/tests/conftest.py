from pathlib import Path

import pytest

from src.measures import CountDistribution, DiscreteMeasure, poisson_mixture
from src.sources import PiecewiseDensity

ROOT = Path(__file__).resolve().parents[1]
DENSITY_DIR = ROOT / "configs" / "densities"

# Fixed seed list cited by the convergence runs (same as configs/experiments/acceptance.toml)
ACCEPTANCE_SEEDS = list(range(1, 21))

# -log of the limit law's geometric mean: -(0.25 ln 0.5 + 0.75 ln 1.5)
TWO_STEP_ENTROPY = -0.130812


@pytest.fixture
def two_step():
    return PiecewiseDensity.step([0.0, 0.5, 1.0], [0.5, 1.5])


@pytest.fixture
def misaligned_third():
    return PiecewiseDensity.step([0.0, 1.0 / 3.0, 1.0], [1.5, 0.75])


@pytest.fixture
def two_atom():
    return DiscreteMeasure([0.5, 1.5], [0.25, 0.75])


@pytest.fixture
def poisson_one():
    """Exact Poisson(1) pmf to k = 30, renormalized."""
    lam = poisson_mixture(DiscreteMeasure.point_mass(1.0), 30)
    return CountDistribution(lam.probs / lam.probs.sum())


@pytest.fixture
def two_atom_mixture(two_atom):
    lam = poisson_mixture(two_atom, 30)
    return CountDistribution(lam.probs / lam.probs.sum())
