import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import InvalidMeasureError
from src.measures import (
    CountDistribution,
    DiscreteMeasure,
    cdf_eval,
    choose_k_max,
    ks_distance,
    l1_distance,
    poisson_cdf_matrix,
    poisson_mixture,
    wasserstein,
)
from scipy.stats import poisson

atoms = st.lists(
    st.tuples(
        st.floats(min_value=0.01, max_value=20.0),
        st.floats(min_value=0.01, max_value=1.0),
    ),
    min_size=1,
    max_size=5,
)


def measure(pairs):
    locs, weights = zip(*pairs)
    return DiscreteMeasure.from_unnormalized(locs, weights)


# ---------------------------------------------------------
# DiscreteMeasure / CountDistribution
# ---------------------------------------------------------
def test_measure_is_sorted_and_merges_close_atoms():
    m = DiscreteMeasure([1.5, 0.5, 0.5 + 1e-14], [0.5, 0.25, 0.25])
    assert m.locations.tolist() == [0.5, 1.5]
    assert m.weights.tolist() == [0.5, 0.5]


def test_zero_weight_atoms_are_dropped():
    m = DiscreteMeasure([1.0, 2.0], [1.0, 0.0])
    assert m.n_atoms == 1


@pytest.mark.parametrize(
    "locs, weights",
    [
        ([1.0], [0.9]),
        ([0.0, 1.0], [0.5, 0.5]),
        ([1.0, 2.0], [1.5, -0.5]),
        ([], []),
    ],
)
def test_invalid_measures_raise(locs, weights):
    with pytest.raises(InvalidMeasureError):
        DiscreteMeasure(locs, weights)


def test_measure_arrays_are_read_only(two_atom):
    with pytest.raises(ValueError):
        two_atom.weights[0] = 1.0


def test_count_distribution_accepts_tail():
    c = CountDistribution([0.5, 0.4], tail=0.1)
    assert c.k_max == 1
    assert c.pmf(5) == 0.0
    with pytest.raises(InvalidMeasureError):
        CountDistribution([0.5, 0.4])


def test_from_mapping_and_trimmed():
    c = CountDistribution.from_mapping({2: 0.5, 0: 0.5})
    assert c.probs.tolist() == [0.5, 0.0, 0.5]
    assert CountDistribution.trimmed([1.0, 0.0, 0.0]).k_max == 0


# ---------------------------------------------------------
# cdf_eval
# ---------------------------------------------------------
def test_cdf_eval_point_mass():
    delta = DiscreteMeasure.point_mass(1.0)
    assert cdf_eval(delta, 0.5) == 0.0
    assert cdf_eval(delta, 1.0) == 1.0


def test_cdf_eval_poisson_mixture():
    lam = poisson_mixture(DiscreteMeasure.point_mass(1.0), 20)
    assert cdf_eval(lam, 1) == pytest.approx(2 * math.exp(-1), abs=1e-12)
    assert cdf_eval(lam, -1) == 0.0


@given(atoms)
def test_cdf_eval_is_monotone(pairs):
    m = measure(pairs)
    xs = np.linspace(0.0, 21.0, 50)
    values = [cdf_eval(m, x) for x in xs]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert cdf_eval(m, m.locations[-1]) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------
# Distances
# ---------------------------------------------------------
def test_wasserstein_point_masses():
    assert wasserstein(DiscreteMeasure.point_mass(1.0), DiscreteMeasure.point_mass(1.0)) == 0.0
    assert wasserstein(
        DiscreteMeasure.point_mass(0.5), DiscreteMeasure.point_mass(1.5)
    ) == pytest.approx(1.0, abs=1e-12)


def test_wasserstein_hand_computed():
    p = DiscreteMeasure([0.1, 1.1], [0.5, 0.5])
    q = DiscreteMeasure.point_mass(0.6)
    assert wasserstein(p, q) == pytest.approx(0.5, abs=1e-12)


@settings(max_examples=1000, deadline=None)
@given(atoms, atoms, atoms)
def test_wasserstein_is_a_metric(a, b, c):
    p, q, r = measure(a), measure(b), measure(c)
    assert wasserstein(p, p) == pytest.approx(0.0, abs=1e-12)
    assert wasserstein(p, q) == wasserstein(q, p)
    assert wasserstein(p, r) <= wasserstein(p, q) + wasserstein(q, r) + 1e-12


def test_ks_and_l1_on_unit_masses():
    zero, one = CountDistribution.point_mass(0), CountDistribution.point_mass(1)
    assert ks_distance(zero, zero) == 0.0
    assert ks_distance(zero, one) == 1.0
    assert l1_distance(zero, zero) == 0.0
    assert l1_distance(zero, one) == 2.0


def test_ks_between_poisson_laws_matches_brute_force():
    a = poisson_mixture(DiscreteMeasure.point_mass(1.0), 50)
    b = poisson_mixture(DiscreteMeasure.point_mass(1.1), 50)
    ks = np.arange(51)
    expected = np.max(np.abs(poisson.cdf(ks, 1.0) - poisson.cdf(ks, 1.1)))
    assert ks_distance(a, b) == pytest.approx(expected, abs=1e-12)


def test_l1_truncated_against_exact():
    exact = poisson_mixture(DiscreteMeasure.point_mass(1.0), 20)
    truncated = CountDistribution(exact.probs / exact.probs.sum())
    expected = np.abs(truncated.probs - poisson.pmf(np.arange(21), 1.0)).sum()
    assert l1_distance(truncated, exact) == pytest.approx(expected, abs=1e-14)


# ---------------------------------------------------------
# Poisson mixtures
# ---------------------------------------------------------
def test_poisson_mixture_of_unit_point_mass():
    lam = poisson_mixture(DiscreteMeasure.point_mass(1.0), 20)
    expected = np.array([math.exp(-1) / math.factorial(k) for k in range(21)])
    np.testing.assert_allclose(lam.probs, expected, rtol=0, atol=1e-12)


def test_poisson_mixture_two_atoms_at_zero(two_atom):
    lam = poisson_mixture(two_atom, 10)
    assert lam.pmf(0) == pytest.approx(0.3189805, abs=1e-7)


@pytest.mark.parametrize("c", [0.01, 1.0, 7.5, 50.0])
def test_poisson_mixture_normalization_and_mean(c):
    lam = poisson_mixture(DiscreteMeasure.point_mass(c), 200)
    assert lam.tail < 1e-12
    assert lam.probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert lam.mean() == pytest.approx(c, abs=1e-9)


@given(
    atoms,
    atoms,
    st.floats(min_value=0.0, max_value=1.0),
)
def test_poisson_mixture_is_affine(a, b, alpha):
    q1, q2 = measure(a), measure(b)
    mixed = DiscreteMeasure(
        np.concatenate([q1.locations, q2.locations]),
        np.concatenate([alpha * q1.weights, (1 - alpha) * q2.weights]),
    )
    k_max = 60
    left = poisson_mixture(mixed, k_max).probs
    right = alpha * poisson_mixture(q1, k_max).probs + (1 - alpha) * poisson_mixture(
        q2, k_max
    ).probs
    np.testing.assert_allclose(left, right, rtol=0, atol=1e-12)


def test_cdf_matrix_is_cumulative_pmf():
    h = poisson_cdf_matrix(30, [0.5, 2.0])
    np.testing.assert_allclose(h[:, 0], poisson.cdf(np.arange(31), 0.5), atol=1e-12)
    np.testing.assert_allclose(h[:, 1], poisson.cdf(np.arange(31), 2.0), atol=1e-12)


@pytest.mark.parametrize("top", [0.5, 1.5, 20.0])
def test_choose_k_max_leaves_tiny_tail(top):
    k = choose_k_max(top)
    assert poisson.sf(k, top) < 1e-10
    assert poisson.sf(k - 1, top) >= 1e-10
