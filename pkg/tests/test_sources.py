import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.errors import (
    ConfigError,
    InvalidConfigurationError,
    InvalidDensityError,
    MismatchedSourceError,
    UnsupportedDensityError,
)
from src.measures import DiscreteMeasure, wasserstein
from src.sources import (
    Piece,
    PiecewiseDensity,
    RareEventsSource,
    alphabet_target,
    entropy_target,
    limit_distribution,
    load_density,
    parse_density,
    quantization_bound,
    quantize,
    sample,
    sequence_logprob,
    shadow_distribution,
)
from tests.conftest import DENSITY_DIR


# ---------------------------------------------------------
# Densities
# ---------------------------------------------------------
def test_density_bounds_and_jumps(two_step):
    assert two_step.c_lo == 0.5
    assert two_step.c_hi == 1.5
    assert two_step.is_step
    assert two_step.n_discontinuities == 1
    assert two_step.integral(0.5) == pytest.approx(0.25)
    np.testing.assert_allclose(two_step([0.1, 0.7]), [0.5, 1.5])


@pytest.mark.parametrize(
    "pieces",
    [
        (Piece(0.0, 0.4, 0.0, 1.0), Piece(0.5, 1.0, 0.0, 1.0)),
        (Piece(0.0, 1.0, 0.0, 2.0),),
        (Piece(0.0, 0.5, 0.0, 2.0), Piece(0.5, 1.0, 0.0, 0.0)),
        (),
    ],
)
def test_invalid_densities_raise(pieces):
    with pytest.raises(InvalidDensityError):
        PiecewiseDensity(pieces)


def test_sloped_density():
    g = PiecewiseDensity((Piece(0.0, 1.0, 1.0, 0.5),))
    assert not g.is_step
    assert g.lipschitz == 1.0
    assert (g.c_lo, g.c_hi) == (0.5, 1.5)


def test_load_density_presets():
    g, alpha = load_density(DENSITY_DIR / "two_step.toml")
    assert alpha == 1.0
    assert [p.b for p in g.pieces] == [0.5, 1.5]
    g3, _ = load_density(DENSITY_DIR / "misaligned_third.toml")
    assert g3.n_discontinuities == 1


def test_parse_density_reports_field():
    with pytest.raises(ConfigError) as info:
        parse_density({"pieces": [{"lo": 0.0, "hi": 1.0}]})
    assert info.value.field == "density.pieces[0]"


def test_load_density_reports_syntax_line(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("alpha = 1.0\npieces = [\n  { lo = 0.0, hi = 1.0, b = }\n]\n")
    with pytest.raises(ConfigError) as info:
        load_density(path)
    assert info.value.line == 3


# ---------------------------------------------------------
# Quantization
# ---------------------------------------------------------
def test_quantize_quarter_cells(two_step):
    s = quantize(two_step, 4)
    np.testing.assert_allclose(s.probs, [0.125, 0.125, 0.375, 0.375], atol=1e-15)


def test_quantize_across_the_jump(two_step):
    s = quantize(two_step, 3)
    np.testing.assert_allclose(s.probs, [1 / 6, 1 / 3, 1 / 2], atol=1e-15)


@pytest.mark.parametrize("n", [1, 7, 1000])
def test_quantize_uniform(n):
    s = quantize(PiecewiseDensity.uniform(), n)
    np.testing.assert_allclose(s.probs, np.full(n, 1 / n), rtol=1e-12)


def test_quantize_alpha(two_step):
    assert quantize(two_step, 10, alpha=2.5).alphabet_size == 25
    with pytest.raises(InvalidConfigurationError):
        quantize(two_step, 3, alpha=0.2)


# ---------------------------------------------------------
# Shadow and limit laws
# ---------------------------------------------------------
def test_shadow_of_uniform_is_unit_point_mass():
    p = shadow_distribution(quantize(PiecewiseDensity.uniform(), 50))
    assert p.locations.tolist() == pytest.approx([1.0])


def test_shadow_examples(two_step):
    p4 = shadow_distribution(quantize(two_step, 4))
    np.testing.assert_allclose(p4.locations, [0.5, 1.5])
    np.testing.assert_allclose(p4.weights, [0.25, 0.75])

    p3 = shadow_distribution(quantize(two_step, 3))
    np.testing.assert_allclose(p3.locations, [0.5, 1.0, 1.5])
    np.testing.assert_allclose(p3.weights, [1 / 6, 1 / 3, 1 / 2])


def test_limit_distribution_examples(two_step):
    assert limit_distribution(PiecewiseDensity.uniform()).atoms == [(1.0, 1.0)]

    p = limit_distribution(two_step)
    np.testing.assert_allclose(p.locations, [0.5, 1.5])
    np.testing.assert_allclose(p.weights, [0.25, 0.75])

    # level sets are aggregated across non-contiguous pieces
    g = PiecewiseDensity.step([0.0, 0.25, 0.5, 1.0], [0.8, 1.6, 0.8])
    p = limit_distribution(g)
    np.testing.assert_allclose(p.locations, [0.8, 1.6])
    np.testing.assert_allclose(p.weights, [0.6, 0.4])


def test_limit_distribution_scales_with_alpha(two_step):
    p = limit_distribution(two_step, alpha=2.0)
    np.testing.assert_allclose(p.locations, [0.25, 0.75])


def test_limit_distribution_rejects_slopes():
    with pytest.raises(UnsupportedDensityError):
        limit_distribution(PiecewiseDensity((Piece(0.0, 1.0, 1.0, 0.5),)))


@pytest.mark.parametrize("n", [2, 4, 100, 1000])
def test_aligned_quantization_is_lossless(two_step, n):
    p_n = shadow_distribution(quantize(two_step, n))
    assert wasserstein(p_n, limit_distribution(two_step)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("n", [10, 100, 1000, 10000])
def test_misaligned_quantization_bound(misaligned_third, n):
    s = quantize(misaligned_third, n)
    distance = wasserstein(shadow_distribution(s), limit_distribution(misaligned_third))
    assert distance > 0
    assert distance <= quantization_bound(misaligned_third, n)


def test_misaligned_hand_computed(misaligned_third):
    s = quantize(misaligned_third, 10)
    distance = wasserstein(shadow_distribution(s), limit_distribution(misaligned_third))
    assert distance == pytest.approx(0.0375, abs=1e-12)


@given(st.integers(min_value=1, max_value=3000))
def test_shadow_atoms_stay_in_support(n):
    g = PiecewiseDensity.step([0.0, 0.25, 0.5, 1.0], [1.2, 0.6, 1.1])
    p = shadow_distribution(quantize(g, n))
    assert p.locations.min() >= 0.6 * (1 - 1e-9)
    assert p.locations.max() <= 1.2 * (1 + 1e-9)


# ---------------------------------------------------------
# Sampling
# ---------------------------------------------------------
def test_single_symbol_source():
    rec = sample(RareEventsSource(n=5, alpha=1.0, probs=np.array([1.0])), seed=3)
    assert rec.as_mapping() == {0: 5}


@pytest.mark.parametrize("seed", [0, 1, 2**40])
def test_sample_is_deterministic_and_conserves_n(two_step, seed):
    s = quantize(two_step, 500)
    a, b = sample(s, seed), sample(s, seed)
    assert np.array_equal(a.counts, b.counts)
    assert a.counts.sum() == 500


def test_different_seeds_differ(two_step):
    s = quantize(two_step, 500)
    assert not np.array_equal(sample(s, 1).counts, sample(s, 2).counts)


def test_uniform_sample_band():
    s = quantize(PiecewiseDensity.uniform(), 100_000)
    rec = sample(s, seed=11)
    assert rec.counts.mean() == 1.0
    assert rec.counts.max() <= 10


# ---------------------------------------------------------
# Finite-n estimands
# ---------------------------------------------------------
def test_uniform_targets():
    s = quantize(PiecewiseDensity.uniform(), 1000)
    assert entropy_target(s) == pytest.approx(0.0, abs=1e-12)
    assert alphabet_target(s) == 1.0
    assert sequence_logprob(s, sample(s, 5)) == pytest.approx(0.0, abs=1e-9)


def test_two_step_targets_match_limit(two_step):
    s = quantize(two_step, 1000)
    expected = -(0.25 * math.log(0.5) + 0.75 * math.log(1.5))
    assert entropy_target(s) == pytest.approx(expected, abs=1e-12)
    assert alphabet_target(s) == 1.0


def test_sequence_logprob_rejects_foreign_record(two_step):
    rec = sample(quantize(two_step, 100), 1)
    with pytest.raises(MismatchedSourceError):
        sequence_logprob(quantize(two_step, 200), rec)


def test_quantization_bound_value(misaligned_third):
    assert quantization_bound(misaligned_third, 100) == pytest.approx(2 * 0.75 / 100)
