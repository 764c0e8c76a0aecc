# src/app_state.py
"""
Shared state for the RareLoom explorer.
Loads the density presets once and caches samples and mixing fits in
session_state under deterministic keys.
"""

from dataclasses import replace
from pathlib import Path

import streamlit as st

from src.goodturing import gt_estimator, occupancy
from src.harness import ExperimentConfig, fit_mixing
from src.sources import load_density, quantize, sample

PRESET_DIR = Path(__file__).resolve().parents[1] / "configs" / "densities"

# Sample sizes offered in the sidebar
N_CHOICES = [100, 1_000, 10_000, 100_000]


def load_presets(directory=PRESET_DIR):
    """Map preset name (file stem) to (density, alpha) for every spec file."""
    return {path.stem: load_density(path) for path in sorted(Path(directory).glob("*.toml"))}


def init_app_state():
    """
    Initialize the explorer state. Call once from apps/Home.py.

    Sets the following session_state keys:
    - presets: dict of preset name -> (PiecewiseDensity, alpha)
    """
    if "presets" not in st.session_state:
        try:
            st.session_state.presets = load_presets()
        except Exception as e:
            st.error(f"Failed to load density presets: {e}")
            st.session_state.presets = {}


def get_preset(name):
    presets = st.session_state.get("presets") or load_presets()
    if name not in presets:
        raise ValueError(f"Unknown density preset: {name}")
    return presets[name]


def get_sample(preset, n, seed):
    """
    Quantized source, drawn record and Good-Turing estimator for one
    (preset, n, seed). Results are cached in session_state.

    Returns
    -------
    dict with keys ``source``, ``record``, ``phi``
    """
    key = f"sample__{preset}__{n}__{seed}"
    if key in st.session_state:
        return st.session_state[key]

    density, alpha = get_preset(preset)
    source = quantize(density, n, alpha)
    record = sample(source, seed)
    result = {"source": source, "record": record, "phi": gt_estimator(occupancy(record))}

    st.session_state[key] = result
    return result


def get_fit(preset, n, seed, estimator, m=2):
    """
    Mixing-measure fit for a cached sample.

    Returns
    -------
    (DiscreteMeasure, FitDiagnostics)
    """
    key = f"fit__{preset}__{n}__{seed}__{estimator}__{m}"
    if key in st.session_state:
        return st.session_state[key]

    density, alpha = get_preset(preset)
    phi = get_sample(preset, n, seed)["phi"]
    cfg = ExperimentConfig(
        density=density,
        alpha=alpha,
        n_grid=(n,),
        estimator=estimator,
        ground_truth="limit" if density.is_step else "finite",
    )
    cfg = replace(cfg, mindist=replace(cfg.mindist, m=m))
    result = fit_mixing(phi, cfg, n)

    st.session_state[key] = result
    return result
