import streamlit as st
from pathlib import Path
import sys

# --- Project imports setup ---
project_root = Path(__file__).resolve().parents[2]
if str(project_root) not in sys.path:
    sys.path.append(str(project_root))

from src.ui.charts import plot_rates
from src.ui.sidebar_controls import sidebar_controls
from src.app_state import N_CHOICES, get_preset
from src.harness import (
    ExperimentConfig,
    expand_quantities,
    reports_frame,
    run_experiment,
    summarize,
)
from src.harness.config import QUANTITIES


@st.cache_data(show_spinner=False)
def run_sweep(preset, n_grid, n_seeds, quantities, estimator, betas):
    density, alpha = get_preset(preset)
    cfg = ExperimentConfig(
        density=density,
        alpha=alpha,
        n_grid=tuple(n_grid),
        seeds=tuple(range(1, n_seeds + 1)),
        quantities=expand_quantities(quantities),
        estimator=estimator,
        ground_truth="limit" if density.is_step else "finite",
    )
    reports = run_experiment(cfg)
    return reports_frame(reports, include_runtime=True), summarize(reports, betas)


# ==========================================================
# Sidebar controls
# ==========================================================
preset, n, seed, estimator, atoms = sidebar_controls()

st.title("Rate Sweep")
st.caption("Seed-averaged absolute errors along n, with the scaled errors error·n^β.")

n_grid = st.multiselect("n grid", options=N_CHOICES, default=N_CHOICES[:3])
n_seeds = st.slider("Seeds", min_value=1, max_value=20, value=5)
quantities = st.multiselect("Quantities", options=list(QUANTITIES), default=["gt_ks", "entropy"])
beta = st.slider("β", min_value=0.0, max_value=0.5, value=0.4, step=0.05)

if len(n_grid) < 2 or not quantities:
    st.info("Pick at least two sample sizes and one quantity.")
    st.stop()

if st.button("Run sweep"):
    try:
        with st.spinner("Running..."):
            reports, table = run_sweep(
                preset, sorted(n_grid), n_seeds, tuple(quantities), estimator, (0.0, beta)
            )
    except Exception as e:
        st.error(f"Sweep failed: {e}")
        st.stop()

    st.markdown("#### Rate table")
    st.plotly_chart(plot_rates(table), use_container_width=True)
    st.dataframe(table, use_container_width=True)
    with st.expander("All reports"):
        st.dataframe(reports, use_container_width=True)
