import streamlit as st
import pandas as pd
from pathlib import Path
import sys

# --- Project imports setup ---
project_root = Path(__file__).resolve().parents[2]
if str(project_root) not in sys.path:
    sys.path.append(str(project_root))

from src.ui.charts import plot_atoms, plot_cdfs
from src.ui.sidebar_controls import sidebar_controls
from src.app_state import get_fit, get_preset, get_sample
from src.canonical import (
    Schedule,
    estimate_alphabet_size,
    estimate_entropy,
    estimate_occupancy_mass,
    estimate_seq_logprob,
    estimate_support,
)
from src.measures import wasserstein
from src.sources import (
    alphabet_target,
    entropy_target,
    limit_distribution,
    shadow_distribution,
)


# ==========================================================
# Sidebar controls
# ==========================================================
preset, n, seed, estimator, atoms = sidebar_controls()

st.title("Mixing Estimation")
st.subheader(f"{preset.replace('_', ' ')}, n = {n:,}, seed {seed}")

density, alpha = get_preset(preset)
source = get_sample(preset, n, seed)["source"]

try:
    with st.spinner("Fitting the mixing measure..."):
        p_tilde, diagnostics = get_fit(preset, n, seed, estimator, atoms)
except Exception as e:
    st.error(f"Fit failed: {e}")
    st.stop()


# ----------------------------------------------------------
# Fit
# ----------------------------------------------------------
if density.is_step:
    reference = limit_distribution(density, alpha)
else:
    reference = shadow_distribution(source)

col1, col2, col3, col4 = st.columns(4)
col1.metric("Atoms", p_tilde.n_atoms)
col2.metric("Objective", f"{diagnostics.objective:.5g}")
col3.metric("Iterations", diagnostics.iterations)
target_label = "P" if density.is_step else "P_n"
col4.metric(f"d_W to {target_label}", f"{wasserstein(p_tilde, reference):.4f}")

if not diagnostics.converged:
    st.warning("The fit stopped before its convergence criterion was met.")

st.markdown("#### Estimated mixing measure")
fitted = {"estimate": p_tilde, target_label: reference}
col_a, col_b = st.columns(2)
col_a.plotly_chart(plot_cdfs(fitted), use_container_width=True)
if density.is_step:
    col_b.plotly_chart(plot_atoms(fitted), use_container_width=True)
st.dataframe(p_tilde.to_frame(), use_container_width=True)


# ----------------------------------------------------------
# Plug-in estimates
# ----------------------------------------------------------
st.markdown("#### Plug-in estimates")
eps = st.slider("Fallback exponent ε", min_value=0.1, max_value=0.9, value=0.5, step=0.1)
schedule = Schedule.fallback(eps)
support = estimate_support(p_tilde, Schedule.power(1.0), n) if n >= 16 else None


def _row(quantity, estimate, finite_value=None):
    return {"quantity": quantity, "estimate": estimate, "finite-n value": finite_value}


rows = [
    _row(
        "H(p_n) − log n",
        estimate_entropy(p_tilde, schedule, n),
        entropy_target(source),
    ),
    _row("(1/n) log p(Xⁿ) + log n", estimate_seq_logprob(p_tilde, schedule, n)),
    _row(
        "|A_n| / n",
        estimate_alphabet_size(p_tilde, schedule, n),
        alphabet_target(source),
    ),
    _row("λ₀ (missing mass)", estimate_occupancy_mass(p_tilde, 0)),
]
if support is not None:
    c_lo, c_hi = shadow_distribution(source).support
    rows += [
        _row("support lower č", support.lower, c_lo),
        _row("support upper ĉ", support.upper, c_hi),
    ]
st.dataframe(pd.DataFrame(rows), use_container_width=True)
if support is not None:
    st.caption(
        f"Support power q = {support.q:.3f}, "
        f"clamps [{support.taper_lo:.3f}, {support.taper_hi:.3f}]"
    )
