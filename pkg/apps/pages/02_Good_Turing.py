import streamlit as st
import pandas as pd
from pathlib import Path
import sys

# --- Project imports setup ---
project_root = Path(__file__).resolve().parents[2]
if str(project_root) not in sys.path:
    sys.path.append(str(project_root))

from src.ui.charts import plot_count_pmfs
from src.ui.sidebar_controls import sidebar_controls
from src.app_state import get_preset, get_sample
from src.goodturing import expected_gt_estimator, mixture_target, occupancy, true_gamma
from src.measures import choose_k_max, ks_distance, l1_distance


# ==========================================================
# Sidebar controls
# ==========================================================
preset, n, seed, estimator, atoms = sidebar_controls()

st.title("Good-Turing")
st.subheader(f"{preset.replace('_', ' ')}, n = {n:,}, seed {seed}")

density, alpha = get_preset(preset)
cached = get_sample(preset, n, seed)
source, record, phi = cached["source"], cached["record"], cached["phi"]

occ = occupancy(record)
gamma = true_gamma(source, record)
k_max = max(phi.k_max, gamma.k_max, choose_k_max(density.c_hi / alpha))
expected = expected_gt_estimator(source, k_max)

table = pd.DataFrame(
    {
        "k": range(k_max + 1),
        "occupancy": [int(occ.varphi[k]) if k < occ.varphi.size else 0 for k in range(k_max + 1)],
        "phi_n (Good-Turing)": phi.padded(k_max),
        "gamma_n (true)": gamma.padded(k_max),
        "E[phi_n]": expected.padded(k_max),
    }
)

col1, col2, col3 = st.columns(3)
col1.metric("Distinct symbols", f"{occ.distinct:,}")
col2.metric("Missing mass γ₀", f"{gamma.pmf(0):.4f}")
col3.metric("Good-Turing φ₀", f"{phi.pmf(0):.4f}")

if density.is_step:
    lam = mixture_target(density, k_max, alpha)
    table["lambda (limit)"] = lam.padded(k_max)
    c1, c2 = st.columns(2)
    c1.metric("‖φ_n − λ‖₁", f"{l1_distance(phi, lam):.4f}")
    c2.metric("sup_k |F_φ − F_λ|", f"{ks_distance(phi, lam):.4f}")
else:
    c1, c2 = st.columns(2)
    c1.metric("‖φ_n − γ_n‖₁", f"{l1_distance(phi, gamma):.4f}")
    c2.metric("sup_k |F_φ − F_γ|", f"{ks_distance(phi, gamma):.4f}")

laws = [c for c in table.columns if c != "k" and c != "occupancy"]
st.plotly_chart(plot_count_pmfs(table, laws), use_container_width=True)
st.dataframe(table, use_container_width=True)
