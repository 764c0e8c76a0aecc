import streamlit as st
import pandas as pd
from pathlib import Path
import sys

# --- Project imports setup ---
project_root = Path(__file__).resolve().parents[2]
if str(project_root) not in sys.path:
    sys.path.append(str(project_root))

from src.ui.charts import plot_cdfs
from src.ui.sidebar_controls import sidebar_controls
from src.app_state import get_preset, get_sample
from src.measures import wasserstein
from src.sources import (
    alphabet_target,
    entropy_target,
    limit_distribution,
    quantization_bound,
    shadow_distribution,
)


# ==========================================================
# Sidebar controls
# ==========================================================
preset, n, seed, estimator, atoms = sidebar_controls()

st.title("Source Explorer")
st.subheader(f"{preset.replace('_', ' ')}, n = {n:,}")

density, alpha = get_preset(preset)
source = get_sample(preset, n, seed)["source"]


# ----------------------------------------------------------
# Density
# ----------------------------------------------------------
st.markdown("#### Density pieces g(w) = a·w + b")
st.dataframe(
    pd.DataFrame(
        [{"lo": p.lo, "hi": p.hi, "a": p.a, "b": p.b} for p in density.pieces]
    ),
    use_container_width=True,
)

col1, col2, col3, col4 = st.columns(4)
col1.metric("Alphabet size", f"{source.alphabet_size:,}")
col2.metric("|A_n| / n", f"{alphabet_target(source):.4f}")
col3.metric("H(p_n) − log n", f"{entropy_target(source):.4f}")
col4.metric("Jumps L", density.n_discontinuities)


# ----------------------------------------------------------
# Shadow law P_n against the limit P
# ----------------------------------------------------------
shadow = shadow_distribution(source)
st.markdown("#### Shadow law P_n (law of n·p_n(X))")
st.caption(f"{shadow.n_atoms} distinct values; first 50 shown")
st.dataframe(shadow.to_frame().head(50), use_container_width=True)

if density.is_step:
    limit = limit_distribution(density, alpha)
    st.markdown("#### Limit law P")
    st.dataframe(limit.to_frame(), use_container_width=True)
    st.plotly_chart(
        plot_cdfs({"P_n": shadow, "P": limit}, title="Shadow and limit CDFs"),
        use_container_width=True,
    )

    c1, c2 = st.columns(2)
    c1.metric("d_W(P_n, P)", f"{wasserstein(shadow, limit):.3e}")
    if alpha == 1.0:
        c2.metric("(L+1)(ĉ−č)/n", f"{quantization_bound(density, n):.3e}")
else:
    st.info("The limit law is continuous for sloped densities; only P_n is shown.")
    st.plotly_chart(plot_cdfs({"P_n": shadow}, title="Shadow CDF"), use_container_width=True)
