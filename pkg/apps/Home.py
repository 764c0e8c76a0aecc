import sys
from pathlib import Path
import streamlit as st

# --- Project root setup ---
project_root = Path(__file__).resolve().parents[1]
if str(project_root) not in sys.path:
    sys.path.append(str(project_root))

from src.app_state import init_app_state

# --- Page config ---
st.set_page_config(
    page_title="RareLoom Explorer",
    layout="wide",
)

# --- Initialize app state once ---
with st.spinner("Loading density presets..."):
    init_app_state()

# --- Main content (no custom navigation) ---
st.title("RareLoom: Estimation in the Rare-Events Regime")
st.markdown("<div style='height: 25px'></div>", unsafe_allow_html=True)

st.info(
    """
    Quantize a density into a rare-events source, draw a sample, and follow
    it through the Good-Turing estimator, the mixing-measure fit and the
    plug-in estimates of entropy, alphabet size and support.
    Use the built-in Streamlit navigation (left sidebar) to explore the sections.
    """
)

presets = st.session_state.get("presets", {})
if presets:
    st.subheader("Density presets")
    st.dataframe(
        [
            {
                "preset": name,
                "pieces": len(density.pieces),
                "alpha": alpha,
                "c_lo": density.c_lo,
                "c_hi": density.c_hi,
                "step density": density.is_step,
            }
            for name, (density, alpha) in presets.items()
        ],
        use_container_width=True,
    )
