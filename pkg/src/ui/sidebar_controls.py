import streamlit as st

from src.app_state import N_CHOICES


def sidebar_controls():
    """Shared sidebar that persists across pages within the same session."""
    st.sidebar.header("Select Source and Sample")

    presets = sorted(st.session_state.get("presets", {}).keys()) or ["two_step"]
    estimators = ["mindist", "npmle"]

    # --- Step 1: Prepopulate Streamlit session_state if empty ---
    # (Only the first time in an app session)
    if not all(k in st.session_state for k in ["preset", "n", "seed", "estimator", "atoms"]):
        st.session_state["preset"] = "two_step" if "two_step" in presets else presets[0]
        st.session_state["n"] = 10_000
        st.session_state["seed"] = 7
        st.session_state["estimator"] = "mindist"
        st.session_state["atoms"] = 2

    # --- Step 2: Widgets use the current state values ---
    preset = st.sidebar.selectbox(
        "Density",
        options=presets,
        index=presets.index(st.session_state["preset"]),
        key="preset",
        format_func=lambda x: x.replace("_", " "),
    )

    n = st.sidebar.selectbox(
        "Sample size n",
        options=N_CHOICES,
        index=N_CHOICES.index(st.session_state["n"]),
        key="n",
        format_func=lambda x: f"{x:,}",
    )

    seed = st.sidebar.number_input("Seed", min_value=0, step=1, key="seed")

    estimator = st.sidebar.selectbox(
        "Mixing estimator",
        options=estimators,
        index=estimators.index(st.session_state["estimator"]),
        key="estimator",
        format_func=lambda x: "Minimum distance" if x == "mindist" else "NPMLE",
    )

    atoms = st.sidebar.slider(
        "Atoms m (minimum distance)", min_value=1, max_value=3, key="atoms"
    )

    # --- Step 3: Return consistent values ---
    return preset, n, int(seed), estimator, atoms
