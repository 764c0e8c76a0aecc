import numpy as np
import pandas as pd
import plotly.express as px
import plotly.graph_objects as go


def _step_points(measure, right: float):
    """CDF of a DiscreteMeasure as (x, y) points for an 'hv' line from 0 to ``right``."""
    x = np.concatenate(([0.0], measure.locations, [right]))
    y = np.concatenate(([0.0], np.cumsum(measure.weights), [1.0]))
    return x, np.minimum(y, 1.0)


def plot_cdfs(measures: dict, title: str = "Mixing CDFs"):
    """
    Overlay the CDFs of several DiscreteMeasures.

    Parameters
    ----------
    measures : dict
        Legend name -> DiscreteMeasure.

    Returns
    -------
    fig : plotly.graph_objects.Figure
    """
    if not measures:
        return go.Figure()

    right = 1.1 * max(float(m.locations[-1]) for m in measures.values())
    fig = go.Figure()
    for name, measure in measures.items():
        x, y = _step_points(measure, right)
        fig.add_trace(go.Scatter(x=x, y=y, name=name, mode="lines", line_shape="hv"))

    fig.update_layout(
        title=title,
        template="plotly_white",
        margin=dict(l=40, r=40, t=50, b=40),
        xaxis=dict(title="x"),
        yaxis=dict(title="F(x)", range=[0, 1.02]),
    )
    return fig


def plot_atoms(measures: dict, title: str = "Atoms"):
    """Atom weights of several DiscreteMeasures side by side (one bar group per measure)."""
    frames = [
        pd.DataFrame({"x": m.locations, "weight": m.weights, "measure": name})
        for name, m in measures.items()
    ]
    if not frames:
        return go.Figure()

    fig = px.bar(
        pd.concat(frames, ignore_index=True),
        x="x",
        y="weight",
        color="measure",
        barmode="group",
        title=title,
        template="plotly_white",
    )
    fig.update_traces(width=0.03)
    return fig


def plot_count_pmfs(table: pd.DataFrame, columns, title: str = "Occupancy laws"):
    """Line chart of pmf columns of ``table`` against its ``k`` column."""
    long = table.melt(id_vars="k", value_vars=list(columns), var_name="law", value_name="mass")
    return px.line(long, x="k", y="mass", color="law", markers=True, title=title)


def plot_rates(table: pd.DataFrame, value: str = "mean_error"):
    """Log-log error curves, one line per quantity, from a summarize() table."""
    fig = px.line(
        table,
        x="n",
        y=value,
        color="quantity",
        markers=True,
        log_x=True,
        log_y=True,
        title=f"{value} along n",
    )
    fig.update_layout(template="plotly_white", margin=dict(l=40, r=40, t=50, b=40))
    return fig
