import numpy as np
import pandas as pd
import pytest

from src.measures import DiscreteMeasure
from src.ui.charts import plot_atoms, plot_cdfs, plot_count_pmfs, plot_rates


def test_cdf_trace_is_a_step_function(two_atom):
    fig = plot_cdfs({"P": two_atom})
    (trace,) = fig.data
    assert trace.line.shape == "hv"
    np.testing.assert_allclose(trace.x, [0.0, 0.5, 1.5, 1.65])
    np.testing.assert_allclose(trace.y, [0.0, 0.25, 1.0, 1.0])


def test_one_trace_per_measure(two_atom):
    fig = plot_cdfs({"P": two_atom, "Q": DiscreteMeasure.point_mass(1.0)})
    assert [t.name for t in fig.data] == ["P", "Q"]


def test_empty_inputs_give_empty_figures():
    assert len(plot_cdfs({}).data) == 0
    assert len(plot_atoms({}).data) == 0


def test_atom_bars(two_atom):
    fig = plot_atoms({"P": two_atom})
    np.testing.assert_allclose(fig.data[0].y, [0.25, 0.75])


def test_count_pmf_lines():
    table = pd.DataFrame({"k": [0, 1, 2], "phi": [0.5, 0.3, 0.2], "gamma": [0.4, 0.4, 0.2]})
    fig = plot_count_pmfs(table, ["phi", "gamma"])
    assert sorted(t.name for t in fig.data) == ["gamma", "phi"]


def test_rate_plot_is_log_log():
    table = pd.DataFrame(
        {"quantity": ["gt_ks", "gt_ks"], "n": [1000, 10000], "mean_error": [0.02, 0.008]}
    )
    fig = plot_rates(table)
    assert fig.layout.xaxis.type == "log"
    assert fig.layout.yaxis.type == "log"
    assert fig.data[0].name == "gt_ks"
    assert list(fig.data[0].y) == pytest.approx([0.02, 0.008])
