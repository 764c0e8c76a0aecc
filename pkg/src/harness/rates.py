# src/harness/rates.py
"""
Seed-averaged error tables for empirical convergence-rate checks.
"""

from __future__ import annotations

import logging

import numpy as np
import pandas as pd

from src.errors import InsufficientCoverageError

logger = logging.getLogger(__name__)


def scaled_column(beta: float) -> str:
    return f"scaled_{beta:g}"


def _as_frame(reports) -> pd.DataFrame:
    if isinstance(reports, pd.DataFrame):
        return reports
    return pd.DataFrame.from_records(
        [(r.n, r.seed, r.quantity, r.abs_error) for r in reports],
        columns=["n", "seed", "quantity", "abs_error"],
    )


def summarize(reports, betas=(0.0,)) -> pd.DataFrame:
    """
    Mean absolute error per (quantity, n) and the scaled errors error * n^beta.

    Parameters
    ----------
    reports : list of EstimateReport or DataFrame
        Needs columns ``n``, ``seed``, ``quantity`` and ``abs_error``;
        rows without an error (no ground truth) are ignored.
    betas : iterable of float
        One ``scaled_<beta>`` column per value.

    Returns
    -------
    DataFrame with columns quantity, n, seeds, mean_error and the scaled
    columns, sorted by quantity then n.

    Raises
    ------
    InsufficientCoverageError
        If any quantity is observed at fewer than two values of n.
    """
    df = _as_frame(reports)
    df = df[df["abs_error"].notna()]
    if df.empty:
        raise InsufficientCoverageError("No reports with a ground truth to summarize.")

    table = (
        df.groupby(["quantity", "n"], sort=True)
        .agg(seeds=("seed", "nunique"), mean_error=("abs_error", "mean"))
        .reset_index()
    )
    coverage = table.groupby("quantity")["n"].nunique()
    thin = coverage[coverage < 2]
    if not thin.empty:
        raise InsufficientCoverageError(
            f"Rates need at least two values of n; only one for {sorted(thin.index)}."
        )

    n_values = table["n"].to_numpy(dtype=float)
    for beta in betas:
        table[scaled_column(beta)] = table["mean_error"] * n_values ** float(beta)

    logger.debug("Rate table: %d quantities, %d rows", coverage.size, len(table))
    return table


def is_non_increasing(table: pd.DataFrame, quantity: str, beta: float, rtol: float = 0.0) -> bool:
    """True if the scaled error of ``quantity`` never grows along n (up to rtol)."""
    rows = table[table["quantity"] == quantity].sort_values("n")
    values = rows[scaled_column(beta)].to_numpy()
    if values.size == 0:
        raise KeyError(f"No rows for quantity {quantity!r}.")
    return bool(np.all(values[1:] <= values[:-1] * (1.0 + rtol)))
