# src/harness/experiment.py
"""
Seeded estimation sweeps over (n, seed) and their report files.
"""

from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from src.canonical import (
    estimate_alphabet_size,
    estimate_entropy,
    estimate_seq_logprob,
    estimate_support,
)
from src.errors import ExperimentError, RareLoomError
from src.goodturing import gt_estimator, occupancy, true_gamma
from src.harness.config import ExperimentConfig
from src.measures import (
    CountDistribution,
    DiscreteMeasure,
    choose_k_max,
    ks_distance,
    l1_distance,
    poisson_mixture,
    wasserstein,
)
from src.mixing import FitDiagnostics, min_distance, npmle
from src.sources import (
    RareEventsSource,
    SampleRecord,
    alphabet_target,
    entropy_target,
    limit_distribution,
    quantize,
    sample,
    sequence_logprob,
    shadow_distribution,
)

logger = logging.getLogger(__name__)

THREADS_ENV = "RARELOOM_THREADS"
REPORT_FIELDS = (
    "n",
    "seed",
    "quantity",
    "estimate",
    "ground_truth",
    "abs_error",
    "estimator",
    "runtime_ms",
)
MIXING_QUANTITIES = {"entropy", "seqprob", "alphabet", "support_lo", "support_hi", "mixing_wass"}
DISTANCE_QUANTITIES = {"gt_l1", "gt_ks", "mixing_wass"}


@dataclass(frozen=True)
class EstimateReport:
    n: int
    seed: int
    quantity: str
    estimate: float
    ground_truth: float | None
    abs_error: float | None
    estimator: str
    runtime_ms: float

    def to_record(self, include_runtime: bool = False) -> dict:
        record = asdict(self)
        if not include_runtime:
            record["runtime_ms"] = None
        return record


# ---------------------------------------------------------------------
# Workers
# ---------------------------------------------------------------------
def worker_count() -> int:
    """Thread count from RARELOOM_THREADS; 0 or unset means one per CPU."""
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        requested = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r (not an integer)", THREADS_ENV, raw)
        requested = 0
    if requested <= 0:
        return os.cpu_count() or 1
    return requested


def fit_mixing(phi: CountDistribution, cfg: ExperimentConfig, n: int):
    """Run the configured mixing estimator on phi; returns (measure, diagnostics)."""
    if cfg.estimator == "npmle":
        return npmle(phi, cfg.npmle.build(phi))
    return min_distance(phi, cfg.mindist.build(phi, n))


# ---------------------------------------------------------------------
# Ground truth
# ---------------------------------------------------------------------
class _Truth:
    """Reference measures for one (n, seed) task; built lazily."""

    def __init__(self, cfg: ExperimentConfig, source: RareEventsSource, rec: SampleRecord):
        self.cfg = cfg
        self.source = source
        self.rec = rec
        self._law = None

    @property
    def law(self) -> DiscreteMeasure:
        """P for the limit ground truth, P_n for the finite one."""
        if self._law is None:
            if self.cfg.ground_truth == "limit":
                self._law = limit_distribution(self.cfg.density, self.cfg.alpha)
            else:
                self._law = shadow_distribution(self.source)
        return self._law

    def counts_reference(self, phi: CountDistribution) -> CountDistribution:
        """lambda (limit) or gamma_n (finite), the law phi is compared with."""
        if self.cfg.ground_truth == "finite":
            return true_gamma(self.source, self.rec)
        top = self.law.support[1]
        return poisson_mixture(self.law, max(phi.k_max, choose_k_max(top)))

    def value(self, quantity: str) -> float:
        if quantity in DISTANCE_QUANTITIES:
            return 0.0
        if quantity == "support_lo":
            return self.law.support[0]
        if quantity == "support_hi":
            return self.law.support[1]

        if self.cfg.ground_truth == "finite":
            if quantity == "entropy":
                return entropy_target(self.source)
            if quantity == "seqprob":
                return sequence_logprob(self.source, self.rec)
            return alphabet_target(self.source)

        mean_log = float(np.dot(self.law.weights, np.log(self.law.locations)))
        if quantity == "entropy":
            return -mean_log
        if quantity == "seqprob":
            return mean_log
        return float(np.dot(self.law.weights, 1.0 / self.law.locations))


# ---------------------------------------------------------------------
# One task
# ---------------------------------------------------------------------
def _run_task(cfg: ExperimentConfig, source: RareEventsSource, seed: int) -> list[EstimateReport]:
    n = source.n
    started = time.perf_counter()
    rec = sample(source, seed)
    phi = gt_estimator(occupancy(rec))
    truth = _Truth(cfg, source, rec)

    p_tilde, fit_ms = None, 0.0
    if MIXING_QUANTITIES.intersection(cfg.quantities):
        fit_start = time.perf_counter()
        p_tilde, diagnostics = fit_mixing(phi, cfg, n)
        fit_ms = 1000.0 * (time.perf_counter() - fit_start)
        _log_fit(n, seed, cfg.estimator, diagnostics)

    support = None
    reports = []
    for quantity in cfg.quantities:
        start = time.perf_counter()
        estimator = cfg.estimator
        if quantity == "gt_l1":
            estimate, estimator = l1_distance(phi, truth.counts_reference(phi)), "good_turing"
        elif quantity == "gt_ks":
            estimate, estimator = ks_distance(phi, truth.counts_reference(phi)), "good_turing"
        elif quantity == "mixing_wass":
            estimate = wasserstein(p_tilde, truth.law)
        elif quantity == "entropy":
            estimate = estimate_entropy(p_tilde, cfg.schedule, n)
        elif quantity == "seqprob":
            estimate = estimate_seq_logprob(p_tilde, cfg.schedule, n)
        elif quantity == "alphabet":
            estimate = estimate_alphabet_size(p_tilde, cfg.schedule, n)
        else:
            if support is None:
                support = estimate_support(p_tilde, cfg.support_schedule, n)
            estimate = support.lower if quantity == "support_lo" else support.upper

        ground_truth = truth.value(quantity)
        elapsed = 1000.0 * (time.perf_counter() - start)
        if quantity in MIXING_QUANTITIES:
            elapsed += fit_ms
        reports.append(
            EstimateReport(
                n=n,
                seed=seed,
                quantity=quantity,
                estimate=float(estimate),
                ground_truth=ground_truth,
                abs_error=abs(float(estimate) - ground_truth),
                estimator=estimator,
                runtime_ms=elapsed,
            )
        )

    logger.info(
        "n=%d seed=%d: %d rows in %.1f ms",
        n,
        seed,
        len(reports),
        1000.0 * (time.perf_counter() - started),
    )
    return reports


def _log_fit(n: int, seed: int, estimator: str, diagnostics: FitDiagnostics) -> None:
    if diagnostics.converged:
        logger.debug("n=%d seed=%d: %s objective %.6g", n, seed, estimator, diagnostics.objective)
    else:
        logger.warning(
            "n=%d seed=%d: %s did not converge after %d iterations",
            n,
            seed,
            estimator,
            diagnostics.iterations,
        )


def _guarded(cfg: ExperimentConfig, source: RareEventsSource, seed: int):
    try:
        return _run_task(cfg, source, seed)
    except RareLoomError as e:
        raise ExperimentError(source.n, seed, e) from e


# ---------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------
def run_experiment(cfg: ExperimentConfig) -> list[EstimateReport]:
    """
    One report per (n, seed, quantity), sorted by n, then seed, then quantity.

    Tasks run on a thread pool sized by RARELOOM_THREADS; the result does
    not depend on the pool size.

    Raises
    ------
    ExperimentError
        Wrapping the first module error, annotated with its (n, seed).
    """
    sources = {n: quantize(cfg.density, n, cfg.alpha) for n in cfg.n_grid}
    tasks = [(n, seed) for n in cfg.n_grid for seed in cfg.effective_seeds]
    workers = min(worker_count(), len(tasks))
    logger.info("Running %d tasks on %d threads (%s)", len(tasks), workers, cfg.estimator)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_guarded, cfg, sources[n], seed) for n, seed in tasks]
        reports = [row for future in futures for row in future.result()]

    reports.sort(key=lambda r: (r.n, r.seed, r.quantity))
    return reports


def reports_frame(reports, include_runtime: bool = False) -> pd.DataFrame:
    """Reports as a DataFrame with the documented column order."""
    records = [r.to_record(include_runtime) for r in reports]
    return pd.DataFrame.from_records(records, columns=list(REPORT_FIELDS))


def _json_value(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if math.isnan(value) else float(value)
    return value


def write_frame(df: pd.DataFrame, path: str | Path) -> tuple[Path, Path]:
    """
    Write ``df`` as JSON lines at ``path`` and as CSV next to it.

    Floats are written with their shortest round-trip repr in both files.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    csv_path = path.with_suffix(".csv")

    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in df.to_dict(orient="records"):
            row = {key: _json_value(value) for key, value in record.items()}
            fh.write(json.dumps(row) + "\n")
    df.to_csv(csv_path, index=False, lineterminator="\n")

    logger.info("Wrote %d rows to %s and %s", len(df), path, csv_path)
    return path, csv_path


def write_reports(reports, path: str | Path, include_runtime: bool = False) -> tuple[Path, Path]:
    """JSON-lines file (keys as EstimateReport fields) plus its CSV mirror."""
    return write_frame(reports_frame(reports, include_runtime), path)


def read_reports(path: str | Path) -> pd.DataFrame:
    """Load a JSON-lines report file written by ``write_reports``."""
    path = Path(path)
    rows = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]
    return pd.DataFrame.from_records(rows, columns=list(REPORT_FIELDS))


# ---------------------------------------------------------------------
# simulate: counts-level data only
# ---------------------------------------------------------------------
def simulate_experiment(cfg: ExperimentConfig) -> pd.DataFrame:
    """
    Per (n, seed, k): Good-Turing mass phi, true mass gamma and, when the
    limit law is available, the Poisson mixture lambda.
    """
    frames = []
    for n in cfg.n_grid:
        source = quantize(cfg.density, n, cfg.alpha)
        for seed in cfg.effective_seeds:
            rec = sample(source, seed)
            phi = gt_estimator(occupancy(rec))
            gamma = true_gamma(source, rec)
            k_max = max(phi.k_max, gamma.k_max)

            frame = pd.DataFrame(
                {
                    "n": n,
                    "seed": seed,
                    "k": np.arange(k_max + 1),
                    "phi": phi.padded(k_max),
                    "gamma": gamma.padded(k_max),
                }
            )
            if cfg.density.is_step:
                limit = limit_distribution(cfg.density, cfg.alpha)
                frame["lambda"] = poisson_mixture(limit, k_max).padded(k_max)
            else:
                frame["lambda"] = np.nan
            frames.append(frame)
            logger.info("simulated n=%d seed=%d (k_max=%d)", n, seed, k_max)

    return pd.concat(frames, ignore_index=True)
