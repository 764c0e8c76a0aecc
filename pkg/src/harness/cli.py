# src/harness/cli.py
"""
Command-line front-end.

    python -m src.harness.cli simulate --config configs/experiments/smoke.toml
    python -m src.harness.cli estimate --config configs/experiments/smoke.toml --quantity entropy
    python -m src.harness.cli rates --config configs/experiments/smoke.toml

Exit code 0 on success. On failure one JSON line goes to stderr and the
exit code is 2 for configuration problems and 1 otherwise.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.errors import (
    ConfigError,
    ExperimentError,
    InvalidConfigurationError,
    RareLoomError,
)
from src.harness.config import ESTIMATORS, QUANTITIES, load_config
from src.harness.experiment import (
    read_reports,
    run_experiment,
    simulate_experiment,
    write_frame,
    write_reports,
)
from src.harness.rates import summarize

logger = logging.getLogger("rareloom")

EXIT_FAILURE = 1
EXIT_CONFIG = 2


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="rareloom", description="Canonical estimation in the rare-events regime."
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    sim = verbs.add_parser("simulate", help="write phi, gamma and lambda per (n, seed, k)")
    est = verbs.add_parser("estimate", help="run the full estimation sweep")
    rates = verbs.add_parser("rates", help="summarize a report file into a rate table")

    for sub in (sim, est, rates):
        sub.add_argument("--config", required=True, type=Path, help="experiment TOML file")
        sub.add_argument("--out", type=Path, help="output path (default from the config)")

    for sub in (sim, est):
        sub.add_argument("--seed-offset", type=int, help="added to every configured seed")

    est.add_argument(
        "--quantity", action="append", choices=QUANTITIES, help="repeat to select several"
    )
    est.add_argument("--estimator", choices=ESTIMATORS)

    rates.add_argument(
        "--reports", type=Path, help="JSON-lines report file (default: the config output)"
    )
    rates.add_argument(
        "--beta", action="append", type=float, help="scaling exponent; repeat for several"
    )
    return parser.parse_args(argv)


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )


def _error_line(e: Exception) -> str:
    cause = e.cause if isinstance(e, ExperimentError) else e
    payload = {
        "error": type(cause).__name__,
        "message": str(cause),
        "n": getattr(e, "n", None),
        "seed": getattr(e, "seed", None),
        "field": getattr(cause, "field", None),
    }
    return json.dumps(payload)


def _is_config_problem(e: Exception) -> bool:
    cause = e.cause if isinstance(e, ExperimentError) else e
    return isinstance(cause, (ConfigError, InvalidConfigurationError))


def _simulate(args) -> None:
    cfg = load_config(args.config).with_overrides(seed_offset=args.seed_offset)
    out = args.out or cfg.output.with_name(cfg.output.stem + "_simulate.jsonl")
    write_frame(simulate_experiment(cfg), out)


def _estimate(args) -> None:
    cfg = load_config(args.config).with_overrides(
        quantities=args.quantity, estimator=args.estimator, seed_offset=args.seed_offset
    )
    reports = run_experiment(cfg)
    write_reports(reports, args.out or cfg.output, include_runtime=cfg.include_runtime)


def _rates(args) -> None:
    cfg = load_config(args.config)
    source = args.reports or cfg.output
    if not source.exists():
        raise ConfigError(f"report file not found: {source}", field="--reports")
    table = summarize(read_reports(source), args.beta or cfg.betas)
    out = args.out or source.with_name(source.stem + "_rates.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(out, index=False, lineterminator="\n")
    logger.info("Wrote rate table to %s", out)


VERBS = {"simulate": _simulate, "estimate": _estimate, "rates": _rates}


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    _configure_logging(args.verbose)
    try:
        VERBS[args.verb](args)
    except RareLoomError as e:
        print(_error_line(e), file=sys.stderr)
        return EXIT_CONFIG if _is_config_problem(e) else EXIT_FAILURE
    return 0


if __name__ == "__main__":
    sys.exit(main())
