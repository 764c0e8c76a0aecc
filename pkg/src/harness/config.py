# src/harness/config.py
"""
Experiment configuration files (TOML).

    [experiment]
    density = "../densities/two_step.toml"   # path (relative to this file) or inline table
    n_grid = [1000, 10000, 100000]
    seeds = [1, 2, 3]
    quantities = ["entropy", "alphabet", "support", "gt_ks"]
    estimator = "mindist"            # npmle | mindist
    ground_truth = "limit"           # limit | finite
    seed_offset = 0
    output = "results/run.jsonl"
    include_runtime = false

    [schedule]           kind = "fallback", epsilon = 0.5  (or power/s, fixed/D, known_bounds)
    [support_schedule]   kind = "power", s = 1.0
    [npmle]              grid_points, max_iters, dd_tol, weight_floor,
                         grid_lo, grid_hi, merge_adjacent
    [mindist]            m, epsilon_exponent, coarse_grid, refine_rounds,
                         starts, max_tuples, search_lo, search_hi
    [rates]              betas = [0.0, 0.4]

Only ``experiment.density`` and ``experiment.n_grid`` are required.
"""

from __future__ import annotations

import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from src.canonical import Schedule
from src.errors import ConfigError, RareLoomError
from src.measures import CountDistribution
from src.mixing import MinDistConfig, NpmleConfig, epsilon_schedule
from src.sources.density import (
    PiecewiseDensity,
    load_density,
    parse_density,
    toml_error_line,
)

logger = logging.getLogger(__name__)

QUANTITIES = ("entropy", "seqprob", "alphabet", "support", "gt_l1", "gt_ks", "mixing_wass")
ESTIMATORS = ("npmle", "mindist")
GROUND_TRUTHS = ("limit", "finite")
SECTIONS = ("experiment", "schedule", "support_schedule", "npmle", "mindist", "rates")


def expand_quantities(names) -> tuple[str, ...]:
    """Expand ``support`` into ``support_lo`` and ``support_hi``; sorted, without duplicates."""
    out = set()
    for name in names:
        if name == "support":
            out.update(("support_lo", "support_hi"))
        else:
            out.add(name)
    return tuple(sorted(out))


# ---------------------------------------------------------------------
# Estimator settings
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class NpmleSettings:
    grid_lo: float | None = None
    grid_hi: float | None = None
    grid_points: int = 400
    max_iters: int = 20_000
    dd_tol: float = 1e-4
    weight_floor: float = 1e-8
    merge_adjacent: bool = False

    def build(self, phi: CountDistribution) -> NpmleConfig:
        return NpmleConfig.from_phi(
            phi,
            grid_lo=self.grid_lo,
            grid_hi=self.grid_hi,
            grid_points=self.grid_points,
            max_iters=self.max_iters,
            dd_tol=self.dd_tol,
            weight_floor=self.weight_floor,
            merge_adjacent=self.merge_adjacent,
        )


@dataclass(frozen=True)
class MinDistSettings:
    m: int = 2
    epsilon_exponent: float = 0.6
    coarse_grid: int = 25
    refine_rounds: int = 10
    starts: int = 4
    max_tuples: int = 5_000
    search_lo: float | None = None
    search_hi: float | None = None

    def build(self, phi: CountDistribution, n: int) -> MinDistConfig:
        return MinDistConfig.from_phi(
            phi,
            m=self.m,
            epsilon=epsilon_schedule(n, self.epsilon_exponent),
            search_lo=self.search_lo,
            search_hi=self.search_hi,
            coarse_grid=self.coarse_grid,
            refine_rounds=self.refine_rounds,
            starts=self.starts,
            max_tuples=self.max_tuples,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    density: PiecewiseDensity
    n_grid: tuple[int, ...]
    alpha: float = 1.0
    seeds: tuple[int, ...] = (1,)
    quantities: tuple[str, ...] = ("entropy",)
    estimator: str = "mindist"
    ground_truth: str = "limit"
    seed_offset: int = 0
    output: Path = Path("results/experiment.jsonl")
    include_runtime: bool = False
    schedule: Schedule = field(default_factory=Schedule.fallback)
    support_schedule: Schedule = field(default_factory=lambda: Schedule.power(1.0))
    npmle: NpmleSettings = field(default_factory=NpmleSettings)
    mindist: MinDistSettings = field(default_factory=MinDistSettings)
    betas: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        if not self.n_grid:
            raise ConfigError("must be non-empty", field="experiment.n_grid")
        if any(n < 1 for n in self.n_grid) or list(self.n_grid) != sorted(set(self.n_grid)):
            raise ConfigError(
                "must be strictly ascending positive integers", field="experiment.n_grid"
            )
        if not self.seeds:
            raise ConfigError("must be non-empty", field="experiment.seeds")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("must be distinct", field="experiment.seeds")
        if any(s + self.seed_offset < 0 for s in self.seeds):
            raise ConfigError("seed + seed_offset must be >= 0", field="experiment.seeds")
        if not self.quantities:
            raise ConfigError("must be non-empty", field="experiment.quantities")
        if self.estimator not in ESTIMATORS:
            raise ConfigError(f"must be one of {ESTIMATORS}", field="experiment.estimator")
        if self.ground_truth not in GROUND_TRUTHS:
            raise ConfigError(f"must be one of {GROUND_TRUTHS}", field="experiment.ground_truth")
        if self.ground_truth == "limit" and not self.density.is_step:
            raise ConfigError(
                "the limit law is only available for step densities; use 'finite'",
                field="experiment.ground_truth",
            )

    @property
    def effective_seeds(self) -> tuple[int, ...]:
        return tuple(s + self.seed_offset for s in self.seeds)

    def with_overrides(
        self, quantities=None, estimator=None, seed_offset=None
    ) -> "ExperimentConfig":
        """Apply command-line overrides; ``None`` keeps the file value."""
        changes = {}
        if quantities:
            unknown = sorted(set(quantities) - set(QUANTITIES))
            if unknown:
                raise ConfigError(f"unknown quantities {unknown}", field="--quantity")
            changes["quantities"] = expand_quantities(quantities)
        if estimator is not None:
            changes["estimator"] = estimator
        if seed_offset is not None:
            changes["seed_offset"] = int(seed_offset)
        return replace(self, **changes)


# ---------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------
def _line_of(text: str, section: str, key: str) -> int | None:
    """Line number of ``key = ...`` inside ``[section]``, if present."""
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        header = re.match(r"\s*\[([^\[\]]+)\]\s*(#.*)?$", line)
        if header:
            current = header.group(1).strip()
            continue
        if current == section and re.match(rf"\s*{re.escape(key)}\s*=", line):
            return lineno
    return None


class _Reader:
    """Typed access to one TOML table with field/line diagnostics."""

    def __init__(self, data: dict, section: str, text: str):
        self.table = data.get(section, {})
        self.section = section
        self.text = text
        if not isinstance(self.table, dict):
            raise ConfigError("must be a table", field=section)

    def error(self, key: str, message: str) -> ConfigError:
        return ConfigError(
            message, field=f"{self.section}.{key}", line=_line_of(self.text, self.section, key)
        )

    def has(self, key: str) -> bool:
        return key in self.table

    def check_keys(self, allowed) -> None:
        for key in self.table:
            if key not in allowed:
                raise self.error(key, f"unknown key; expected one of {sorted(allowed)}")

    def get(self, key: str, kind, default=None, required: bool = False):
        if key not in self.table:
            if required:
                raise ConfigError("is required", field=f"{self.section}.{key}")
            return default
        value = self.table[key]
        if kind is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if kind is bool and not isinstance(value, bool):
            raise self.error(key, f"must be a boolean, got {value!r}")
        if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
            raise self.error(key, f"must be an integer, got {value!r}")
        if not isinstance(value, kind):
            raise self.error(key, f"must be {kind.__name__}, got {value!r}")
        return value

    def int_list(self, key: str, default=None, required: bool = False):
        values = self.get(key, list, default, required)
        if values is None:
            return None
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
            raise self.error(key, "must be a list of integers")
        return tuple(values)


def _schedule(reader: _Reader, default: Schedule) -> Schedule:
    if not reader.table:
        return default
    reader.check_keys({"kind", "D", "s", "epsilon", "d_min", "d_max"})
    kind = reader.get("kind", str, required=True)
    try:
        if kind == "fixed":
            return Schedule.fixed(reader.get("D", float, required=True))
        if kind == "power":
            return Schedule.power(reader.get("s", float, required=True))
        if kind == "fallback":
            return Schedule.fallback(reader.get("epsilon", float, 0.5))
        if kind == "known_bounds":
            return Schedule.known_bounds(
                reader.get("d_min", float),
                reader.get("d_max", float),
                reader.get("s", float, 1.0),
            )
    except RareLoomError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e), field=reader.section) from e
    raise reader.error("kind", "must be one of fixed, power, fallback, known_bounds")


def _settings(reader: _Reader, cls):
    # value types follow the defaults; optional bounds are floats
    defaults = {f.name: f.default for f in fields(cls)}
    reader.check_keys(set(defaults))
    values = {}
    for name, default in defaults.items():
        if reader.has(name):
            values[name] = reader.get(name, float if default is None else type(default))
    return cls(**values)


def parse_config(data: dict, text: str = "", base_dir: Path | None = None) -> ExperimentConfig:
    """Validate a parsed TOML document and build the ExperimentConfig."""
    base_dir = base_dir or Path.cwd()
    for section in data:
        if section not in SECTIONS:
            raise ConfigError("unknown section", field=section)

    exp = _Reader(data, "experiment", text)
    exp.check_keys(
        {
            "density",
            "n_grid",
            "seeds",
            "quantities",
            "estimator",
            "ground_truth",
            "seed_offset",
            "output",
            "include_runtime",
        }
    )

    if not exp.has("density"):
        raise ConfigError("is required", field="experiment.density")
    raw_density = exp.table["density"]
    if isinstance(raw_density, dict):
        density, alpha = parse_density(raw_density, where="experiment.density")
    elif isinstance(raw_density, str):
        path = Path(raw_density)
        density, alpha = load_density(path if path.is_absolute() else base_dir / path)
    else:
        raise exp.error("density", "must be a file path or an inline table")

    quantities = exp.get("quantities", list, ["entropy"])
    unknown = sorted(set(quantities) - set(QUANTITIES))
    if unknown:
        raise exp.error(
            "quantities", f"unknown quantities {unknown}; expected a subset of {QUANTITIES}"
        )

    output = Path(exp.get("output", str, "results/experiment.jsonl"))
    if not output.is_absolute():
        output = base_dir / output

    rates = _Reader(data, "rates", text)
    rates.check_keys({"betas"})
    betas = rates.get("betas", list, [0.0])
    if not all(isinstance(b, (int, float)) and not isinstance(b, bool) for b in betas):
        raise rates.error("betas", "must be a list of numbers")

    npmle = _settings(_Reader(data, "npmle", text), NpmleSettings)
    mindist = _settings(_Reader(data, "mindist", text), MinDistSettings)

    try:
        cfg = ExperimentConfig(
            density=density,
            alpha=alpha,
            n_grid=exp.int_list("n_grid", required=True),
            seeds=exp.int_list("seeds", (1,)),
            quantities=expand_quantities(quantities),
            estimator=exp.get("estimator", str, "mindist"),
            ground_truth=exp.get("ground_truth", str, "limit"),
            seed_offset=exp.get("seed_offset", int, 0),
            output=output,
            include_runtime=exp.get("include_runtime", bool, False),
            schedule=_schedule(_Reader(data, "schedule", text), Schedule.fallback()),
            support_schedule=_schedule(
                _Reader(data, "support_schedule", text), Schedule.power(1.0)
            ),
            npmle=npmle,
            mindist=mindist,
            betas=tuple(float(b) for b in betas),
        )
    except ConfigError as e:
        if e.line is not None or not e.field or "." not in e.field:
            raise
        section, key = e.field.split(".", 1)
        key = re.split(r"[.\[]", key)[0]
        raise ConfigError(e.message, field=e.field, line=_line_of(text, section, key)) from e

    logger.debug(
        "Config: %d n values x %d seeds x %d quantities",
        len(cfg.n_grid),
        len(cfg.seeds),
        len(cfg.quantities),
    )
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    """
    Read and validate an experiment config file.

    Raises
    ------
    ConfigError
        With the TOML line for syntax errors and the dotted field path
        (plus line, when it can be located) for invalid values.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text(encoding="utf-8")
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}", line=toml_error_line(e)) from e
    return parse_config(data, text, base_dir=path.parent)
