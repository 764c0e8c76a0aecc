# src/sources/density.py
"""
Piecewise-affine densities on [0, 1] and the TOML density spec file.
"""

from __future__ import annotations

import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from src.errors import ConfigError, InvalidDensityError

logger = logging.getLogger(__name__)

PARTITION_TOL = 1e-12
INTEGRAL_TOL = 1e-9
JUMP_TOL = 1e-12


@dataclass(frozen=True)
class Piece:
    """g(w) = a * w + b on [lo, hi)."""

    lo: float
    hi: float
    a: float
    b: float

    def value(self, w):
        return self.a * w + self.b

    def antiderivative(self, w):
        """Integral of the piece from lo to w."""
        return 0.5 * self.a * (w**2 - self.lo**2) + self.b * (w - self.lo)

    @property
    def is_constant(self) -> bool:
        return self.a == 0.0


@dataclass(frozen=True)
class PiecewiseDensity:
    """
    Density g on [0, 1] made of finitely many affine pieces.

    The pieces must partition [0, 1] in order, g must stay within
    [c_lo, c_hi] with c_lo > 0, and g must integrate to one within 1e-9.
    """

    pieces: tuple[Piece, ...]

    def __post_init__(self):
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)

        if not pieces:
            raise InvalidDensityError("A density needs at least one piece.")
        if abs(pieces[0].lo) > PARTITION_TOL or abs(pieces[-1].hi - 1.0) > PARTITION_TOL:
            raise InvalidDensityError("Pieces must start at 0 and end at 1.")
        for left, right in zip(pieces, pieces[1:]):
            if abs(left.hi - right.lo) > PARTITION_TOL:
                raise InvalidDensityError(
                    f"Gap or overlap between pieces at {left.hi} and {right.lo}."
                )
        for p in pieces:
            if not p.hi > p.lo:
                raise InvalidDensityError(f"Empty piece [{p.lo}, {p.hi}).")

        if self.c_lo <= 0:
            raise InvalidDensityError(f"Density must be bounded below by c > 0, got {self.c_lo}.")
        total = self.integral(1.0)
        if abs(total - 1.0) > INTEGRAL_TOL:
            raise InvalidDensityError(f"Density integrates to {total!r}, expected 1.")

    # --- Constructors ---
    @classmethod
    def uniform(cls) -> "PiecewiseDensity":
        return cls((Piece(0.0, 1.0, 0.0, 1.0),))

    @classmethod
    def step(cls, breakpoints, levels) -> "PiecewiseDensity":
        """
        Step density with ``levels[i]`` on [breakpoints[i], breakpoints[i+1]).

        ``breakpoints`` includes both 0 and 1.
        """
        edges = list(breakpoints)
        if len(edges) != len(levels) + 1:
            raise InvalidDensityError("Need exactly one more breakpoint than levels.")
        return cls(
            tuple(
                Piece(float(lo), float(hi), 0.0, float(v))
                for lo, hi, v in zip(edges, edges[1:], levels)
            )
        )

    # --- Properties ---
    @property
    def endpoint_values(self) -> np.ndarray:
        return np.array([[p.value(p.lo), p.value(p.hi)] for p in self.pieces])

    @property
    def c_lo(self) -> float:
        return float(self.endpoint_values.min())

    @property
    def c_hi(self) -> float:
        return float(self.endpoint_values.max())

    @property
    def is_step(self) -> bool:
        return all(p.is_constant for p in self.pieces)

    @property
    def n_discontinuities(self) -> int:
        """Number L of interior breakpoints where g jumps."""
        jumps = 0
        for left, right in zip(self.pieces, self.pieces[1:]):
            if abs(left.value(left.hi) - right.value(right.lo)) > JUMP_TOL:
                jumps += 1
        return jumps

    @property
    def lipschitz(self) -> float:
        """Largest slope among the pieces."""
        return max(abs(p.a) for p in self.pieces)

    # --- Evaluation ---
    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        idx = self._piece_index(w)
        a = np.array([p.a for p in self.pieces])[idx]
        b = np.array([p.b for p in self.pieces])[idx]
        return a * w + b

    def _piece_index(self, w: np.ndarray) -> np.ndarray:
        his = np.array([p.hi for p in self.pieces[:-1]])
        return np.searchsorted(his, w, side="right")

    def integral(self, w):
        """G(w) = integral of g over [0, w], exact for affine pieces."""
        scalar = np.ndim(w) == 0
        w = np.clip(np.atleast_1d(np.asarray(w, dtype=float)), 0.0, 1.0)
        idx = self._piece_index(w)

        # Mass accumulated before each piece
        piece_mass = np.array([p.antiderivative(p.hi) for p in self.pieces])
        before = np.concatenate(([0.0], np.cumsum(piece_mass)[:-1]))

        out = np.empty_like(w)
        for i, piece in enumerate(self.pieces):
            sel = idx == i
            out[sel] = before[i] + piece.antiderivative(w[sel])
        return float(out[0]) if scalar else out


# ---------------------------------------------------------
# Density spec files
# ---------------------------------------------------------
def toml_error_line(e: tomllib.TOMLDecodeError) -> int | None:
    """Line of a TOML syntax error; older Pythons only carry it in the message."""
    lineno = getattr(e, "lineno", None)
    if lineno is not None:
        return lineno
    match = re.search(r"line (\d+)", str(e))
    return int(match.group(1)) if match else None


def parse_density(spec: dict, where: str = "density") -> tuple[PiecewiseDensity, float]:
    """
    Build (density, alpha) from a parsed spec table.

    Schema: ``alpha`` (float, default 1.0) and ``pieces``, a list of
    tables with keys ``lo``, ``hi``, ``a`` (default 0) and ``b``.
    """
    raw_pieces = spec.get("pieces")
    if not isinstance(raw_pieces, list) or not raw_pieces:
        raise ConfigError("must be a non-empty list of {lo, hi, a, b}", field=f"{where}.pieces")

    pieces = []
    for i, item in enumerate(raw_pieces):
        field = f"{where}.pieces[{i}]"
        if not isinstance(item, dict):
            raise ConfigError("must be a table", field=field)
        try:
            pieces.append(
                Piece(
                    lo=float(item["lo"]),
                    hi=float(item["hi"]),
                    a=float(item.get("a", 0.0)),
                    b=float(item["b"]),
                )
            )
        except KeyError as e:
            raise ConfigError(f"missing key {e.args[0]!r}", field=field) from e
        except (TypeError, ValueError) as e:
            raise ConfigError(f"non-numeric value ({e})", field=field) from e

    alpha = spec.get("alpha", 1.0)
    if not isinstance(alpha, (int, float)) or alpha <= 0:
        raise ConfigError("must be a positive number", field=f"{where}.alpha")

    try:
        density = PiecewiseDensity(tuple(pieces))
    except InvalidDensityError as e:
        raise ConfigError(str(e), field=f"{where}.pieces") from e
    return density, float(alpha)


def load_density(path: str | Path) -> tuple[PiecewiseDensity, float]:
    """Read a density spec file and return (density, alpha)."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"density file not found: {path}", field="density")

    try:
        with path.open("rb") as fh:
            spec = tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}", line=toml_error_line(e)) from e

    density, alpha = parse_density(spec, where=path.stem)
    logger.debug("Loaded density %s with %d pieces", path, len(density.pieces))
    return density, alpha
