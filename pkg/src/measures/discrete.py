# src/measures/discrete.py
"""
Finitely supported probability measures.

DiscreteMeasure lives on the positive reals and holds mixing distributions
(P, P_n and every estimate of P). CountDistribution lives on the
non-negative integers and holds occupancy-class distributions (gamma_n,
the Good-Turing estimator phi_n, and Poisson mixtures).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
import pandas as pd

from src.errors import InvalidMeasureError

MERGE_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-12
COUNT_SUM_TOL = 1e-9


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------
# 1. Measures on the positive reals
# ---------------------------------------------------------
@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """
    Probability measure with finitely many atoms on (0, inf).

    Atoms closer than 1e-12 are merged on construction (weights summed,
    the smaller location kept) and zero-weight atoms are dropped, so the
    stored locations are strictly increasing.

    Parameters
    ----------
    locations : array-like
        Atom locations, all > 0. Any order.
    weights : array-like
        Non-negative atom weights summing to 1 within 1e-12.
    """

    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        locs = np.asarray(self.locations, dtype=float).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()

        if locs.size != w.size:
            raise InvalidMeasureError(
                f"{locs.size} locations but {w.size} weights were given."
            )
        if locs.size == 0:
            raise InvalidMeasureError("A measure needs at least one atom.")
        if not np.all(np.isfinite(locs)) or not np.all(np.isfinite(w)):
            raise InvalidMeasureError("Locations and weights must be finite.")
        if np.any(locs <= 0):
            raise InvalidMeasureError("Atom locations must be strictly positive.")
        if np.any(w < 0):
            raise InvalidMeasureError("Atom weights must be non-negative.")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidMeasureError(f"Weights sum to {w.sum()!r}, expected 1.")

        order = np.argsort(locs, kind="stable")
        locs, w = locs[order], w[order]

        # Group atoms whose gap to the previous atom is below the merge tolerance
        group = np.concatenate(([0], np.cumsum(np.diff(locs) >= MERGE_TOL)))
        starts = np.flatnonzero(np.concatenate(([True], np.diff(group) > 0)))
        merged_w = np.bincount(group, weights=w)
        merged_locs = locs[starts]

        keep = merged_w > 0
        object.__setattr__(self, "locations", _readonly(merged_locs[keep]))
        object.__setattr__(self, "weights", _readonly(merged_w[keep]))

    # --- Constructors ---
    @classmethod
    def point_mass(cls, location: float) -> "DiscreteMeasure":
        return cls([location], [1.0])

    @classmethod
    def from_unnormalized(cls, locations, weights) -> "DiscreteMeasure":
        """Build a measure after rescaling the weights to sum to one."""
        w = np.asarray(weights, dtype=float)
        total = w.sum()
        if not np.isfinite(total) or total <= 0:
            raise InvalidMeasureError("Weights must have a positive finite sum.")
        return cls(locations, w / total)

    # --- Views ---
    @property
    def n_atoms(self) -> int:
        return int(self.locations.size)

    @property
    def support(self) -> tuple[float, float]:
        """Smallest interval [c_lo, c_hi] carrying all the mass."""
        return float(self.locations[0]), float(self.locations[-1])

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.locations.tolist(), self.weights.tolist()))

    def mean(self) -> float:
        return float(np.dot(self.locations, self.weights))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"location": self.locations, "weight": self.weights})

    def __repr__(self) -> str:
        atoms = ", ".join(f"{w:.4g}@{x:.4g}" for x, w in self.atoms[:6])
        more = "" if self.n_atoms <= 6 else f", ... ({self.n_atoms} atoms)"
        return f"DiscreteMeasure({atoms}{more})"


# ---------------------------------------------------------
# 2. Measures on the non-negative integers
# ---------------------------------------------------------
@dataclass(frozen=True, eq=False)
class CountDistribution:
    """
    Probability mass function on k = 0, 1, ..., k_max.

    ``tail`` is the mass beyond k_max that the dense vector does not
    carry; it is zero for empirical quantities and positive for truncated
    Poisson mixtures. The invariant is ``sum(probs) + tail == 1`` within
    1e-9.
    """

    probs: np.ndarray
    tail: float = 0.0

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).ravel()
        if p.size == 0:
            raise InvalidMeasureError("A count distribution needs k = 0 at least.")
        if not np.all(np.isfinite(p)):
            raise InvalidMeasureError("Masses must be finite.")
        if np.any(p < 0):
            raise InvalidMeasureError("Masses must be non-negative.")

        tail = float(self.tail)
        if tail < 0:
            if tail < -COUNT_SUM_TOL:
                raise InvalidMeasureError(f"Negative tail mass {tail!r}.")
            tail = 0.0
        if abs(p.sum() + tail - 1.0) > COUNT_SUM_TOL:
            raise InvalidMeasureError(
                f"Masses sum to {p.sum() + tail!r} (tail {tail!r}), expected 1."
            )

        object.__setattr__(self, "probs", _readonly(p))
        object.__setattr__(self, "tail", tail)

    # --- Constructors ---
    @classmethod
    def from_mapping(cls, masses: Mapping[int, float]) -> "CountDistribution":
        """Dense distribution from a sparse ``{k: mass}`` mapping."""
        if not masses:
            raise InvalidMeasureError("Empty mapping.")
        if min(masses) < 0:
            raise InvalidMeasureError("Counts k must be non-negative.")
        dense = np.zeros(max(masses) + 1)
        for k, mass in masses.items():
            dense[k] += mass
        return cls(dense)

    @classmethod
    def point_mass(cls, k: int) -> "CountDistribution":
        return cls.from_mapping({k: 1.0})

    @classmethod
    def trimmed(cls, probs: Iterable[float], tail: float = 0.0) -> "CountDistribution":
        """Drop trailing zeros so that k_max is the last k with positive mass."""
        p = np.asarray(probs, dtype=float)
        nz = np.flatnonzero(p > 0)
        last = int(nz[-1]) if nz.size else 0
        return cls(p[: last + 1], tail=tail)

    # --- Views ---
    @property
    def k_max(self) -> int:
        return int(self.probs.size - 1)

    def pmf(self, k: int) -> float:
        if k < 0 or k > self.k_max:
            return 0.0
        return float(self.probs[k])

    def padded(self, k_max: int) -> np.ndarray:
        """Masses for k = 0..k_max, zero-padded or cut as needed."""
        out = np.zeros(k_max + 1)
        m = min(k_max, self.k_max) + 1
        out[:m] = self.probs[:m]
        return out

    def cdf_values(self, k_max: int) -> np.ndarray:
        """F(k) for k = 0..k_max."""
        return np.cumsum(self.padded(k_max))

    def mean(self) -> float:
        return float(np.dot(np.arange(self.probs.size), self.probs))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"k": np.arange(self.probs.size), "mass": self.probs})

    def __repr__(self) -> str:
        head = ", ".join(f"{k}:{m:.4g}" for k, m in enumerate(self.probs[:6]) if m)
        return f"CountDistribution({head}{', ...' if self.k_max > 5 else ''}; tail={self.tail:.3g})"
