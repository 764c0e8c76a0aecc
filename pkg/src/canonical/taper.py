# src/canonical/taper.py
"""
Integrands and their tapered versions.

A tapered function f_[lo, hi] agrees with f on [lo, hi] and is held
constant at f(lo) below and f(hi) above. The symmetric taper uses
[1/D, D]; D = inf is only allowed for bounded integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

from src.errors import InvalidConfigurationError, UnboundedFunctionError
from src.measures import DiscreteMeasure

KINDS = ("log", "neg_log", "reciprocal", "power", "poisson_pmf")


# ---------------------------------------------------------------------
# Integrands
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class Integrand:
    """
    A named integrand g on (0, inf).

    ``param`` is the exponent q for ``power`` and the count k for
    ``poisson_pmf``; it is unused otherwise.
    """

    kind: str
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidConfigurationError(
                f"Unknown integrand {self.kind!r}; expected one of {KINDS}."
            )
        if self.kind == "poisson_pmf" and (self.param < 0 or self.param != int(self.param)):
            raise InvalidConfigurationError("poisson_pmf needs a non-negative integer k.")

    @property
    def bounded(self) -> bool:
        """True when g is bounded on (0, inf), so D = inf is legal."""
        return self.kind == "poisson_pmf" or (self.kind == "power" and self.param == 0)

    @property
    def lipschitz_order(self) -> float:
        """
        Exponent r with Lip(g on [1/D, D]) proportional to D^r.

        log -> 1, reciprocal -> 2, power(q) -> |q - 1|. Integrands whose
        constant does not grow with D report 1.
        """
        if self.kind in ("log", "neg_log"):
            return 1.0
        if self.kind == "reciprocal":
            return 2.0
        if self.kind == "power" and self.param != 1:
            return abs(self.param - 1.0)
        return 1.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "log":
            return np.log(x)
        if self.kind == "neg_log":
            return -np.log(x)
        if self.kind == "reciprocal":
            return 1.0 / x
        if self.kind == "power":
            return np.power(x, self.param)
        k = self.param
        return np.exp(xlogy(k, x) - x - gammaln(k + 1))

    def __str__(self) -> str:
        if self.kind == "power":
            return f"power({self.param:g})"
        if self.kind == "poisson_pmf":
            return f"poisson_pmf({int(self.param)})"
        return self.kind


def log() -> Integrand:
    return Integrand("log")


def neg_log() -> Integrand:
    return Integrand("neg_log")


def reciprocal() -> Integrand:
    return Integrand("reciprocal")


def power(q: float) -> Integrand:
    return Integrand("power", float(q))


def poisson_pmf(k: int) -> Integrand:
    return Integrand("poisson_pmf", int(k))


# ---------------------------------------------------------------------
# Tapering
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class TaperedFunction:
    """
    ``base`` clamped to [lower, D]; ``lower`` defaults to 1/D.

    Parameters
    ----------
    base : Integrand
    D : float
        Upper clamp, >= 1 for the symmetric form. ``math.inf`` disables
        tapering and is legal only for bounded integrands.
    lower : float, optional
        Lower clamp for asymmetric tapers (known support bounds).

    Raises
    ------
    UnboundedFunctionError
        If the taper leaves an unbounded integrand unbounded.
    """

    base: Integrand
    D: float
    lower: float | None = None

    def __post_init__(self):
        if math.isnan(self.D) or self.D <= 0:
            raise InvalidConfigurationError(f"D must be positive, got {self.D}.")
        if self.lower is None and self.D < 1:
            raise InvalidConfigurationError(f"Symmetric taper needs D >= 1, got {self.D}.")
        lo, hi = self.interval
        if not 0 <= lo <= hi:
            raise InvalidConfigurationError(f"Taper interval [{lo}, {hi}] is empty.")
        if not self.base.bounded and (math.isinf(hi) or lo == 0):
            raise UnboundedFunctionError(
                f"{self.base} is unbounded; it needs a finite taper, got [{lo}, {hi}]."
            )

    @property
    def interval(self) -> tuple[float, float]:
        if self.lower is not None:
            return float(self.lower), float(self.D)
        return (0.0 if math.isinf(self.D) else 1.0 / self.D), float(self.D)


def taper_eval(f: TaperedFunction, x):
    """Three-branch evaluation g(clip(x, lo, hi)); scalar in, float out."""
    lo, hi = f.interval
    values = f.base(np.clip(np.asarray(x, dtype=float), lo, hi))
    return float(values) if np.ndim(values) == 0 else values


def _poisson_pmf_slope(k: int, x: np.ndarray) -> np.ndarray:
    """d/dx x^k e^-x / k! = pmf(k-1; x) - pmf(k; x)."""
    current = poisson_pmf(k)(x)
    previous = poisson_pmf(k - 1)(x) if k > 0 else np.zeros_like(x)
    return previous - current


def lipschitz_constant(f: TaperedFunction) -> float:
    """
    Exact Lipschitz constant of the tapered function on R+.

    log, neg_log -> 1/lo; reciprocal -> 1/lo^2;
    power(q) -> |q| max(lo^(q-1), hi^(q-1)); poisson_pmf(k) -> the largest
    slope, found among the inflection points k +- sqrt(k) and the clamps.
    For the symmetric taper lo = 1/D, so log gives D and reciprocal D^2.
    """
    lo, hi = f.interval
    kind, q = f.base.kind, f.base.param

    if kind in ("log", "neg_log"):
        return 1.0 / lo
    if kind == "reciprocal":
        return 1.0 / lo**2
    if kind == "power":
        if q == 0 or hi == lo:
            return 0.0
        return abs(q) * max(lo ** (q - 1.0), hi ** (q - 1.0))

    k = int(q)
    candidates = np.array([k - math.sqrt(k), k + math.sqrt(k), lo, min(hi, 1e300)])
    candidates = np.clip(candidates, lo, min(hi, 1e300))
    return float(np.max(np.abs(_poisson_pmf_slope(k, candidates))))


def integrate(p: DiscreteMeasure, f: TaperedFunction) -> float:
    """Plug-in value sum_j w_j f_D(x_j)."""
    return float(np.dot(p.weights, taper_eval(f, p.locations)))
