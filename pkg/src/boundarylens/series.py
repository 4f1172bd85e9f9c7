"""Core data model for finite coefficient prefixes and radius-of-convergence estimators.

A power series is represented by a finite prefix of its Taylor coefficients
about 0.  All magnitude work happens in the log domain: coefficients of a
series with radius rho scale like (1/rho)**n and overflow doubles long before
the prefix lengths used elsewhere in this package.  Zero coefficients carry an
explicit -inf sentinel so "exactly zero" stays distinguishable from "tiny".
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

#: Log-magnitude sentinel for an exactly-zero coefficient.
ZERO_LOG_MAGNITUDE = float("-inf")

DEFAULT_TAIL_FRACTION = 0.5

_MIN_PREFIX = 10


class PrefixTooShortError(ValueError):
    """The stored coefficient prefix is too short for the requested estimate."""


@dataclass(frozen=True)
class CoefficientSeries:
    """Immutable finite prefix of complex Taylor coefficients, indexed from 0."""

    coefficients: tuple[complex, ...]
    label: str = ""

    def __init__(self, coefficients: Iterable[complex], label: str = "") -> None:
        coeffs = tuple(complex(c) for c in coefficients)
        if not coeffs:
            raise ValueError("a series needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "label", label)

    @property
    def length(self) -> int:
        return len(self.coefficients)

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, n: int) -> complex:
        return self.coefficients[n]

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.asarray(self.coefficients, dtype=np.complex128)
        arr.flags.writeable = False
        return arr

    @cached_property
    def log_magnitudes(self) -> np.ndarray:
        """ln|a_n| per index, with -inf for exactly-zero coefficients."""
        mags = np.abs(self.array)
        with np.errstate(divide="ignore"):
            lm = np.log(mags)
        lm.flags.writeable = False
        return lm

    @cached_property
    def phases(self) -> np.ndarray:
        ph = np.angle(self.array)
        ph.flags.writeable = False
        return ph


def log_magnitude(series: CoefficientSeries, n: int) -> float:
    """ln|a_n|, or the -inf sentinel when a_n = 0."""
    if not 0 <= n < series.length:
        raise IndexError(f"index {n} out of range for prefix of length {series.length}")
    return float(series.log_magnitudes[n])


@dataclass(frozen=True)
class RadiusEstimate:
    """Finite-prefix surrogate for the radius of convergence.

    ``value`` may be ``math.inf`` when every tail coefficient vanishes.  The
    tail_fraction surrogate for the limsup is a heuristic; reports downstream
    flag it as such.
    """

    value: float
    method: str  # "cauchy_hadamard" | "windowed_max"
    window: int | None
    tail_fraction: float

    def __post_init__(self) -> None:
        if not self.value > 0:
            raise ValueError("radius estimate must be positive")
        if self.method == "windowed_max" and (self.window is None or self.window < 1):
            raise ValueError("windowed estimates need a window q >= 1")


def _tail_indices(length: int, tail_fraction: float) -> range:
    if not 0 < tail_fraction < 1:
        raise ValueError("tail_fraction must lie in (0, 1)")
    count = math.ceil(tail_fraction * length)
    return range(length - count, length)


def radius_cauchy_hadamard(
    series: CoefficientSeries, tail_fraction: float = DEFAULT_TAIL_FRACTION
) -> RadiusEstimate:
    """1 / (tail maximum of |a_n|**(1/n)), computed in the log domain."""
    if series.length < _MIN_PREFIX:
        raise PrefixTooShortError(
            f"need at least {_MIN_PREFIX} coefficients, got {series.length}"
        )
    lm = series.log_magnitudes
    best = ZERO_LOG_MAGNITUDE
    for n in _tail_indices(series.length, tail_fraction):
        if n == 0:
            continue
        if lm[n] > ZERO_LOG_MAGNITUDE:
            best = max(best, lm[n] / n)
    value = math.inf if best == ZERO_LOG_MAGNITUDE else math.exp(-best)
    return RadiusEstimate(value, "cauchy_hadamard", None, tail_fraction)


def radius_windowed(
    series: CoefficientSeries,
    q: int,
    tail_fraction: float = DEFAULT_TAIL_FRACTION,
) -> RadiusEstimate:
    """Windowed-maximum radius estimate.

    Uses A_n = max(|a_n|, ..., |a_{n-q+1}|); for rational generators with
    denominator degree q the n-th root of A_n converges to 1/r even when the
    raw coefficient magnitudes oscillate (e.g. 1/(1 - z**2) sampled at odd n).
    """
    if q < 1:
        raise ValueError("window q must be a positive integer")
    if series.length < q + _MIN_PREFIX:
        raise PrefixTooShortError(
            f"need at least q + {_MIN_PREFIX} = {q + _MIN_PREFIX} coefficients, "
            f"got {series.length}"
        )
    lm = series.log_magnitudes
    best = ZERO_LOG_MAGNITUDE
    for n in _tail_indices(series.length, tail_fraction):
        if n == 0:
            continue
        window_max = float(np.max(lm[max(0, n - q + 1) : n + 1]))
        if window_max > ZERO_LOG_MAGNITUDE:
            best = max(best, window_max / n)
    value = math.inf if best == ZERO_LOG_MAGNITUDE else math.exp(-best)
    return RadiusEstimate(value, "windowed_max", q, tail_fraction)
