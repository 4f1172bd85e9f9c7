"""Taylor expansion of rational functions and ground-truth pole bookkeeping.

The expansion runs the linear recurrence induced by the denominator, so it is
exact up to floating rounding and serves as the oracle the pole-count and
radius estimators are tested against.  Relative primality of numerator and
denominator is the caller's responsibility; nothing here checks it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import CoefficientSeries


class RootFindingError(RuntimeError):
    """The iterative root finder failed to converge on the denominator."""


@dataclass(frozen=True)
class RationalFunction:
    """P(z)/Q(z) with coefficient lists in increasing degree order."""

    numerator: tuple[complex, ...]
    denominator: tuple[complex, ...]
    declared_poles: tuple[tuple[complex, int], ...] | None = None

    def __init__(
        self,
        numerator,
        denominator,
        declared_poles=None,
    ) -> None:
        num = tuple(complex(c) for c in numerator)
        den = tuple(complex(c) for c in denominator)
        if not den or den[0] == 0:
            raise ValueError("denominator must have a nonzero constant term")
        poles = None
        if declared_poles is not None:
            poles = tuple((complex(z), int(m)) for z, m in declared_poles)
            if any(m < 1 for _, m in poles):
                raise ValueError("pole multiplicities must be positive")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)
        object.__setattr__(self, "declared_poles", poles)

    @property
    def denominator_degree(self) -> int:
        deg = len(self.denominator) - 1
        while deg > 0 and self.denominator[deg] == 0:
            deg -= 1
        return deg


@dataclass(frozen=True)
class ExpansionResult:
    """Expansion prefix plus a forward-recurrence drift diagnostic.

    ``unstable`` is set when |a_n|**(1/n) drifts monotonically away from the
    declared 1/r by more than 10% over the last quarter of the prefix, which
    is the signature of the recurrence amplifying a non-dominant mode.
    """

    series: CoefficientSeries
    unstable: bool


def expand(rf: RationalFunction, length: int) -> ExpansionResult:
    """First ``length`` Taylor coefficients of P/Q about 0."""
    if length < 1:
        raise ValueError("length must be positive")
    q = rf.denominator
    p = rf.numerator
    deg_q = len(q) - 1
    a = np.zeros(length, dtype=np.complex128)
    for n in range(length):
        p_n = p[n] if n < len(p) else 0.0
        acc = complex(p_n)
        for j in range(1, min(deg_q, n) + 1):
            acc -= q[j] * a[n - j]
        a[n] = acc / q[0]
    series = CoefficientSeries(a, label="rational expansion")
    return ExpansionResult(series, _drift_detected(rf, series))


def _drift_detected(rf: RationalFunction, series: CoefficientSeries) -> bool:
    if rf.declared_poles is None or series.length < 40:
        return False
    r = min(abs(z) for z, _ in rf.declared_poles)
    target = 1.0 / r
    lm = series.log_magnitudes
    quarter = series.length // 4
    start, end = series.length - quarter, series.length - 1
    if not (math.isfinite(lm[start]) and math.isfinite(lm[end])):
        return False
    dev_start = abs(math.exp(lm[start] / start) - target) / target
    dev_end = abs(math.exp(lm[end] / end) - target) / target
    return dev_end > 0.10 and dev_end > dev_start


@dataclass(frozen=True)
class PoleSet:
    """Poles on the circle of convergence: distinct locations with multiplicity."""

    locations: tuple[tuple[complex, int], ...]

    @property
    def count(self) -> int:
        return len(self.locations)


def poles_on_circle(rf: RationalFunction, radius_tolerance: float = 1e-6) -> PoleSet:
    """Poles whose modulus is within ``radius_tolerance`` (relative) of the minimum.

    Uses declared poles when present; otherwise finds denominator roots
    numerically and rejects any root with residual above 1e-10.
    """
    if rf.declared_poles is not None:
        poles = list(rf.declared_poles)
    else:
        poles = _roots_with_multiplicity(rf)
    r_min = min(abs(z) for z, _ in poles)
    on_circle = tuple(
        (z, m) for z, m in poles if abs(z) <= r_min * (1.0 + radius_tolerance)
    )
    return PoleSet(on_circle)


def _roots_with_multiplicity(rf: RationalFunction) -> list[tuple[complex, int]]:
    coeffs = list(rf.denominator)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) == 1:
        raise ValueError("constant denominator has no poles")
    roots = np.roots(coeffs[::-1])
    scale = max(abs(c) for c in coeffs)
    for z in roots:
        residual = abs(np.polyval(coeffs[::-1], z))
        if residual > 1e-10 * scale * max(1.0, abs(z)) ** (len(coeffs) - 1):
            raise RootFindingError(f"root {z} has residual {residual:.3e}")
    clusters: list[tuple[complex, int]] = []
    # a multiplicity-m root is perturbed by O(eps**(1/m)); 1e-6 covers m <= 2
    # comfortably and higher multiplicities in well-scaled cases
    for z in sorted(roots, key=lambda w: (abs(w), np.angle(w))):
        for i, (w, m) in enumerate(clusters):
            if abs(z - w) <= 1e-6 * max(1.0, abs(w)):
                clusters[i] = (w, m + 1)
                break
        else:
            clusters.append((complex(z), 1))
    return clusters
