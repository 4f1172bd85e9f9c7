"""Lower bounds on the number of poles on the circle of convergence.

Two counting modes share one report shape: the relaxed mode counts the
coefficients exceeding the geometric threshold (1/rho - eps)**j, the classical
mode simply counts nonzero coefficients.  In both cases the final bound is the
floor of the tail maximum of n / v_n.

The decomposition hypothesis (rational part with radius rho plus a remainder
analytic in |z| < rho1) cannot be verified from a coefficient prefix; reports
carry a disclaimer instead of a check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .series import DEFAULT_TAIL_FRACTION, CoefficientSeries, _tail_indices

DECOMPOSITION_DISCLAIMER = (
    "assumption: decomposition hypothesis (rational part of radius rho plus a "
    "remainder analytic in |z| < rho1) is taken on trust"
)

_MIN_PREFIX = 10


@dataclass(frozen=True)
class PoleBoundConfig:
    """The (rho, rho1, eps) triple of the relaxed counting mode."""

    rho: float
    rho1: float
    epsilon: float
    tail_fraction: float = DEFAULT_TAIL_FRACTION

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if not self.rho1 > self.rho:
            raise ValueError("rho1 must exceed rho")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.epsilon < 1.0 / (2.0 * self.rho):
            raise ValueError("epsilon must be below 1/(2 rho)")
        inv_rho1 = 0.0 if math.isinf(self.rho1) else 1.0 / self.rho1
        if not inv_rho1 < 1.0 / self.rho - 2.0 * self.epsilon:
            raise ValueError(
                "hypothesis violated: need 1/rho1 < 1/rho - 2*epsilon "
                f"(got 1/rho1={inv_rho1:.6g}, 1/rho - 2 eps="
                f"{1.0 / self.rho - 2.0 * self.epsilon:.6g})"
            )


@dataclass(frozen=True)
class PoleBoundReport:
    """Counts v_n, ratios n/v_n, and the floored tail-max bound.

    ``bound`` is None exactly when no tail index has v_n > 0; ``status``
    then reads "no admissible coefficients".
    """

    v_counts: tuple[int, ...]
    ratios: tuple[float | None, ...]
    bound: int | None
    threshold_mode: str  # "relaxed_exceeding" | "classical_nonzero"
    tail_fraction: float
    status: str = "ok"
    disclaimer: str = DECOMPOSITION_DISCLAIMER

    @property
    def no_admissible(self) -> bool:
        return self.bound is None


def _build_report(
    exceeds: np.ndarray, mode: str, tail_fraction: float
) -> PoleBoundReport:
    v = np.cumsum(exceeds.astype(np.int64))  # v[n-1] = #{j < n : exceeds}
    length = len(v)
    ratios: list[float | None] = [
        (n / int(v[n - 1])) if v[n - 1] > 0 else None for n in range(1, length + 1)
    ]
    best: float | None = None
    for n_minus_1 in _tail_indices(length, tail_fraction):
        r = ratios[n_minus_1]
        if r is not None and (best is None or r > best):
            best = r
    if best is None:
        return PoleBoundReport(
            tuple(int(x) for x in v),
            tuple(ratios),
            None,
            mode,
            tail_fraction,
            status="no admissible coefficients",
        )
    return PoleBoundReport(
        tuple(int(x) for x in v), tuple(ratios), math.floor(best), mode, tail_fraction
    )


def count_exceeding(
    series: CoefficientSeries, cfg: PoleBoundConfig
) -> PoleBoundReport:
    """Relaxed count: v_n = #{j < n : |a_j| > (1/rho - eps)**j}.

    The strict inequality is taken verbatim in the log domain with no extra
    slack; callers inject slack through eps.
    """
    if series.length < _MIN_PREFIX:
        raise ValueError(f"need at least {_MIN_PREFIX} coefficients")
    log_base = math.log(1.0 / cfg.rho - cfg.epsilon)
    j = np.arange(series.length)
    exceeds = series.log_magnitudes > j * log_base
    return _build_report(exceeds, "relaxed_exceeding", cfg.tail_fraction)


def count_nonzero(
    series: CoefficientSeries,
    zero_tolerance: float = 0.0,
    tail_fraction: float = DEFAULT_TAIL_FRACTION,
) -> PoleBoundReport:
    """Classical count: v_n = #{j < n : |a_j| > zero_tolerance}."""
    if series.length < _MIN_PREFIX:
        raise ValueError(f"need at least {_MIN_PREFIX} coefficients")
    if zero_tolerance < 0:
        raise ValueError("zero_tolerance must be nonnegative")
    exceeds = np.abs(series.array) > zero_tolerance
    return _build_report(exceeds, "classical_nonzero", tail_fraction)
