"""Composition of a series with q(w) = (c/2)(w**p + w**(p+1)) and the grouped
coefficients that make the overconvergence argument quantitative.

Three pieces fit together:

* ``compose_bruteforce`` expands sum_r a_r q(w)**r by iterated polynomial
  multiplication -- the slow, trustworthy oracle;
* ``grouped_coefficient`` evaluates the closed-form binomial sum for the
  coefficients of s_{m_k}(q(w));
* ``contribution_bound_check`` compares |b_n - d_n^(k)| against the explicit
  bound (1/m_k**2) (n/(p(p+1)) + 2) c_{floor(n/(p+1))} on the upper index
  range, and demands exact agreement below p*m_k.

The r-summation range floor(n/(p+1))..floor(n/p) is truncated at r <= m_k for
d_n^(k): it is a coefficient of s_{m_k}(q(w)), so larger r never occur there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import gap_analysis
from .gap_analysis import GapCertificate, verify_certificate
from .series import CoefficientSeries


class TruncationShortfallError(ValueError):
    """r_max is too small to produce all requested w-coefficients."""


class CertificateRejectedError(ValueError):
    """A prerequisite certificate failed verification."""


@dataclass(frozen=True)
class CompositionConfig:
    """Boundary point c (|c| = 1) and composition degree p."""

    c: complex = 1.0 + 0.0j
    p: int = 1
    delta: float | None = None

    def __post_init__(self) -> None:
        if abs(abs(complex(self.c)) - 1.0) > 1e-12:
            raise ValueError("boundary point c must have modulus 1 (within 1e-12)")
        if self.p < 1:
            raise ValueError("composition degree p must be a positive integer")
        if self.delta is not None and self.p < math.ceil(1.0 / self.delta):
            raise ValueError(
                f"p = {self.p} is below ceil(1/delta) = {math.ceil(1.0 / self.delta)}"
            )


def compose_bruteforce(
    series: CoefficientSeries,
    cfg: CompositionConfig,
    w_length: int,
    r_max: int,
) -> np.ndarray:
    """First ``w_length`` w-coefficients of sum_{r <= r_max} a_r q(w)**r.

    When r_max cuts the series short, every omitted term q(w)**r has valuation
    p*r >= p*(r_max + 1); the result is only complete if that exceeds the
    requested length, otherwise the truncation shortfall is reported.
    """
    if w_length < 1:
        raise ValueError("w_length must be positive")
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    if r_max < series.length - 1 and cfg.p * (r_max + 1) < w_length:
        raise TruncationShortfallError(
            f"r_max = {r_max} only guarantees w-coefficients below "
            f"{cfg.p * (r_max + 1)}, but {w_length} were requested"
        )
    half_c = complex(cfg.c) / 2.0
    p = cfg.p
    out = np.zeros(w_length, dtype=np.complex128)
    # q(w)**r maintained incrementally; multiplying by q is a sparse update
    qr = np.zeros(w_length, dtype=np.complex128)
    qr[0] = 1.0
    top = min(r_max, series.length - 1)
    out += series[0] * qr
    for r in range(1, top + 1):
        nxt = np.zeros(w_length, dtype=np.complex128)
        if p < w_length:
            nxt[p:] = half_c * qr[:-p]
        if p + 1 < w_length:
            nxt[p + 1 :] += half_c * qr[: -(p + 1)]
        qr = nxt
        if not qr.any():
            break  # valuation p*r has left the window
        if series[r] != 0:
            out += series[r] * qr
    return out


def _half_c_power_binom(r: int, l: int, c: complex) -> complex:
    """(c/2)**r * C(r, l) with |c| = 1, overflow-safe for large r."""
    if r <= 30:
        return (c / 2.0) ** r * math.comb(r, l)
    binom = math.comb(r, l)
    if binom < 2**1020:
        # exactly-rounded magnitude; the phase factor has modulus 1
        return math.ldexp(float(binom), -r) * cmath.exp(1j * r * cmath.phase(complex(c)))
    log_mag = (
        math.lgamma(r + 1)
        - math.lgamma(l + 1)
        - math.lgamma(r - l + 1)
        - r * math.log(2.0)
    )
    return math.exp(log_mag) * cmath.exp(1j * r * cmath.phase(complex(c)))


def grouped_coefficient(
    series: CoefficientSeries,
    cfg: CompositionConfig,
    m_k: int,
    n: int,
) -> complex:
    """The w**n coefficient d_n^(k) of s_{m_k}(q(w)), by the closed-form sum."""
    p = cfg.p
    if not 0 <= n <= (p + 1) * m_k:
        raise IndexError(f"n = {n} outside [0, (p+1) m_k = {(p + 1) * m_k}]")
    if m_k >= series.length:
        raise IndexError(f"m_k = {m_k} outside the stored prefix")
    total = 0.0 + 0.0j
    r_lo = n // (p + 1)
    r_hi = min(n // p if p > 0 else n, m_k)
    for r in range(r_lo, r_hi + 1):
        l = r * (p + 1) - n
        if not 0 <= l <= r:
            continue
        a_r = series[r]
        if a_r == 0:
            continue
        total += a_r * _half_c_power_binom(r, l, cfg.c)
    return total


def grouped_coefficients(
    series: CoefficientSeries, cfg: CompositionConfig, m_k: int
) -> np.ndarray:
    """d_n^(k) for every n in 0..(p+1) m_k."""
    return np.array(
        [grouped_coefficient(series, cfg, m_k, n) for n in range((cfg.p + 1) * m_k + 1)],
        dtype=np.complex128,
    )


@dataclass(frozen=True)
class LedgerEntry:
    n: int
    actual: float  # |b_n - d_n^(k)|
    bound: float


@dataclass(frozen=True)
class ContributionCheck:
    m_k: int
    ledger: tuple[LedgerEntry, ...]
    passed: bool
    first_violation: int | None
    aggregate_bound: float

    @property
    def max_actual(self) -> float:
        return max((e.actual for e in self.ledger), default=0.0)


def aggregate_contribution_bound(
    bounds: gap_analysis.BoundingFamily, p: int, m_k: int
) -> float:
    """(1/m_k**2)(m_k**2/p + 2 m_k) c_{floor(p m_k/(p+1))}, the summed bound."""
    c_val = bounds.value_at((p * m_k) // (p + 1))
    return (m_k**2 / p + 2.0 * m_k) * c_val / m_k**2


def contribution_bound_check(
    series: CoefficientSeries,
    cert: GapCertificate,
    cfg: CompositionConfig,
    k: int,
    slack: float = 1e-10,
    equality_tolerance: float = 1e-12,
) -> ContributionCheck:
    """Measure |b_n - d_n^(k)| against the per-index contribution bound.

    Passes iff b_n equals d_n^(k) (within ``equality_tolerance``) for
    n <= p*m_k, and every actual value on (p*m_k, (p+1)*m_k] stays within its
    bound plus ``slack``.
    """
    if cert.series_class != gap_analysis.QUASI_OSTROWSKI:
        raise CertificateRejectedError("contribution check needs a quasi-Ostrowski certificate")
    verdict = verify_certificate(series, cert)
    if not verdict.accepted:
        failed = ", ".join(f.condition for f in verdict.failed_conditions)
        raise CertificateRejectedError(f"certificate rejected ({failed})")
    if cert.delta is not None and cfg.p < 1.0 / cert.delta:
        raise ValueError(f"p = {cfg.p} is below 1/delta = {1.0 / cert.delta:.3f}")
    p = cfg.p
    m_k = cert.m_seq[k]
    w_length = (p + 1) * m_k + 1
    r_max = min(series.length - 1, ((p + 1) * m_k) // p)
    b = compose_bruteforce(series, cfg, w_length, r_max)
    d = grouped_coefficients(series, cfg, m_k)
    entries: list[LedgerEntry] = []
    passed = True
    first_violation: int | None = None
    for n in range(w_length):
        actual = abs(b[n] - d[n])
        if n <= p * m_k:
            bound = 0.0
            ok = actual <= equality_tolerance
        else:
            bound = (
                (n / (p * (p + 1)) + 2.0)
                * cert.bounds.value_at(n // (p + 1))
                / m_k**2
            )
            ok = actual <= bound + slack
        entries.append(LedgerEntry(n, float(actual), bound))
        if not ok and passed:
            passed = False
            first_violation = n
    return ContributionCheck(
        m_k=m_k,
        ledger=tuple(entries),
        passed=passed,
        first_violation=first_violation,
        aggregate_bound=aggregate_contribution_bound(cert.bounds, p, m_k),
    )
