"""Gap structure detection and membership certificates for gapped series classes.

Six classes are supported: the classical lacunary, Ostrowski, and Hadamard
lacunary series (exact zero gaps), and their quasi relaxations where gap
coefficients are merely dominated by a small bounding sequence.  A certificate
is a *claim* of membership; verification checks exactly the defining
conditions restricted to the observed prefix and reports the first
counterexample per condition.

Asymptotic conditions (gap lengths tending to infinity, summability,
divergence of the opening-coefficient series) are only checkable on the
observed range; verdicts carry a prefix caveat flag for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .series import CoefficientSeries

LACUNARY = "lacunary"
OSTROWSKI = "ostrowski"
HADAMARD = "hadamard"
QUASI_LACUNARY = "quasi_lacunary"
QUASI_OSTROWSKI = "quasi_ostrowski"
QUASI_HADAMARD = "quasi_hadamard"

SERIES_CLASSES = (
    LACUNARY,
    OSTROWSKI,
    HADAMARD,
    QUASI_LACUNARY,
    QUASI_OSTROWSKI,
    QUASI_HADAMARD,
)

_QUASI = (QUASI_LACUNARY, QUASI_OSTROWSKI, QUASI_HADAMARD)
_OSTROWSKI_TYPE = (OSTROWSKI, QUASI_OSTROWSKI)

DEFAULT_DIVERGENCE_FLOOR = 5.0
DEFAULT_INCREMENT_FLOOR = 1e-4


@dataclass(frozen=True)
class BoundingFamily:
    """The small positive sequence (c_j) dominating gap coefficients.

    ``power_law`` families are c_j = scale / j**exponent for j >= 1 (c_0 =
    scale); they are decreasing, and summable exactly when exponent > 1.
    ``explicit_list`` families carry their values verbatim and can only be
    checked on the observed range.
    """

    kind: str  # "power_law" | "explicit_list"
    scale: float = 1.0
    exponent: float = 2.0
    values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "power_law":
            if not self.scale > 0 or not self.exponent > 0:
                raise ValueError("power_law needs positive scale and exponent")
        elif self.kind == "explicit_list":
            if not self.values:
                raise ValueError("explicit_list needs values")
            if any(v < 0 for v in self.values):
                raise ValueError("bounding values must be nonnegative")
        else:
            raise ValueError(f"unknown bounding family kind {self.kind!r}")

    def value_at(self, j: int) -> float:
        if self.kind == "power_law":
            return self.scale if j == 0 else self.scale / j**self.exponent
        if j >= len(self.values):
            raise ValueError(f"explicit bounding list has no entry for index {j}")
        return self.values[j]

    def summability_floor(self) -> float | None:
        """Smallest p' such that p-summability is certified for every p > p'.

        Power-law families with exponent alpha certify p-summability for
        p > max(1, 1/alpha).  Explicit lists certify nothing asymptotic.
        """
        if self.kind == "power_law":
            return max(1.0, 1.0 / self.exponent)
        return None

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "power_law":
            return {"kind": self.kind, "scale": self.scale, "exponent": self.exponent}
        return {"kind": self.kind, "values": list(self.values)}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BoundingFamily":
        if d.get("kind") == "explicit_list":
            return cls(kind="explicit_list", values=tuple(d["values"]))
        return cls(
            kind="power_law",
            scale=float(d.get("scale", 1.0)),
            exponent=float(d.get("exponent", 2.0)),
        )


@dataclass(frozen=True)
class GapCertificate:
    """Claimed membership of a series in one of the six gap classes."""

    series_class: str
    m_seq: tuple[int, ...]
    n_seq: tuple[int, ...] | None = None
    delta: float | None = None
    bounds: BoundingFamily | None = None
    summability_p: float | None = None

    def __post_init__(self) -> None:
        if self.series_class not in SERIES_CLASSES:
            raise ValueError(f"unknown series class {self.series_class!r}")
        m = self.m_seq
        if len(m) < 2:
            raise ValueError("m_seq needs at least two entries")
        if m[0] < 0 or any(b <= a for a, b in zip(m, m[1:])):
            raise ValueError("m_seq must be strictly increasing and nonnegative")
        if self.series_class in _OSTROWSKI_TYPE:
            if self.n_seq is None or len(self.n_seq) != len(m):
                raise ValueError("Ostrowski-type certificates pair every m_k with an n_k")
            for k, (mk, nk) in enumerate(zip(m, self.n_seq)):
                if not mk < nk:
                    raise ValueError(f"interleaving broken: m_{k} >= n_{k}")
                if k + 1 < len(m) and not nk <= m[k + 1]:
                    raise ValueError(f"interleaving broken: n_{k} > m_{k + 1}")
        if self.series_class in (OSTROWSKI, HADAMARD, QUASI_OSTROWSKI, QUASI_HADAMARD):
            if self.delta is None or not self.delta > 0:
                raise ValueError(f"{self.series_class} certificates need delta > 0")
        if self.series_class in _QUASI and self.bounds is None:
            raise ValueError(f"{self.series_class} certificates need a bounding family")
        if self.series_class == QUASI_LACUNARY:
            if self.summability_p is None or not self.summability_p > 1:
                raise ValueError("quasi_lacunary certificates need a summability exponent p > 1")

    @property
    def max_index(self) -> int:
        top = self.m_seq[-1]
        if self.n_seq:
            top = max(top, self.n_seq[-1])
        return top

    def gaps(self) -> list[tuple[int, int, int]]:
        """(opener m, gap start, gap end) with the gap being the open interval."""
        if self.series_class in _OSTROWSKI_TYPE:
            return [(m, m, n) for m, n in zip(self.m_seq, self.n_seq)]
        return [(m, m, m2) for m, m2 in zip(self.m_seq, self.m_seq[1:])]

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"class": self.series_class, "m_seq": list(self.m_seq)}
        if self.n_seq is not None:
            d["n_seq"] = list(self.n_seq)
        if self.delta is not None:
            d["delta"] = self.delta
        if self.bounds is not None:
            d["bounds"] = self.bounds.to_dict()
        if self.summability_p is not None:
            d["p"] = self.summability_p
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GapCertificate":
        return cls(
            series_class=d["class"],
            m_seq=tuple(int(x) for x in d["m_seq"]),
            n_seq=tuple(int(x) for x in d["n_seq"]) if d.get("n_seq") is not None else None,
            delta=float(d["delta"]) if d.get("delta") is not None else None,
            bounds=BoundingFamily.from_dict(d["bounds"]) if d.get("bounds") else None,
            summability_p=float(d["p"]) if d.get("p") is not None else None,
        )


@dataclass(frozen=True)
class FailedCondition:
    condition: str
    index: int | None
    measured: float
    required: float


@dataclass(frozen=True)
class CertificateVerdict:
    accepted: bool
    failed_conditions: tuple[FailedCondition, ...]
    prefix_caveat: bool
    metadata: dict[str, Any] = field(default_factory=dict)


class _Checker:
    def __init__(self) -> None:
        self.failures: list[FailedCondition] = []
        self.caveat = False

    def fail(self, condition: str, index: int | None, measured: float, required: float) -> None:
        if not any(f.condition == condition for f in self.failures):
            self.failures.append(FailedCondition(condition, index, measured, required))


def verify_certificate(
    series: CoefficientSeries,
    cert: GapCertificate,
    divergence_floor: float = DEFAULT_DIVERGENCE_FLOOR,
    increment_floor: float = DEFAULT_INCREMENT_FLOOR,
) -> CertificateVerdict:
    """Check the defining conditions of the certified class on the prefix.

    Tie-breaking follows the definitions verbatim: |a_j| = c_j satisfies the
    "<=" bounds of the lacunary and Hadamard quasi classes and violates the
    strict "<" bound of the Ostrowski quasi class.
    """
    if cert.max_index >= series.length:
        raise IndexError(
            f"certificate index {cert.max_index} out of range "
            f"(prefix length {series.length})"
        )
    mags = np.abs(series.array)
    ck = _Checker()
    cls = cert.series_class
    meta: dict[str, Any] = {}

    if cls in (LACUNARY, QUASI_LACUNARY):
        _check_gap_growth(ck, cert.m_seq)
    else:
        _check_delta_gaps(ck, cert, cls)

    _check_gap_coefficients(ck, cert, mags, cls)

    openings = mags[list(cert.m_seq)]
    meta["sup_opening_magnitude"] = float(np.max(openings))

    if cls == HADAMARD:
        for v, m in enumerate(cert.m_seq):
            if mags[m] == 0.0:
                ck.fail("opening_nonzero", m, 0.0, math.nextafter(0.0, 1.0))
                break

    if cls == QUASI_LACUNARY:
        _check_summability(ck, cert.bounds, cert.summability_p)
    if cls in (QUASI_OSTROWSKI, QUASI_HADAMARD):
        _check_bounds_decreasing(ck, cert.bounds, cert.max_index)
    if cls == QUASI_HADAMARD:
        _check_summability(ck, cert.bounds, None)
        partial = np.cumsum(openings)
        meta["divergence_partial_sums"] = [float(x) for x in partial]
        # the classical a_{m_v} != 0 requirement is deliberately not imposed
        meta["classical_opening_requirement_dropped"] = True
        ck.caveat = True
        if partial[-1] <= divergence_floor:
            ck.fail(
                "divergence_partial_sum", len(cert.m_seq) - 1, float(partial[-1]), divergence_floor
            )
        if openings[-1] <= increment_floor:
            ck.fail(
                "divergence_last_increment",
                cert.m_seq[-1],
                float(openings[-1]),
                increment_floor,
            )

    return CertificateVerdict(
        accepted=not ck.failures,
        failed_conditions=tuple(ck.failures),
        prefix_caveat=ck.caveat,
        metadata=meta,
    )


def _check_gap_growth(ck: _Checker, m_seq: tuple[int, ...]) -> None:
    # finite surrogate for m_{v+1} - m_v -> infinity: strict increase of gap
    # lengths across the observed v
    ck.caveat = True
    diffs = [b - a for a, b in zip(m_seq, m_seq[1:])]
    for v in range(1, len(diffs)):
        if not diffs[v] > diffs[v - 1]:
            ck.fail("gap_growth", v, float(diffs[v]), float(diffs[v - 1] + 1))
            return


def _check_delta_gaps(ck: _Checker, cert: GapCertificate, cls: str) -> None:
    delta = cert.delta
    if cls in _OSTROWSKI_TYPE:
        pairs = list(zip(cert.m_seq, cert.n_seq))
    else:
        pairs = list(zip(cert.m_seq, cert.m_seq[1:]))
    for k, (m, n) in enumerate(pairs):
        if not n - m > delta * m:
            ck.fail("delta_gap", k, float(n - m), delta * m)
            return


def _check_gap_coefficients(
    ck: _Checker, cert: GapCertificate, mags: np.ndarray, cls: str
) -> None:
    for opener, lo, hi in cert.gaps():
        for j in range(lo + 1, hi):
            mag = float(mags[j])
            if cls in (LACUNARY, OSTROWSKI, HADAMARD):
                if mag != 0.0:
                    ck.fail("gap_coefficients", j, mag, 0.0)
                    return
                continue
            c_j = cert.bounds.value_at(j)
            opener_sq = float(opener**2) if opener > 0 else math.inf
            if cls == QUASI_LACUNARY:
                if not mag <= c_j:
                    ck.fail("gap_coefficients", j, mag, c_j)
                    return
            elif cls == QUASI_OSTROWSKI:
                required = c_j / opener_sq if math.isfinite(opener_sq) else math.inf
                if not mag < required:
                    ck.fail("gap_coefficients", j, mag, required)
                    return
            else:  # QUASI_HADAMARD
                required = c_j / opener_sq if math.isfinite(opener_sq) else math.inf
                if not mag <= required:
                    ck.fail("gap_coefficients", j, mag, required)
                    return


def _check_summability(
    ck: _Checker, bounds: BoundingFamily, p: float | None
) -> None:
    """p-summability of (c_j) (p = None means plain summability, p = 1)."""
    floor = bounds.summability_floor()
    if floor is None:
        # explicit list: only the observed prefix exists, nothing asymptotic
        ck.caveat = True
        return
    target = 1.0 if p is None else p
    # power law with exponent alpha: sum c_j**p finite iff alpha * p > 1
    if not bounds.exponent * target > 1.0:
        ck.fail("summability", None, bounds.exponent * target, 1.0)


def _check_bounds_decreasing(
    ck: _Checker, bounds: BoundingFamily, max_index: int
) -> None:
    if bounds.kind == "power_law":
        return  # positive and strictly decreasing by construction
    top = min(max_index + 1, len(bounds.values))
    vals = bounds.values[:top]
    for j, v in enumerate(vals):
        if v <= 0:
            ck.fail("bounds_positive", j, v, math.nextafter(0.0, 1.0))
            return
    for j in range(1, len(vals)):
        if vals[j] > vals[j - 1]:
            ck.fail("bounds_decreasing", j, vals[j], vals[j - 1])
            return


# -- certificate transformations (class hierarchy) ---------------------------


def hadamard_as_ostrowski(cert: GapCertificate) -> GapCertificate:
    """View a Hadamard lacunary certificate as an Ostrowski one (n_v = m_{v+1})."""
    if cert.series_class != HADAMARD:
        raise ValueError("expected a classical Hadamard certificate")
    return GapCertificate(
        series_class=OSTROWSKI,
        m_seq=cert.m_seq[:-1],
        n_seq=cert.m_seq[1:],
        delta=cert.delta,
    )


def hadamard_as_lacunary(cert: GapCertificate) -> GapCertificate:
    """View a Hadamard lacunary certificate as a plain lacunary one."""
    if cert.series_class != HADAMARD:
        raise ValueError("expected a classical Hadamard certificate")
    return GapCertificate(series_class=LACUNARY, m_seq=cert.m_seq)


def quasi_hadamard_as_quasi_ostrowski(cert: GapCertificate) -> GapCertificate:
    """Quasi-Hadamard certificates embed into the quasi-Ostrowski class.

    The bounding family is doubled to turn the "<=" gap bound into the strict
    "<" one.
    """
    if cert.series_class != QUASI_HADAMARD:
        raise ValueError("expected a quasi-Hadamard certificate")
    b = cert.bounds
    if b.kind == "power_law":
        doubled = BoundingFamily(kind="power_law", scale=2 * b.scale, exponent=b.exponent)
    else:
        doubled = BoundingFamily(
            kind="explicit_list", values=tuple(2 * v for v in b.values)
        )
    return GapCertificate(
        series_class=QUASI_OSTROWSKI,
        m_seq=cert.m_seq[:-1],
        n_seq=cert.m_seq[1:],
        delta=cert.delta,
        bounds=doubled,
    )


# -- gap detection (inverse problem) -----------------------------------------


@dataclass(frozen=True)
class GapScan:
    """Candidate gap structure proposed from thresholding the prefix."""

    large_indices: tuple[int, ...]
    small_runs: tuple[tuple[int, int], ...]  # inclusive index ranges
    m_seq: tuple[int, ...]  # large index opening each gap
    n_seq: tuple[int, ...]  # large index closing each gap


def detect_gaps(series: CoefficientSeries, smallness: BoundingFamily) -> GapScan:
    """Partition indices into large (|a_j| > c_j) and small (ties are small).

    Maximal runs of small indices flanked by large indices on both sides are
    the candidate gaps; the flanking large indices form the proposed m/n
    sequences.
    """
    if series.length < 20:
        raise ValueError("need at least 20 coefficients to scan for gaps")
    mags = np.abs(series.array)
    large = [j for j in range(series.length) if mags[j] > smallness.value_at(j)]
    runs: list[tuple[int, int]] = []
    m_seq: list[int] = []
    n_seq: list[int] = []
    for prev, nxt in zip(large, large[1:]):
        if nxt - prev > 1:
            runs.append((prev + 1, nxt - 1))
            m_seq.append(prev)
            n_seq.append(nxt)
    return GapScan(tuple(large), tuple(runs), tuple(m_seq), tuple(n_seq))
