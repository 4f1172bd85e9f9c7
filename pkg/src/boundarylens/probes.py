"""Partial-sum probes: numerical evidence for convergence, overconvergence,
and natural boundaries, plus the circular-sector diagnostic.

Every verdict here is evidence, never a proof: the underlying statements are
asymptotic and a finite prefix can only corroborate them.  Each report embeds
the thresholds that produced its verdict so the evidence is auditable.

Section values are stored as log-magnitude and phase.  Evaluation switches to
a block-scaled log-domain scheme whenever |z| > 1 pushes term magnitudes near
the floating-point range; otherwise a compensated direct accumulation is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import gap_analysis
from .composition import CertificateRejectedError
from .gap_analysis import GapCertificate, verify_certificate
from .series import CoefficientSeries

CONVERGING = "converging"
OVERCONVERGING = "overconverging"
DIVERGENCE_EVIDENCE = "divergence_evidence"
INCONCLUSIVE = "inconclusive"

DEFAULT_CONVERGENCE_THRESHOLD = 1e-6  # relative to the max section magnitude
DEFAULT_GROWTH_LOG_THRESHOLD = 20.0  # ln-magnitude ~ 4.8e8

_OVERFLOW_GUARD = 600.0  # ln-magnitude at which direct accumulation gives up
_CHUNK = 4096

_EPS = float(np.finfo(np.float64).eps)
_NOISE_FACTOR = 32.0  # machine-eps multiples granted to rounding accumulation
_FRESH_SUM_BUDGET = 1 << 23  # term count below which sections are re-summed from 0


class DegenerateSectorError(ValueError):
    """The sector corners coincide or the arc touches w1/w2 (a = 0)."""


@dataclass(frozen=True)
class ArcSpec:
    """A closed arc |z| = radius, angle_start <= arg z <= angle_end."""

    radius: float
    angle_start: float
    angle_end: float
    sample_count: int = 64
    spacing: str = "chebyshev"  # denser near endpoints, where sup error lives

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError("arc radius must be positive")
        if not self.angle_end > self.angle_start:
            raise ValueError("angle_end must exceed angle_start")
        if self.sample_count < 8:
            raise ValueError("need at least 8 arc samples")
        if self.spacing not in ("uniform", "chebyshev"):
            raise ValueError(f"unknown spacing {self.spacing!r}")

    def angles(self) -> np.ndarray:
        if self.spacing == "uniform":
            return np.linspace(self.angle_start, self.angle_end, self.sample_count)
        mid = 0.5 * (self.angle_start + self.angle_end)
        half = 0.5 * (self.angle_end - self.angle_start)
        k = np.arange(self.sample_count)
        return mid + half * np.cos(np.pi * k / (self.sample_count - 1))

    def points(self) -> np.ndarray:
        return self.radius * np.exp(1j * self.angles())


@dataclass(frozen=True)
class SectionEvaluation:
    """Values of the partial sums s_m at the sample points.

    ``log_magnitudes``/``phases`` are always populated; ``values`` holds the
    complex values and degrades to inf entries when the log-domain mode was
    needed and a value exceeds the floating range.
    """

    section_indices: tuple[int, ...]
    points: np.ndarray
    log_magnitudes: np.ndarray  # sections x points
    phases: np.ndarray
    mode: str  # "direct" | "log_domain"
    values: np.ndarray

    def cauchy_differences(self) -> np.ndarray:
        """sup over samples of |s_{m_{v+1}} - s_{m_v}| per consecutive pair."""
        if self.mode == "direct":
            diffs = np.abs(np.diff(self.values, axis=0))
            return diffs.max(axis=1)
        out = np.empty(len(self.section_indices) - 1)
        for v in range(len(self.section_indices) - 1):
            l1, p1 = self.log_magnitudes[v], self.phases[v]
            l2, p2 = self.log_magnitudes[v + 1], self.phases[v + 1]
            s = np.maximum(l1, l2)
            s = np.where(np.isneginf(s), 0.0, s)
            d = np.abs(
                np.exp(l2 - s + 1j * p2) - np.exp(l1 - s + 1j * p1)
            )
            with np.errstate(divide="ignore"):
                log_d = np.where(d > 0, np.log(np.where(d > 0, d, 1.0)) + s, -np.inf)
            out[v] = float(np.exp(np.max(log_d))) if np.max(log_d) < 700 else math.inf
        return out


def _scaled_block_sum(
    term_log: np.ndarray, term_phase: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Sum exp(term_log + i*term_phase) over axis 0, returning (value, scale)."""
    scale = term_log.max(axis=0)
    safe = np.where(np.isneginf(scale), 0.0, scale)
    rel = np.where(np.isneginf(term_log), -np.inf, term_log - safe)
    with np.errstate(invalid="ignore"):
        vals = np.where(np.isneginf(rel), 0.0, np.exp(rel)) * np.exp(1j * term_phase)
    return vals.sum(axis=0), scale


def _scaled_add(
    v1: np.ndarray, s1: np.ndarray, v2: np.ndarray, s2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    s = np.maximum(s1, s2)
    safe = np.where(np.isneginf(s), 0.0, s)
    f1 = np.where(np.isneginf(s1), 0.0, np.exp(np.minimum(s1 - safe, 0.0)))
    f2 = np.where(np.isneginf(s2), 0.0, np.exp(np.minimum(s2 - safe, 0.0)))
    return v1 * f1 + v2 * f2, s


def evaluate_sections(
    series: CoefficientSeries,
    section_indices: Sequence[int],
    points: Sequence[complex],
) -> SectionEvaluation:
    """Evaluate s_m(z) for every section m and sample point z."""
    sections = tuple(int(m) for m in section_indices)
    if not sections:
        raise ValueError("need at least one section index")
    if any(b <= a for a, b in zip(sections, sections[1:])):
        raise ValueError("section indices must be strictly increasing")
    if sections[-1] >= series.length:
        raise IndexError(
            f"section index {sections[-1]} out of range (length {series.length})"
        )
    z = np.asarray(points, dtype=np.complex128).ravel()
    if z.size == 0:
        raise ValueError("need at least one sample point")

    top = sections[-1]
    with np.errstate(divide="ignore"):
        log_abs_z = np.log(np.abs(z))
    max_log_z = float(np.max(log_abs_z))
    finite_lm = series.log_magnitudes[: top + 1]
    peak = float(np.max(finite_lm + np.arange(top + 1) * max(max_log_z, 0.0)))
    # the second clause keeps the raw powers z**n themselves representable
    direct = (
        peak + math.log(top + 1) < _OVERFLOW_GUARD
        and top * max(max_log_z, 0.0) < _OVERFLOW_GUARD
    )

    if direct:
        values = _evaluate_direct(series, sections, z)
        mags = np.abs(values)
        with np.errstate(divide="ignore"):
            log_mag = np.log(np.where(mags > 0, mags, 1.0))
        log_mag = np.where(mags > 0, log_mag, -np.inf)
        return SectionEvaluation(
            sections, z, log_mag, np.angle(values), "direct", values
        )

    log_mag, phase = _evaluate_log_domain(series, sections, z, log_abs_z)
    with np.errstate(over="ignore", invalid="ignore"):
        # overflowing sections degrade to inf (inf * 0 components to nan)
        values = np.exp(log_mag) * np.exp(1j * phase)
    return SectionEvaluation(sections, z, log_mag, phase, "log_domain", values)


def _evaluate_direct(
    series: CoefficientSeries, sections: tuple[int, ...], z: np.ndarray
) -> np.ndarray:
    a = series.array
    out = np.empty((len(sections), z.size), dtype=np.complex128)
    # z**n as |z|**n * exp(i n theta): real pow stays ~1 ulp at any n.  The
    # angle is taken in extended precision up front (a float64 angle already
    # carries an O(eps) error that n multiplies into the phase) and the phase
    # multiple reduced mod 2 pi before dropping back to float64.
    r = np.abs(z)
    theta = np.arctan2(z.imag.astype(np.longdouble), z.real.astype(np.longdouble))
    two_pi = 2.0 * np.arccos(np.longdouble(-1.0))

    def block_sum(block_start: int, block_end: int) -> np.ndarray:
        n = np.arange(block_start, block_end)
        mag = np.power.outer(r, n).T
        ang = np.mod(np.multiply.outer(n.astype(np.longdouble), theta), two_pi)
        ang64 = ang.astype(np.float64)
        zpow = mag * (np.cos(ang64) + 1j * np.sin(ang64))
        return (a[block_start:block_end, None] * zpow).sum(axis=0)

    # When heavy cancellation hides inside an inter-section block (composed
    # gap series probed outside the circle), the pairwise summation tree must
    # stay aligned to n = 0 for neighbouring terms to cancel early.  Cheap
    # section sets are therefore re-summed from scratch; the incremental path
    # is kept for long prefixes, where sections are dense and same-scale.
    if sum(sections) * z.size <= _FRESH_SUM_BUDGET:
        for i, end in enumerate(sections):
            acc = np.zeros(z.size, dtype=np.complex128)
            comp = np.zeros(z.size, dtype=np.complex128)
            for block_start in range(0, end + 1, _CHUNK):
                y = block_sum(block_start, min(block_start + _CHUNK, end + 1)) - comp
                t = acc + y
                comp = (t - acc) - y
                acc = t
            out[i] = acc
        return out

    acc = np.zeros(z.size, dtype=np.complex128)
    comp = np.zeros(z.size, dtype=np.complex128)  # running compensation
    next_section = 0
    start = 0
    for end in sections:
        for block_start in range(start, end + 1, _CHUNK):
            y = block_sum(block_start, min(block_start + _CHUNK, end + 1)) - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
        out[next_section] = acc
        next_section += 1
        start = end + 1
    return out


def _evaluate_log_domain(
    series: CoefficientSeries,
    sections: tuple[int, ...],
    z: np.ndarray,
    log_abs_z: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    lm = series.log_magnitudes
    ph = series.phases
    theta = np.angle(z)
    acc_v = np.zeros(z.size, dtype=np.complex128)
    acc_s = np.full(z.size, -np.inf)
    log_out = np.empty((len(sections), z.size))
    phase_out = np.empty((len(sections), z.size))
    row = 0
    start = 0
    for end in sections:
        for block_start in range(start, end + 1, _CHUNK):
            block_end = min(block_start + _CHUNK, end + 1)
            n = np.arange(block_start, block_end)
            nonzero = np.isfinite(lm[block_start:block_end])
            if nonzero.any():
                n_nz = n[nonzero]
                t_log = lm[n_nz, None] + np.multiply.outer(n_nz, log_abs_z)
                t_phase = ph[n_nz, None] + np.multiply.outer(n_nz, theta)
                bv, bs = _scaled_block_sum(t_log, t_phase)
                acc_v, acc_s = _scaled_add(acc_v, acc_s, bv, bs)
        mag = np.abs(acc_v)
        with np.errstate(divide="ignore"):
            log_out[row] = np.where(mag > 0, np.log(np.where(mag > 0, mag, 1.0)) + acc_s, -np.inf)
        phase_out[row] = np.angle(acc_v)
        row += 1
        start = end + 1
    return log_out, phase_out


def _noise_floor_logs(
    series: CoefficientSeries, sections: tuple[int, ...], z: np.ndarray
) -> np.ndarray:
    """ln of the evaluation noise floor per section and sample point.

    The floor is _NOISE_FACTOR * eps * sum_{n <= m} |a_n| |z|**n -- machine
    epsilon times the condition number of the section sum.  A computed value
    or Cauchy difference below this floor carries no information: whatever
    cancellation produced it happened beneath the rounding of the stored
    coefficients.
    """
    lm = series.log_magnitudes
    with np.errstate(divide="ignore"):
        log_abs_z = np.log(np.abs(z))
    acc_v = np.zeros(z.size)
    acc_s = np.full(z.size, -np.inf)
    out = np.empty((len(sections), z.size))
    row = 0
    start = 0
    for end in sections:
        for block_start in range(start, end + 1, _CHUNK):
            block_end = min(block_start + _CHUNK, end + 1)
            n = np.arange(block_start, block_end)
            nonzero = np.isfinite(lm[block_start:block_end])
            if nonzero.any():
                n_nz = n[nonzero]
                t_log = lm[n_nz, None] + np.multiply.outer(n_nz, log_abs_z)
                bv, bs = _scaled_block_sum(t_log, np.zeros_like(t_log))
                acc_v, acc_s = _scaled_add(acc_v, acc_s, bv.real, bs)
        with np.errstate(divide="ignore"):
            out[row] = np.where(
                acc_v > 0, np.log(np.where(acc_v > 0, acc_v, 1.0)) + acc_s, -np.inf
            )
        row += 1
        start = end + 1
    return out + math.log(_NOISE_FACTOR * _EPS)


def _effective_cauchy(cauchy: np.ndarray, noise_logs: np.ndarray) -> np.ndarray:
    """Zero out Cauchy differences indistinguishable from rounding noise.

    The floor for the pair (m_v, m_{v+1}) is the later section's, maximized
    over sample points.
    """
    with np.errstate(over="ignore"):
        pair_floor = np.exp(noise_logs[1:].max(axis=1))
    return np.where(cauchy <= pair_floor, 0.0, cauchy)


@dataclass(frozen=True)
class ProbeReport:
    section_indices: tuple[int, ...]
    points: np.ndarray
    log_magnitudes: np.ndarray
    phases: np.ndarray
    cauchy_table: np.ndarray
    verdict: str
    thresholds: dict[str, float]
    metadata: dict[str, Any] = field(default_factory=dict)


def _sections_from_certificate(cert: GapCertificate, length: int) -> tuple[int, ...]:
    sections = tuple(m for m in cert.m_seq if m < length)
    if len(sections) < 2:
        raise ValueError("certificate supplies fewer than two usable sections")
    return sections


def arc_convergence_probe(
    series: CoefficientSeries,
    cert: GapCertificate,
    arc: ArcSpec,
    convergence_threshold: float = DEFAULT_CONVERGENCE_THRESHOLD,
    growth_log_threshold: float = DEFAULT_GROWTH_LOG_THRESHOLD,
) -> ProbeReport:
    """Evidence for uniform convergence of s_{m_v} on a boundary arc.

    Converging iff the Cauchy differences bottom out at the final pair and the
    final difference is below ``convergence_threshold`` relative to the
    largest section magnitude seen on the arc.
    """
    sections = _sections_from_certificate(cert, series.length)
    ev = evaluate_sections(series, sections, arc.points())
    cauchy = ev.cauchy_differences()
    noise_logs = _noise_floor_logs(series, sections, ev.points)
    eff_cauchy = _effective_cauchy(cauchy, noise_logs)
    thresholds = {
        "convergence_threshold": convergence_threshold,
        "growth_log_threshold": growth_log_threshold,
    }
    # growth only counts where the computed value rises above its noise floor
    final = ev.log_magnitudes[-1]
    blow_up = (final > growth_log_threshold) & (final > noise_logs[-1])
    if blow_up.any():
        verdict = DIVERGENCE_EVIDENCE
    else:
        scale = math.exp(float(np.max(ev.log_magnitudes))) if np.isfinite(
            np.max(ev.log_magnitudes)
        ) else 1.0
        last = float(eff_cauchy[-1])
        # sup norms over finite samples jitter; the final pair only has to sit
        # near the bottom of the table, not at its exact minimum
        bottomed = last <= 1.5 * float(np.min(eff_cauchy))
        if bottomed and last < convergence_threshold * max(scale, 1e-300):
            verdict = CONVERGING
        else:
            verdict = INCONCLUSIVE
    return ProbeReport(
        sections,
        ev.points,
        ev.log_magnitudes,
        ev.phases,
        cauchy,
        verdict,
        thresholds,
        metadata={"noise_floor_logs": noise_logs, "effective_cauchy": eff_cauchy},
    )


def overconvergence_probe(
    series: CoefficientSeries,
    cert: GapCertificate,
    points: Sequence[complex],
    radius: float = 1.0,
    convergence_threshold: float = DEFAULT_CONVERGENCE_THRESHOLD,
    growth_log_threshold: float = DEFAULT_GROWTH_LOG_THRESHOLD,
) -> ProbeReport:
    """Evidence for convergence of s_{m_k} beyond the circle of convergence.

    The sample set must contain exterior points (|z| > radius); the verdict is
    driven by the Cauchy behaviour there.
    """
    if cert.series_class not in (
        gap_analysis.OSTROWSKI,
        gap_analysis.QUASI_OSTROWSKI,
        gap_analysis.HADAMARD,
        gap_analysis.QUASI_HADAMARD,
    ):
        raise ValueError("overconvergence probe needs an Ostrowski-type certificate")
    z = np.asarray(points, dtype=np.complex128).ravel()
    exterior = np.abs(z) > radius
    if not exterior.any():
        raise ValueError("no exterior samples in region (need |z| > radius)")
    sections = _sections_from_certificate(cert, series.length)
    ev = evaluate_sections(series, sections, z)
    ext_eval = SectionEvaluation(
        sections,
        z[exterior],
        ev.log_magnitudes[:, exterior],
        ev.phases[:, exterior],
        ev.mode,
        ev.values[:, exterior],
    )
    cauchy = ext_eval.cauchy_differences()
    noise_logs = _noise_floor_logs(series, sections, z[exterior])
    eff_cauchy = _effective_cauchy(cauchy, noise_logs)
    thresholds = {
        "convergence_threshold": convergence_threshold,
        "growth_log_threshold": growth_log_threshold,
        "radius": radius,
    }
    ext_logs = ev.log_magnitudes[:, exterior]
    blow_up = (ext_logs[-1] > growth_log_threshold) & (ext_logs[-1] > noise_logs[-1])

    # per exterior point, the last section whose value rises above its noise
    # floor; later sections only add rounding, so this is the limit estimate
    trusted = np.full(z[exterior].size, -1, dtype=np.int64)
    for v in range(len(sections)):
        above = ext_logs[v] > noise_logs[v]
        trusted = np.where(above, v, trusted)
    limit_estimates = np.array(
        [
            ext_eval.values[t, i] if t >= 0 else complex("nan")
            for i, t in enumerate(trusted)
        ]
    )

    if blow_up.any():
        verdict = DIVERGENCE_EVIDENCE
    else:
        resolvable = ext_logs[-1][ext_logs[-1] > noise_logs[-1]]
        final_log = float(np.max(resolvable)) if resolvable.size else -math.inf
        scale = math.exp(final_log) if math.isfinite(final_log) else 1.0
        last = float(eff_cauchy[-1])
        bottomed = last <= 1.5 * float(np.min(eff_cauchy))
        if bottomed and last < convergence_threshold * max(scale, 1e-300):
            verdict = OVERCONVERGING
        else:
            verdict = INCONCLUSIVE
    return ProbeReport(
        sections,
        ev.points,
        ev.log_magnitudes,
        ev.phases,
        cauchy,
        verdict,
        thresholds,
        metadata={
            "exterior_mask": exterior,
            "final_values": ev.values[-1],
            "noise_floor_logs": noise_logs,
            "effective_cauchy": eff_cauchy,
            "trusted_sections": trusted,
            "limit_estimates": limit_estimates,
        },
    )


def natural_boundary_scan(
    series: CoefficientSeries,
    cert: GapCertificate,
    radius_factor: float,
    angle_samples: int,
    radius: float = 1.0,
    growth_log_threshold: float = DEFAULT_GROWTH_LOG_THRESHOLD,
    force: bool = False,
    divergence_floor: float = gap_analysis.DEFAULT_DIVERGENCE_FLOOR,
    increment_floor: float = gap_analysis.DEFAULT_INCREMENT_FLOOR,
) -> ProbeReport:
    """Evidence that the circle of convergence is a natural boundary.

    Evaluates the sections just outside the circle in ``angle_samples``
    directions; divergence evidence requires blow-up in *every* direction.
    Also cross-checks the certificate's bounding family: per gap, the sum of
    |a_j| must stay below the gap sum of c_j / m_k**2, and those bounds must
    decrease with k.
    """
    if radius_factor < 1.0:
        raise ValueError("radius_factor must be >= 1")
    if angle_samples < 1:
        raise ValueError("angle_samples must be positive")
    if not force:
        verdict_cert = verify_certificate(
            series, cert, divergence_floor=divergence_floor, increment_floor=increment_floor
        )
        if not verdict_cert.accepted:
            failed = ", ".join(f.condition for f in verdict_cert.failed_conditions)
            raise CertificateRejectedError(f"certificate rejected ({failed})")
    angles = 2.0 * np.pi * np.arange(angle_samples) / angle_samples
    z = radius_factor * radius * np.exp(1j * angles)
    sections = _sections_from_certificate(cert, series.length)
    ev = evaluate_sections(series, sections, z)
    cauchy = ev.cauchy_differences()
    noise_logs = _noise_floor_logs(series, sections, z)
    final_log = ev.log_magnitudes[-1]
    blow_up = (final_log > growth_log_threshold) & (final_log > noise_logs[-1])
    all_blow_up = bool(np.all(blow_up))
    verdict = DIVERGENCE_EVIDENCE if all_blow_up else INCONCLUSIVE

    gap_check: dict[str, Any] = {}
    if cert.bounds is not None:
        mags = np.abs(series.array)
        actuals, bounds = [], []
        for opener, lo, hi in cert.gaps():
            js = range(lo + 1, min(hi, series.length))
            actuals.append(float(sum(mags[j] for j in js)))
            opener_sq = opener**2 if opener > 0 else math.inf
            bounds.append(
                float(sum(cert.bounds.value_at(j) for j in js)) / opener_sq
                if math.isfinite(opener_sq)
                else math.inf
            )
        within = all(a <= b + 1e-12 for a, b in zip(actuals, bounds))
        decreasing = all(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:]))
        gap_check = {
            "gap_sums": actuals,
            "gap_bounds": bounds,
            "within_bound": within,
            "bounds_decreasing": decreasing,
        }
    return ProbeReport(
        sections,
        z,
        ev.log_magnitudes,
        ev.phases,
        cauchy,
        verdict,
        {
            "growth_log_threshold": growth_log_threshold,
            "radius_factor": radius_factor,
            "radius": radius,
        },
        metadata={"directions_blowing_up": int(np.sum(blow_up)),
                  "noise_floor_logs": noise_logs,
                  "gap_check": gap_check},
    )


@dataclass(frozen=True)
class SectorDiagnostic:
    """Sampled version of the sector inequality relating arc and sector norms."""

    z1: complex
    z2: complex
    w1: complex
    w2: complex
    arc_min: float  # a = min over arc samples of |(z - w1)(z - w2)|
    section_indices: tuple[int, ...]
    arc_norms: tuple[float, ...]  # ||f_hat - s_n|| over arc samples
    sector_norms: tuple[float, ...]  # a**-1 * ||g_n|| over sector samples
    inequality_holds: tuple[bool, ...]
    excluded_samples: tuple[int, ...]  # per section: samples below the noise floor


def sector_diagnostic(
    series: CoefficientSeries,
    extension_evaluator: Callable[[complex], complex],
    z1: complex,
    z2: complex,
    arc: ArcSpec,
    sections: Sequence[int],
    radial_samples: int = 16,
    outer_arc_samples: int = 32,
    radial_floor: float = 0.05,
) -> SectorDiagnostic:
    """Compare ||f_hat - s_n|| on the arc with a**-1 ||g_n|| on the sector.

    The arc samples are included in the sector sample set (the arc lies in the
    sector interior), so the sampled inequality inherits the pointwise one.
    The sector boundary is sampled on both radial segments (down to
    ``radial_floor`` of the corner radius; the vertex itself is excluded to
    keep the z**-(n+1) factor finite) and on the outer arc.
    """
    z1, z2 = complex(z1), complex(z2)
    if z1 == z2:
        raise DegenerateSectorError("sector corners coincide (z1 = z2)")
    s = abs(z1)
    if abs(abs(z2) - s) > 1e-9 * s or s <= 1.0:
        raise ValueError("corners must satisfy |z1| = |z2| > 1")
    w1 = z1 / abs(z1)
    w2 = z2 / abs(z2)
    arc_points = arc.points()
    weights = np.abs((arc_points - w1) * (arc_points - w2))
    a = float(np.min(weights))
    if a < 1e-12:
        raise DegenerateSectorError("a = 0: the arc touches w1 or w2")

    t = np.linspace(radial_floor, 1.0, radial_samples)
    radial = np.concatenate([t * z1, t * z2])
    outer = s * np.exp(1j * _outer_arc_angles(z1, z2, arc, outer_arc_samples))
    all_points = np.concatenate([arc_points, radial, outer])

    sections = tuple(int(n) for n in sections)
    ev = evaluate_sections(series, sections, all_points)
    f_hat = np.array([extension_evaluator(complex(z)) for z in all_points])
    n_arc = arc_points.size
    noise_logs = _noise_floor_logs(series, sections, all_points)

    arc_norms: list[float] = []
    sector_norms: list[float] = []
    holds: list[bool] = []
    excluded: list[int] = []
    factor = (all_points - w1) * (all_points - w2)
    abs_factor = np.abs(factor)
    abs_z = np.abs(all_points)
    for i, n in enumerate(sections):
        diff = f_hat - ev.values[i]
        lhs = float(np.max(np.abs(diff[:n_arc])))
        g = np.abs(diff * factor / all_points ** (n + 1))
        # interior samples divide the difference by a tiny z**(n+1); once the
        # quotient sinks below the amplified rounding of s_n and f_hat it is
        # pure noise and must not enter the sup.  Arc samples always count.
        with np.errstate(over="ignore"):
            diff_noise = np.exp(noise_logs[i]) + _NOISE_FACTOR * _EPS * np.abs(f_hat)
            g_noise = diff_noise * abs_factor / abs_z ** (n + 1)
        resolvable = g > g_noise
        resolvable[:n_arc] = True
        rhs = float(np.max(g[resolvable])) / a
        arc_norms.append(lhs)
        sector_norms.append(rhs)
        holds.append(lhs <= rhs * (1.0 + 1e-12) + 1e-300)
        excluded.append(int(np.sum(~resolvable)))
    return SectorDiagnostic(
        z1, z2, w1, w2, a, sections,
        tuple(arc_norms), tuple(sector_norms), tuple(holds), tuple(excluded),
    )


def _outer_arc_angles(
    z1: complex, z2: complex, arc: ArcSpec, samples: int
) -> np.ndarray:
    """Angles of the outer sector arc, on the side containing the probe arc."""
    t1 = math.atan2(z1.imag, z1.real)
    t2 = math.atan2(z2.imag, z2.real)
    mid = 0.5 * (arc.angle_start + arc.angle_end)
    span_ccw = (t2 - t1) % (2.0 * math.pi)
    mid_off = (mid - t1) % (2.0 * math.pi)
    if span_ccw > 0 and mid_off <= span_ccw:
        return t1 + np.linspace(0.0, span_ccw, samples)
    span_cw = 2.0 * math.pi - span_ccw
    return t1 - np.linspace(0.0, span_cw, samples)
