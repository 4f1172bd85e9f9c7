"""Canonical test corpus: rational expansions, gap series, composed Ostrowski
series, and quasi-perturbations of each, with attached ground truth.

Every generated series carries whatever ground truth its construction
guarantees: declared poles for rationals, a matching gap certificate for the
gap constructions, a closed-form evaluator handle where one exists.
Generation is deterministic; randomized gap fills are seeded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable

import numpy as np

from . import gap_analysis
from .gap_analysis import BoundingFamily, GapCertificate
from .rational import RationalFunction, expand
from .series import CoefficientSeries

KINDS = ("rational", "hadamard_gap", "power_log", "ostrowski_composed", "perturbed")


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one corpus entry; serializes to/from a JSON dict."""

    kind: str
    length: int
    # rational
    numerator: tuple[complex, ...] | None = None
    denominator: tuple[complex, ...] | None = None
    declared_poles: tuple[tuple[complex, int], ...] | None = None
    # hadamard_gap: sum of z**(base**v)
    base: int = 2
    # power_log: sum of z**n / n**exponent
    exponent: int = 1
    # ostrowski_composed: sum of q(w)**(block_base**k), q = (c/2)(w + w**2)
    block_base: int = 4
    boundary_point: complex = 1.0 + 0.0j
    # perturbed
    base_spec: "GeneratorSpec | None" = None
    bounds: BoundingFamily | None = None
    amplitude: float = 0.5
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.length < 1:
            raise ValueError("length must be positive")
        if self.kind == "hadamard_gap" and self.base <= 1:
            raise ValueError("gap base must exceed 1")
        if self.kind == "ostrowski_composed" and self.block_base <= 1:
            raise ValueError("block base must exceed 1")
        if self.kind == "power_log" and self.exponent < 1:
            raise ValueError("exponent must be >= 1")
        if self.kind == "perturbed":
            if self.base_spec is None or self.bounds is None:
                raise ValueError("perturbed specs need base_spec and bounds")
            if not 0.0 <= self.amplitude <= 1.0:
                raise ValueError("amplitude must lie in [0, 1]")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind, "length": self.length}
        if self.kind == "rational":
            d["numerator"] = [[c.real, c.imag] for c in self.numerator]
            d["denominator"] = [[c.real, c.imag] for c in self.denominator]
            if self.declared_poles is not None:
                d["declared_poles"] = [
                    [[z.real, z.imag], m] for z, m in self.declared_poles
                ]
        elif self.kind == "hadamard_gap":
            d["base"] = self.base
        elif self.kind == "power_log":
            d["exponent"] = self.exponent
        elif self.kind == "ostrowski_composed":
            d["block_base"] = self.block_base
            c = complex(self.boundary_point)
            d["boundary_point"] = [c.real, c.imag]
        else:
            d["base_spec"] = self.base_spec.to_dict()
            d["bounds"] = self.bounds.to_dict()
            d["amplitude"] = self.amplitude
            if self.seed is not None:
                d["seed"] = self.seed
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GeneratorSpec":
        kind = d["kind"]
        kwargs: dict[str, Any] = {"kind": kind, "length": int(d["length"])}
        if kind == "rational":
            kwargs["numerator"] = tuple(complex(re, im) for re, im in d["numerator"])
            kwargs["denominator"] = tuple(complex(re, im) for re, im in d["denominator"])
            if d.get("declared_poles") is not None:
                kwargs["declared_poles"] = tuple(
                    (complex(z[0], z[1]), int(m)) for z, m in d["declared_poles"]
                )
        elif kind == "hadamard_gap":
            kwargs["base"] = int(d.get("base", 2))
        elif kind == "power_log":
            kwargs["exponent"] = int(d.get("exponent", 1))
        elif kind == "ostrowski_composed":
            kwargs["block_base"] = int(d.get("block_base", 4))
            bp = d.get("boundary_point", [1.0, 0.0])
            kwargs["boundary_point"] = complex(bp[0], bp[1])
        elif kind == "perturbed":
            kwargs["base_spec"] = cls.from_dict(d["base_spec"])
            kwargs["bounds"] = BoundingFamily.from_dict(d["bounds"])
            kwargs["amplitude"] = float(d.get("amplitude", 0.5))
            if d.get("seed") is not None:
                kwargs["seed"] = int(d["seed"])
        return cls(**kwargs)


@dataclass(frozen=True)
class GeneratedSeries:
    """A corpus entry: the series plus its construction-time ground truth."""

    series: CoefficientSeries
    radius: float | None
    poles: tuple[tuple[complex, int], ...] | None
    certificate: GapCertificate | None
    evaluator: Callable[[complex], complex] | None
    metadata: dict[str, Any] = field(default_factory=dict)


def generate(spec: GeneratorSpec) -> GeneratedSeries:
    if spec.kind == "rational":
        return _generate_rational(spec)
    if spec.kind == "hadamard_gap":
        return _generate_hadamard_gap(spec)
    if spec.kind == "power_log":
        return _generate_power_log(spec)
    if spec.kind == "ostrowski_composed":
        return _generate_ostrowski_composed(spec)
    return _generate_perturbed(spec)


def _generate_rational(spec: GeneratorSpec) -> GeneratedSeries:
    rf = RationalFunction(spec.numerator, spec.denominator, spec.declared_poles)
    result = expand(rf, spec.length)
    radius = None
    if rf.declared_poles is not None:
        radius = min(abs(z) for z, _ in rf.declared_poles)
    return GeneratedSeries(
        series=CoefficientSeries(result.series.coefficients, label=f"rational:{spec.length}"),
        radius=radius,
        poles=rf.declared_poles,
        certificate=None,
        evaluator=_rational_evaluator(rf),
        metadata={"unstable": result.unstable},
    )


def _rational_evaluator(rf: RationalFunction) -> Callable[[complex], complex]:
    num = rf.numerator
    den = rf.denominator

    def evaluate(z: complex) -> complex:
        p = sum(c * z**i for i, c in enumerate(num))
        q = sum(c * z**i for i, c in enumerate(den))
        return p / q

    return evaluate


def _generate_hadamard_gap(spec: GeneratorSpec) -> GeneratedSeries:
    b = spec.base
    coeffs = np.zeros(spec.length, dtype=np.complex128)
    m_seq = []
    m = 1
    while m < spec.length:
        coeffs[m] = 1.0
        m_seq.append(m)
        m *= b
    if len(m_seq) < 2:
        raise ValueError("length too small for even two surviving terms")
    # m_{v+1} - m_v = (b-1) m_v, so any delta < b-1 works; keep 0.1 slack
    cert = GapCertificate(
        series_class=gap_analysis.HADAMARD,
        m_seq=tuple(m_seq),
        delta=b - 1 - 0.1,
    )
    return GeneratedSeries(
        series=CoefficientSeries(coeffs, label=f"hadamard_gap:b={b}"),
        radius=1.0,
        poles=None,
        certificate=cert,
        evaluator=None,
        metadata={"gap_base": b},
    )


def _generate_power_log(spec: GeneratorSpec) -> GeneratedSeries:
    n = np.arange(spec.length)
    coeffs = np.zeros(spec.length, dtype=np.complex128)
    coeffs[1:] = 1.0 / n[1:] ** spec.exponent
    evaluator = None
    if spec.exponent == 1:
        def evaluator(z: complex) -> complex:  # noqa: F811 - closed form -log(1-z)
            return -np.log(1.0 - complex(z))
    m_seq = []
    v = 0
    while v * v < spec.length:
        m_seq.append(v * v)
        v += 1
    cert = None
    if spec.exponent == 1 and len(m_seq) >= 2:
        # gaps between v**2 and (v+1)**2 hold coefficients 1/j <= c_j = 1/j
        cert = GapCertificate(
            series_class=gap_analysis.QUASI_LACUNARY,
            m_seq=tuple(m_seq),
            bounds=BoundingFamily(kind="power_law", scale=1.0, exponent=1.0),
            summability_p=2.0,
        )
    return GeneratedSeries(
        series=CoefficientSeries(coeffs, label=f"power_log:e={spec.exponent}"),
        radius=1.0,
        poles=None,
        certificate=cert,
        evaluator=evaluator,
        metadata={"exponent": spec.exponent},
    )


def _block_coefficients(m: int, c: complex) -> np.ndarray:
    """Coefficients of q(w)**m = (c/2)**m (w + w**2)**m, indices m..2m.

    Exactly-rounded magnitudes C(m, l)/2**m whenever the binomial fits a
    double's exponent range; the massive cancellation these blocks undergo at
    exterior points makes the extra digits over an lgamma route load-bearing.
    """
    out = np.empty(m + 1, dtype=np.complex128)
    phase = np.angle(complex(c)) * m
    rot = complex(math.cos(phase), math.sin(phase))
    for l in range(m + 1):
        binom = math.comb(m, l)
        if binom < 2**1020:
            mag = math.ldexp(float(binom), -m)
        else:
            log_mag = (
                math.lgamma(m + 1)
                - math.lgamma(l + 1)
                - math.lgamma(m - l + 1)
                - m * math.log(2.0)
            )
            mag = math.exp(log_mag) if log_mag > -745 else 0.0
        out[l] = mag * rot
    return out


def _generate_ostrowski_composed(spec: GeneratorSpec) -> GeneratedSeries:
    base = spec.block_base
    c = complex(spec.boundary_point)
    if abs(abs(c) - 1.0) > 1e-12:
        raise ValueError("boundary point must have modulus 1")
    coeffs = np.zeros(spec.length, dtype=np.complex128)
    m_seq: list[int] = []
    n_seq: list[int] = []
    k = 0
    while True:
        block = base**k
        if 2 * block >= spec.length:
            break
        # q(w)**block occupies w-powers block..2*block
        coeffs[block : 2 * block + 1] += _block_coefficients(block, c)
        m_seq.append(2 * block)
        n_seq.append(base ** (k + 1))
        k += 1
    if len(m_seq) < 2:
        raise ValueError("length too small for two blocks")
    if n_seq[-1] >= spec.length:
        m_seq.pop()
        n_seq.pop()
    cert = GapCertificate(
        series_class=gap_analysis.OSTROWSKI,
        m_seq=tuple(m_seq),
        n_seq=tuple(n_seq),
        delta=0.9,
    )

    def q_of(w: complex) -> complex:
        return (c / 2.0) * (w + w * w)

    def evaluator(w: complex) -> complex:
        q = q_of(w)
        if abs(q) >= 1.0:
            raise ValueError("evaluator only defined for |q(w)| < 1")
        total = 0.0 + 0.0j
        k = 0
        while True:
            term = q ** (base**k)
            total += term
            if abs(term) < 1e-18:
                return total
            k += 1

    return GeneratedSeries(
        series=CoefficientSeries(coeffs, label=f"ostrowski_composed:base={base}"),
        radius=1.0,
        poles=None,
        certificate=cert,
        evaluator=evaluator,
        metadata={"q": q_of, "block_base": base, "boundary_point": c},
    )


def _generate_perturbed(spec: GeneratorSpec) -> GeneratedSeries:
    parent = generate(spec.base_spec)
    if parent.certificate is None:
        raise ValueError("base spec carries no certificate to perturb")
    cert = parent.certificate
    coeffs = np.array(parent.series.array, dtype=np.complex128)
    rng = np.random.default_rng(spec.seed) if spec.seed is not None else None
    quad = cert.series_class in (
        gap_analysis.HADAMARD,
        gap_analysis.OSTROWSKI,
        gap_analysis.QUASI_HADAMARD,
        gap_analysis.QUASI_OSTROWSKI,
    )
    for opener, lo, hi in cert.gaps():
        for j in range(lo + 1, min(hi, len(coeffs))):
            mag = spec.amplitude * spec.bounds.value_at(j)
            if quad and opener > 0:
                mag /= opener**2
            phase = rng.uniform(0.0, 2.0 * math.pi) if rng is not None else 0.0
            coeffs[j] = mag * complex(math.cos(phase), math.sin(phase))
    new_class = {
        gap_analysis.HADAMARD: gap_analysis.QUASI_HADAMARD,
        gap_analysis.OSTROWSKI: gap_analysis.QUASI_OSTROWSKI,
        gap_analysis.LACUNARY: gap_analysis.QUASI_LACUNARY,
    }.get(cert.series_class, cert.series_class)
    new_cert = GapCertificate(
        series_class=new_class,
        m_seq=cert.m_seq,
        n_seq=cert.n_seq,
        delta=cert.delta,
        bounds=spec.bounds,
        summability_p=cert.summability_p
        if new_class != gap_analysis.QUASI_LACUNARY
        else (cert.summability_p or 2.0),
    )
    meta = dict(parent.metadata)
    meta.update({"base_label": parent.series.label, "amplitude": spec.amplitude})
    return GeneratedSeries(
        series=CoefficientSeries(coeffs, label=f"perturbed:{parent.series.label}"),
        radius=parent.radius,
        poles=parent.poles,
        certificate=new_cert,
        evaluator=None,
        metadata=meta,
    )
