import math

import numpy as np
import pytest

from boundarylens.composition import CertificateRejectedError
from boundarylens.gap_analysis import BoundingFamily, GapCertificate
from boundarylens.generators import GeneratorSpec, generate
from boundarylens.probes import (
    ArcSpec,
    CONVERGING,
    DIVERGENCE_EVIDENCE,
    DegenerateSectorError,
    INCONCLUSIVE,
    OVERCONVERGING,
    arc_convergence_probe,
    evaluate_sections,
    natural_boundary_scan,
    overconvergence_probe,
    sector_diagnostic,
)
from boundarylens.series import CoefficientSeries


def test_arc_spec_validation_and_sampling():
    with pytest.raises(ValueError):
        ArcSpec(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        ArcSpec(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        ArcSpec(1.0, 0.0, 1.0, sample_count=4)
    arc = ArcSpec(2.0, 0.5, 1.5, sample_count=16)
    pts = arc.points()
    assert np.allclose(np.abs(pts), 2.0)
    angles = np.angle(pts)
    assert angles.min() >= 0.5 - 1e-12 and angles.max() <= 1.5 + 1e-12
    uniform = ArcSpec(1.0, 0.0, 1.0, sample_count=9, spacing="uniform").angles()
    assert np.allclose(np.diff(uniform), 0.125)


def test_evaluate_sections_against_polyval():
    rng = np.random.default_rng(5)
    coeffs = rng.standard_normal(60) + 1j * rng.standard_normal(60)
    s = CoefficientSeries(coeffs)
    z = np.array([0.3 + 0.4j, -0.8j, 1.1, 0.9 * np.exp(1j)])
    ev = evaluate_sections(s, (10, 25, 59), z)
    assert ev.mode == "direct"
    for row, m in zip(ev.values, (10, 25, 59)):
        expected = np.polyval(coeffs[: m + 1][::-1], z)
        assert np.abs(row - expected).max() < 1e-10 * max(1.0, np.abs(expected).max())


def test_evaluate_sections_input_checks():
    s = CoefficientSeries([1.0] * 20)
    with pytest.raises(ValueError):
        evaluate_sections(s, (), [1.0])
    with pytest.raises(ValueError):
        evaluate_sections(s, (5, 5), [1.0])
    with pytest.raises(IndexError):
        evaluate_sections(s, (30,), [1.0])
    with pytest.raises(ValueError):
        evaluate_sections(s, (5,), [])


def test_log_domain_engages_and_matches_direct():
    # 2**n coefficients probed at |z| = 4 pile up ~n*2.08 nats and overflow
    coeffs = [2.0**n for n in range(40)] + [2.0**40] * 700
    s = CoefficientSeries(coeffs)
    ev = evaluate_sections(s, (700,), np.array([4.0 + 0j]))
    assert ev.mode == "log_domain"
    assert ev.log_magnitudes[0][0] > 700.0  # far beyond double range
    # the same point set forced into log mode must agree with the direct path
    s_small = CoefficientSeries(coeffs[:200])
    direct = evaluate_sections(s_small, (199,), np.array([2.0 + 0j]))
    assert direct.mode == "direct"
    log_mode = evaluate_sections(s_small, (199,), np.array([2.0 + 0j, 32.0 + 0j]))
    assert log_mode.mode == "log_domain"
    assert log_mode.log_magnitudes[0][0] == pytest.approx(
        direct.log_magnitudes[0][0], rel=1e-12
    )
    assert log_mode.phases[0][0] == pytest.approx(direct.phases[0][0], abs=1e-9)


def test_cauchy_differences_geometric_interior():
    s = CoefficientSeries([1.0] * 300)
    ev = evaluate_sections(s, (50, 100, 200), [0.5 + 0j])
    diffs = ev.cauchy_differences()
    # |s_100 - s_50| = sum_{51..100} 0.5**n
    expected = sum(0.5**n for n in range(51, 101))
    assert diffs[0] == pytest.approx(expected, rel=1e-10)
    assert diffs[1] < diffs[0]


def quasi_lacunary_log_series(length=4000):
    g = generate(GeneratorSpec(kind="power_log", length=length, exponent=1))
    return g.series, g.certificate


def test_arc_probe_converging_away_from_singularity():
    series, cert = quasi_lacunary_log_series()
    arc = ArcSpec(1.0, math.pi / 2, 3 * math.pi / 2, sample_count=32)
    report = arc_convergence_probe(series, cert, arc, convergence_threshold=1e-2)
    assert report.verdict == CONVERGING
    assert report.thresholds["convergence_threshold"] == 1e-2
    assert len(report.cauchy_table) == len(report.section_indices) - 1


def test_arc_probe_divergence_outside_circle():
    series, cert = quasi_lacunary_log_series(length=2000)
    arc = ArcSpec(1.3, 0.0, 2 * math.pi, sample_count=16)
    report = arc_convergence_probe(series, cert, arc)
    assert report.verdict == DIVERGENCE_EVIDENCE


def test_arc_probe_inconclusive_with_tight_threshold():
    series, cert = quasi_lacunary_log_series(length=500)
    arc = ArcSpec(1.0, math.pi / 2, 3 * math.pi / 2, sample_count=16)
    report = arc_convergence_probe(series, cert, arc, convergence_threshold=1e-12)
    assert report.verdict == INCONCLUSIVE


def composed_series(length=4096):
    g = generate(GeneratorSpec(kind="ostrowski_composed", length=length))
    return g


def test_overconvergence_at_exterior_point():
    g = composed_series()
    report = overconvergence_probe(g.series, g.certificate, [-1.2 + 0j])
    assert report.verdict == OVERCONVERGING
    limit = sum(0.12 ** (4**k) for k in range(6))
    estimate = report.metadata["limit_estimates"][0]
    assert abs(estimate - limit) < 1e-9


def test_overconvergence_divergence_point():
    g = composed_series()
    report = overconvergence_probe(g.series, g.certificate, [1.1 + 0j])
    assert report.verdict == DIVERGENCE_EVIDENCE


def test_overconvergence_needs_exterior_samples():
    g = composed_series(length=300)
    with pytest.raises(ValueError):
        overconvergence_probe(g.series, g.certificate, [0.5 + 0j])
    lac = GapCertificate(series_class="lacunary", m_seq=(1, 4, 9))
    with pytest.raises(ValueError):
        overconvergence_probe(g.series, lac, [1.2 + 0j])


def perturbed_hadamard(length=2**12, seed=3):
    base = GeneratorSpec(kind="hadamard_gap", base=2, length=length)
    spec = GeneratorSpec(
        kind="perturbed",
        length=length,
        base_spec=base,
        bounds=BoundingFamily(kind="power_law", exponent=2.0),
        amplitude=0.5,
        seed=seed,
    )
    return generate(spec)


def test_natural_boundary_scan_divergence_everywhere():
    g = perturbed_hadamard()
    report = natural_boundary_scan(g.series, g.certificate, 1.05, 16)
    assert report.verdict == DIVERGENCE_EVIDENCE
    assert report.metadata["directions_blowing_up"] == 16
    gap_check = report.metadata["gap_check"]
    assert gap_check["within_bound"]


def test_natural_boundary_scan_rejects_bad_certificate():
    g = generate(GeneratorSpec(kind="power_log", length=2**12, exponent=2))
    m_seq = tuple(2**v for v in range(12))
    cert = GapCertificate(
        series_class="quasi_hadamard", m_seq=m_seq, delta=0.9,
        bounds=BoundingFamily(kind="power_law", exponent=2.0),
    )
    with pytest.raises(CertificateRejectedError):
        natural_boundary_scan(g.series, cert, 1.05, 8)
    # --force runs it anyway; slowly convergent sections give no blow-up
    report = natural_boundary_scan(g.series, cert, 1.0, 8, force=True)
    assert report.verdict == INCONCLUSIVE


def test_natural_boundary_scan_argument_checks():
    g = perturbed_hadamard()
    with pytest.raises(ValueError):
        natural_boundary_scan(g.series, g.certificate, 0.9, 8)
    with pytest.raises(ValueError):
        natural_boundary_scan(g.series, g.certificate, 1.05, 0)


def test_sector_diagnostic_geometric():
    series = CoefficientSeries([1.0] * 201)
    arc = ArcSpec(1.0, math.pi / 2, 3 * math.pi / 2, sample_count=32)
    z1 = 1.5 * np.exp(1j * math.pi / 3)
    z2 = 1.5 * np.exp(-1j * math.pi / 3)
    diag = sector_diagnostic(
        series, lambda z: 1.0 / (1.0 - z), z1, z2, arc, sections=range(10, 101, 10)
    )
    assert all(diag.inequality_holds)
    assert abs(diag.w1 - np.exp(1j * math.pi / 3)) < 1e-12
    # for the geometric series both norms are constant in n
    assert max(diag.arc_norms) - min(diag.arc_norms) < 1e-9
    assert max(diag.sector_norms) - min(diag.sector_norms) < 1e-9 * max(diag.sector_norms)


def test_sector_diagnostic_degenerate_inputs():
    series = CoefficientSeries([1.0] * 50)
    arc = ArcSpec(1.0, 0.5, 1.0, sample_count=16)
    z1 = 1.5 * np.exp(1j * 0.75)
    with pytest.raises(DegenerateSectorError):
        sector_diagnostic(series, lambda z: 0j, z1, z1, arc, sections=[10])
    with pytest.raises(ValueError):
        # corners must lie outside the unit circle
        sector_diagnostic(
            series, lambda z: 0j, 0.5 + 0j, 0.5j, arc, sections=[10]
        )
    # arc running through an intersection point collapses the arc constant
    touching_arc = ArcSpec(1.0, 0.5, 1.0, sample_count=17, spacing="uniform")
    with pytest.raises(DegenerateSectorError):
        sector_diagnostic(
            series,
            lambda z: 0j,
            1.5 * np.exp(1j * 0.75),  # w1 sits exactly on an arc sample
            1.5 * np.exp(1j * 2.0),
            touching_arc,
            sections=[10],
        )
