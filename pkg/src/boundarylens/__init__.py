"""Boundary-singularity analysis of Taylor series from finite coefficient prefixes.

Lower-bounds pole counts on the circle of convergence from thresholded
coefficient counts, verifies gap-structure certificates, and gathers
numerical evidence for convergence, overconvergence, and natural boundaries.
"""

from .composition import (
    CertificateRejectedError,
    CompositionConfig,
    ContributionCheck,
    compose_bruteforce,
    contribution_bound_check,
    grouped_coefficient,
    grouped_coefficients,
)
from .gap_analysis import (
    BoundingFamily,
    CertificateVerdict,
    GapCertificate,
    GapScan,
    detect_gaps,
    hadamard_as_lacunary,
    hadamard_as_ostrowski,
    quasi_hadamard_as_quasi_ostrowski,
    verify_certificate,
)
from .generators import GeneratedSeries, GeneratorSpec, generate
from .pole_bound import PoleBoundConfig, PoleBoundReport, count_exceeding, count_nonzero
from .probes import (
    ArcSpec,
    ProbeReport,
    SectorDiagnostic,
    arc_convergence_probe,
    evaluate_sections,
    natural_boundary_scan,
    overconvergence_probe,
    sector_diagnostic,
)
from .rational import RationalFunction, expand, poles_on_circle
from .series import (
    CoefficientSeries,
    PrefixTooShortError,
    RadiusEstimate,
    radius_cauchy_hadamard,
    radius_windowed,
)

__all__ = [
    "ArcSpec",
    "BoundingFamily",
    "CertificateRejectedError",
    "CertificateVerdict",
    "CoefficientSeries",
    "CompositionConfig",
    "ContributionCheck",
    "GapCertificate",
    "GapScan",
    "GeneratedSeries",
    "GeneratorSpec",
    "PoleBoundConfig",
    "PoleBoundReport",
    "PrefixTooShortError",
    "ProbeReport",
    "RadiusEstimate",
    "RationalFunction",
    "SectorDiagnostic",
    "arc_convergence_probe",
    "compose_bruteforce",
    "contribution_bound_check",
    "count_exceeding",
    "count_nonzero",
    "detect_gaps",
    "evaluate_sections",
    "expand",
    "generate",
    "grouped_coefficient",
    "grouped_coefficients",
    "hadamard_as_lacunary",
    "hadamard_as_ostrowski",
    "natural_boundary_scan",
    "overconvergence_probe",
    "poles_on_circle",
    "quasi_hadamard_as_quasi_ostrowski",
    "radius_cauchy_hadamard",
    "radius_windowed",
    "sector_diagnostic",
    "verify_certificate",
]

__version__ = "0.1.0"
