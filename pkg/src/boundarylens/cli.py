"""Command-line front end: coefficient ingestion, subcommand dispatch, and
JSON report persistence.

Subcommands: ``analyze`` (radius / pole-bound / certificate sections),
``generate`` (corpus series plus a sibling ``.truth.json``), ``probe``
(arc / exterior / boundary-scan evidence), and ``certify`` (standalone
certificate verification).  Exit codes: 0 success, 2 precondition or config
failure, 3 I/O or parse failure.

Coefficient files are JSON ``{"label": ..., "coefficients": [[re, im], ...]}``
or CSV rows ``index,re,im`` with a header and dense indices from 0.  JSON is
canonical; CSV is converted on read.  Reports are reproducible: identical
inputs produce byte-identical reports modulo the timestamp field.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import hashlib
import json
import math
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import gap_analysis, generators, pole_bound, probes, series as series_mod
from .composition import CertificateRejectedError
from .gap_analysis import BoundingFamily, GapCertificate, verify_certificate
from .series import CoefficientSeries

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_IO = 3

SCHEMA_VERSION = "1"


class CliError(Exception):
    def __init__(self, message: str, exit_code: int) -> None:
        super().__init__(message)
        self.exit_code = exit_code


# -- coefficient file I/O -----------------------------------------------------


def read_coefficient_file(path: str | Path) -> tuple[CoefficientSeries, str]:
    """Parse a coefficient file, returning the series and its content digest."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from exc
    digest = hashlib.sha256(raw).hexdigest()
    if path.suffix.lower() == ".csv":
        coeffs = _parse_csv(raw, path)
        label = path.stem
    else:
        coeffs, label = _parse_json(raw, path)
    if not coeffs:
        raise CliError(f"{path}: no coefficients", EXIT_IO)
    return CoefficientSeries(coeffs, label=label), digest


def _parse_json(raw: bytes, path: Path) -> tuple[list[complex], str]:
    try:
        doc = json.loads(raw)
        rows = doc["coefficients"]
        coeffs = [complex(float(re), float(im)) for re, im in rows]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: malformed coefficient JSON ({exc})", EXIT_IO) from exc
    return coeffs, str(doc.get("label", path.stem))


def _parse_csv(raw: bytes, path: Path) -> list[complex]:
    try:
        rows = list(csv.reader(raw.decode("utf-8").splitlines()))
    except UnicodeDecodeError as exc:
        raise CliError(f"{path}: not valid UTF-8", EXIT_IO) from exc
    if not rows:
        raise CliError(f"{path}: empty CSV", EXIT_IO)
    coeffs: list[complex] = []
    try:
        for expected, row in enumerate(rows[1:]):  # rows[0] is the header
            idx, re, im = row
            if int(idx) != expected:
                raise CliError(
                    f"{path}: indices must be dense from 0 (saw {idx} at row {expected})",
                    EXIT_IO,
                )
            coeffs.append(complex(float(re), float(im)))
    except (ValueError, TypeError) as exc:
        raise CliError(f"{path}: malformed CSV row ({exc})", EXIT_IO) from exc
    return coeffs


def write_coefficient_file(path: str | Path, s: CoefficientSeries) -> None:
    doc = {
        "label": s.label,
        "coefficients": [[c.real, c.imag] for c in s.coefficients],
    }
    Path(path).write_text(json.dumps(doc) + "\n")


def read_certificate_file(path: str | Path) -> GapCertificate:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot parse certificate {path}: {exc}", EXIT_IO) from exc
    try:
        return GapCertificate.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"invalid certificate {path}: {exc}", EXIT_PRECONDITION) from exc


# -- report plumbing ----------------------------------------------------------


def _new_report(digest: str, command: str) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input_digest": digest,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "caveats": [],
        "sections": {},
    }


def _finite(x: float) -> float | str:
    # JSON has no inf/nan literals; stringify them
    return x if math.isfinite(x) else str(x)


def _write_report(report: dict[str, Any], output: str | None) -> None:
    text = json.dumps(report, indent=2, default=_json_default) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _json_default(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def _verdict_section(v: gap_analysis.CertificateVerdict) -> dict[str, Any]:
    return {
        "accepted": v.accepted,
        "prefix_caveat": v.prefix_caveat,
        "failed_conditions": [
            {
                "condition": f.condition,
                "index": f.index,
                "measured": _finite(f.measured),
                "required": _finite(f.required),
            }
            for f in v.failed_conditions
        ],
        "metadata": {
            k: val for k, val in v.metadata.items() if not callable(val)
        },
    }


def _probe_section(r: probes.ProbeReport) -> dict[str, Any]:
    meta = {}
    for k, val in r.metadata.items():
        if k == "gap_check":
            meta[k] = {
                kk: [_finite(x) for x in vv] if isinstance(vv, list) else vv
                for kk, vv in val.items()
            }
        elif k == "exterior_mask":
            meta[k] = [bool(b) for b in val]
        elif k == "final_values":
            meta[k] = [[z.real, z.imag] for z in val]
        else:
            meta[k] = val
    return {
        "section_indices": list(r.section_indices),
        "points": [[z.real, z.imag] for z in r.points],
        "log_magnitudes": [[_finite(float(x)) for x in row] for row in r.log_magnitudes],
        "cauchy_table": [_finite(float(x)) for x in r.cauchy_table],
        "verdict": r.verdict,
        "thresholds": {k: _finite(v) for k, v in r.thresholds.items()},
        "metadata": meta,
    }


# -- subcommands --------------------------------------------------------------


def _cmd_analyze(args: argparse.Namespace) -> int:
    s, digest = read_coefficient_file(args.input)
    report = _new_report(digest, "analyze")
    caveats: list[str] = report["caveats"]

    if args.radius or args.polebound:
        try:
            if args.window is not None:
                est = series_mod.radius_windowed(
                    s, args.window, tail_fraction=args.tail_fraction
                )
            else:
                est = series_mod.radius_cauchy_hadamard(
                    s, tail_fraction=args.tail_fraction
                )
        except (ValueError, series_mod.PrefixTooShortError) as exc:
            raise CliError(str(exc), EXIT_PRECONDITION) from exc
        report["sections"]["radius"] = {
            "value": _finite(est.value),
            "method": est.method,
            "window": est.window,
            "tail_fraction": est.tail_fraction,
        }
        caveats.append("radius: tail-maximum surrogate for the limsup")

    if args.polebound:
        if args.rho is not None:
            rho = args.rho
        else:
            rho = est.value  # auto-wired from the radius section above
        if args.eps is None:
            raise CliError("--polebound needs --eps", EXIT_PRECONDITION)
        rho1 = args.rho1 if args.rho1 is not None else math.inf
        try:
            cfg = pole_bound.PoleBoundConfig(
                rho=rho, rho1=rho1, epsilon=args.eps, tail_fraction=args.tail_fraction
            )
            pb = pole_bound.count_exceeding(s, cfg)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_PRECONDITION) from exc
        report["sections"]["pole_bound"] = {
            "bound": pb.bound,
            "status": pb.status,
            "threshold_mode": pb.threshold_mode,
            "config": {
                "rho": _finite(rho),
                "rho1": _finite(rho1),
                "epsilon": args.eps,
                "tail_fraction": args.tail_fraction,
            },
            "v_counts_tail": list(pb.v_counts[-10:]),
            "disclaimer": pb.disclaimer,
        }
        caveats.append("pole_bound: decomposition hypothesis taken on trust")

    if args.certificate:
        cert = read_certificate_file(args.certificate)
        try:
            verdict = verify_certificate(s, cert)
        except IndexError as exc:
            raise CliError(str(exc), EXIT_PRECONDITION) from exc
        report["sections"]["certificate"] = {
            "certificate": cert.to_dict(),
            **_verdict_section(verdict),
        }
        if verdict.prefix_caveat:
            caveats.append("certificate: asymptotic conditions checked on prefix only")

    _write_report(report, args.output)
    return EXIT_OK


_COMPLEX_LIST = "comma-separated complex values, each re or re+imj"


def _parse_complex(text: str) -> complex:
    text = text.strip()
    if "," in text:
        re, im = text.split(",", 1)
        return complex(float(re), float(im))
    return complex(text.replace(" ", ""))


def _parse_complex_list(text: str) -> tuple[complex, ...]:
    return tuple(complex(part.replace(" ", "")) for part in text.split(","))


def _cmd_generate(args: argparse.Namespace) -> int:
    try:
        if args.spec:
            try:
                doc = json.loads(Path(args.spec).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise CliError(f"cannot parse spec {args.spec}: {exc}", EXIT_IO) from exc
            spec = generators.GeneratorSpec.from_dict(doc)
        else:
            spec = _spec_from_flags(args)
        result = generators.generate(spec)
    except (ValueError, TypeError, KeyError) as exc:
        if isinstance(exc, CliError):
            raise
        raise CliError(f"invalid generator spec: {exc}", EXIT_PRECONDITION) from exc

    out = Path(args.output)
    write_coefficient_file(out, result.series)
    truth: dict[str, Any] = {
        "spec": spec.to_dict(),
        "radius": _finite(result.radius) if result.radius is not None else None,
        "poles": [[[z.real, z.imag], m] for z, m in result.poles]
        if result.poles
        else None,
        "certificate": result.certificate.to_dict() if result.certificate else None,
        "metadata": {k: v for k, v in result.metadata.items() if not callable(v)},
    }
    out.with_suffix(out.suffix + ".truth.json").write_text(
        json.dumps(truth, indent=2, default=_json_default) + "\n"
    )
    return EXIT_OK


def _spec_from_flags(args: argparse.Namespace) -> generators.GeneratorSpec:
    if args.kind is None:
        raise CliError("generate needs --kind or --spec", EXIT_PRECONDITION)
    kwargs: dict[str, Any] = {"kind": args.kind, "length": args.length}
    if args.kind == "rational":
        if args.den is None:
            raise CliError("rational generation needs --den", EXIT_PRECONDITION)
        kwargs["denominator"] = _parse_complex_list(args.den)
        kwargs["numerator"] = (
            _parse_complex_list(args.num) if args.num else (1.0 + 0.0j,)
        )
    elif args.kind == "hadamard_gap":
        kwargs["base"] = args.base
    elif args.kind == "power_log":
        kwargs["exponent"] = args.exponent
    elif args.kind == "ostrowski_composed":
        kwargs["block_base"] = args.block_base
        if args.boundary_point:
            kwargs["boundary_point"] = _parse_complex(args.boundary_point)
    elif args.kind == "perturbed":
        if args.base_spec is None:
            raise CliError("perturbed generation needs --base-spec", EXIT_PRECONDITION)
        try:
            doc = json.loads(Path(args.base_spec).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(
                f"cannot parse base spec {args.base_spec}: {exc}", EXIT_IO
            ) from exc
        base_spec = generators.GeneratorSpec.from_dict(doc)
        kwargs["base_spec"] = base_spec
        kwargs["length"] = args.length or base_spec.length
        kwargs["bounds"] = BoundingFamily(kind="power_law", exponent=args.alpha)
        kwargs["amplitude"] = args.amplitude
        kwargs["seed"] = args.seed
    return generators.GeneratorSpec(**kwargs)


def _cmd_probe(args: argparse.Namespace) -> int:
    s, digest = read_coefficient_file(args.input)
    cert = read_certificate_file(args.certificate)
    modes = [m for m in ("arc", "exterior", "scan") if getattr(args, m)]
    if len(modes) != 1:
        raise CliError(
            "exactly one of --arc / --exterior / --scan is required", EXIT_PRECONDITION
        )
    mode = modes[0]

    if mode != "scan" and not args.force:
        verdict = verify_certificate(s, cert)
        if not verdict.accepted:
            failed = ", ".join(f.condition for f in verdict.failed_conditions)
            raise CliError(
                f"certificate rejected ({failed}); pass --force to probe anyway",
                EXIT_PRECONDITION,
            )

    report = _new_report(digest, "probe")
    try:
        if mode == "arc":
            radius, start, end = args.arc
            arc = probes.ArcSpec(radius, start, end, sample_count=args.samples)
            pr = probes.arc_convergence_probe(
                s, cert, arc, convergence_threshold=args.convergence_threshold
            )
        elif mode == "exterior":
            if not args.point:
                raise CliError("--exterior needs at least one --point", EXIT_PRECONDITION)
            pts = [_parse_complex(p) for p in args.point]
            pr = probes.overconvergence_probe(
                s,
                cert,
                pts,
                radius=1.0,
                convergence_threshold=args.convergence_threshold,
            )
        else:
            factor, angles = args.scan
            pr = probes.natural_boundary_scan(
                s,
                cert,
                radius_factor=factor,
                angle_samples=int(angles),
                force=args.force,
            )
    except CertificateRejectedError as exc:
        raise CliError(f"{exc}; pass --force to probe anyway", EXIT_PRECONDITION) from exc
    except (ValueError, IndexError) as exc:
        if isinstance(exc, CliError):
            raise
        raise CliError(str(exc), EXIT_PRECONDITION) from exc

    report["sections"]["probe"] = _probe_section(pr)
    report["caveats"].append("probe: numerical evidence on a finite prefix, not proof")
    _write_report(report, args.output)
    return EXIT_OK


def _cmd_certify(args: argparse.Namespace) -> int:
    s, digest = read_coefficient_file(args.input)
    cert = read_certificate_file(args.certificate)
    try:
        verdict = verify_certificate(s, cert)
    except IndexError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION) from exc
    report = _new_report(digest, "certify")
    report["sections"]["certificate"] = {
        "certificate": cert.to_dict(),
        **_verdict_section(verdict),
    }
    if verdict.prefix_caveat:
        report["caveats"].append(
            "certificate: asymptotic conditions checked on prefix only"
        )
    _write_report(report, args.output)
    return EXIT_OK if verdict.accepted else EXIT_PRECONDITION


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boundarylens",
        description="Boundary-singularity analysis of Taylor coefficient prefixes.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    pa = sub.add_parser("analyze", help="radius, pole-bound, and certificate analysis")
    pa.add_argument("input")
    pa.add_argument("--radius", action="store_true", help="estimate the radius")
    pa.add_argument("--window", type=int, default=None, help="windowed estimator width q")
    pa.add_argument("--tail-fraction", type=float, default=series_mod.DEFAULT_TAIL_FRACTION)
    pa.add_argument("--polebound", action="store_true", help="relaxed pole-count bound")
    pa.add_argument("--rho", type=float, default=None)
    pa.add_argument("--rho1", type=float, default=None)
    pa.add_argument("--eps", type=float, default=None)
    pa.add_argument("--certificate", default=None, help="gap certificate JSON to verify")
    pa.add_argument("--output", "-o", default=None)
    pa.set_defaults(func=_cmd_analyze)

    pg = sub.add_parser("generate", help="emit a corpus series plus ground truth")
    pg.add_argument("--spec", default=None, help="generator spec JSON file")
    pg.add_argument("--kind", choices=generators.KINDS, default=None)
    pg.add_argument("--length", type=int, default=256)
    pg.add_argument("--num", default=None, help=f"numerator: {_COMPLEX_LIST}")
    pg.add_argument("--den", default=None, help=f"denominator: {_COMPLEX_LIST}")
    pg.add_argument("--base", type=int, default=2, help="gap base b (terms z**(b**v))")
    pg.add_argument("--exponent", type=int, default=1, help="power_log exponent")
    pg.add_argument("--block-base", type=int, default=4)
    pg.add_argument("--boundary-point", default=None, help="composition point c, |c| = 1")
    pg.add_argument("--base-spec", default=None, help="spec JSON of the series to perturb")
    pg.add_argument("--alpha", type=float, default=2.0, help="bounding exponent: c_j = j**-alpha")
    pg.add_argument("--amplitude", type=float, default=0.5)
    pg.add_argument("--seed", type=int, default=None)
    pg.add_argument("--output", "-o", required=True)
    pg.set_defaults(func=_cmd_generate)

    pp = sub.add_parser("probe", help="convergence / overconvergence / boundary probes")
    pp.add_argument("input")
    pp.add_argument("certificate")
    pp.add_argument(
        "--arc", nargs=3, type=float, metavar=("RADIUS", "START", "END"), default=None
    )
    pp.add_argument("--samples", type=int, default=64, help="arc sample count")
    pp.add_argument("--exterior", type=float, default=None, help="exterior radius factor")
    pp.add_argument("--point", action="append", default=None, help="sample point re,im")
    pp.add_argument(
        "--scan", nargs=2, type=float, metavar=("FACTOR", "ANGLES"), default=None
    )
    pp.add_argument(
        "--convergence-threshold",
        type=float,
        default=probes.DEFAULT_CONVERGENCE_THRESHOLD,
    )
    pp.add_argument("--force", action="store_true", help="probe despite a rejected certificate")
    pp.add_argument("--output", "-o", default=None)
    pp.set_defaults(func=_cmd_probe)

    pc = sub.add_parser("certify", help="verify a gap certificate")
    pc.add_argument("input")
    pc.add_argument("certificate")
    pc.add_argument("--output", "-o", default=None)
    pc.set_defaults(func=_cmd_certify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
