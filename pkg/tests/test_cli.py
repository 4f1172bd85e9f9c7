import json
import math

import numpy as np
import pytest

from boundarylens.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_PRECONDITION,
    main,
    read_coefficient_file,
)
from boundarylens.gap_analysis import BoundingFamily, GapCertificate
from boundarylens.generators import GeneratorSpec, generate


def write_series(path, coefficients, label="test"):
    doc = {"label": label, "coefficients": [[c.real, c.imag] for c in map(complex, coefficients)]}
    path.write_text(json.dumps(doc))


def test_json_ingestion(tmp_path):
    p = tmp_path / "s.json"
    write_series(p, [1.0, 2.0 + 1.0j, 0.0])
    series, digest = read_coefficient_file(p)
    assert series.coefficients == (1.0, 2.0 + 1.0j, 0.0)
    assert series.label == "test"
    assert len(digest) == 64


def test_csv_ingestion(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("index,re,im\n0,1.0,0.0\n1,0.5,-0.5\n")
    series, _ = read_coefficient_file(p)
    assert series.coefficients == (1.0, 0.5 - 0.5j)


def test_csv_dense_index_enforced(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("index,re,im\n0,1.0,0.0\n2,0.5,0.0\n")
    assert main(["analyze", str(p)]) == EXIT_IO


def test_malformed_input_exit_codes(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert main(["analyze", str(empty)]) == EXIT_IO
    assert main(["analyze", str(tmp_path / "missing.json")]) == EXIT_IO


def test_analyze_radius_and_polebound(tmp_path):
    fib = tmp_path / "fib.json"
    spec = GeneratorSpec(
        kind="rational", length=200, numerator=(1.0,), denominator=(1.0, -1.0, -1.0)
    )
    write_series(fib, generate(spec).series.coefficients, label="fibonacci")
    out = tmp_path / "report.json"
    code = main(["analyze", str(fib), "--radius", "--window", "2", "-o", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["schema_version"] == "1"
    assert report["sections"]["radius"]["value"] == pytest.approx(0.618, abs=2e-3)
    assert report["sections"]["radius"]["method"] == "windowed_max"

    cyc = tmp_path / "cyc3.json"
    spec3 = GeneratorSpec(
        kind="rational", length=600, numerator=(1.0,),
        denominator=(1.0, 0.0, 0.0, -1.0),
    )
    write_series(cyc, generate(spec3).series.coefficients)
    code = main([
        "analyze", str(cyc), "--polebound", "--rho", "1", "--eps", "0.05",
        "-o", str(out),
    ])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    pb = report["sections"]["pole_bound"]
    assert pb["bound"] == 3
    assert pb["config"]["epsilon"] == 0.05
    assert "disclaimer" in pb


def test_analyze_config_contradiction_exits_2(tmp_path):
    p = tmp_path / "s.json"
    write_series(p, [1.0] * 50)
    # 1/rho1 = 1 >= 1/rho - 2 eps
    code = main([
        "analyze", str(p), "--polebound", "--rho", "1", "--rho1", "1.0001",
        "--eps", "0.45",
    ])
    assert code == EXIT_PRECONDITION


def test_generate_writes_truth_sidecar(tmp_path):
    out = tmp_path / "hg.json"
    code = main(["generate", "--kind", "hadamard_gap", "--base", "2",
                 "--length", "64", "-o", str(out)])
    assert code == EXIT_OK
    series, _ = read_coefficient_file(out)
    assert [k for k, c in enumerate(series.coefficients) if c != 0] == [1, 2, 4, 8, 16, 32]
    truth = json.loads((tmp_path / "hg.json.truth.json").read_text())
    assert truth["radius"] == 1.0
    assert truth["certificate"]["class"] == "hadamard"


def test_generate_invalid_spec_exits_2(tmp_path):
    assert main(["generate", "--kind", "hadamard_gap", "--base", "1",
                 "-o", str(tmp_path / "x.json")]) == EXIT_PRECONDITION
    assert main(["generate", "-o", str(tmp_path / "x.json")]) == EXIT_PRECONDITION


def test_generate_perturbed_from_base_spec(tmp_path):
    base_spec = tmp_path / "hg.spec.json"
    base_spec.write_text(json.dumps(
        GeneratorSpec(kind="hadamard_gap", base=2, length=512).to_dict()
    ))
    out = tmp_path / "hgq.json"
    code = main(["generate", "--kind", "perturbed", "--base-spec", str(base_spec),
                 "--alpha", "2", "--amplitude", "0.5", "--seed", "4",
                 "-o", str(out)])
    assert code == EXIT_OK
    truth = json.loads((tmp_path / "hgq.json.truth.json").read_text())
    assert truth["certificate"]["class"] == "quasi_hadamard"


def certificate_fixture(tmp_path, length=2**12, seed=3):
    base = GeneratorSpec(kind="hadamard_gap", base=2, length=length)
    g = generate(GeneratorSpec(
        kind="perturbed", length=length, base_spec=base,
        bounds=BoundingFamily(kind="power_law", exponent=2.0),
        amplitude=0.5, seed=seed,
    ))
    series_path = tmp_path / "series.json"
    write_series(series_path, g.series.coefficients)
    cert_path = tmp_path / "cert.json"
    cert_path.write_text(json.dumps(g.certificate.to_dict()))
    return series_path, cert_path


def test_certify_accept_and_reject(tmp_path):
    series_path, cert_path = certificate_fixture(tmp_path)
    out = tmp_path / "rep.json"
    assert main(["certify", str(series_path), str(cert_path), "-o", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["sections"]["certificate"]["accepted"] is True

    # stomp a gap coefficient: certification must fail with exit 2
    doc = json.loads(series_path.read_text())
    doc["coefficients"][3] = [1.0, 0.0]
    series_path.write_text(json.dumps(doc))
    assert main(["certify", str(series_path), str(cert_path), "-o", str(out)]) == EXIT_PRECONDITION
    report = json.loads(out.read_text())
    assert report["sections"]["certificate"]["accepted"] is False
    assert report["sections"]["certificate"]["failed_conditions"]


def test_probe_scan_and_force(tmp_path):
    series_path, cert_path = certificate_fixture(tmp_path)
    out = tmp_path / "rep.json"
    code = main(["probe", str(series_path), str(cert_path),
                 "--scan", "1.05", "16", "-o", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    probe = report["sections"]["probe"]
    assert probe["verdict"] == "divergence_evidence"
    assert probe["thresholds"]["radius_factor"] == 1.05

    # break the certificate: probe refuses without --force
    doc = json.loads(series_path.read_text())
    doc["coefficients"][3] = [1.0, 0.0]
    series_path.write_text(json.dumps(doc))
    assert main(["probe", str(series_path), str(cert_path),
                 "--scan", "1.05", "16"]) == EXIT_PRECONDITION
    assert main(["probe", str(series_path), str(cert_path),
                 "--scan", "1.05", "16", "--force", "-o", str(out)]) == EXIT_OK


def test_probe_arc(tmp_path):
    g = generate(GeneratorSpec(kind="power_log", length=4000, exponent=1))
    series_path = tmp_path / "log.json"
    write_series(series_path, g.series.coefficients)
    cert_path = tmp_path / "log.cert.json"
    cert_path.write_text(json.dumps(g.certificate.to_dict()))
    out = tmp_path / "rep.json"
    code = main(["probe", str(series_path), str(cert_path),
                 "--arc", "1.0", str(math.pi / 2), str(3 * math.pi / 2),
                 "--convergence-threshold", "1e-2", "-o", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["sections"]["probe"]["verdict"] == "converging"


def test_probe_exterior(tmp_path):
    g = generate(GeneratorSpec(kind="ostrowski_composed", length=4096))
    series_path = tmp_path / "ostro.json"
    write_series(series_path, g.series.coefficients)
    cert_path = tmp_path / "ostro.cert.json"
    cert_path.write_text(json.dumps(g.certificate.to_dict()))
    out = tmp_path / "rep.json"
    code = main(["probe", str(series_path), str(cert_path),
                 "--exterior", "1.2", "--point=-1.2,0", "-o", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["sections"]["probe"]["verdict"] == "overconverging"


def test_probe_requires_exactly_one_mode(tmp_path):
    series_path, cert_path = certificate_fixture(tmp_path, length=256)
    assert main(["probe", str(series_path), str(cert_path)]) == EXIT_PRECONDITION


def test_reports_reproducible_modulo_timestamp(tmp_path):
    p = tmp_path / "s.json"
    write_series(p, [1.0 / (n + 1.0) for n in range(64)])
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["analyze", str(p), "--radius", "-o", str(out)]) == EXIT_OK
        doc = json.loads(out.read_text())
        doc.pop("timestamp")
        outs.append(json.dumps(doc, sort_keys=True))
    assert outs[0] == outs[1]