"""CLI behavior: exit codes, output shapes, and disk-backed re-verification."""

import json

import pytest

from zerocap.certificates import (
    HaemersCertificate,
    identity_certificate,
    verify_certificate,
)
from zerocap.classical import FittingMatrix, verify_fitting
from zerocap.cli import main
from zerocap.graphs import Graph, cycle_graph
from zerocap.ncgraph import NcGraph, diagonal_system, scalar_identity_system


@pytest.fixture
def c5_file(tmp_path):
    path = tmp_path / "c5.dimacs"
    path.write_text(cycle_graph(5).to_text())
    return str(path)


@pytest.fixture
def ci2_file(tmp_path):
    path = tmp_path / "ci2.json"
    path.write_text(json.dumps(scalar_identity_system(2).to_json_dict()))
    return str(path)


def _write_span(tmp_path, name, span):
    path = tmp_path / name
    path.write_text(json.dumps(span.to_json_dict()))
    return str(path)


def _write_cert(tmp_path, name, cert):
    path = tmp_path / name
    path.write_text(json.dumps(cert.to_json_dict()))
    return str(path)


def test_graph_alpha(c5_file, capsys):
    assert main(["graph", "alpha", c5_file]) == 0
    assert "alpha = 2" in capsys.readouterr().out


def test_graph_alpha_json(c5_file, capsys):
    assert main(["graph", "alpha", c5_file, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["alpha"] == 2
    assert len(data["witness"]) == 2


def test_graph_theta(c5_file, capsys):
    assert main(["graph", "theta", c5_file, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert abs(data["theta"] - 5**0.5) < 1e-4


def test_graph_power_round_trips(c5_file, capsys):
    assert main(["graph", "power", c5_file, "-k", "2"]) == 0
    out = capsys.readouterr().out
    h = Graph.from_text(out)
    assert h.n == 25 and len(h.edges) == 100


def test_graph_report_re_verifies_from_disk(c5_file, tmp_path, capsys):
    cert_dir = tmp_path / "certs"
    assert main(["graph", "report", c5_file, "--cert-dir", str(cert_dir), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["consistency"] == "pass"
    rows = {name: (value, prov) for name, value, prov in data["rows"]}
    assert rows["alpha"] == (2, "exact")
    assert rows["haemers-lower"][0] == 3
    assert rows["haemers-upper"][0] == 3
    assert rows["xi-upper"][0] == 3
    # the certificate file stands on its own
    path = rows["haemers-upper"][1].split("certificate:", 1)[1]
    fm = FittingMatrix.from_json_dict(json.loads(open(path).read()))
    assert verify_fitting(fm) == 3


def test_nc_build_from_graph(c5_file, tmp_path, capsys):
    out = tmp_path / "span.json"
    assert main(["nc", "build", "--from-graph", c5_file, "-o", str(out)]) == 0
    span = NcGraph.from_json_dict(json.loads(out.read_text()))
    assert span.n == 5 and span.dim == 15


def test_nc_build_from_basis_to_stdout(ci2_file, capsys):
    assert main(["nc", "build", "--from-basis", ci2_file]) == 0
    span = NcGraph.from_json_dict(json.loads(capsys.readouterr().out))
    assert span.equals(scalar_identity_system(2))


def test_nc_haemers_scalar_span(ci2_file, tmp_path, capsys):
    cert_out = tmp_path / "cert.json"
    assert main(["nc", "haemers", ci2_file, "--cert-out", str(cert_out)]) == 0
    out = capsys.readouterr().out
    assert "H >= 2" in out and "H <= 2" in out
    cert = HaemersCertificate.from_json_dict(json.loads(cert_out.read_text()))
    assert verify_certificate(scalar_identity_system(2), cert) == 2


def test_nc_haemers_json_and_seed_stability(ci2_file, tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["nc", "haemers", ci2_file, "--cert-out", str(a), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["lower"]["value"] == 2
    assert payload["upper"]["rank"] == 2
    assert payload["upper"]["provenance"] == f"certificate:{a}"
    assert main(["nc", "haemers", ci2_file, "--cert-out", str(b), "--json"]) == 0
    assert a.read_text() == b.read_text()


def test_nc_verify_cert_ok(ci2_file, tmp_path, capsys):
    cert_path = _write_cert(tmp_path, "id2.json", identity_certificate(2))
    assert main(["nc", "verify-cert", ci2_file, cert_path]) == 0
    assert "rank 2, OK" in capsys.readouterr().out


def test_nc_verify_cert_failure_exits_1(tmp_path, capsys):
    span_path = _write_span(tmp_path, "d3.json", diagonal_system(3))
    cert_path = _write_cert(tmp_path, "id2.json", identity_certificate(2))
    assert main(["nc", "verify-cert", span_path, cert_path]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "verification"
    assert err["kind"] == "shape"


def test_transform_dsum_and_tensor(tmp_path, capsys):
    d2 = _write_span(tmp_path, "d2.json", diagonal_system(2))
    d3 = _write_span(tmp_path, "d3.json", diagonal_system(3))
    c2 = _write_cert(tmp_path, "c2.json", identity_certificate(2))
    c3 = _write_cert(tmp_path, "c3.json", identity_certificate(3))
    out = tmp_path / "sum.json"
    sys_out = tmp_path / "d5.json"
    code = main(["nc", "transform", "dsum", d2, c2, d3, c3,
                 "-o", str(out), "--system-out", str(sys_out)])
    assert code == 0
    assert main(["nc", "verify-cert", str(sys_out), str(out)]) == 0
    assert "rank 5, OK" in capsys.readouterr().out

    out2 = tmp_path / "prod.json"
    sys_out2 = tmp_path / "d6.json"
    code = main(["nc", "transform", "tensor", d2, c2, d3, c3,
                 "-o", str(out2), "--system-out", str(sys_out2)])
    assert code == 0
    assert main(["nc", "verify-cert", str(sys_out2), str(out2)]) == 0
    assert "rank 6, OK" in capsys.readouterr().out


def test_transform_lift_project_round_trip(c5_file, tmp_path, capsys):
    cert_dir = tmp_path / "certs"
    assert main(["graph", "report", c5_file, "--cert-dir", str(cert_dir)]) == 0
    fitting = cert_dir / "c5-fitting.json"
    span_path = tmp_path / "sc5.json"
    assert main(["nc", "build", "--from-graph", c5_file, "-o", str(span_path)]) == 0
    lifted = tmp_path / "lifted.json"
    code = main(["nc", "transform", "lift", str(fitting), "--normalize",
                 "-o", str(lifted)])
    assert code == 0
    assert main(["nc", "verify-cert", str(span_path), str(lifted)]) == 0
    back = tmp_path / "back.json"
    assert main(["nc", "transform", "project", str(span_path), str(lifted),
                 "-o", str(back)]) == 0
    fm = FittingMatrix.from_json_dict(json.loads(back.read_text()))
    assert verify_fitting(fm) == 3


def test_transform_tpmap_round_trip(tmp_path, capsys):
    d3 = _write_span(tmp_path, "d3.json", diagonal_system(3))
    c3 = _write_cert(tmp_path, "c3.json", identity_certificate(3))
    tp = tmp_path / "tp.json"
    assert main(["nc", "transform", "tpmap", d3, c3, "-o", str(tp)]) == 0
    back = tmp_path / "back.json"
    assert main(["nc", "transform", "tpmap", d3, str(tp), "--reverse",
                 "-o", str(back)]) == 0
    assert json.loads(back.read_text()) == json.loads(open(c3).read())


def test_usage_error_exits_2(c5_file):
    with pytest.raises(SystemExit) as exc:
        main(["graph", "alpha", c5_file, "--bogus"])
    assert exc.value.code == 2


def test_missing_file_exits_2(capsys):
    assert main(["graph", "alpha", "no-such-file.dimacs"]) == 2
    assert "error:" in capsys.readouterr().err


def test_config_file(c5_file, tmp_path, capsys):
    cfg = tmp_path / "caps.cfg"
    cfg.write_text("# caps\nsdp-tol = 1e-5\ngraph-n-cap = 32\n")
    assert main(["graph", "theta", c5_file, "--config", str(cfg)]) == 0
    assert "tol 1e-05" in capsys.readouterr().out


def test_config_unknown_key_exits_2(c5_file, tmp_path, capsys):
    cfg = tmp_path / "caps.cfg"
    cfg.write_text("not-a-cap = 1\n")
    assert main(["graph", "alpha", c5_file, "--config", str(cfg)]) == 2


def test_selftest_single_check(capsys):
    assert main(["selftest", "paper", "--only", "pentagon-sandwich"]) == 0
    out = capsys.readouterr().out
    assert "PASS pentagon-sandwich" in out
    assert "1/1 checks passed" in out
