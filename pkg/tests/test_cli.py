import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from picklab import cli

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out.strip()
    return code, (json.loads(out) if out else None)


class TestExitCodes:
    def test_feasible_is_zero(self, capsys):
        code, doc = run_cli(["check", str(FIXTURES / "disk_fov_feasible.json")],
                            capsys)
        assert code == 0
        assert doc["verdict"] == "feasible"
        assert doc["min_eigenvalue"] == pytest.approx(0.0, abs=1e-12)

    def test_infeasible_is_one(self, capsys):
        code, doc = run_cli(["check", str(FIXTURES / "disk_fov_infeasible.json")],
                            capsys)
        assert code == 1
        assert doc["verdict"] == "infeasible"

    def test_unknown_setting_is_usage(self, tmp_path, capsys):
        p = tmp_path / "req.json"
        p.write_text(json.dumps({"schema_version": "1", "setting": "disk.nope",
                                 "payload": {}}))
        code, doc = run_cli(["check", str(p)], capsys)
        assert code == 64
        assert doc["error"]["code"] == "usage"

    def test_malformed_json_is_data_error(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        code, doc = run_cli(["check", str(p)], capsys)
        assert code == 65
        assert doc["error"]["code"] == "data"
        assert "message" in doc["error"] and "path" in doc["error"]

    def test_invalid_payload_is_data_error(self, tmp_path, capsys):
        p = tmp_path / "req.json"
        p.write_text(json.dumps({"schema_version": "1", "setting": "disk.fov",
                                 "payload": {"points": [[0.0, 0.0]]}}))
        code, doc = run_cli(["check", str(p)], capsys)
        assert code == 65

    def test_domain_error_is_data_error(self, tmp_path, capsys):
        p = tmp_path / "req.json"
        p.write_text(json.dumps({
            "schema_version": "1", "setting": "disk.fov",
            "payload": {"points": [[2.0, 0.0]], "values": [[[[0.0, 0.0]]]]}}))
        code, doc = run_cli(["check", str(p)], capsys)
        assert code == 65

    def test_budget_exhaustion_is_unknown(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("PICKLAB_BUDGET", "2")
        code, doc = run_cli(["check", str(FIXTURES / "ball_nc_ltoa_scalar.json")],
                            capsys)
        assert code == 2
        assert doc["verdict"] == "unknown"
        assert doc["error"]["code"] == "budget"

    def test_agler_exit_codes(self, capsys):
        code, doc = run_cli(["agler", str(FIXTURES / "agler_bidisk_feasible.json")],
                            capsys)
        assert code == 0
        assert doc["verdict"] == "feasible_with_certificate"
        code, doc = run_cli(
            ["agler", str(FIXTURES / "agler_forced_infeasible.json")], capsys)
        assert code == 1
        assert doc["verdict"] == "infeasible_evidence"
        assert doc["gap_estimate"] >= 1e-3

    def test_polydisk_under_check_is_usage(self, capsys):
        code, doc = run_cli(["check", str(FIXTURES / "agler_bidisk_feasible.json")],
                            capsys)
        assert code == 64

    def test_bad_flag_is_usage(self, capsys):
        code = cli.main(["check", "--no-such-flag", "x.json"])
        capsys.readouterr()
        assert code == 64


class TestDeterminism:
    def test_check_reports_byte_identical_modulo_timings(self, capsys):
        docs = []
        for _ in range(2):
            code, doc = run_cli(
                ["check", str(FIXTURES / "quiver_qltoa_two_vertex.json"),
                 "--seed", "7"], capsys)
            assert code == 0
            doc.pop("timings_ms")
            docs.append(json.dumps(doc, sort_keys=True))
        assert docs[0] == docs[1]

    def test_sample_deterministic(self, capsys):
        outs = []
        for _ in range(2):
            code, doc = run_cli(["sample", "--kind", "disk.poly", "--degree",
                                 "3", "--seed", "11", "--rows", "2",
                                 "--cols", "2"], capsys)
            assert code == 0
            outs.append(json.dumps(doc, sort_keys=True))
        assert outs[0] == outs[1]

    def test_necessity_deterministic(self, capsys):
        outs = []
        for _ in range(2):
            code, doc = run_cli(["necessity", "disk.fov", "--trials", "3",
                                 "--seed", "5"], capsys)
            assert code == 0
            doc.pop("timings_ms")
            outs.append(json.dumps(doc, sort_keys=True))
        assert outs[0] == outs[1]


class TestSchemas:
    def test_all_fixture_requests_validate(self):
        for name in ["disk_fov_feasible.json", "disk_fov_infeasible.json",
                     "agler_bidisk_feasible.json", "agler_forced_infeasible.json",
                     "quiver_qltoa_two_vertex.json", "ball_nc_ltoa_scalar.json"]:
            doc = json.loads((FIXTURES / name).read_text())
            cli.validate_document(doc, "request.schema.json")

    def test_map_fixture_validates(self):
        doc = json.loads((FIXTURES / "map_transpose.json").read_text())
        cli.validate_document(doc, "map.schema.json")

    def test_emitted_reports_validate(self, capsys):
        for name, cmd in [("disk_fov_feasible.json", "check"),
                          ("disk_fov_infeasible.json", "check"),
                          ("quiver_qltoa_two_vertex.json", "check"),
                          ("agler_forced_infeasible.json", "agler")]:
            _, doc = run_cli([cmd, str(FIXTURES / name)], capsys)
            cli.validate_document(doc, "report.schema.json")

    def test_sample_round_trip(self, capsys, tmp_path):
        out = tmp_path / "sample.json"
        code, doc = run_cli(["sample", "--kind", "ball.poly", "--degree", "2",
                             "--seed", "3", "--letters", "2", "--rows", "2",
                             "--cols", "2", "--out", str(out)], capsys)
        assert code == 0
        cli.validate_document(doc, "sample.schema.json")
        from picklab import serialize
        sample = serialize.sample_from_json(json.loads(out.read_text()))
        doc2 = serialize.sample_to_json(sample)
        assert json.dumps(doc2, sort_keys=True) == json.dumps(doc, sort_keys=True)

    def test_report_pick_matrix_hermitian(self, capsys):
        code, doc = run_cli(["check", str(FIXTURES / "disk_fov_feasible.json"),
                             "--emit-pick"], capsys)
        assert code == 0
        from picklab import matcore, serialize
        M = serialize.matrix_from_json(doc["pick_matrix"])
        assert (matcore.hermitize(M) == M).all()


class TestLiteralUnweightedFlag:
    def test_flag_switches_da_sum(self, tmp_path, capsys):
        req = {
            "schema_version": "1",
            "setting": "ball.da_ltoa",
            "payload": {
                "operator_points": [[[[[0.3, 0.0]]], [[[0.4, 0.0]]]]],
                "directions": [[[[1.0, 0.0]]]],
                "targets": [[[[0.0, 0.0]]]],
            },
        }
        p = tmp_path / "req.json"
        p.write_text(json.dumps(req))
        _, weighted = run_cli(["check", str(p), "--emit-pick"], capsys)
        _, literal = run_cli(["check", str(p), "--emit-pick",
                              "--literal-unweighted"], capsys)
        w = weighted["pick_matrix"][0][0][0]
        l = literal["pick_matrix"][0][0][0]
        # word sum gives 1/(1 - 0.09 - 0.16); literal gives the product kernel
        assert w == pytest.approx(1 / (1 - 0.25), abs=1e-9)
        assert l == pytest.approx(1 / ((1 - 0.09) * (1 - 0.16)), abs=1e-9)


class TestChoiCommands:
    def test_choi_of_transpose(self, capsys):
        code, doc = run_cli(["choi", str(FIXTURES / "map_transpose.json")],
                            capsys)
        assert code == 0
        assert doc["min_eigenvalue"] == pytest.approx(-1.0, abs=1e-12)

    def test_cpcheck_rejects_transpose(self, capsys):
        code, doc = run_cli(["cpcheck", str(FIXTURES / "map_transpose.json"),
                             "--seed", "1"], capsys)
        assert code == 1
        assert not doc["is_cp"]
        assert "witness" in doc

    def test_cpcheck_accepts_identity(self, tmp_path, capsys):
        ident = {"schema_version": "1", "in_dim": 2, "out_dim": 2,
                 "unit_images": [[[[[1.0, 0.0], [0.0, 0.0]],
                                   [[0.0, 0.0], [0.0, 0.0]]],
                                  [[[0.0, 0.0], [1.0, 0.0]],
                                   [[0.0, 0.0], [0.0, 0.0]]]],
                                 [[[[0.0, 0.0], [0.0, 0.0]],
                                   [[1.0, 0.0], [0.0, 0.0]]],
                                  [[[0.0, 0.0], [0.0, 0.0]],
                                   [[0.0, 0.0], [1.0, 0.0]]]]]}
        p = tmp_path / "ident.json"
        p.write_text(json.dumps(ident))
        code, doc = run_cli(["cpcheck", str(p)], capsys)
        assert code == 0
        assert doc["is_cp"]


class TestAglerCertificateEmission:
    def test_certificate_file_written_and_verifies(self, tmp_path, capsys):
        cert_path = tmp_path / "cert.json"
        code, doc = run_cli(
            ["agler", str(FIXTURES / "agler_bidisk_feasible.json"),
             "--emit-certificate", str(cert_path)], capsys)
        assert code == 0
        cert = json.loads(cert_path.read_text())
        from picklab import agler, serialize
        kernels = [serialize.matrix_from_json(K) for K in cert["kernels"]]
        prob = agler.scalar_problem([[0.0, 0.0], [0.5, 0.0]], [0.0, 0.5])
        res, eigs = agler.verify_certificate(prob, kernels)
        assert res <= 2e-6
        assert min(eigs) >= -2e-6


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "picklab.cli", "check",
         str(FIXTURES / "disk_fov_feasible.json")],
        capture_output=True, text=True,
        env={**os.environ, "PYTHONPATH": str(Path(__file__).parents[1] / "src")})
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["verdict"] == "feasible"
    assert proc.stderr == ""
