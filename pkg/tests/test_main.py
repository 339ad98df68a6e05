"""Command-line tests: outputs and exit codes."""
import csv
import io
import json

import numpy as np
import pytest

from src.main import EntanglementApplication, main
from src.utils.text_utils import matrix_to_pairs


def run_cli(argv, capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    return excinfo.value.code, capsys.readouterr().out


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestBasisCommands:
    def test_validate_builtin(self, capsys):
        code, out = run_cli(["basis", "validate", "--name", "construction1-d2"], capsys)
        report = json.loads(out)
        assert code == 0
        assert report["passed"]
        assert report["orthogonality_residual"] <= 1e-12

    def test_validate_invalid_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 2, "label": "bad",
                                    "operators": [matrix_to_pairs(np.eye(2) / 4)] * 4}))
        code, out = run_cli(["basis", "validate", "--file", str(path)], capsys)
        report = json.loads(out)
        assert code == 1
        assert not report["passed"]
        assert [1, 2, 0.125] in report["failing_pairs"]

    def test_show_builtin(self, capsys):
        code, out = run_cli(["basis", "show", "--name", "construction2-d3"], capsys)
        assert code == 0
        assert len(json.loads(out)["operators"]) == 9

    def test_generate_then_validate(self, tmp_path, capsys):
        path = str(tmp_path / "d4.json")
        code, _ = run_cli(["basis", "generate", "--dim", "4", "--seed", "2", "--out", path], capsys)
        assert code == 0
        code, out = run_cli(["basis", "validate", "--file", path], capsys)
        assert code == 0
        assert json.loads(out)["label"] == "generated-d4-s2"


class TestVerdict:
    def test_noisy_ghz3(self, capsys):
        code, out = run_cli(["verdict", "--state", "ghz3", "--x", "0.1", "--criterion", "cor1"], capsys)
        report = json.loads(out)
        assert code == 0
        assert report["verdict"] == "entanglement_detected"
        assert report["x"] == 0.1

        code, out = run_cli(["verdict", "--state", "ghz3", "--x", "0.3", "--criterion", "cor1"], capsys)
        assert json.loads(out)["verdict"] == "inconclusive"

    def test_partition_criterion(self, capsys):
        argv = ["verdict", "--state", "ghz4", "--x", "0.5", "--criterion", "thm4ii", "--partition", "12|34"]
        code, out = run_cli(argv, capsys)
        report = json.loads(out)
        assert code == 0
        assert report["partition"] == "12|34"
        assert report["verdict"] == "entanglement_detected"

    def test_config_file_and_flag_precedence(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"state": "ghz3", "criterion": "cor1", "x": 0.3}))
        code, out = run_cli(["verdict", "--config", str(config)], capsys)
        assert code == 0
        assert json.loads(out)["verdict"] == "inconclusive"

        code, out = run_cli(["verdict", "--config", str(config), "--x", "0.1"], capsys)
        assert json.loads(out)["verdict"] == "entanglement_detected"

    @pytest.mark.parametrize("argv", [
        ["verdict", "--state", "no_such_state"],
        ["verdict", "--state", "ghz3", "--x", "1.5"],
        ["verdict", "--state", "ghz4", "--criterion", "thm4ii", "--partition", "12|3"],
        ["verdict", "--state", "ghz3", "--coeffs", "1,0,1"],
        ["verdict", "--state", "ghz3", "--basis", "construction2-d3"],
    ])
    def test_input_errors_exit_2(self, argv, capsys):
        code, _ = run_cli(argv, capsys)
        assert code == 2


class TestScan:
    def test_csv_table_is_byte_stable(self, capsys):
        argv = ["scan", "--state", "ghz3", "--criterion", "cor1", "--grid", "0:1:0.05", "--competitors", "g1"]
        code, first = run_cli(argv, capsys)
        _, second = run_cli(argv, capsys)
        assert code == 0
        assert first == second
        rows = csv_rows(first)
        assert len(rows) == 21
        assert list(rows[0]) == ["x", "statistic", "bound", "margin", "g1"]
        assert rows[0]["x"] == "0"

    def test_json_summary(self, tmp_path, capsys):
        summary = tmp_path / "summary.json"
        argv = ["scan", "--state", "ghz4", "--criterion", "thm4i", "--format", "json",
                "--summary", str(summary)]
        code, out = run_cli(argv, capsys)
        data = json.loads(out)
        assert code == 0
        assert data["threshold"] == pytest.approx(10 / 22, abs=1e-5)
        assert json.loads(summary.read_text())["threshold_found"]

    def test_tolerance_below_floor(self, capsys):
        code, _ = run_cli(["scan", "--state", "ghz3", "--criterion", "cor1", "--tol", "1e-12"], capsys)
        assert code == 2


class TestReproduce:
    def test_example1_passes(self, capsys):
        code, out = run_cli(["reproduce", "1"], capsys)
        rows = csv_rows(out)
        assert code == 0
        assert [r["status"] for r in rows] == ["PASS"]
        assert float(rows[0]["computed_threshold"]) == pytest.approx(0.1919, abs=5e-4)

    @pytest.mark.parametrize("example,count", [(3, 2), (4, 1)])
    def test_n_partite_examples_pass(self, example, count, capsys):
        code, out = run_cli(["reproduce", str(example)], capsys)
        rows = csv_rows(out)
        assert code == 0
        assert len(rows) == count
        assert all(r["status"] == "PASS" for r in rows)

    def test_example2_reports_deviations(self, capsys):
        code, out = run_cli(["reproduce", "2", "--format", "json"], capsys)
        rows = json.loads(out)["rows"]
        assert code == 0
        assert rows[0]["status"] != "FAIL"
        assert rows[1]["status"] == "DEVIATES"
        assert rows[1]["computed_threshold"] is None
        assert rows[1]["note"]


class TestTensorAndVerify:
    def test_tensor_dump(self, capsys):
        code, out = run_cli(["tensor", "--state", "ghz3"], capsys)
        rows = csv_rows(out)
        assert code == 0
        assert len(rows) == 64
        assert list(rows[0]) == ["alpha1", "alpha2", "alpha3", "mu"]
        assert sum(float(r["mu"]) for r in rows) == pytest.approx(1.0, abs=1e-9)

    def test_tensor_to_file(self, tmp_path, capsys):
        path = tmp_path / "tensor.csv"
        code, out = run_cli(["tensor", "--state", "example2_phi", "--out", str(path)], capsys)
        assert code == 0
        assert out == ""
        assert len(csv_rows(path.read_text())) == 81 * 4

    def test_verify_product_states(self, capsys):
        argv = ["verify", "--family", "product_pure", "--dims", "2,2,2", "--criterion", "thm1",
                "--partition", "1|23", "--count", "20", "--seed", "4"]
        code, out = run_cli(argv, capsys)
        report = json.loads(out)
        assert code == 0
        assert report["sound"]
        assert report["seed"] == 4

    def test_verify_needs_family(self, capsys):
        code, _ = run_cli(["verify", "--dims", "2,2,2"], capsys)
        assert code == 2


def test_run_returns_exit_code(capsys):
    app = EntanglementApplication(["basis", "validate", "--name", "construction2-d2"])
    assert app.run() == 0
    assert json.loads(capsys.readouterr().out)["passed"]
