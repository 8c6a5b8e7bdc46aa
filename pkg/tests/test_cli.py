import csv
import json
import math
import os

import numpy as np
import pytest

from hextreme.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestEval:
    def test_json_table(self, capsys):
        code, out = run(capsys, "eval", "--theta", "1,0,1,0,1,0",
                        "--points", "1,2")
        assert code == 0
        doc = json.loads(out)
        assert doc["meta"]["command"] == "eval"
        assert doc["table"]["pdf"][0] == pytest.approx(math.exp(-1))
        assert doc["table"]["cdf"][1] == pytest.approx(-math.expm1(-2.0))

    def test_csv_format(self, capsys):
        code, out = run(capsys, "eval", "--theta", "1,0,1,0,1,0",
                        "--points", "1", "--format", "csv")
        assert code == 0
        rows = {r[0]: r[1:] for r in csv.reader(out.splitlines())}
        assert float(rows["table.pdf"][0]) == pytest.approx(math.exp(-1))

    def test_default_grid(self, capsys):
        code, out = run(capsys, "eval", "--theta", "1,0,1,0,1,0")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["table"]["y"]) == 200

    def test_out_file(self, capsys, tmp_path):
        out_path = tmp_path / "table.json"
        code, _ = run(capsys, "eval", "--theta", "1,0,1,0,1,0",
                      "--points", "1", "--out", str(out_path))
        assert code == 0
        assert json.loads(out_path.read_text())["table"]["y"] == [1.0]


class TestSample:
    def test_deterministic(self, capsys):
        code, out1 = run(capsys, "sample", "--theta", "1,0,1,0,1,0",
                         "--n", "5", "--seed", "3")
        code2, out2 = run(capsys, "sample", "--theta", "1,0,1,0,1,0",
                          "--n", "5", "--seed", "3")
        assert code == code2 == 0
        assert out1 == out2
        assert len(out1.split()) == 5

    def test_out_file_loadable(self, capsys, tmp_path):
        p = tmp_path / "draws.txt"
        code, _ = run(capsys, "sample", "--theta", "1,0,1,0,1,0",
                      "--n", "10", "--seed", "1", "--out", str(p))
        assert code == 0
        assert np.loadtxt(p).shape == (10,)


class TestErrors:
    def test_usage_no_theta(self, capsys):
        code, _ = run(capsys, "eval")
        assert code == 1

    def test_usage_bad_theta_length(self, capsys):
        code, _ = run(capsys, "eval", "--theta", "1,2,3")
        assert code == 1

    def test_usage_both_data_and_dataset(self, capsys):
        code, _ = run(capsys, "fit", "--data", "x.txt", "--dataset", "carbon_y")
        assert code == 1

    def test_data_error_missing_file(self, capsys):
        code, _ = run(capsys, "fit", "--data", "/nonexistent/file.txt")
        assert code == 2

    def test_data_error_invalid_theta_domain(self, capsys):
        # structurally fine but mathematically invalid parameter vector
        code, _ = run(capsys, "eval", "--theta", "0,0,1,0,1.5,0", "--points", "1")
        assert code == 2

    def test_usage_unknown_command(self, capsys):
        code = main(["explode"])
        assert code == 1


class TestGof:
    def test_gof_with_fixed_theta(self, capsys):
        code, out = run(capsys, "gof", "--dataset", "carbon_y",
                        "--theta", "0,0.377,1,0,5.5,4.5",
                        "--bootstrap-m", "12", "--seed", "1", "--threads", "2")
        assert code == 0
        doc = json.loads(out)
        assert 0.0 < doc["gof"]["ks_p"] <= 1.0
        assert doc["gof"]["M"] == 12
        assert len(doc["residuals"]) == 69


class TestReport:
    def test_report_writes_figures(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, _ = run(capsys, "report", "--dataset", "carbon_y",
                      "--method", "lse", "--submodel", "weibull",
                      "--theta", "0,0.377,1,0,5.5,4.5",
                      "--bootstrap-m", "12", "--seed", "1",
                      "--out", str(out_path))
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["dataset"]["n"] == 69
        assert doc["descriptive"]["mean"] == pytest.approx(2.451, abs=5e-4)
        plot = doc["plot"]
        assert len(plot["hist_edges"]) == len(plot["hist_counts"]) + 1
        assert len(plot["pdf_grid"]) == 200
        for suffix in ("_hist.png", "_cdf.png", "_qq.png"):
            assert (tmp_path / f"report{suffix}").exists()
