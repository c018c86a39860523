import json
import subprocess
import sys

import pytest

from conftest import DATA_DIR, GOLDEN_DIR
from pathminer.cli import main

TABLE = DATA_DIR / "patients_table.csv"


def run_ok(args):
    assert main([str(a) for a in args]) == 0


def prepare_inputs(tmp_path):
    """Build the XES log and reference net the other subcommands consume."""
    log = tmp_path / "log.xes"
    net = tmp_path / "dejure.json"
    run_ok(["transform", "--input", TABLE, "--output", log])
    run_ok(["dejure", "--output", net])
    return log, net


class TestGoldenOutputs:
    def test_transform(self, tmp_path):
        out = tmp_path / "log.xes"
        run_ok(["transform", "--input", TABLE, "--output", out])
        assert out.read_bytes() == (GOLDEN_DIR / "transform_table.xes").read_bytes()

    def test_dejure(self, tmp_path):
        out = tmp_path / "net.json"
        dot = tmp_path / "net.dot"
        run_ok(["dejure", "--output", out, "--dot", dot])
        assert out.read_bytes() == (GOLDEN_DIR / "dejure.json").read_bytes()
        assert dot.read_bytes() == (GOLDEN_DIR / "dejure.dot").read_bytes()

    def test_discover_dfm(self, tmp_path):
        log, _ = prepare_inputs(tmp_path)
        out = tmp_path / "dfm.json"
        run_ok(["discover", "--input", log, "--algorithm", "dfg", "--paths", "0.9",
                "--output", out])
        assert out.read_bytes() == (GOLDEN_DIR / "discover_dfm.json").read_bytes()

    def test_discover_alpha(self, tmp_path):
        log, _ = prepare_inputs(tmp_path)
        out = tmp_path / "alpha.json"
        run_ok(["discover", "--input", log, "--algorithm", "alpha", "--output", out])
        assert out.read_bytes() == (GOLDEN_DIR / "discover_alpha.json").read_bytes()

    def test_conform(self, tmp_path):
        log, net = prepare_inputs(tmp_path)
        out = tmp_path / "report.json"
        run_ok(["conform", "--log", log, "--net", net, "--output", out])
        assert out.read_bytes() == (GOLDEN_DIR / "conform_dejure.json").read_bytes()
        report = json.loads(out.read_text())
        assert report["fitness"] == 1.0

    def test_cohorts(self, tmp_path):
        log, _ = prepare_inputs(tmp_path)
        outdir = tmp_path / "cohorts"
        run_ok(["cohorts", "--log", log, "--axis", "diabetes", "--outdir", outdir])
        assert (outdir / "kruskal_diabetes.csv").read_bytes() == (
            GOLDEN_DIR / "kruskal_diabetes.csv"
        ).read_bytes()
        assert (outdir / "cohorts_diabetes.json").read_bytes() == (
            GOLDEN_DIR / "cohorts_diabetes.json"
        ).read_bytes()

    def test_decide(self, tmp_path):
        log, net = prepare_inputs(tmp_path)
        out = tmp_path / "decide.json"
        run_ok(["decide", "--log", log, "--net", net, "--place", "p1",
                "--classifiers", "majority", "--seed", "0", "--output", out])
        assert out.read_bytes() == (GOLDEN_DIR / "decide_p1.json").read_bytes()

    def test_simulate(self, tmp_path):
        out = tmp_path / "patients.csv"
        run_ok(["simulate", "--patients", "5", "--seed", "7", "--output", out])
        assert out.read_bytes() == (GOLDEN_DIR / "simulate_5_seed7.csv").read_bytes()


class TestPipeline:
    def test_simulate_transform_conform_reports_perfect_fitness(self, tmp_path):
        patients = tmp_path / "patients.csv"
        log = tmp_path / "log.xes"
        net = tmp_path / "net.json"
        report = tmp_path / "report.json"
        run_ok(["simulate", "--patients", "240", "--seed", "7", "--output", patients])
        run_ok(["transform", "--input", patients, "--output", log])
        run_ok(["dejure", "--output", net])
        run_ok(["conform", "--log", log, "--net", net, "--output", report])
        assert json.loads(report.read_text())["fitness"] == 1.0
        assert b'"fitness": 1.0000' in report.read_bytes()


class TestDeterminism:
    @pytest.mark.parametrize("paths", ["0.9", "1.0"])
    def test_discover_twice_identical(self, tmp_path, paths):
        log, _ = prepare_inputs(tmp_path)
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        for out in (first, second):
            run_ok(["discover", "--input", log, "--paths", paths, "--output", out])
        assert first.read_bytes() == second.read_bytes()

    def test_simulate_twice_identical(self, tmp_path):
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        for out in (first, second):
            run_ok(["simulate", "--patients", "40", "--seed", "3", "--output", out])
        assert first.read_bytes() == second.read_bytes()


class TestErrorHandling:
    def test_unknown_subcommand_exits_1(self, capsys):
        assert main(["frobnicate"]) == 1
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_flag_exits_1(self, capsys):
        assert main(["dejure", "--bogus"]) == 1
        assert "usage" in capsys.readouterr().err.lower()

    def test_missing_input_file_exits_1(self, tmp_path, capsys):
        code = main(["transform", "--input", str(tmp_path / "nope.csv"),
                     "--output", str(tmp_path / "out.xes")])
        assert code == 1
        assert "error" in capsys.readouterr().err.lower()

    def test_bad_csv_exits_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("only,two\n1,2\n")
        code = main(["transform", "--input", str(bad),
                     "--output", str(tmp_path / "out.xes")])
        assert code == 1
        assert "column" in capsys.readouterr().err.lower()

    def test_bad_place_exits_1(self, tmp_path, capsys):
        log, net = prepare_inputs(tmp_path)
        code = main(["decide", "--log", str(log), "--net", str(net),
                     "--place", "p_end", "--output", str(tmp_path / "d.json")])
        assert code == 1
        assert "decision point" in capsys.readouterr().err

    def test_bad_thread_cap_exits_1(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("PATHMINER_THREADS", "many")
        code = main(["dejure", "--output", str(tmp_path / "n.json")])
        assert code == 1
        assert "PATHMINER_THREADS" in capsys.readouterr().err

    def test_thread_cap_accepted(self, tmp_path, monkeypatch):
        monkeypatch.setenv("PATHMINER_THREADS", "4")
        run_ok(["dejure", "--output", tmp_path / "n.json"])


def test_console_entry_point_runs():
    result = subprocess.run(
        [sys.executable, "-m", "pathminer", "--help"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "transform" in result.stdout
