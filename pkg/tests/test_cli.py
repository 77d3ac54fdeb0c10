"""Command-line behavior: formats, determinism, failure modes."""

import json

import pytest

from nbldpc.cli import main

FAST = ["--bisect-tol", "1e-4"]


def run(capsys, args):
    rc = main(args)
    out = capsys.readouterr().out
    return rc, out


class TestThresholdCommand:
    def test_json_output(self, capsys):
        rc, out = run(capsys, ["threshold", "--dv", "3", "--dc", "6", "--m", "1"] + FAST)
        assert rc == 0
        doc = json.loads(out)
        assert doc["ensemble"] == {"dv": 3, "dc": 6, "m": 1}
        assert doc["results"]["eps_bp"] == pytest.approx(0.42944, abs=5e-4)
        assert doc["options"]["bisect_tol"] == 1e-4

    def test_csv_output(self, capsys):
        rc, out = run(capsys, ["threshold", "--dv", "3", "--dc", "6", "--m", "1",
                               "--format", "csv"] + FAST)
        lines = out.strip().split("\n")
        assert lines[0] == "quantity,value"
        name, value = lines[1].split(",")
        assert name == "eps_bp"
        assert float(value) == pytest.approx(0.42944, abs=5e-4)

    def test_csv_and_json_agree_to_12_digits(self, capsys):
        args = ["threshold", "--dv", "3", "--dc", "6", "--m", "2"] + FAST
        _, json_out = run(capsys, args)
        _, csv_out = run(capsys, args + ["--format", "csv"])
        jval = json.loads(json_out)["results"]["eps_bp"]
        cval = float(csv_out.strip().split("\n")[1].split(",")[1])
        assert f"{jval:.12g}" == f"{cval:.12g}"

    def test_reruns_are_byte_identical(self, capsys):
        args = ["threshold", "--dv", "3", "--dc", "6", "--m", "2",
                "--format", "csv"] + FAST
        _, first = run(capsys, args)
        _, second = run(capsys, args)
        assert first == second


class TestMapBoundCommand:
    def test_binary_value_and_rate(self, capsys):
        rc, out = run(capsys, ["map-bound", "--dv", "3", "--dc", "6", "--m", "1"])
        assert rc == 0
        doc = json.loads(out)
        assert doc["results"]["eps_map_bound"] == pytest.approx(0.48815, abs=2e-4)
        assert doc["results"]["design_rate"] == 0.5


class TestExitCommand:
    def test_full_grid_csv(self, capsys):
        rc, out = run(capsys, ["exit", "--dv", "3", "--dc", "6", "--m", "1",
                               "--eps-min", "0", "--eps-max", "1",
                               "--eps-step", "0.01", "--format", "csv"])
        assert rc == 0
        lines = out.strip().split("\n")
        assert lines[0] == "eps,h"
        assert len(lines) == 102  # header + 101 grid points
        table = {float(l.split(",")[0]): float(l.split(",")[1]) for l in lines[1:]}
        assert table[0.40] == 0.0
        assert table[1.0] == pytest.approx(1.0, abs=1e-9)

    def test_bad_step_is_an_error(self, capsys):
        rc = main(["exit", "--dv", "3", "--dc", "6", "--m", "1",
                   "--eps-step", "-0.1"])
        assert rc == 1
        assert "error:" in capsys.readouterr().err


class TestScCommands:
    def test_sc_threshold(self, capsys):
        rc, out = run(capsys, ["sc-threshold", "--dv", "3", "--dc", "6",
                               "--m", "3", "--L", "3", "--bisect-tol", "1e-3"])
        assert rc == 0
        doc = json.loads(out)
        assert doc["ensemble"]["L"] == 3
        assert doc["results"]["eps_bp"] == pytest.approx(0.69913, abs=2e-3)
        assert doc["results"]["eps_sh"] == pytest.approx(5 / 6)

    def test_sc_threshold_L5(self, capsys):
        rc, out = run(capsys, ["sc-threshold", "--dv", "3", "--dc", "6",
                               "--m", "3", "--L", "5"] + FAST)
        assert rc == 0
        assert json.loads(out)["results"]["eps_bp"] == pytest.approx(0.57947, abs=1e-3)

    def test_sc_exit(self, capsys):
        rc, out = run(capsys, ["sc-exit", "--dv", "3", "--dc", "6", "--m", "1",
                               "--L", "3", "--eps-min", "0.9", "--eps-max", "1.0",
                               "--eps-step", "0.05", "--format", "csv"])
        assert rc == 0
        lines = out.strip().split("\n")
        assert len(lines) == 4
        assert float(lines[-1].split(",")[1]) == pytest.approx(1.0, abs=1e-9)

    def test_L_rejected_elsewhere(self):
        with pytest.raises(SystemExit) as exc:
            main(["threshold", "--dv", "3", "--dc", "6", "--m", "1", "--L", "3"])
        assert exc.value.code == 2

    def test_chain_validation_error(self, capsys):
        rc = main(["sc-threshold", "--dv", "3", "--dc", "7", "--m", "1", "--L", "3"])
        assert rc == 1
        assert "divisible" in capsys.readouterr().err


class TestCoeffsCommand:
    def test_csv_triples(self, capsys):
        rc, out = run(capsys, ["coeffs", "--m", "2", "--kind", "variable",
                               "--format", "csv"])
        assert rc == 0
        lines = out.strip().split("\n")
        assert lines[0] == "i,j,k,value"
        assert len(lines) == 1 + 27
        entries = {tuple(map(int, l.split(",")[:3])): float(l.split(",")[3])
                   for l in lines[1:]}
        assert entries[(1, 1, 0)] == pytest.approx(2 / 3, rel=1e-12)
        assert entries[(1, 1, 1)] == pytest.approx(1 / 3, rel=1e-12)

    def test_json(self, capsys):
        rc, out = run(capsys, ["coeffs", "--m", "1", "--kind", "check"])
        doc = json.loads(out)
        assert doc["ensemble"] == {"m": 1}
        assert len(doc["results"]["entries"]) == 8


class TestPlumbing:
    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "out.csv"
        rc, out = run(capsys, ["coeffs", "--m", "1", "--kind", "check",
                               "--format", "csv", "--output", str(target)])
        assert rc == 0
        assert out == ""
        assert target.read_text().startswith("i,j,k,value")

    def test_trace_file(self, tmp_path, capsys):
        target = tmp_path / "trace.csv"
        rc, _ = run(capsys, ["threshold", "--dv", "3", "--dc", "6", "--m", "1",
                             "--bisect-tol", "0.05", "--trace", str(target)])
        assert rc == 0
        lines = target.read_text().strip().split("\n")
        assert lines[0] == "iter,pos,p0"
        first = lines[1].split(",")
        assert first[0] == "1" and first[1] == "0"
        assert 0.0 <= float(first[2]) <= 1.0

    def test_no_command_prints_help(self, capsys):
        assert main([]) == 2
        assert "usage" in capsys.readouterr().out

    def test_self_check(self, capsys):
        assert main(["--self-check", "--seed", "7"]) == 0
        out = capsys.readouterr().out
        assert out.count("ok") == 4 and "FAIL" not in out
