"""CLI behavior: outputs, scenario round trips, exit codes, figures."""

import json
import math

import pytest

from cavityfield import cli
from cavityfield.algebra import operator_expr_from_json


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestVerifyCommand:
    def test_battery_run_passes_and_renders(self, tmp_path):
        out = tmp_path / "report.json"
        code = cli.run(
            ["verify", "--alpha", "0.8,0", "--theta-from-alpha", "--nmax", "3",
             "--dim", "64", "--out", str(out)]
        )
        assert code == 0
        obj = json.loads(read(out))
        assert obj["all_pass"] is True
        assert all(row["pass"] for row in obj["checks"])
        assert (tmp_path / "report.png").exists()

    def test_no_plot_suppresses_figure(self, tmp_path):
        out = tmp_path / "report.json"
        code = cli.run(
            ["verify", "--nmax", "1", "--dim", "64", "--out", str(out),
             "--no-plot"]
        )
        assert code == 0
        assert not (tmp_path / "report.png").exists()

    def test_csv_format(self, tmp_path):
        import csv as csv_mod
        import io as io_mod

        out = tmp_path / "report.csv"
        code = cli.run(["verify", "--nmax", "1", "--dim", "64", "--format",
                        "csv", "--out", str(out), "--no-plot"])
        assert code == 0
        lines = read(out).decode().splitlines()
        assert lines[0].startswith("# scenario: ")
        assert lines[1] == "id,convention,expected,measured,tol,pass"
        rows = list(csv_mod.reader(io_mod.StringIO("\n".join(lines[1:]))))
        assert all(len(row) == 6 for row in rows)
        assert {row[5] for row in rows[1:]} == {"true"}


class TestSeriesCommand:
    def test_number_state_series_is_zero(self, tmp_path, capsys):
        code = cli.run(["series", "--state", "number", "--n", "2", "--z", "0.5",
                        "--no-plot"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1] == "t,re,im"
        for line in lines[2:]:
            _, re_part, im_part = line.split(",")
            assert float(re_part) == 0.0
            assert float(im_part) == 0.0

    def test_reproducible_bytes(self, tmp_path):
        out = tmp_path / "series.csv"
        argv = ["series", "--state", "coherent", "--alpha", "0.5,0.1",
                "--out", str(out), "--no-plot"]
        assert cli.run(argv) == 0
        first = read(out)
        assert cli.run(argv) == 0
        assert read(out) == first

    def test_scenario_round_trip(self, tmp_path):
        out = tmp_path / "series.csv"
        argv = ["series", "--state", "coherent", "--alpha", "0.4,0.3",
                "--periods", "2", "--out", str(out), "--no-plot"]
        assert cli.run(argv) == 0
        first = read(out)
        header = first.decode().splitlines()[0]
        scenario = json.loads(header[len("# scenario: "):])
        scenario_file = tmp_path / "scenario.json"
        scenario_file.write_text(json.dumps(scenario))
        assert cli.run(["series", "--scenario", str(scenario_file)]) == 0
        assert read(out) == first

    def test_flags_override_scenario_file(self, tmp_path):
        out = tmp_path / "series.json"
        scenario_file = tmp_path / "scenario.json"
        scenario_file.write_text(json.dumps({"command": "series", "n": 5}))
        code = cli.run(["series", "--scenario", str(scenario_file), "--state",
                        "number", "--n", "1", "--format", "json",
                        "--out", str(out), "--no-plot"])
        assert code == 0
        obj = json.loads(read(out))
        assert obj["scenario"]["n"] == 1

    def test_emit_expr(self, tmp_path, capsys):
        code = cli.run(["series", "--emit", "expr", "--field", "electric"])
        assert code == 0
        obj = json.loads(capsys.readouterr().out)
        expr = operator_expr_from_json(obj["expr"])
        assert len(expr.monomials) == 2

    def test_figure_rendered_alongside(self, tmp_path):
        out = tmp_path / "series.csv"
        code = cli.run(["series", "--state", "coherent", "--out", str(out)])
        assert code == 0
        assert (tmp_path / "series.png").exists()


class TestModesCommand:
    def test_three_mode_output(self, capsys):
        code = cli.run(["modes", "--convention", "paper", "--n", "1",
                        "--alpha-mag", "1", "--theta", "0.6283"])
        assert code == 0
        obj = json.loads(capsys.readouterr().out)
        assert len(obj["modes"]) == 3
        amps = sorted(m["amplitude"] for m in obj["modes"])
        assert amps == pytest.approx([-4.0, -2.0, 8.0], rel=1e-6)

    def test_emit_expr_round_trips(self, capsys):
        code = cli.run(["modes", "--n", "1", "--emit", "expr"])
        assert code == 0
        obj = json.loads(capsys.readouterr().out)
        assert "signal" in obj

    def test_csv_format(self, tmp_path):
        out = tmp_path / "modes.csv"
        code = cli.run(["modes", "--n", "0", "--alpha-mag", "0.8", "--theta",
                        "0.4", "--format", "csv", "--out", str(out),
                        "--no-plot"])
        assert code == 0
        lines = read(out).decode().splitlines()
        assert lines[1] == "phase,amplitude"
        assert len(lines) == 3


class TestTransitionCommand:
    def test_sudden_run(self, tmp_path):
        out = tmp_path / "transition.json"
        code = cli.run(["transition", "--ramp", "sudden", "--duration", "0",
                        "--alpha", "0.8,0", "--n", "0", "--dim", "32",
                        "--out", str(out)])
        assert code == 0
        obj = json.loads(read(out))
        assert obj["fidelity_to_displaced"] == 1.0
        assert obj["fidelity_to_number"] == pytest.approx(math.exp(-0.32))
        assert (tmp_path / "transition.png").exists()

    def test_short_linear_ramp(self, tmp_path):
        out = tmp_path / "transition.json"
        code = cli.run(["transition", "--ramp", "linear", "--duration", "0.001",
                        "--alpha", "0.8,0", "--n", "0", "--dim", "32",
                        "--out", str(out), "--no-plot"])
        assert code == 0
        obj = json.loads(read(out))
        assert obj["fidelity_to_displaced"] >= 0.999
        assert obj["norm_drift"] <= 1e-7

    def test_csv_format(self, tmp_path):
        out = tmp_path / "transition.csv"
        code = cli.run(["transition", "--ramp", "sudden", "--duration", "0",
                        "--alpha", "0.5,0", "--n", "1", "--dim", "32",
                        "--format", "csv", "--out", str(out), "--no-plot"])
        assert code == 0
        lines = read(out).decode().splitlines()
        assert lines[1] == "quantity,value"
        assert lines[2].startswith("fidelity_to_displaced,")


class TestDoubleSlitCommand:
    def test_number_state_csv(self, tmp_path):
        out = tmp_path / "slit.csv"
        code = cli.run(["double-slit", "--state", "number", "--n", "1",
                        "--screen-points", "41", "--dim", "32",
                        "--out", str(out), "--no-plot"])
        assert code == 0
        lines = read(out).decode().splitlines()
        assert lines[1] == "x,intensity,fringe_term,floor"
        rows = [line.split(",") for line in lines[2:]]
        assert len(rows) == 41
        for row in rows:
            assert float(row[2]) == 0.0  # fringe term vanishes

    def test_coherent_json_visibility(self, tmp_path):
        out = tmp_path / "slit.json"
        code = cli.run(["double-slit", "--state", "coherent", "--alpha", "1,0",
                        "--screen-points", "101", "--dim", "32",
                        "--format", "json", "--out", str(out), "--no-plot"])
        assert code == 0
        obj = json.loads(read(out))
        assert obj["visibility"] >= 0.99


class TestExitCodes:
    def test_invalid_flag_value(self):
        assert cli.run(["series", "--alpha", "nonsense"]) == 2

    def test_unknown_scenario_key(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"command": "series", "wavelength": 3}))
        assert cli.run(["series", "--scenario", str(bad)]) == 2

    def test_command_mismatch_in_scenario(self, tmp_path):
        other = tmp_path / "other.json"
        other.write_text(json.dumps({"command": "verify"}))
        assert cli.run(["series", "--scenario", str(other)]) == 2

    def test_truncation_maps_to_numerical_failure(self, tmp_path):
        code = cli.run(["series", "--state", "coherent", "--alpha", "3,0",
                        "--dim", "16", "--path", "oracle", "--no-plot",
                        "--out", str(tmp_path / "x.csv")])
        assert code == 3

    def test_verify_failure_exit_code(self, tmp_path, monkeypatch):
        # Force a failing row through a stubbed battery; the command maps
        # any failing row to exit code 1.
        from cavityfield.field import CheckRow, Report

        def fake_report(*args, **kwargs):
            return Report(
                (CheckRow("stub", "paper", 0.0, 1.0, 1e-12, False),)
            )

        monkeypatch.setattr(cli, "verify_report", fake_report)
        code = cli.run(["verify", "--out", str(tmp_path / "r.json"),
                        "--no-plot"])
        assert code == 1


class TestOutputDirEnvVar:
    def test_relative_paths_land_in_the_override_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path))
        monkeypatch.chdir(tmp_path)
        code = cli.run(["modes", "--n", "0", "--out", "m.json", "--no-plot"])
        assert code == 0
        assert (tmp_path / "m.json").exists()
