"""Command-line client: output formats, exit codes, option plumbing."""

import json
import os

import pytest
from click.testing import CliRunner

from npspectra import pipelines
from npspectra.cli import EXIT_INPUT, EXIT_NUMERICAL, main
from npspectra.spectral import EigenSolverError


@pytest.fixture()
def runner():
    return CliRunner()


def test_spectrum_json(runner, shape_file):
    res = runner.invoke(main, ["spectrum", "--shape", shape_file, "--n", "64",
                               "--no-timestamp"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["kernel"] == "k2d-deflated"
    assert abs(abs(report["modes"][0]["lambda"]) - 3.0) < 1e-6


def test_spectrum_csv_to_file(runner, shape_file, tmp_path):
    out = tmp_path / "spectrum.csv"
    res = runner.invoke(main, ["spectrum", "--shape", shape_file, "--n", "64",
                               "--format", "csv", "--out", str(out)])
    assert res.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("index,lambda")
    assert len(lines) > 1


def test_spectrum_dump_operator(runner, shape_file, tmp_path):
    dump = tmp_path / "A.bin"
    res = runner.invoke(main, ["spectrum", "--shape", shape_file, "--n", "64",
                               "--dump-operator", str(dump), "--out",
                               str(tmp_path / "r.json")])
    assert res.exit_code == 0
    assert os.path.getsize(dump) == 64 * 64 * 8


def test_spectrum_no_deflate(runner, shape_file):
    res = runner.invoke(main, ["spectrum", "--shape", shape_file, "--n", "64",
                               "--no-deflate", "--no-timestamp"])
    assert res.exit_code == 0
    assert json.loads(res.output)["kernel"] == "k2d"


def test_missing_shape_file(runner, tmp_path):
    res = runner.invoke(main, ["spectrum", "--shape",
                               str(tmp_path / "nope.json")])
    assert res.exit_code == EXIT_INPUT


def test_invalid_descriptor(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "heptagon"}')
    res = runner.invoke(main, ["spectrum", "--shape", str(bad)])
    assert res.exit_code == EXIT_INPUT
    assert "error:" in res.output


def test_unparseable_json(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{kind:")
    res = runner.invoke(main, ["spectrum", "--shape", str(bad)])
    assert res.exit_code == EXIT_INPUT


def test_numerical_failure_exit_code(runner, shape_file, monkeypatch):
    def boom(*args, **kwargs):
        raise EigenSolverError("synthetic failure")

    monkeypatch.setattr(pipelines, "spectrum_report", boom)
    res = runner.invoke(main, ["spectrum", "--shape", shape_file])
    assert res.exit_code == EXIT_NUMERICAL
    assert "numerical failure" in res.output


def test_resonance_command(runner, shape_file):
    res = runner.invoke(main, ["resonance", "--shape", shape_file, "--n", "64",
                               "--model", "drude-lossy", "--gamma", "0.05",
                               "--max-modes", "4", "--no-timestamp"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["model"]["kind"] == "drude-lossy"
    assert all(row["omega"] > 0 for row in report["modes"])


def test_excite_command(runner, shape_file):
    res = runner.invoke(main, ["excite", "--shape", shape_file, "--n", "64",
                               "--model", "drude-lossy", "--field", "0,1",
                               "--max-modes", "4", "--no-timestamp"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["field"] == [0.0, 1.0]


def test_excite_bad_field(runner, shape_file):
    res = runner.invoke(main, ["excite", "--shape", shape_file,
                               "--field", "east"])
    assert res.exit_code == EXIT_INPUT


def test_fredholm_command(runner, shape_file):
    res = runner.invoke(main, ["fredholm", "--shape", shape_file,
                               "--n", "128", "--orders", "4",
                               "--format", "csv"])
    assert res.exit_code == 0
    assert res.output.splitlines()[0] == "n,q_2n,b_2n"


def test_xi_command(runner, tmp_path):
    zeros_out = tmp_path / "zeros.csv"
    res = runner.invoke(main, ["xi", "--digits", "30", "--orders", "4",
                               "--trace-orders", "2", "--zeros-to", "15",
                               "--zeros-out", str(zeros_out),
                               "--no-timestamp"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["q"][0].startswith("0.04620998")
    assert zeros_out.read_text().splitlines()[1].startswith("1,14.1347")


def test_grommer_command(runner):
    res = runner.invoke(main, ["grommer-check", "--digits", "40",
                               "--grommer", "1", "--no-timestamp"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["all_positive"] is True
    assert report["counterexample"]["first_failing_N"] == 1


def test_grommer_refuses_low_precision(runner):
    res = runner.invoke(main, ["grommer-check", "--digits", "31",
                               "--grommer", "4"])
    assert res.exit_code == EXIT_INPUT
    assert "at least 32" in res.output


def test_version(runner):
    res = runner.invoke(main, ["--version"])
    assert res.exit_code == 0
    assert "np-spectra" in res.output
