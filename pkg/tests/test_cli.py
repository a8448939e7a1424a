"""CLI smoke tests covering the named subcommands and exit codes."""

import json
import subprocess
import sys

import numpy as np
import pytest

from critloci.cli import main
from critloci.linclass import FAMILY_B, build_family


@pytest.fixture()
def b_fixture(tmp_path):
    N = build_family(FAMILY_B, rng=np.random.default_rng(123))
    path = tmp_path / "nb.json"
    path.write_text(N.dumps())
    return path


class TestClassify:
    def test_classify_fixture(self, b_fixture, capsys):
        assert main(["classify", "--fixture", str(b_fixture)]) == 0
        out = capsys.readouterr().out
        assert "family: B" in out
        assert "common factor:" in out

    def test_missing_fixture_exit_3(self, capsys):
        assert main(["classify", "--fixture", "/nonexistent.json"]) == 3


class TestLociVerify:
    def test_verify(self, b_fixture, capsys):
        rc = main(
            ["loci", "verify", "--fixture", str(b_fixture), "--samples", "6"]
        )
        out = capsys.readouterr().out
        assert rc == 0
        assert "PASS" in out
        assert "TwistedCubic" in out


class TestTensor:
    def test_build(self, tmp_path, capsys):
        cams = {
            "cameras": [
                [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]],
                [[0, 1, 0, 0, 0], [0, 0, 0, 1, 0], [1, 0, 0, 0, 1]],
                [[0, 0, 1, 0, 0], [0, 0, 0, 0, 1], [0, 1, 0, 1, 0]],
            ]
        }
        path = tmp_path / "cams.json"
        path.write_text(json.dumps(cams))
        assert main(["tensor", "build", "--cameras", str(path)]) == 0
        out = capsys.readouterr().out
        assert "profile: (2, 2, 1)" in out

    def test_estimate(self, tmp_path, capsys):
        from critloci.multiview import Camera
        from critloci.recon import correspondences_from_scene

        rng = np.random.default_rng(3)
        cams = [
            Camera.from_rows(rng.integers(-5, 6, size=(3, 5)).tolist())
            for _ in range(3)
        ]
        pts = [tuple(int(v) for v in rng.integers(-5, 6, size=5)) for _ in range(30)]
        triples = correspondences_from_scene(cams, pts, rng)
        path = tmp_path / "triples.csv"
        with open(path, "w") as fh:
            for t in triples:
                fh.write(",".join(str(float(v)) for v in (*t.x, *t.y, *t.p)) + "\n")
        assert main(["tensor", "estimate", "--triples", str(path)]) == 0
        out = capsys.readouterr().out
        assert "numerical rank: 26" in out


class TestCriticalReduce:
    def test_builtin(self, capsys):
        assert main(["critical", "reduce", "--fixture", "builtin:cone_iv"]) == 0
        out = capsys.readouterr().out
        assert "classification: S1X1" in out
        assert "Cone" in out

    def test_unknown_builtin_exit_3(self, capsys):
        assert main(["critical", "reduce", "--fixture", "builtin:nope"]) == 3


class TestExperiment:
    def test_run_and_calibrate(self, tmp_path, capsys):
        out_csv = tmp_path / "r.csv"
        out_json = tmp_path / "s.json"
        rc = main(
            [
                "experiment", "run",
                "--case", "quadric_v",
                "--seed", "5",
                "--sigma-min", "0.2", "--sigma-max", "0.5", "--sigma-step", "0.15",
                "--repeats", "2",
                "--calibration-trials", "15",
                "--out", str(out_csv),
                "--summary-out", str(out_json),
            ]
        )
        assert rc == 0
        lines = out_csv.read_text().strip().splitlines()
        assert lines[0] == "case,sigma,repeat,distance,m,delta,is_near,attempts"
        assert len(lines) == 1 + 2 * 2
        summary = json.loads(out_json.read_text())
        assert summary["case"] == "quadric_v"
        assert len(summary["per_sigma"]) == 2

    def test_refused_case_exit_2(self, capsys):
        rc = main(
            ["experiment", "run", "--case", "case_vi", "--seed", "1", "--out", "/tmp/x.csv"]
        )
        assert rc == 2

    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "critloci", "experiment", "calibrate",
             "--case", "cone_iv", "--trials", "5"],
            capture_output=True, text=True, cwd="/root/pkg",
        )
        assert proc.returncode == 0
        assert "m =" in proc.stdout
