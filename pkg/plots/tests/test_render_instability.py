"""Tests for the sweep-figure renderer.

These only exercise the CSV contract; they do not import the producing
package.
"""

import pathlib
import subprocess
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1]))

from render_instability import SchemaError, frequency_table, load_rows, main, render

DATA = pathlib.Path(__file__).parent / "data"
GOLDEN = DATA / "golden_six_rows.csv"


class TestLoad:
    def test_golden_rows(self):
        rows = load_rows(str(GOLDEN))
        assert len(rows) == 6
        assert rows[0]["case"] == "toy_case"

    def test_bad_header_schema_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("sigma,repeat\n0.1,0\n")
        with pytest.raises(SchemaError):
            load_rows(str(bad))

    def test_bad_value_schema_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text(
            "case,sigma,repeat,distance,m,delta,is_near,attempts\n"
            "c,0.1,0,nope,0.1,0.2,1,1\n"
        )
        with pytest.raises(SchemaError):
            load_rows(str(bad))


class TestFrequencyTable:
    def test_golden_table(self):
        table = frequency_table(load_rows(str(GOLDEN)))
        assert table == {
            "toy_case": [
                {"sigma": 0.1, "near": 3, "far": 0, "near_frequency": 1.0},
                {"sigma": 0.5, "near": 1, "far": 2, "near_frequency": 1 / 3},
            ]
        }


class TestRender:
    def test_render_golden(self, tmp_path):
        out = tmp_path / "fig.png"
        table = render(str(GOLDEN), str(out))
        assert out.exists() and out.stat().st_size > 0
        assert list(table) == ["toy_case"]

    def test_same_input_same_table(self, tmp_path):
        t1 = render(str(GOLDEN), str(tmp_path / "a.png"), style="bars")
        t2 = render(str(GOLDEN), str(tmp_path / "b.png"), style="lines", log_x=True)
        assert t1 == t2

    def test_cli_exit_codes(self, tmp_path):
        assert main(["--csv", str(GOLDEN), "--out", str(tmp_path / "f.png")]) == 0
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n1,2\n")
        assert main(["--csv", str(bad), "--out", str(tmp_path / "g.png")]) == 2

    def test_script_invocation(self, tmp_path):
        script = pathlib.Path(__file__).resolve().parents[1] / "render_instability.py"
        proc = subprocess.run(
            [sys.executable, str(script), "--csv", str(GOLDEN),
             "--out", str(tmp_path / "fig.svg"), "--style", "bars"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "fig.svg").exists()
