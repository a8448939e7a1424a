#!/usr/bin/env python3
"""A small instability sweep near the cubic scroll, end to end.

Calibrates the near/far radius from random scenes, runs a reduced sigma
grid near the scroll component, writes the CSV, and (when matplotlib is
available) renders the figure with the standalone plot script.
"""

import pathlib
import subprocess
import sys

from critloci.harness import ExperimentConfig, run_sweep, write_csv

cfg = ExperimentConfig(
    case_tag="scroll_i",
    seed=2024,
    sigma_grid=[1e-4 + 0.05 * k for k in range(20)],
    repeats=10,
    calibration_trials=300,
)
records, summary = run_sweep(cfg)
print(f"calibrated m = {summary.m:.4f}, delta = {summary.delta:.4f}")
print("sigma  near/10")
for ps in summary.per_sigma:
    bar = "#" * ps["near"]
    print(f"{ps['sigma']:.4f}  {ps['near']:2d} {bar}")

out = pathlib.Path("scroll_sweep.csv")
write_csv(out, records)
print(f"\nwrote {out}")

script = pathlib.Path(__file__).resolve().parents[1] / "plots" / "render_instability.py"
proc = subprocess.run(
    [sys.executable, str(script), "--csv", str(out), "--out", "scroll_sweep.png"],
    capture_output=True,
    text=True,
)
print(proc.stdout.strip() or proc.stderr.strip())
