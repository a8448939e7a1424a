#!/usr/bin/env python3
"""Render near/far frequency figures from instability sweep CSV files.

Reads the harness CSV schema
    case,sigma,repeat,distance,m,delta,is_near,attempts
and draws, per case found in the file, the frequency of near (and the
complementary far) reconstructions against sigma.  The plotted numbers are
exactly the per-sigma aggregates of the rows, so the figure's data table
can be compared against the producer's own summary.

Usage:
    render_instability.py --csv results.csv --out fig.png [--log-x]
                          [--style bars|lines]
"""

from __future__ import annotations

import argparse
import csv
import sys
from collections import defaultdict

EXPECTED_HEADER = ["case", "sigma", "repeat", "distance", "m", "delta", "is_near", "attempts"]


class SchemaError(ValueError):
    pass


def load_rows(path: str) -> list[dict]:
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise SchemaError(f"cannot open {path!r}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty CSV") from None
        if header != EXPECTED_HEADER:
            raise SchemaError(f"unexpected header {header!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(EXPECTED_HEADER):
                raise SchemaError(f"line {lineno}: wrong column count")
            try:
                rows.append(
                    {
                        "case": row[0],
                        "sigma": float(row[1]),
                        "repeat": int(row[2]),
                        "distance": float(row[3]),
                        "m": float(row[4]),
                        "delta": float(row[5]),
                        "is_near": bool(int(row[6])),
                        "attempts": int(row[7]),
                    }
                )
            except ValueError as exc:
                raise SchemaError(f"line {lineno}: {exc}") from exc
    if not rows:
        raise SchemaError("no data rows")
    return rows


def frequency_table(rows: list[dict]) -> dict[str, list[dict]]:
    """Per case: sigma-ascending rows of near/far counts and frequency."""
    grouped: dict[tuple[str, float], list[dict]] = defaultdict(list)
    for r in rows:
        grouped[(r["case"], r["sigma"])].append(r)
    out: dict[str, list[dict]] = defaultdict(list)
    for (case, sigma) in sorted(grouped):
        bucket = grouped[(case, sigma)]
        near = sum(1 for r in bucket if r["is_near"])
        out[case].append(
            {
                "sigma": sigma,
                "near": near,
                "far": len(bucket) - near,
                "near_frequency": near / len(bucket),
            }
        )
    return dict(out)


def render(csv_path: str, out_path: str, log_x: bool = False, style: str = "lines"):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = load_rows(csv_path)
    table = frequency_table(rows)
    meta = {r["case"]: (r["m"], r["delta"]) for r in rows}
    fig, axes = plt.subplots(
        len(table), 1, figsize=(8, 3.2 * len(table)), squeeze=False
    )
    for ax, (case, entries) in zip(axes.ravel(), sorted(table.items())):
        sigmas = [e["sigma"] for e in entries]
        near = [e["near_frequency"] for e in entries]
        far = [1 - f for f in near]
        if style == "bars":
            width = [s * 0.04 if log_x else 0.008 for s in sigmas]
            ax.bar(sigmas, near, width=width, label="near", color="#2a7")
            ax.bar(sigmas, far, width=width, bottom=near, label="far", color="#c55")
        else:
            ax.plot(sigmas, near, marker="o", ms=2.5, label="near", color="#2a7")
            ax.plot(sigmas, far, marker="o", ms=2.5, label="far", color="#c55")
        if log_x:
            ax.set_xscale("log")
        m, delta = meta[case]
        ax.set_title(f"{case}: m = {m:.4g}, delta = {delta:.4g}")
        ax.set_xlabel("sigma")
        ax.set_ylabel("frequency")
        ax.set_ylim(-0.02, 1.02)
        ax.legend(loc="center right")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return table


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--csv", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--log-x", action="store_true")
    ap.add_argument("--style", choices=["bars", "lines"], default="lines")
    args = ap.parse_args(argv)
    try:
        table = render(args.csv, args.out, log_x=args.log_x, style=args.style)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    cases = ", ".join(f"{c} ({len(t)} sigmas)" for c, t in sorted(table.items()))
    print(f"wrote {args.out}: {cases}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
