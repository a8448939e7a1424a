"""Command-line entry points.

Subcommands mirror the library surface: classify a matrix fixture, verify
a degeneration locus, build/estimate trifocal tensors, reduce a camera
pair to its critical matrix, and run or calibrate instability sweeps.

Exit codes: 0 on success, 2 for configuration errors, 3 for fixture errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import numpy as np


class FixtureError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FixtureError(f"cannot read fixture {path!r}: {exc}") from exc


def _fraction_matrix_text(M) -> str:
    return "\n".join("  [" + ", ".join(str(x) for x in row) + "]" for row in M)


def _poly_matrix_text(N) -> str:
    width = max(len(p.to_text()) for row in N.entries for p in row)
    lines = []
    for row in N.entries:
        lines.append("  | " + " | ".join(p.to_text().ljust(width) for p in row) + " |")
    return "\n".join(lines)


def cmd_classify(args) -> int:
    from .linclass import LinFormMatrix, classify_4x3, classify_3x2

    data = _load_json(args.fixture)
    N = LinFormMatrix.from_json(data)
    got = classify_4x3(N) if (N.rows, N.cols) == (4, 3) else classify_3x2(N)
    if got.specialized:
        print(f"specialized: {got.note}")
        return 0
    print(f"family: {got.family}")
    print(f"common factor: {got.common_factor.to_text()}")
    print("row transform R:")
    print(_fraction_matrix_text(got.row_transform))
    print("column transform C:")
    print(_fraction_matrix_text(got.col_transform))
    print("canonical R*N*C:")
    print(_poly_matrix_text(got.canonical))
    return 0


def cmd_loci_verify(args) -> int:
    from .linclass import LinFormMatrix, classify_4x3
    from .loci import (
        decompose,
        incidence_checks,
        sample_component,
        verify_rank_drop,
    )

    data = _load_json(args.fixture)
    N = LinFormMatrix.from_json(data)
    got = classify_4x3(N)
    if got.family in (None, "NonDegenerate"):
        print(f"nothing to verify: classification is {got.family or 'specialized'}")
        return 0
    dec = decompose(got)
    rng = np.random.default_rng(args.seed)
    report = {"family": dec.family, "components": [], "checks": {}}
    print(f"family {dec.family}; components:")
    ok = True
    for comp in dec.components:
        pts = sample_component(comp, args.samples, rng)
        rep = verify_rank_drop(N, pts, rng=rng, off_count=0)
        gens = "; ".join(g.to_text() for g in comp.generators)
        print(
            f"  {comp.kind:<20} dim {comp.dim} deg {comp.degree} "
            f"rank-drop {'ok' if rep['on_locus_ok'] else 'FAIL'}  [{gens}]"
        )
        report["components"].append(
            {"kind": comp.kind, "rank_drop_ok": rep["on_locus_ok"]}
        )
        ok = ok and rep["on_locus_ok"]
    off = verify_rank_drop(N, [], rng=rng, off_count=50)
    report["checks"]["off_locus_full_rank"] = off["off_locus_ok"]
    inc = incidence_checks(dec)
    report["checks"]["incidences"] = inc["checks"]
    print(json.dumps(report["checks"], indent=2))
    print("PASS" if ok and off["off_locus_ok"] else "FAIL")
    return 0 if ok and off["off_locus_ok"] else 1


def _parse_cameras(data) -> list:
    from .multiview import Camera

    rows = data["cameras"] if isinstance(data, dict) else data
    if len(rows) != 3:
        raise FixtureError("need exactly three cameras")
    return [
        Camera.from_rows([[Fraction(str(x)) for x in r] for r in cam]) for cam in rows
    ]


def cmd_tensor_build(args) -> int:
    from .multiview import trifocal_from_cameras

    cams = _parse_cameras(_load_json(args.cameras))
    profile = tuple(int(c) for c in args.profile)
    T = trifocal_from_cameras(*cams, profile=profile)
    flat = T.flat()
    print(f"profile: {profile}")
    print("entries (i,j,k lexicographic, T[i][j][k] at index 9(i-1)+3(j-1)+(k-1)):")
    print("[" + ", ".join(str(v) for v in flat) + "]")
    return 0


def cmd_tensor_estimate(args) -> int:
    from .recon import CorrespondenceTriple, assemble_MT, estimate_tensor

    triples = []
    try:
        with open(args.triples, encoding="utf-8", newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].startswith("#"):
                    continue
                vals = [float(v) for v in row]
                if len(vals) != 9:
                    raise FixtureError("each triples row needs 9 numbers")
                triples.append(
                    CorrespondenceTriple(tuple(vals[0:3]), tuple(vals[3:6]), tuple(vals[6:9]))
                )
    except OSError as exc:
        raise FixtureError(str(exc)) from exc
    if not triples:
        raise FixtureError("no triples found")
    est = estimate_tensor(assemble_MT(triples), rank_tol=args.rank_tol)
    print(f"rows: {len(triples)}")
    print(f"numerical rank: {est.numerical_rank} (unique: {est.unique})")
    print("tensor (unit Frobenius norm, flattened):")
    print("[" + ", ".join(f"{v:.12g}" for v in est.tensor.unit().ravel()) + "]")
    return 0


def cmd_critical_reduce(args) -> int:
    from .critical import CameraPairConfig, fixtures
    from .critical import reduce_to_N
    from .loci import decompose

    if args.fixture.startswith("builtin:"):
        try:
            cfg = fixtures(args.fixture.split(":", 1)[1])
        except ValueError as exc:
            raise FixtureError(str(exc)) from exc
    else:
        cfg = CameraPairConfig.from_json(_load_json(args.fixture))
    rcm = reduce_to_N(cfg)
    print("reduced 4x3 matrix N:")
    print(_poly_matrix_text(rcm.N))
    got = rcm.classification
    if got.specialized:
        print(f"classification: specialized ({got.note})")
        return 0
    print(f"classification: {got.family}")
    print(f"common factor: {got.common_factor.to_text()}")
    if got.family not in ("NonDegenerate",):
        dec = decompose(got)
        print("locus components:")
        for comp in dec.components:
            gens = "; ".join(g.to_text() for g in comp.generators)
            print(f"  {comp.kind:<20} dim {comp.dim} deg {comp.degree}  [{gens}]")
    return 0


def cmd_experiment_run(args) -> int:
    from .harness import ExperimentConfig, run_sweep, write_csv, write_summary

    grid = None
    if args.sigma_min is not None or args.sigma_max is not None or args.sigma_step:
        lo = args.sigma_min if args.sigma_min is not None else 1e-4
        hi = args.sigma_max if args.sigma_max is not None else 1.0
        step = args.sigma_step or 1e-2
        grid = []
        s = lo
        while s < hi:
            grid.append(s)
            s += step
    policy = ("multiple", args.delta_multiple)
    if args.delta_fixed is not None:
        policy = ("fixed", args.delta_fixed)
    cfg = ExperimentConfig(
        case_tag=args.case,
        seed=args.seed,
        n_points=args.points,
        sigma_grid=grid or [],
        repeats=args.repeats,
        image_sigma=args.image_sigma,
        delta_policy=policy,
        calibration_trials=args.calibration_trials,
        fixed_scene=args.fixed_scene,
    )
    records, summary = run_sweep(cfg)
    write_csv(args.out, records)
    print(f"wrote {len(records)} trials to {args.out}")
    print(f"m = {summary.m:.6g}, delta = {summary.delta:.6g}")
    if args.summary_out:
        write_summary(args.summary_out, summary)
        print(f"wrote summary to {args.summary_out}")
    return 0


def cmd_experiment_calibrate(args) -> int:
    from .harness import ExperimentConfig, calibrate_delta

    cfg = ExperimentConfig(
        case_tag=args.case,
        seed=args.seed,
        calibration_trials=args.trials,
    )
    m, delta = calibrate_delta(cfg)
    print(f"m = {m:.6g}")
    print(f"delta = {delta:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="critloci", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a matrix-of-linear-forms fixture")
    c.add_argument("--fixture", required=True)
    c.set_defaults(func=cmd_classify)

    l = sub.add_parser("loci", help="degeneration locus tools")
    lsub = l.add_subparsers(dest="loci_command", required=True)
    lv = lsub.add_parser("verify", help="verify a locus decomposition by sampling")
    lv.add_argument("--fixture", required=True)
    lv.add_argument("--samples", type=int, default=25)
    lv.add_argument("--seed", type=int, default=0)
    lv.set_defaults(func=cmd_loci_verify)

    t = sub.add_parser("tensor", help="trifocal tensor tools")
    tsub = t.add_subparsers(dest="tensor_command", required=True)
    tb = tsub.add_parser("build", help="tensor from three cameras")
    tb.add_argument("--cameras", required=True)
    tb.add_argument("--profile", default="221", choices=["221", "212", "122"])
    tb.set_defaults(func=cmd_tensor_build)
    te = tsub.add_parser("estimate", help="estimate a tensor from triples CSV")
    te.add_argument("--triples", required=True)
    te.add_argument("--rank-tol", type=float, default=1e-8)
    te.set_defaults(func=cmd_tensor_estimate)

    cr = sub.add_parser("critical", help="critical matrix tools")
    crsub = cr.add_subparsers(dest="critical_command", required=True)
    crr = crsub.add_parser("reduce", help="reduce a camera pair to N and classify")
    crr.add_argument(
        "--fixture",
        required=True,
        help="path to a camera-pair JSON, or builtin:{scroll_i|cone_iv|quadric_v|quadric_v_model}",
    )
    crr.set_defaults(func=cmd_critical_reduce)

    e = sub.add_parser("experiment", help="instability experiments")
    esub = e.add_subparsers(dest="experiment_command", required=True)
    er = esub.add_parser("run", help="run a sigma sweep")
    er.add_argument("--case", required=True)
    er.add_argument("--seed", type=int, required=True)
    er.add_argument("--sigma-min", type=float)
    er.add_argument("--sigma-max", type=float)
    er.add_argument("--sigma-step", type=float)
    er.add_argument("--repeats", type=int, default=10)
    er.add_argument("--points", type=int)
    er.add_argument("--image-sigma", type=float, default=0.01)
    er.add_argument("--delta-multiple", type=float, default=2.0)
    er.add_argument("--delta-fixed", type=float)
    er.add_argument("--calibration-trials", type=int, default=1000)
    er.add_argument("--fixed-scene", action="store_true")
    er.add_argument("--out", required=True)
    er.add_argument("--summary-out")
    er.set_defaults(func=cmd_experiment_run)
    ec = esub.add_parser("calibrate", help="calibrate the near/far radius")
    ec.add_argument("--case", required=True)
    ec.add_argument("--seed", type=int, default=0)
    ec.add_argument("--trials", type=int, default=1000)
    ec.set_defaults(func=cmd_experiment_calibrate)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FixtureError as exc:
        print(f"fixture error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
