"""Tests for the instability experiment harness."""

import numpy as np
import pytest

from critloci.harness import (
    CSV_HEADER,
    ExperimentConfig,
    calibrate_delta,
    generate_critical_points,
    perturb_images,
    perturb_scene,
    prepare_case,
    project_scene,
    read_csv,
    records_to_csv,
    run_sweep,
    summarize,
    write_csv,
)
from critloci.loci import residual

SMALL_GRID = [1e-4, 0.25, 0.9]


class TestConfig:
    def test_defaults(self):
        cfg = ExperimentConfig(case_tag="scroll_i", seed=1)
        assert cfg.n_points == 100
        assert len(cfg.sigma_grid) == 100
        assert cfg.sigma_grid[0] == pytest.approx(1e-4)
        assert cfg.sigma_grid[-1] < 1.0
        assert ExperimentConfig(case_tag="quadric_v", seed=1).n_points == 99

    def test_refused_cases(self):
        with pytest.raises(ValueError, match="refused"):
            ExperimentConfig(case_tag="case_vi", seed=1)

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            ExperimentConfig(case_tag="scroll_i", seed=1, sigma_grid=[0.5, 0.1])


class TestGeneration:
    @pytest.mark.parametrize("tag", ["scroll_i", "cone_iv", "quadric_v", "quadric_v_recorded"])
    def test_points_on_component(self, tag):
        rt = prepare_case(tag)
        rng = np.random.default_rng(0)
        pts = generate_critical_points(tag, 25, rng, rt)
        assert pts.shape == (25, 4)
        for p in pts:
            full = tuple(p) + (1.0,)
            for g in rt.generators:
                assert residual(g, full) < 1e-10

    def test_deterministic(self):
        rt = prepare_case("cone_iv")
        a = generate_critical_points("cone_iv", 10, np.random.default_rng(5), rt)
        b = generate_critical_points("cone_iv", 10, np.random.default_rng(5), rt)
        assert np.array_equal(a, b)


class TestPerturbations:
    def test_sigma_zero_identity(self):
        pts = np.arange(12.0).reshape(3, 4)
        rng = np.random.default_rng(0)
        assert np.array_equal(perturb_scene(pts, 0.0, rng), pts)

    def test_mean_offset_bound(self):
        rng = np.random.default_rng(1)
        pts = np.zeros((10_000, 4))
        noisy = perturb_scene(pts, 0.5, rng)
        assert np.all(np.abs(noisy.mean(axis=0)) < 4 * 0.5 / np.sqrt(10_000))

    def test_large_sigma_leaves_component(self):
        rt = prepare_case("scroll_i")
        rng = np.random.default_rng(2)
        pts = generate_critical_points("scroll_i", 20, rng, rt)
        noisy = perturb_scene(pts, 0.5, rng)
        off = 0
        for p in noisy:
            full = tuple(p) + (1.0,)
            if any(residual(g, full) > 1e-6 for g in rt.generators):
                off += 1
        assert off >= 18

    def test_image_noise_identity_at_zero(self):
        imgs = [np.ones((5, 2))]
        out = perturb_images(imgs, 0.0, np.random.default_rng(0))
        assert np.array_equal(out[0], imgs[0])

    def test_projection_finite_on_fixtures(self):
        rt = prepare_case("cone_iv")
        rng = np.random.default_rng(3)
        pts = generate_critical_points("cone_iv", 10, rng, rt)
        images = project_scene(rt.cameras, pts)
        assert all(np.isfinite(im).all() for im in images)


class TestSweep:
    def test_record_count_and_consistency(self):
        cfg = ExperimentConfig(
            case_tag="quadric_v",
            seed=11,
            sigma_grid=SMALL_GRID,
            repeats=4,
            calibration_trials=30,
        )
        records, summary = run_sweep(cfg)
        assert len(records) == len(SMALL_GRID) * 4
        for ps in summary.per_sigma:
            assert ps["near"] + ps["far"] == 4
        for r in records:
            assert r.is_near == (r.distance < r.delta)

    def test_csv_round_trip_and_determinism(self, tmp_path):
        cfg = ExperimentConfig(
            case_tag="cone_iv",
            seed=13,
            sigma_grid=SMALL_GRID,
            repeats=2,
            calibration_trials=20,
        )
        records1, _ = run_sweep(cfg)
        records2, _ = run_sweep(cfg)
        assert records_to_csv(records1) == records_to_csv(records2)
        path = tmp_path / "out.csv"
        write_csv(path, records1)
        back = read_csv(path)
        assert [r.distance for r in back] == [r.distance for r in records1]
        with open(path) as fh:
            assert fh.readline().strip() == ",".join(CSV_HEADER)

    def test_summary_consistency(self):
        cfg = ExperimentConfig(
            case_tag="quadric_v",
            seed=17,
            sigma_grid=[0.1, 0.2],
            repeats=3,
            calibration_trials=20,
        )
        records, summary = run_sweep(cfg)
        again = summarize(records)
        assert again.per_sigma == summary.per_sigma


class TestCalibration:
    def test_calibration_smoke(self):
        cfg = ExperimentConfig(
            case_tag="scroll_i", seed=19, calibration_trials=40
        )
        m, delta = calibrate_delta(cfg)
        assert 0 < m < 1
        assert delta == pytest.approx(2 * m)

    def test_fixed_policy(self):
        cfg = ExperimentConfig(
            case_tag="scroll_i",
            seed=19,
            calibration_trials=10,
            delta_policy=("fixed", 0.03),
        )
        _, delta = calibrate_delta(cfg)
        assert delta == 0.03
