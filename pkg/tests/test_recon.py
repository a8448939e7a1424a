"""Tests for design-matrix assembly, estimation, and rank diagnostics."""

from fractions import Fraction

import numpy as np
import pytest

from critloci.critical import fixtures
from critloci.multiview import (
    Camera,
    OnCenter,
    degenerate_structure_check,
    trifocal_from_cameras,
    TrifocalTensor,
)
from critloci.recon import (
    assemble_MT,
    correspondences_from_scene,
    estimate_tensor,
    nullspace_tensors,
    rank_MT_diagnostic,
    tensor_distance,
)


def rand_cam(rng):
    while True:
        P = Camera.from_rows(
            [[Fraction(int(rng.integers(-9, 10))) for _ in range(5)] for _ in range(3)]
        )
        if P.rank() == 3:
            return P


def rand_scene(rng, n, cams):
    pts = []
    while len(pts) < n:
        X = tuple(Fraction(int(rng.integers(-9, 10))) for _ in range(5))
        if all(v == 0 for v in X):
            continue
        try:
            for P in cams:
                from critloci.multiview import project

                project(P, X)
        except OnCenter:
            continue
        pts.append(X)
    return pts


class TestCorrespondences:
    def test_exact_annihilation(self):
        rng = np.random.default_rng(0)
        cams = [rand_cam(rng) for _ in range(3)]
        T = trifocal_from_cameras(*cams)
        pts = rand_scene(rng, 20, cams)
        triples = correspondences_from_scene(cams, pts, rng)
        vec = T.flat()
        for t in triples:
            row = t.row()
            assert sum(a * b for a, b in zip(row, vec)) == 0

    def test_design_matrix_annihilates_true_tensor(self):
        rng = np.random.default_rng(1)
        cams = [rand_cam(rng) for _ in range(3)]
        T = trifocal_from_cameras(*cams)
        pts = rand_scene(rng, 30, cams)
        M = assemble_MT(correspondences_from_scene(cams, pts, rng))
        vec = T.flat()
        for row in M.rows:
            assert sum(a * b for a, b in zip(row, vec)) == 0

    def test_point_on_center_raises(self):
        cams = [
            Camera.from_rows([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]])
        ] * 3
        with pytest.raises(OnCenter):
            correspondences_from_scene(cams, [(0, 0, 0, 1, 0)], np.random.default_rng(0))

    def test_duplicated_triple_row(self):
        rng = np.random.default_rng(2)
        cams = [rand_cam(rng) for _ in range(3)]
        pts = rand_scene(rng, 1, cams)
        t = correspondences_from_scene(cams, pts, rng)[0]
        M = assemble_MT([t, t])
        assert M.rows[0] == M.rows[1]


class TestEstimation:
    def test_noiseless_recovery(self):
        rng = np.random.default_rng(3)
        cams = [rand_cam(rng) for _ in range(3)]
        T = trifocal_from_cameras(*cams)
        pts = rand_scene(rng, 40, cams)
        M = assemble_MT(correspondences_from_scene(cams, pts, rng))
        est = estimate_tensor(M)
        assert est.numerical_rank == 26
        assert est.unique
        assert tensor_distance(est.tensor, T) < 1e-9

    def test_insufficient_rows_not_unique(self):
        rng = np.random.default_rng(4)
        cams = [rand_cam(rng) for _ in range(3)]
        pts = rand_scene(rng, 10, cams)
        M = assemble_MT(correspondences_from_scene(cams, pts, rng))
        est = estimate_tensor(M)
        assert not est.unique
        assert est.numerical_rank <= 10

    def test_shared_rows_rank24_and_nullspace_pattern(self):
        rng = np.random.default_rng(5)
        r1 = tuple(int(rng.integers(-9, 10)) for _ in range(5))
        r2 = tuple(int(rng.integers(-9, 10)) for _ in range(5))
        P1 = Camera.from_rows([r1, r2, tuple(int(rng.integers(-9, 10)) for _ in range(5))])
        P2 = Camera.from_rows([r1, r2, tuple(int(rng.integers(-9, 10)) for _ in range(5))])
        P3 = rand_cam(rng)
        cams = [P1, P2, P3]
        pts = rand_scene(rng, 60, cams)
        M = assemble_MT(correspondences_from_scene(cams, pts, rng))
        est = estimate_tensor(M)
        assert est.numerical_rank == 24
        basis = nullspace_tensors(M)
        assert len(basis) == 3
        for t in basis:
            flat = TrifocalTensor(
                tuple(tuple(tuple(t[i][j][k] for k in range(3)) for j in range(3)) for i in range(3)),
                (2, 2, 1),
            )
            assert degenerate_structure_check(flat)

    def test_coplanar_scene_rank_deficient(self):
        rng = np.random.default_rng(6)
        cams = [rand_cam(rng) for _ in range(3)]
        pts = []
        while len(pts) < 50:
            X = (
                Fraction(int(rng.integers(-9, 10))),
                Fraction(int(rng.integers(-9, 10))),
                Fraction(int(rng.integers(-9, 10))),
                Fraction(0),
                Fraction(int(rng.integers(-9, 10))),
            )
            if all(v == 0 for v in X):
                continue
            try:
                from critloci.multiview import project

                for P in cams:
                    project(P, X)
            except OnCenter:
                continue
            pts.append(X)
        M = assemble_MT(correspondences_from_scene(cams, pts, rng))
        est = estimate_tensor(M)
        assert est.numerical_rank < 26
        assert not est.unique


class TestRowOracleCoherence:
    def test_row_dot_tensor_equals_oracle(self):
        from critloci.multiview import grassmann_det, line_through
        from critloci.recon import CorrespondenceTriple

        rng = np.random.default_rng(77)
        cams = [rand_cam(rng) for _ in range(3)]
        T = trifocal_from_cameras(*cams)
        vec = T.flat()
        for _ in range(10):
            x = tuple(Fraction(int(rng.integers(-9, 10))) for _ in range(3))
            y = tuple(Fraction(int(rng.integers(-9, 10))) for _ in range(3))
            z = tuple(Fraction(int(rng.integers(-9, 10))) for _ in range(3))
            w = tuple(Fraction(int(rng.integers(-9, 10))) for _ in range(3))
            try:
                pl = line_through(z, w)
            except Exception:
                continue
            row = CorrespondenceTriple(x, y, pl).row()
            lhs = sum(a * b for a, b in zip(row, vec))
            assert lhs == grassmann_det(cams, [x, y, (z, w)])


class TestDistance:
    def test_zero_on_same(self):
        rng = np.random.default_rng(7)
        T = trifocal_from_cameras(*(rand_cam(rng) for _ in range(3)))
        assert tensor_distance(T, T) == 0

    def test_antipodal(self):
        rng = np.random.default_rng(8)
        T = trifocal_from_cameras(*(rand_cam(rng) for _ in range(3)))
        neg = TrifocalTensor(
            tuple(
                tuple(tuple(-T.entries[i][j][k] for k in range(3)) for j in range(3))
                for i in range(3)
            ),
            T.profile,
        )
        assert tensor_distance(T, neg) == 0

    def test_orthogonal_basis_tensors(self):
        a = np.zeros((3, 3, 3))
        b = np.zeros((3, 3, 3))
        a[0, 0, 0] = 1.0
        b[1, 1, 1] = 1.0
        assert abs(tensor_distance(a, b) - np.sqrt(2)) < 1e-12

    def test_scale_invariance(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal((3, 3, 3))
        b = rng.standard_normal((3, 3, 3))
        assert abs(tensor_distance(a, b) - tensor_distance(3 * a, -7 * b)) < 1e-12


class TestRankDiagnostic:
    @pytest.mark.parametrize("tag", ["scroll_i", "cone_iv", "quadric_v"])
    def test_fixture_rank_26(self, tag):
        cfg = fixtures(tag)
        rng = np.random.default_rng(10)
        assert rank_MT_diagnostic(cfg.P, 50, rng) == 26

    def test_row_bound(self):
        rng = np.random.default_rng(11)
        cams = [rand_cam(rng) for _ in range(3)]
        assert rank_MT_diagnostic(cams, 10, rng) <= 10
