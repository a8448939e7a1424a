"""Tests for critical-matrix assembly, Schur reduction, and the fixtures."""

from fractions import Fraction

import numpy as np
import pytest

from critloci import ratlin
from critloci.critical import (
    CameraPairConfig,
    InvalidConfig,
    assemble_M,
    column_center_check,
    critical_point_test,
    fixtures,
    reduce_to_N,
)
from critloci.linclass import FAMILY_A, FAMILY_S1, FAMILY_S3
from critloci.loci import decompose, sample_component
from critloci.multiview import Camera, center
from critloci.poly import Poly, compose_linear, quadric_rank


def rand_cam(rng):
    while True:
        P = Camera.from_rows(
            [[Fraction(int(rng.integers(-9, 10))) for _ in range(5)] for _ in range(3)]
        )
        if P.rank() == 3:
            return P


def rand_config(rng):
    while True:
        try:
            return CameraPairConfig(
                tuple(rand_cam(rng) for _ in range(3)),
                tuple(rand_cam(rng) for _ in range(3)),
            )
        except InvalidConfig:
            continue


class TestAssemble:
    def test_block_structure(self):
        cfg = fixtures("scroll_i")
        M = assemble_M(cfg)
        assert len(M) == 9 and len(M[0]) == 8
        # first column carries P1 X in rows 0-2 and zeros below
        for r in range(3, 9):
            assert M[r][0].is_zero
        for r in range(3):
            assert not M[r][0].is_zero
        # constant Q-block
        for r in range(9):
            for c in range(3, 8):
                assert M[r][c].degree() <= 0

    def test_scalar_matrix_at_basis_point(self):
        cfg = fixtures("scroll_i")
        M = assemble_M(cfg)
        vals = [[e.evaluate((1, 0, 0, 0, 0)) for e in row] for row in M]
        assert all(isinstance(v, Fraction) for row in vals for v in row)

    def test_rank4_qstack_rejected(self):
        rng = np.random.default_rng(0)
        P = tuple(rand_cam(rng) for _ in range(3))
        Q1 = Camera.from_rows([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]])
        Q2 = Camera.from_rows([[1, 0, 0, 0, 0], [0, 0, 0, 1, 0], [0, 1, 0, 0, 0]])
        Q3 = Camera.from_rows([[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [1, 0, 0, 1, 0]])
        with pytest.raises(InvalidConfig):
            CameraPairConfig(P, (Q1, Q2, Q3))


class TestFixtureReduction:
    def test_scroll_is_family_A(self):
        rcm = reduce_to_N(fixtures("scroll_i"))
        assert rcm.classification.family == FAMILY_A

    def test_cone_is_S1X1_with_recorded_cone_equation(self):
        rcm = reduce_to_N(fixtures("cone_iv"))
        c = rcm.classification
        assert c.family == FAMILY_S1
        recorded = Poly.from_text("1*x1^2 + -2*x1*x2 + 3*x1*x3 + 1*x1*x4 + -6*x2*x3")
        from critloci.poly import divide_exact

        assert divide_exact(c.common_factor, recorded).degree() == 0

    def test_cone_worked_layout_recovers_recorded_X1(self):
        # the worked example's row layout puts rows (P1 r1, P1 r2, P2 r1, P3 r1)
        # on top; in that basis ell = lambda*(x1, x2, x3, x4) and X matches
        # the recorded X1 except for the sign of the (1,2) entry
        rcm = reduce_to_N(fixtures("cone_iv"), partition=(0, 1, 3, 6))
        c = rcm.classification
        assert c.family == FAMILY_S1
        ell = c.extras["ell"]
        lam = ell[0].as_linear()[0]
        assert lam != 0
        for i, l in enumerate(ell):
            assert l == lam * Poly.var(i + 1)
        X_scaled = [[lam * v for v in row] for row in c.extras["X"]]
        recorded = [
            [0, 6, 0],
            [0, -3, 0],
            [1, 0, 0],
            [0, -3, 12],
            [0, 0, 0],
            [0, 0, 4],
        ]
        mismatches = [
            (i, j)
            for i in range(6)
            for j in range(3)
            if X_scaled[i][j] != recorded[i][j]
        ]
        assert mismatches == [(0, 1)]
        assert X_scaled[0][1] == -recorded[0][1]

    def test_quadric_v_recorded_matrices_are_S3X3(self):
        # as recorded, these cameras have intersecting centers
        # C_P1 and C_P3 and reduce to the quadric-plus-plane family
        rcm = reduce_to_N(fixtures("quadric_v"))
        c = rcm.classification
        assert c.family == FAMILY_S3
        assert quadric_rank(c.common_factor) == 4
        cs = [center(P).basis for P in fixtures("quadric_v").P]
        joined = [list(b) for b in cs[0] + cs[2]]
        assert ratlin.rank(joined) == 3  # the two centers meet in a point

    def test_quadric_v_center_on_quadric(self):
        cfg = fixtures("quadric_v")
        rcm = reduce_to_N(cfg)
        q = rcm.classification.common_factor
        basis = center(cfg.P[1]).basis
        assert compose_linear(q, list(basis)).is_zero

    def test_column_center_checks(self):
        for tag in ("scroll_i", "cone_iv", "quadric_v"):
            cfg = fixtures(tag)
            rcm = reduce_to_N(cfg)
            assert column_center_check(rcm, cfg)["ok"]

    def test_cone_centers_on_cone(self):
        cfg = fixtures("cone_iv")
        q = reduce_to_N(cfg).classification.common_factor
        for P in cfg.P:
            assert compose_linear(q, list(center(P).basis)).is_zero

    def test_scroll_centers_on_scroll(self):
        cfg = fixtures("scroll_i")
        dec = decompose(reduce_to_N(cfg).classification)
        minors = dec.component("CubicScroll").generators
        for P in cfg.P:
            basis = list(center(P).basis)
            assert all(compose_linear(m, basis).is_zero for m in minors)


class TestCriticalPointTest:
    def test_agreement_with_N_rank(self):
        cfg = fixtures("scroll_i")
        rcm = reduce_to_N(cfg)
        rng = np.random.default_rng(1)
        from critloci.loci import matrix_rank_at

        for _ in range(30):
            X = tuple(Fraction(int(rng.integers(-9, 10))) for _ in range(5))
            if all(v == 0 for v in X):
                continue
            is_crit, _ = critical_point_test(cfg, X)
            assert is_crit == (matrix_rank_at(rcm.N, X) <= 2)

    def test_sampled_points_critical(self):
        cfg = fixtures("scroll_i")
        rcm = reduce_to_N(cfg)
        dec = decompose(rcm.classification)
        rng = np.random.default_rng(2)
        pts = sample_component(dec.component("CubicScroll"), 5, rng)
        for p in pts:
            assert critical_point_test(cfg, p)[0]

    def test_center_point_flagged(self):
        cfg = fixtures("scroll_i")
        b = center(cfg.P[0]).basis[0]
        is_crit, flag = critical_point_test(cfg, b)
        assert is_crit and flag == "on_center"


class TestPartitionInvariance:
    def test_two_partitions_same_family(self):
        cfg = fixtures("cone_iv")
        first = reduce_to_N(cfg)
        other = reduce_to_N(cfg, partition=(0, 1, 3, 6))
        assert first.classification.family == other.classification.family
        assert (
            first.classification.common_factor.degree()
            == other.classification.common_factor.degree()
        )


class TestFamilyCNeverArises:
    def test_random_configs(self):
        rng = np.random.default_rng(3)
        for _ in range(15):
            cfg = rand_config(rng)
            try:
                rcm = reduce_to_N(cfg)
            except Exception:
                continue
            assert rcm.classification.family != "C"


class TestJson:
    def test_round_trip(self):
        cfg = fixtures("cone_iv")
        back = CameraPairConfig.loads(cfg.dumps())
        assert back.P[2].rows == cfg.P[2].rows
        assert back.Q[1].rows == cfg.Q[1].rows
