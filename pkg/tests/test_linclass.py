"""Tests for the matrix-of-linear-forms classification."""

from fractions import Fraction

import numpy as np
import pytest

from critloci import ratlin
from critloci.linclass import (
    FAMILY_A,
    FAMILY_B,
    FAMILY_C,
    FAMILY_D,
    FAMILY_S1,
    FAMILY_S2,
    FAMILY_S3,
    LEFT_3X2,
    NON_DEGENERATE,
    RIGHT_3X2,
    HypothesisViolated,
    InvalidParams,
    LinFormMatrix,
    NotReducible,
    apply_transform,
    build_family,
    classify_3x2,
    classify_4x3,
    family_realizable,
    maximal_minors_signed,
    random_4x3,
    random_linear_form,
    reduce_2x2,
    s1_matrix,
    skew_syzygy_matrix,
)
from critloci.poly import Poly, divide_exact, gcd_many, span_dimension

x1, x2, x3, x4, x5 = (Poly.var(i) for i in range(1, 6))
ALL_FAMILIES = [FAMILY_A, FAMILY_B, FAMILY_C, FAMILY_D, FAMILY_S1, FAMILY_S2, FAMILY_S3]
FAMILY_SEEDS = {tag: 137 + 31 * i for i, tag in enumerate(ALL_FAMILIES)}


def annihilates(minors, M):
    for j in range(M.cols):
        acc = Poly.zero()
        for i in range(M.rows):
            acc = acc + minors[i] * M.entries[i][j]
        if not acc.is_zero:
            return False
    return True


class TestSignedMinors:
    def test_koszul_2x1(self):
        M = LinFormMatrix.from_rows([[x1], [x2]])
        D = maximal_minors_signed(M)
        assert D == [x2, -x1]
        assert annihilates(D, M)

    def test_random_4x3_annihilation(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            M = random_4x3(rng)
            assert annihilates(maximal_minors_signed(M), M)

    def test_family_B_common_factor(self):
        rng = np.random.default_rng(1)
        N = build_family(FAMILY_B, rng=rng)
        n13 = N.entries[0][2]
        for d in maximal_minors_signed(N):
            assert divide_exact(d, n13) * n13 == d


class TestSkewSyzygy:
    def test_3x1(self):
        M = LinFormMatrix.from_rows([[x1], [x2], [x3 + x4]])
        D = skew_syzygy_matrix(M)
        for i in range(3):
            for j in range(3):
                assert D[i][j] == -D[j][i]

    def test_4x2_random(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            M = LinFormMatrix.from_rows(
                [[random_linear_form(rng) for _ in range(2)] for _ in range(4)]
            )
            try:
                D = skew_syzygy_matrix(M)
            except HypothesisViolated:
                continue
            for i in range(4):
                for j in range(4):
                    assert D[i][j] == -D[j][i]
                    if not D[i][j].is_zero:
                        assert D[i][j].homogeneous_degree() == 2

    def test_hypothesis_violated(self):
        M = LinFormMatrix.from_rows([[x1, 2 * x1], [x2, 2 * x2], [x3, 2 * x3], [x4, 2 * x4]])
        with pytest.raises(HypothesisViolated):
            skew_syzygy_matrix(M)


class TestReduce2x2:
    def test_already_dependent(self):
        A = LinFormMatrix.from_rows([[x1, Poly.zero()], [x2, x1]])
        res = reduce_2x2(A)
        assert span_dimension([res.matrix.entries[0][1], res.matrix.entries[1][1]]) <= 1

    def test_generic_split_determinant(self):
        rng = np.random.default_rng(3)
        hits = 0
        for _ in range(20):
            u, v = random_linear_form(rng), random_linear_form(rng)
            a11, a21 = random_linear_form(rng), random_linear_form(rng)
            # choose a12, a22 making det = u*v via the Koszul relation
            x1c, x2c, x3c = (int(rng.integers(-4, 5)) for _ in range(3))
            a22 = x2c * u + x3c * a21
            a12 = -x1c * u + x3c * a11
            A = LinFormMatrix.from_rows([[a11, a12], [a21, a22]])
            from critloci.poly import poly_det, quadric_rank

            d = poly_det(A.entries)
            if d.is_zero or quadric_rank(d) > 2:
                continue
            res = reduce_2x2(A)
            hits += 1
            col = [res.matrix.entries[0][1], res.matrix.entries[1][1]]
            assert span_dimension(col) <= 1
            assert res.matrix.entries == apply_transform(
                A, ratlin.identity(2), res.col_transform
            ).entries
        assert hits >= 10

    def test_not_reducible(self):
        A = LinFormMatrix.from_rows([[x1, x2], [x3, x4]])
        with pytest.raises(NotReducible):
            reduce_2x2(A)


class TestClassify3x2:
    def test_left_template(self):
        N = LinFormMatrix.from_rows([[Poly.zero(), x2], [Poly.zero(), x3], [x1, x4]])
        got = classify_3x2(N)
        assert got.family == LEFT_3X2
        assert got.canonical.entries[0][0].is_zero
        assert got.canonical.entries[1][0].is_zero

    def test_right_template(self):
        N = LinFormMatrix.from_rows([[Poly.zero(), x1], [x1, Poly.zero()], [x2, x3]])
        got = classify_3x2(N)
        assert got.family == RIGHT_3X2
        assert got.canonical.entries[0][1] == got.canonical.entries[1][0]

    def test_generic_nondegenerate(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            N = LinFormMatrix.from_rows(
                [[random_linear_form(rng) for _ in range(2)] for _ in range(3)]
            )
            got = classify_3x2(N)
            if got.family is not None:
                assert got.family == NON_DEGENERATE

    def test_scrambled_left(self):
        rng = np.random.default_rng(5)
        N = LinFormMatrix.from_rows([[Poly.zero(), x2 + x5], [Poly.zero(), x3], [x1, x4]])
        R = ratlin.mat([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
        C = ratlin.mat([[2, 1], [1, 1]])
        got = classify_3x2(apply_transform(N, R, C))
        assert got.family == LEFT_3X2


class TestClassify4x3:
    @pytest.mark.parametrize("tag", ALL_FAMILIES)
    def test_round_trip(self, tag):
        rng = np.random.default_rng(FAMILY_SEEDS[tag])
        for _ in range(10):
            N = build_family(tag, rng=rng)
            got = classify_4x3(N)
            assert got.family == tag, got.note
            _check_certificate(N, got)

    @pytest.mark.parametrize("tag", ALL_FAMILIES)
    def test_round_trip_scrambled(self, tag):
        rng = np.random.default_rng(1000 + FAMILY_SEEDS[tag])
        for _ in range(5):
            N = build_family(tag, rng=rng)
            R = _random_invertible(rng, 4)
            C = _random_invertible(rng, 3)
            got = classify_4x3(apply_transform(N, R, C))
            assert got.family == tag, got.note

    def test_generic_nondegenerate(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            got = classify_4x3(random_4x3(rng))
            assert got.family == NON_DEGENERATE

    def test_common_factor_degree(self):
        rng = np.random.default_rng(7)
        for tag, deg in [(FAMILY_A, 1), (FAMILY_B, 1), (FAMILY_C, 1), (FAMILY_D, 1),
                         (FAMILY_S1, 2), (FAMILY_S2, 2), (FAMILY_S3, 2)]:
            N = build_family(tag, rng=rng)
            got = classify_4x3(N)
            assert got.common_factor.degree() == deg

    def test_span_of_recovered_cofactors(self):
        rng = np.random.default_rng(8)
        for tag, dim in [(FAMILY_S1, 4), (FAMILY_S2, 3), (FAMILY_S3, 2)]:
            N = build_family(tag, rng=rng)
            got = classify_4x3(N)
            assert span_dimension(got.extras["ell"]) == dim

    def test_nc_with_beta_zero_shares_n31(self):
        n22, n31, n41, n42 = x2, x1, x4, x5
        N = LinFormMatrix.from_rows(
            [
                [Poly.zero(), Poly.zero(), n31],
                [Poly.zero(), n22, n41],
                [n31, Poly.zero(), Poly.zero()],
                [n41, n42, Poly.zero()],
            ]
        )
        for d in maximal_minors_signed(N):
            if not d.is_zero:
                assert divide_exact(d, n31) * n31 == d

    def test_family_realizable(self):
        assert not family_realizable(FAMILY_C)
        for tag in [FAMILY_A, FAMILY_B, FAMILY_D, FAMILY_S1, FAMILY_S2, FAMILY_S3]:
            assert family_realizable(tag)

    def test_invalid_params(self):
        with pytest.raises(InvalidParams):
            build_family(
                FAMILY_C,
                params={
                    "alpha": 0,
                    "beta": 0,
                    "n22": x2,
                    "n31": x1,
                    "n41": x4,
                    "n42": x5,
                },
            )

    def test_all_zero_flagged(self):
        z = Poly.zero()
        N = LinFormMatrix.from_rows([[z, z, z]] * 4)
        got = classify_4x3(N)
        assert got.specialized


class TestJsonRoundTrip:
    def test_round_trip(self):
        rng = np.random.default_rng(9)
        N = build_family(FAMILY_B, rng=rng)
        assert LinFormMatrix.loads(N.dumps()).entries == N.entries


def _random_invertible(rng, n):
    while True:
        M = [[Fraction(int(rng.integers(-4, 5))) for _ in range(n)] for _ in range(n)]
        if ratlin.det(M) != 0:
            return M


def _check_certificate(N, got):
    K = apply_transform(N, got.row_transform, got.col_transform)
    assert K.entries == got.canonical.entries
    assert ratlin.det(got.row_transform) != 0
    assert ratlin.det(got.col_transform) != 0
    minors = maximal_minors_signed(N)
    g = got.common_factor
    for d in minors:
        if not d.is_zero:
            assert divide_exact(d, g) * g == d
    ratio = gcd_many(minors)
    assert divide_exact(ratio, g).degree() == 0


class TestS1Fixture:
    def test_recorded_instance(self):
        # X1 from the cone worked example; ell_i = x_i
        ell = [x1, x2, x3, x4]
        X = [
            [0, 6, 0],
            [0, -3, 0],
            [1, 0, 0],
            [0, -3, 12],
            [0, 0, 0],
            [0, 0, 4],
        ]
        N = build_family(FAMILY_S1, params={"ell": ell, "X": X})
        got = classify_4x3(N)
        assert got.family == FAMILY_S1
        # recovered factorization reproduces the matrix exactly
        S1 = s1_matrix(got.extras["ell"])
        Xr = got.extras["X"]
        for i in range(4):
            for j in range(3):
                acc = Poly.zero()
                for k in range(6):
                    acc = acc + S1[i][k] * Xr[k][j]
                assert acc == N.entries[i][j]
