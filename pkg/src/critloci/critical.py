"""Critical matrices for two camera triples and their 4x3 reduction.

A scene point X is critical for the pair of triples (P_i), (Q_i) exactly
when the 9x8 matrix M(X) drops rank, where M stacks one 3-row block per
view: block i carries P_i X in column i and Q_i in the last five columns.
Eliminating the constant block by a Schur complement against an invertible
5x5 minor of the Q-stack yields a 4x3 matrix N of linear forms whose
maximal minors cut the same locus; N is then classified by linclass.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import ratlin
from .linclass import Canonicalization, LinFormMatrix, classify_4x3
from .multiview import Camera, center
from .poly import Poly, linear_form

CASE_TAGS = ("scroll_i", "cone_iv", "quadric_v", "quadric_v_model")


class InvalidConfig(ValueError):
    """Camera pair violates the rank hypotheses."""


class NoInvertibleBlock(ValueError):
    """No 4+5 row split exposes an invertible constant block."""


class CenterMismatch(ValueError):
    """A column of N fails to vanish on its camera center."""


@dataclass(frozen=True)
class CameraPairConfig:
    P: tuple[Camera, Camera, Camera]
    Q: tuple[Camera, Camera, Camera]

    def __post_init__(self):
        for cam in self.P + self.Q:
            if cam.rank() != 3:
                raise InvalidConfig("all cameras must have rank 3")
        stacked = [list(r) for cam in self.Q for r in cam.rows]
        if ratlin.rank(stacked) != 5:
            raise InvalidConfig("stacked Q matrix must have rank 5")

    def to_json(self) -> dict:
        return {
            "P": [[[str(Fraction(x)) for x in r] for r in cam.rows] for cam in self.P],
            "Q": [[[str(Fraction(x)) for x in r] for r in cam.rows] for cam in self.Q],
        }

    @staticmethod
    def from_json(data: dict) -> "CameraPairConfig":
        def cams(key):
            return tuple(
                Camera.from_rows([[Fraction(x) for x in r] for r in rows])
                for rows in data[key]
            )

        return CameraPairConfig(cams("P"), cams("Q"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @staticmethod
    def loads(text: str) -> "CameraPairConfig":
        return CameraPairConfig.from_json(json.loads(text))


@dataclass
class ReducedCriticalMatrix:
    N: LinFormMatrix
    row_partition: tuple[tuple[int, ...], tuple[int, ...]]
    D_inverse: ratlin.Mat
    classification: Canonicalization


def assemble_M(cfg: CameraPairConfig) -> list[list[Poly]]:
    """The 9x8 matrix of degree-<=1 polynomials from Eq.-style stacking."""
    M: list[list[Poly]] = []
    for i, (P, Q) in enumerate(zip(cfg.P, cfg.Q)):
        for r in range(3):
            row = [Poly.zero()] * 3
            row[i] = linear_form(P.rows[r])
            row.extend(Poly.const(x) for x in Q.rows[r])
            M.append(row)
    return M


def reduce_to_N(
    cfg: CameraPairConfig, partition: tuple[int, ...] | None = None
) -> ReducedCriticalMatrix:
    """Schur-reduce M to a 4x3 matrix of linear forms and classify it.

    Row partitions (4 rows for the A/B blocks, 5 for C/D) are searched in
    lexicographic order; the first making the constant 5x5 block D
    invertible wins.  An explicit 4-row partition can be forced instead;
    different valid partitions give N's equivalent under constant row and
    column operations.
    """
    M = assemble_M(cfg)
    candidates = (
        [tuple(partition)] if partition is not None else itertools.combinations(range(9), 4)
    )
    for top in candidates:
        bottom = tuple(i for i in range(9) if i not in top)
        D = [[M[i][j].coeff((0, 0, 0, 0, 0)) for j in range(3, 8)] for i in bottom]
        Dinv = ratlin.inverse(D)
        if Dinv is None:
            continue
        A = [[M[i][j] for j in range(3)] for i in top]
        B = [[M[i][j].coeff((0, 0, 0, 0, 0)) for j in range(3, 8)] for i in top]
        C = [[M[i][j] for j in range(3)] for i in bottom]
        BD = ratlin.mat_mul(B, Dinv)
        N_rows = []
        for r in range(4):
            row = []
            for c in range(3):
                acc = A[r][c]
                for k in range(5):
                    acc = acc - BD[r][k] * C[k][c]
                row.append(acc)
            N_rows.append(row)
        N = LinFormMatrix.from_rows(N_rows)
        return ReducedCriticalMatrix(
            N, (top, bottom), Dinv, classify_4x3(N)
        )
    raise NoInvertibleBlock("no row partition exposes an invertible 5x5 block")


def _exact_point(X) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in X)


def critical_point_test(cfg: CameraPairConfig, X: Sequence, tol: float = 1e-8):
    """True iff rank M(X) <= 7, i.e. X lies in the critical locus.

    Exact over rationals; a singular-value ratio threshold otherwise.
    A point killing an entire P-block (X on a P-center) trivially drops
    rank and is reported as (True, "on_center").
    """
    M = assemble_M(cfg)
    vals = [[e.evaluate(tuple(X)) for e in row] for row in M]
    flag = ""
    for i in range(3):
        block = [vals[3 * i + r][i] for r in range(3)]
        if all(v == 0 for v in block):
            flag = "on_center"
    if _exact_point(X):
        rank = ratlin.rank([[ratlin.frac(v) for v in row] for row in vals])
        return rank <= 7, flag
    arr = np.array(vals, dtype=float)
    s = np.linalg.svd(arr, compute_uv=False)
    return bool(s[7] <= tol * s[0]), flag


def column_center_check(rcm: ReducedCriticalMatrix, cfg: CameraPairConfig) -> dict:
    """Each column of N vanishes on its camera's center; spans are <= 3."""
    from .poly import span_dimension

    report = {"columns": [], "ok": True}
    for i in range(3):
        col = rcm.N.column(i)
        C = center(cfg.P[i])
        vanishes = all(
            e.evaluate(b) == 0 for e in col for b in C.basis
        )
        span = span_dimension(col)
        report["columns"].append({"vanishes_on_center": vanishes, "span": span})
        if not vanishes or span > 3:
            report["ok"] = False
    if not report["ok"]:
        raise CenterMismatch(json.dumps(report))
    return report


# -- the worked camera fixtures ------------------------------------------------


def _cam(rows) -> Camera:
    return Camera.from_rows([[Fraction(x) for x in r] for r in rows])


_FIXTURES = {
    "scroll_i": (
        (
            [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]],
            [[1, 0, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]],
            [
                [Fraction(10158, 25), 729, 4050, Fraction(31152, 5), -3645],
                [608, Fraction(-13692, 25), 1900, 836, Fraction(13692, 5)],
                [288, 162, Fraction(258, 25), 396, -810],
            ],
        ),
        (
            [[-1, 0, -1, 0, 0], [0, -1, 0, -1, 0], [0, 0, 0, 0, -1]],
            [
                [0, 0, Fraction(55, 51), Fraction(-75, 34), Fraction(-625, 51)],
                [1, 0, 0, 0, 0],
                [0, 1, 0, 0, 0],
            ],
            [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]],
        ),
    ),
    "cone_iv": (
        (
            [[0, 1, -6, -2, 4], [-1, 0, -15, -5, 10], [0, 0, -3, -1, 2]],
            [[-35, -42, -47, 13, -32], [-8, -12, -11, 4, -8], [-2, -3, -2, 1, -2]],
            [[-2, 3, -12, 6, 3], [4, 6, 0, -8, 6], [2, 3, 0, -2, 3]],
        ),
        (
            [[2, 1, -4, 1, -2], [5, -2, 8, 0, 0], [1, 0, 0, 0, 0]],
            [[0, 5, -4, 3, -6], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]],
            [[0, 1, -4, -2, 5], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]],
        ),
    ),
    "quadric_v": (
        (
            [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]],
            [[0, 0, 0, 1, 0], [0, 0, 0, 0, 1], [1, 1, 1, 0, 0]],
            [[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [1, 1, 1, 1, 0]],
        ),
        (
            [[-1, 0, 0, 0, 0], [0, 0, -1, 0, 0], [0, 0, 0, -1, 0]],
            [[0, 0, 0, 0, -1], [1, 0, 0, 0, 0], [0, 1, 0, 0, 0]],
            [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]],
        ),
    ),
    # A verified smooth-quadric configuration: the recorded quadric-case
    # matrices have intersecting centers C_P1 and C_P3 and reduce to the
    # quadric-plus-plane family instead (see tests).  This pair is built
    # with the constructive recipe for the smooth-quadric case (camera row
    # spans {f_i} + two of {l_2, l_3, l_4}, companions from the Schur
    # factors) and satisfies every property the quadric case asserts:
    # S2X2 reduction, rank-5 quadric, pairwise skew centers lying on it.
    "quadric_v_model": (
        (
            [[-4, 1, -2, -3, 1], [3, 2, 4, -3, 3], [-3, 0, 4, 1, -1]],
            [[-3, -2, -4, 3, -3], [-2, 1, -2, -3, 2], [3, -2, -4, -2, -1]],
            [[-1, 2, 2, 4, -1], [3, 0, -4, -1, 1], [-3, 2, 4, 2, 1]],
        ),
        (
            [[-1, 0, -1, 0, 0], [0, 0, 0, 0, -1], [0, -1, 0, 0, 0]],
            [[0, 0, 0, -1, 0], [1, 0, 0, 0, 0], [0, 1, 0, 0, 0]],
            [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]],
        ),
    ),
}


def fixtures(case_tag: str) -> CameraPairConfig:
    """The recorded camera pairs for the three worked instability cases."""
    if case_tag not in _FIXTURES:
        raise ValueError(f"unknown fixture {case_tag!r}; pick one of {CASE_TAGS}")
    ps, qs = _FIXTURES[case_tag]
    return CameraPairConfig(tuple(_cam(r) for r in ps), tuple(_cam(r) for r in qs))
