"""Classification of matrices of linear forms that drop rank in codimension 1.

A 4x3 matrix N of linear forms on P^4 whose maximal minors share a common
factor falls, up to invertible constant row/column operations (R, C), into
one of four canonical families when the factor is linear (A, B, C, D) or
three product families S_i * X_i when it is quadratic (S1X1, S2X2, S3X3).

classify_4x3 detects the family with exact rational linear algebra and
returns an auditable certificate: canonical = R * N * C holds as an exact
polynomial identity.  Inputs that violate the genericity the canonical
forms presume are returned with specialized=True instead of being forced
into a family.

The degree-1 decision is driven by divisibility spaces, all computed
exactly:

  V_g = {v : g divides every entry of N v}   (thin columns)
  U_g = {u : g divides every entry of u^T N} (thin rows)

where g is the gcd of the maximal minors.  Generic members satisfy
dim V_g = 1 for family A, and (dim U_g) = 2, 1, 0 for B, C, D.  Family C
additionally requires factoring the reducible-minor structure of a 3x2
submatrix; family D routes through the 3x2 classification.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import ratlin
from .poly import (
    Poly,
    divide_exact,
    gcd,
    gcd_many,
    linear_form,
    poly_det,
    poly_sqrt,
    quadric_rank,
    split_quadric,
)

log = logging.getLogger(__name__)

SUPPORTED_SHAPES = {(2, 1), (2, 2), (3, 1), (3, 2), (4, 2), (4, 3)}

FAMILY_A = "A"
FAMILY_B = "B"
FAMILY_C = "C"
FAMILY_D = "D"
FAMILY_S1 = "S1X1"
FAMILY_S2 = "S2X2"
FAMILY_S3 = "S3X3"
NON_DEGENERATE = "NonDegenerate"
LEFT_3X2 = "3x2_left"
RIGHT_3X2 = "3x2_right"

REALIZABLE = {
    FAMILY_A: True,
    FAMILY_B: True,
    FAMILY_C: False,
    FAMILY_D: True,
    FAMILY_S1: True,
    FAMILY_S2: True,
    FAMILY_S3: True,
}


class HypothesisViolated(ValueError):
    """A submatrix drops rank in codimension 1 where the lemma forbids it."""


class NotReducible(ValueError):
    """det of the 2x2 block is an irreducible quadric (rank > 2)."""


class NotReducibleOverQ(NotReducible):
    """Rank <= 2 quadric that only splits over an extension of Q."""


class InvalidParams(ValueError):
    """build_family parameters violate the template's independence needs."""


@dataclass(frozen=True)
class LinFormMatrix:
    """Rectangular matrix whose entries are homogeneous linear forms."""

    entries: tuple[tuple[Poly, ...], ...]

    def __post_init__(self):
        shape = (self.rows, self.cols)
        if shape not in SUPPORTED_SHAPES:
            raise ValueError(f"unsupported shape {shape}")
        for row in self.entries:
            for p in row:
                if not p.is_zero and p.homogeneous_degree() != 1:
                    raise ValueError("entries must be linear forms or zero")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Poly]]) -> "LinFormMatrix":
        return LinFormMatrix(tuple(tuple(r) for r in rows))

    def column(self, j: int) -> list[Poly]:
        return [row[j] for row in self.entries]

    def row(self, i: int) -> list[Poly]:
        return list(self.entries[i])

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [
                [[str(c) for c in p.as_linear()] for p in row]
                for row in self.entries
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "LinFormMatrix":
        entries = [
            [linear_form([Fraction(c) for c in coeffs]) for coeffs in row]
            for row in data["entries"]
        ]
        m = LinFormMatrix.from_rows(entries)
        if (m.rows, m.cols) != (data["rows"], data["cols"]):
            raise ValueError("inconsistent dimensions in fixture")
        return m

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @staticmethod
    def loads(text: str) -> "LinFormMatrix":
        return LinFormMatrix.from_json(json.loads(text))


@dataclass
class Canonicalization:
    """Result of classifying a matrix of linear forms.

    canonical = row_transform * N * col_transform holds exactly; for
    specialized (flagged) results family is None and the transforms are
    identities.
    """

    family: str | None
    row_transform: ratlin.Mat
    col_transform: ratlin.Mat
    canonical: LinFormMatrix
    common_factor: Poly
    extras: dict = field(default_factory=dict)
    specialized: bool = False
    note: str = ""


@dataclass
class Reduce2x2Result:
    matrix: LinFormMatrix
    col_transform: ratlin.Mat
    constants: dict
    thin_column: int


# -- elementary helpers -------------------------------------------------------


def apply_transform(
    N: LinFormMatrix, R: Sequence[Sequence], C: Sequence[Sequence]
) -> LinFormMatrix:
    """R * N * C for constant rational R (rows x rows) and C (cols x cols)."""
    R = ratlin.mat(R)
    C = ratlin.mat(C)
    mid = [
        [
            sum((R[i][k] * N.entries[k][j] for k in range(N.rows)), Poly.zero())
            for j in range(N.cols)
        ]
        for i in range(len(R))
    ]
    out = [
        [
            sum((mid[i][k] * C[k][j] for k in range(N.cols)), Poly.zero())
            for j in range(len(C[0]))
        ]
        for i in range(len(mid))
    ]
    return LinFormMatrix.from_rows(out)


def _restrict_mod(p: Poly, g: Poly) -> Poly:
    """p restricted to the hyperplane {g = 0}; zero iff g divides p."""
    coeffs = g.as_linear()
    k = next(i for i, c in enumerate(coeffs) if c)
    basis = []
    for t in range(5):
        if t == k:
            continue
        v = [Fraction(0)] * 5
        v[t] = Fraction(1)
        v[k] = -coeffs[t] / coeffs[k]
        basis.append(v)
    from .poly import compose_linear

    return compose_linear(p, basis)


def _div_space_rows(N: LinFormMatrix, g: Poly) -> list[ratlin.Vec]:
    """Basis of {u : g divides every entry of u^T N}."""
    reduced = [[_restrict_mod(p, g) for p in row] for row in N.entries]
    eqs: list[list[Fraction]] = []
    for j in range(N.cols):
        monomials = set()
        for i in range(N.rows):
            monomials |= set(reduced[i][j].terms)
        for mono in monomials:
            eqs.append([reduced[i][j].coeff(mono) for i in range(N.rows)])
    if not eqs:
        return ratlin.kernel_basis([[Fraction(0)] * N.rows])
    return ratlin.kernel_basis(eqs)


def _div_space_cols(N: LinFormMatrix, g: Poly) -> list[ratlin.Vec]:
    """Basis of {v : g divides every entry of N v}."""
    reduced = [[_restrict_mod(p, g) for p in row] for row in N.entries]
    eqs: list[list[Fraction]] = []
    for i in range(N.rows):
        monomials = set()
        for j in range(N.cols):
            monomials |= set(reduced[i][j].terms)
        for mono in monomials:
            eqs.append([reduced[i][j].coeff(mono) for j in range(N.cols)])
    if not eqs:
        return ratlin.kernel_basis([[Fraction(0)] * N.cols])
    return ratlin.kernel_basis(eqs)


def _poly_div_space(quadrics: Sequence[Poly], g: Poly) -> list[ratlin.Vec]:
    """Basis of {c : g divides sum_i c_i quadrics_i}."""
    reduced = [_restrict_mod(q, g) for q in quadrics]
    monomials = set()
    for q in reduced:
        monomials |= set(q.terms)
    eqs = [[q.coeff(mono) for q in reduced] for mono in monomials]
    if not eqs:
        eqs = [[Fraction(0)] * len(quadrics)]
    return ratlin.kernel_basis(eqs)


def _proportionality(f: Poly, h: Poly) -> Fraction | None:
    """alpha with f = alpha*h, or None (h must be nonzero)."""
    if h.is_zero:
        raise ValueError("h is zero")
    e, c = h.lead_term()
    alpha = f.coeff(e) / c
    return alpha if f == alpha * h else None


def _combine(forms: Sequence[Poly], coeffs: Sequence[Fraction]) -> Poly:
    acc = Poly.zero()
    for f, c in zip(forms, coeffs):
        acc = acc + c * f
    return acc


def _solve_form_system(
    columns: Sequence[Poly], target: Poly
) -> list[Fraction] | None:
    """Solve sum_j x_j columns_j = target for rational x, exactly."""
    monomials = set(target.terms)
    for p in columns:
        monomials |= set(p.terms)
    monos = sorted(monomials)
    A = [[p.coeff(m) for p in columns] for m in monos]
    b = [target.coeff(m) for m in monos]
    return ratlin.solve(A, b)


# -- signed maximal minors and the skew syzygy matrix -------------------------


def maximal_minors_signed(M: LinFormMatrix) -> list[Poly]:
    """Signed maximal minors D of an (n+1) x n matrix, with D * M = 0."""
    n1, n = M.rows, M.cols
    if n1 != n + 1:
        raise ValueError("matrix must have one more row than columns")
    out = []
    for i in range(n1):
        sub = [M.row(r) for r in range(n1) if r != i]
        d = poly_det(sub)
        out.append(d if i % 2 == 0 else -d)
    return out


def skew_syzygy_matrix(M: LinFormMatrix) -> list[list[Poly]]:
    """The (n+2) x (n+2) skew matrix of signed complementary minors.

    Requires every (n+1) x n submatrix of M to have maximal minors with a
    constant gcd; the result D is skew-symmetric, homogeneous of degree n,
    and satisfies D * M = 0.
    """
    n2, n = M.rows, M.cols
    if n2 != n + 2 or n > 2:
        raise ValueError("expected an (n+2) x n matrix with n <= 2")
    for i in range(n2):
        sub = LinFormMatrix.from_rows([M.row(r) for r in range(n2) if r != i])
        minors = maximal_minors_signed(sub)
        if all(p.is_zero for p in minors) or gcd_many(minors).degree() != 0:
            raise HypothesisViolated(
                f"submatrix omitting row {i + 1} drops rank in codimension 1"
            )
    D = [[Poly.zero()] * n2 for _ in range(n2)]
    for i in range(n2):
        for j in range(i + 1, n2):
            sub = [M.row(r) for r in range(n2) if r not in (i, j)]
            d = poly_det(sub)
            if (i + j) % 2:
                d = -d
            D[i][j] = d
            D[j][i] = -d
    # D * M = 0 is the lemma's content; keep it as a cheap internal check
    for i in range(n2):
        for j in range(n):
            acc = sum((D[i][k] * M.entries[k][j] for k in range(n2)), Poly.zero())
            if not acc.is_zero:
                raise AssertionError("skew syzygy matrix failed to annihilate M")
    return D


# -- 2x2 reduction (determinant a product of linear forms) --------------------


def reduce_2x2(A: LinFormMatrix) -> Reduce2x2Result:
    """Column operation making one column's entries linearly dependent.

    Requires det(A) to split as a product of two linear forms over Q.
    """
    if (A.rows, A.cols) != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    a11, a12 = A.entries[0]
    a21, a22 = A.entries[1]
    from .poly import span_dimension

    if span_dimension([a12, a22]) <= 1:
        return Reduce2x2Result(A, ratlin.identity(2), {}, 1)
    if span_dimension([a11, a21]) <= 1:
        C = ratlin.mat([[0, 1], [1, 0]])
        return Reduce2x2Result(apply_transform(A, ratlin.identity(2), C), C, {}, 1)
    d = poly_det(A.entries)
    if d.is_zero:
        # columns proportional by a constant; subtract it off
        alpha = _proportionality(a12, a11)
        if alpha is not None and a22 == alpha * a21:
            C = ratlin.mat([[1, -alpha], [0, 1]])
            return Reduce2x2Result(
                apply_transform(A, ratlin.identity(2), C), C, {"alpha": alpha}, 1
            )
        raise NotReducible("zero determinant without constant column relation")
    if quadric_rank(d) > 2:
        raise NotReducible("det(A) is an irreducible quadric (rank > 2)")
    factors = split_quadric(d)
    if factors is None:
        raise NotReducibleOverQ("det(A) only factors over an extension of Q")
    u, v = factors
    # prefer the branch where a factor lies in the span of the first column
    for uu, vv in ((u, v), (v, u)):
        sol = _solve_form_system([a11, a21], uu)
        if sol is not None:
            alpha, beta = sol
            gamma_sol = _solve_form_system([a21, vv], a22)
            if gamma_sol is None or gamma_sol[1] != alpha:
                continue
            gamma = gamma_sol[0]
            if a12 != -beta * vv + gamma * a11:
                continue
            C = ratlin.mat([[1, -gamma], [0, 1]])
            return Reduce2x2Result(
                apply_transform(A, ratlin.identity(2), C),
                C,
                {"alpha": alpha, "beta": beta, "gamma": gamma},
                1,
            )
    # generic branch: a11, a21, u independent; Koszul syzygies give constants
    for uu, vv in ((u, v), (v, u)):
        K = [
            [Poly.zero(), uu, a21],
            [-uu, Poly.zero(), a11],
            [a21, a11, Poly.zero()],
        ]
        # solve the stacked system (a22, a12, v)^T = K (x1, x2, x3)^T
        monos = set()
        for row in K:
            for p in row:
                monos |= set(p.terms)
        for p in (a22, a12, vv):
            monos |= set(p.terms)
        monos = sorted(monos)
        Amat = []
        bvec = []
        for r, target in enumerate((a22, a12, vv)):
            for m in monos:
                Amat.append([K[r][c].coeff(m) for c in range(3)])
                bvec.append(target.coeff(m))
        sol = ratlin.solve(Amat, bvec)
        if sol is None:
            continue
        x1, x2, x3 = sol
        C = ratlin.mat([[1, -x3], [0, 1]])
        reduced = apply_transform(A, ratlin.identity(2), C)
        if span_dimension([reduced.entries[0][1], reduced.entries[1][1]]) <= 1:
            return Reduce2x2Result(
                reduced, C, {"x1": x1, "x2": x2, "x3": x3}, 1
            )
    raise NotReducible("no reducing column operation found")


# -- 3x2 classification ---------------------------------------------------------


def classify_3x2(N: LinFormMatrix) -> Canonicalization:
    """Canonical form of a 3x2 matrix whose minors share a linear factor."""
    if (N.rows, N.cols) != (3, 2):
        raise ValueError("expected a 3x2 matrix")
    minors = maximal_minors_signed(N)
    if all(p.is_zero for p in minors):
        return _specialized(N, "all maximal minors vanish")
    g = gcd_many(minors)
    if g.degree() == 0:
        return Canonicalization(
            NON_DEGENERATE, ratlin.identity(3), ratlin.identity(2), N, Poly.one()
        )
    if g.degree() != 1:
        return _specialized(N, f"minor gcd has degree {g.degree()}")
    Vg = _div_space_cols(N, g)
    if len(Vg) == 1:
        v = Vg[0]
        col = poly_col(N, v)
        w = _constants_over(col, g)
        if w is None or all(x == 0 for x in w):
            return _specialized(N, "thin column is not a multiple of the gcd")
        basis = ratlin.complete_rows_to_basis([v], 2)
        C = ratlin.transpose([v, basis[1]])
        R = ratlin.map_vector_to_unit(w, 2)
        K = apply_transform(N, R, C)
        if K.entries[0][0].is_zero and K.entries[1][0].is_zero:
            return Canonicalization(LEFT_3X2, R, C, K, g)
        return _specialized(N, "left 3x2 template verification failed")
    Ug = _div_space_rows(N, g)
    if len(Ug) == 2:
        u1, u2 = Ug
        w1 = _constants_over(poly_row(N, u1), g)
        w2 = _constants_over(poly_row(N, u2), g)
        if w1 is None or w2 is None:
            return _specialized(N, "thin rows are not multiples of the gcd")
        if ratlin.rank([w1, w2]) < 2:
            return _specialized(N, "thin row directions are dependent")
        R = ratlin.complete_rows_to_basis([u1, u2], 3)
        Winv = ratlin.inverse([w1, w2])
        assert Winv is not None
        C = ratlin.mat_mul(Winv, [[0, 1], [1, 0]])
        K = apply_transform(N, R, C)
        if (
            K.entries[0][0].is_zero
            and K.entries[1][1].is_zero
            and K.entries[0][1] == K.entries[1][0]
        ):
            return Canonicalization(RIGHT_3X2, R, C, K, g)
        return _specialized(N, "right 3x2 template verification failed")
    return _specialized(N, f"thin row space has dimension {len(Ug)}")


def poly_col(N: LinFormMatrix, v: Sequence[Fraction]) -> list[Poly]:
    return [_combine(N.row(i), v) for i in range(N.rows)]


def poly_row(N: LinFormMatrix, u: Sequence[Fraction]) -> list[Poly]:
    return [_combine(N.column(j), u) for j in range(N.cols)]


def _constants_over(forms: Sequence[Poly], g: Poly) -> list[Fraction] | None:
    """Constants w with forms[i] = w[i]*g, or None."""
    out = []
    for f in forms:
        if f.is_zero:
            out.append(Fraction(0))
            continue
        alpha = _proportionality(f, g)
        if alpha is None:
            return None
        out.append(alpha)
    return out


def _specialized(N: LinFormMatrix, note: str) -> Canonicalization:
    log.debug("specialized input: %s", note)
    return Canonicalization(
        None,
        ratlin.identity(N.rows),
        ratlin.identity(N.cols),
        N,
        Poly.zero(),
        specialized=True,
        note=note,
    )


# -- 4x3 classification ----------------------------------------------------------


def classify_4x3(N: LinFormMatrix) -> Canonicalization:
    """Classify a 4x3 matrix of linear forms by its minors' common factor."""
    if (N.rows, N.cols) != (4, 3):
        raise ValueError("expected a 4x3 matrix")
    minors = maximal_minors_signed(N)
    if all(p.is_zero for p in minors):
        return _specialized(N, "all maximal minors vanish")
    g = gcd_many(minors)
    deg = g.degree()
    if deg == 0:
        return Canonicalization(
            NON_DEGENERATE, ratlin.identity(4), ratlin.identity(3), N, Poly.one()
        )
    if deg == 1:
        return _classify_deg1(N, minors, g)
    if deg == 2:
        return _classify_deg2(N, minors, g)
    return _specialized(N, f"minor gcd has degree {deg}")


def _verified(
    N: LinFormMatrix,
    family: str,
    R: ratlin.Mat,
    C: ratlin.Mat,
    K: LinFormMatrix,
    g: Poly,
    extras: dict | None = None,
) -> Canonicalization:
    """Final certificate check shared by all branches."""
    if ratlin.det(R) == 0 or ratlin.det(C) == 0:
        return _specialized(N, f"{family}: singular transform")
    if apply_transform(N, R, C).entries != K.entries:
        return _specialized(N, f"{family}: certificate mismatch")
    for d in maximal_minors_signed(N):
        if not d.is_zero:
            divide_exact(d, g)  # raises if the common factor fails to divide
    return Canonicalization(family, R, C, K, g, extras=extras or {})


def _classify_deg1(N: LinFormMatrix, minors: list[Poly], g: Poly) -> Canonicalization:
    P = [divide_exact(d, g) for d in minors]

    Vg = _div_space_cols(N, g)
    if len(Vg) >= 1:
        if len(Vg) > 1:
            return _specialized(N, "multiple thin columns for a degree-1 gcd")
        v = Vg[0]
        col = poly_col(N, v)
        w = _constants_over(col, g)
        if w is None or all(x == 0 for x in w):
            return _specialized(N, "thin column is not a multiple of the gcd")
        basis = ratlin.complete_rows_to_basis([v], 3)
        C = ratlin.transpose([basis[1], basis[2], v])
        R = ratlin.map_vector_to_unit(w, 3)
        K = apply_transform(N, R, C)
        if not all(K.entries[i][2].is_zero for i in range(3)):
            return _specialized(N, "A: template verification failed")
        return _verified(N, FAMILY_A, R, C, K, g)

    Ug = _div_space_rows(N, g)
    if len(Ug) == 2:
        return _classify_B(N, g, Ug)
    if len(Ug) == 1:
        return _classify_C(N, g, Ug[0])
    if len(Ug) == 0:
        return _classify_D(N, g, P)
    return _specialized(N, f"thin row space has dimension {len(Ug)}")


def _classify_B(N: LinFormMatrix, g: Poly, Ug: list[ratlin.Vec]) -> Canonicalization:
    u1, u2 = Ug
    w1 = _constants_over(poly_row(N, u1), g)
    w2 = _constants_over(poly_row(N, u2), g)
    if w1 is None or w2 is None:
        return _specialized(N, "B: thin rows are not multiples of the gcd")
    if ratlin.rank([w1, w2]) < 2:
        return _specialized(N, "B: thin row directions are dependent")
    R = ratlin.complete_rows_to_basis([u1, u2], 4)
    W = ratlin.complete_rows_to_basis([w1, w2], 3)
    Winv = ratlin.inverse(W)
    assert Winv is not None
    C = ratlin.mat_mul(Winv, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    K = apply_transform(N, R, C)
    zero_ok = (
        K.entries[0][0].is_zero
        and K.entries[0][1].is_zero
        and K.entries[1][0].is_zero
        and K.entries[1][2].is_zero
        and K.entries[0][2] == K.entries[1][1]
        and not K.entries[0][2].is_zero
    )
    if not zero_ok:
        return _specialized(N, "B: template verification failed")
    return _verified(N, FAMILY_B, R, C, K, g)


def _row1_normalization(
    N: LinFormMatrix, u: ratlin.Vec, m: Poly
) -> tuple[LinFormMatrix, ratlin.Mat, ratlin.Mat] | None:
    """Row/column ops putting u^T N = m * w^T into first row (0, 0, m)."""
    w = _constants_over(poly_row(N, u), m)
    if w is None or all(x == 0 for x in w):
        return None
    R1 = ratlin.complete_rows_to_basis([u], 4)
    W = ratlin.complete_rows_to_basis([w], 3)
    Winv = ratlin.inverse(W)
    assert Winv is not None
    C1 = ratlin.mat_mul(Winv, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    return apply_transform(N, R1, C1), R1, C1


def _classify_D(N: LinFormMatrix, g: Poly, P: list[Poly]) -> Canonicalization:
    cspace = _poly_div_space(P, g)
    if len(cspace) != 1:
        return _specialized(N, f"D: divisibility space has dimension {len(cspace)}")
    m = divide_exact(_combine(P, cspace[0]), g)
    if m.is_zero:
        return _specialized(N, "D: residual cofactor vanishes")
    if _proportionality(m, g) is not None:
        return _specialized(N, "D: residual cofactor proportional to the gcd")
    Um = _div_space_rows(N, m)
    if len(Um) != 1:
        return _specialized(N, "D: no unique thin row for the residual form")
    norm = _row1_normalization(N, Um[0], m)
    if norm is None:
        return _specialized(N, "D: thin row is not a multiple of the residual form")
    N1, R1, C1 = norm
    G = LinFormMatrix.from_rows(
        [[N1.entries[i][j] for j in (0, 1)] for i in (1, 2, 3)]
    )
    sub = classify_3x2(G)
    if sub.family != RIGHT_3X2:
        return _specialized(N, f"D: 3x2 block classified as {sub.family}")
    if _proportionality(sub.canonical.entries[0][1], g) is None:
        return _specialized(N, "D: repeated 3x2 entry is not the gcd")
    R2 = [[Fraction(1), *([Fraction(0)] * 3)]] + [
        [Fraction(0), *row] for row in sub.row_transform
    ]
    C2 = [
        [sub.col_transform[0][0], sub.col_transform[0][1], Fraction(0)],
        [sub.col_transform[1][0], sub.col_transform[1][1], Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(1)],
    ]
    R = ratlin.mat_mul(R2, R1)
    C = ratlin.mat_mul(C1, C2)
    K = apply_transform(N, R, C)
    zero_ok = (
        K.entries[0][0].is_zero
        and K.entries[0][1].is_zero
        and K.entries[1][0].is_zero
        and K.entries[2][1].is_zero
        and K.entries[1][1] == K.entries[2][0]
        and not K.entries[1][1].is_zero
        and not K.entries[0][2].is_zero
    )
    if not zero_ok:
        return _specialized(N, "D: template verification failed")
    return _verified(N, FAMILY_D, R, C, K, g, extras={"residual_form": m})


def _classify_C(N: LinFormMatrix, g: Poly, u: ratlin.Vec) -> Canonicalization:
    norm = _row1_normalization(N, u, g)
    if norm is None:
        return _specialized(N, "C: thin row is not a multiple of the gcd")
    N1, R1, C1 = norm
    G = LinFormMatrix.from_rows(
        [[N1.entries[i][j] for j in (0, 1)] for i in (1, 2, 3)]
    )
    pair = _c_factor_pair(G)
    if pair is None:
        return _specialized(N, "C: reducible-minor structure not found")
    # the two shared factors play symmetric roles; only one pairing matches
    # the column layout, so try both
    last = None
    for first, second in (pair, (pair[1], pair[0])):
        got = _classify_C_attempt(N, g, N1, R1, C1, G, first, second)
        if got.family == FAMILY_C:
            return got
        last = got
    return last


def _classify_C_attempt(
    N: LinFormMatrix,
    g: Poly,
    N1: LinFormMatrix,
    R1: ratlin.Mat,
    C1: ratlin.Mat,
    G0: LinFormMatrix,
    first: tuple[Poly, Poly],
    second: tuple[Poly, Poly],
) -> Canonicalization:
    a, ctil = first
    b, dtil = second
    # unmix G's columns: modulo span{a, b} the partner forms give canonical
    # classes, and each template column's entries lie in a single class
    V = _c_unmix_columns(G0, a, b, ctil, dtil)
    if V is None:
        return _specialized(N, "C: columns cannot be unmixed")
    G = apply_transform(G0, ratlin.identity(3), V)
    # thin rows of G relative to a and b, and the (c, d) residual row
    ea = _div_space_rows(G, a)
    eb = _div_space_rows(G, b)
    if len(ea) != 1 or len(eb) != 1:
        return _specialized(N, "C: thin 3x2 rows are not unique")
    ec = _c_residual_row(G, ctil, dtil)
    if ec is None:
        return _specialized(N, "C: residual row not found")
    E = [ea[0], eb[0], ec]
    if ratlin.rank(E) != 3:
        return _specialized(N, "C: row directions are dependent")
    R2 = [[Fraction(1), *([Fraction(0)] * 3)]] + [[Fraction(0), *row] for row in E]
    V3 = [
        [V[0][0], V[0][1], Fraction(0)],
        [V[1][0], V[1][1], Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(1)],
    ]
    N2 = apply_transform(N1, R2, V3)
    if not (N2.entries[1][0].is_zero and N2.entries[2][1].is_zero):
        return _specialized(N, "C: thin rows fail the zero pattern")
    # clean the third column: row adds from row 1 and column adds from cols 1,2
    sa = N2.entries[1][1]
    sb = N2.entries[2][0]
    p, q, r = (N2.entries[i][2] for i in (1, 2, 3))
    f1, f2 = N2.entries[3][0], N2.entries[3][1]
    g1 = N2.entries[0][2]
    sol_zy = _solve_form_system([g1, sa, ctil], -p)
    sol_wx = _solve_form_system([g1, sb, dtil], -q)
    if sol_zy is None or sol_wx is None:
        return _specialized(N, "C: third column cannot be aligned")
    z, y, _ = sol_zy
    w, x, _ = sol_wx
    r2 = r + x * f1 + y * f2
    sol_t = _solve_form_system([g1], -r2)
    if sol_t is None:
        return _specialized(N, "C: (4,3) entry cannot be cleared")
    t = sol_t[0]
    R3 = ratlin.mat(
        [[1, 0, 0, 0], [z, 1, 0, 0], [w, 0, 1, 0], [t, 0, 0, 1]]
    )
    C3 = ratlin.mat([[1, 0, x], [0, 1, y], [0, 0, 1]])
    R = ratlin.mat_mul(R3, ratlin.mat_mul(R2, R1))
    C = ratlin.mat_mul(ratlin.mat_mul(C1, V3), C3)
    K = apply_transform(N, R, C)
    return _verify_C(N, R, C, K, g)


def _verify_C(
    N: LinFormMatrix, R: ratlin.Mat, C: ratlin.Mat, K: LinFormMatrix, g: Poly
) -> Canonicalization:
    zero_ok = (
        K.entries[0][0].is_zero
        and K.entries[0][1].is_zero
        and K.entries[1][0].is_zero
        and K.entries[2][1].is_zero
        and K.entries[3][2].is_zero
    )
    if not zero_ok:
        return _specialized(N, "C: zero pattern verification failed")
    n22, n31 = K.entries[1][1], K.entries[2][0]
    n41, n42 = K.entries[3][0], K.entries[3][1]
    if n41.is_zero or n42.is_zero:
        return _specialized(N, "C: last-row forms vanish")
    alpha = _proportionality(K.entries[1][2], n41)
    beta = _proportionality(K.entries[2][2], n42)
    if alpha is None or beta is None or (alpha == 0 and beta == 0):
        return _specialized(N, "C: alpha/beta coupling failed")
    combo = alpha * n31 + beta * n22
    if combo.is_zero:
        return _specialized(N, "C: alpha*n31 + beta*n22 vanishes")
    kappa = _proportionality(combo, K.entries[0][2])
    if kappa is None or kappa == 0:
        return _specialized(N, "C: (1,3) entry is not alpha*n31 + beta*n22")
    # absorb the constant into row 1 so the coupling holds exactly
    scale = ratlin.identity(4)
    scale[0][0] = kappa
    R = ratlin.mat_mul(scale, R)
    K = apply_transform(K, scale, ratlin.identity(3))
    return _verified(
        N, FAMILY_C, R, C, K, g, extras={"alpha": alpha, "beta": beta}
    )


def _c_factor_pair(
    G: LinFormMatrix,
) -> tuple[tuple[Poly, Poly], tuple[Poly, Poly]] | None:
    """Extract the two shared linear factors of G's reducible minor pencil.

    For the C template the three 2x2 minors of G span a net of quadrics
    whose reducible members form two pencils, each with a common linear
    factor (a and b); returns ((a, c), (b, d)) where c, d are partner
    forms independent of b, a respectively.
    """
    mg = maximal_minors_signed(G)
    span = [list(p.as_linear()) for row in G.entries for p in row]
    if ratlin.rank(span) != 4:
        return None
    kernel = ratlin.kernel_basis(span)
    if len(kernel) != 1:
        return None
    kappa = kernel[0]
    basis = []
    for j in range(5):
        cand = [Fraction(1 if t == j else 0) for t in range(5)]
        if ratlin.rank([kappa] + basis + [cand]) > ratlin.rank([kappa] + basis):
            basis.append(cand)
        if len(basis) == 4:
            break
    from .poly import compose_linear, quadric_sym_matrix

    restricted = [compose_linear(q, basis) for q in mg]
    S = [quadric_sym_matrix(q) for q in restricted]
    c1, c2, c3 = Poly.var(1), Poly.var(2), Poly.var(3)
    M = [
        [c1 * S[0][i][j] + c2 * S[1][i][j] + c3 * S[2][i][j] for j in range(4)]
        for i in range(4)
    ]
    quartic = poly_det(M)
    conic = poly_sqrt(quartic)
    if conic is None or conic.is_zero:
        conic = poly_sqrt(-quartic)
        if conic is None or conic.is_zero:
            return None
    lines = split_quadric(conic)
    if lines is None:
        return None
    lam, mu = lines
    if _proportionality(lam, mu) is not None:
        return None

    def shared_factor(line: Poly) -> tuple[Poly, list[Poly]] | None:
        cs = ratlin.kernel_basis([list(line.as_linear())[:3]])
        quads = [_combine(mg, c) for c in cs]
        quads = [q for q in quads if not q.is_zero]
        if len(quads) < 2:
            return None
        shared = gcd(quads[0], quads[1])
        if shared.degree() != 1:
            return None
        partners = [divide_exact(q, shared) for q in quads]
        return shared, partners

    got1 = shared_factor(lam)
    got2 = shared_factor(mu)
    if got1 is None or got2 is None:
        return None
    a, partners_a = got1
    b, partners_b = got2
    if _proportionality(a, b) is not None:
        return None
    ctil = next((f for f in partners_a if _proportionality(f, b) is None), None)
    dtil = next((f for f in partners_b if _proportionality(f, a) is None), None)
    if ctil is None or dtil is None:
        return None
    return (a, ctil), (b, dtil)


def _c_unmix_columns(
    G: LinFormMatrix, a: Poly, b: Poly, ctil: Poly, dtil: Poly
) -> ratlin.Mat | None:
    """2x2 column transform so each column's entries keep to one partner class.

    Working modulo span{a, b} (restriction to {a = b = 0}), the first
    column must reduce into <[ctil]> and the second into <[dtil]>.
    """
    plane = ratlin.kernel_basis([list(a.as_linear()), list(b.as_linear())])
    if len(plane) != 3:
        return None
    from .poly import compose_linear

    def reduce(p: Poly) -> Poly:
        return compose_linear(p, plane)

    cbar, dbar = reduce(ctil), reduce(dtil)
    if cbar.is_zero or dbar.is_zero:
        return None
    red = [[reduce(G.entries[i][j]) for j in range(2)] for i in range(3)]

    def column_space(target: Poly) -> list[ratlin.Vec]:
        tc = target.as_linear()
        eqs: list[list[Fraction]] = []
        for i in range(3):
            coeffs = [red[i][0].as_linear(), red[i][1].as_linear()]
            for s in range(5):
                for tt in range(s + 1, 5):
                    eqs.append(
                        [
                            coeffs[j][s] * tc[tt] - coeffs[j][tt] * tc[s]
                            for j in range(2)
                        ]
                    )
        return ratlin.kernel_basis(eqs)

    v1 = column_space(cbar)
    v2 = column_space(dbar)
    if len(v1) != 1 or len(v2) != 1:
        return None
    V = ratlin.transpose([v1[0], v2[0]])
    if ratlin.det(V) == 0:
        return None
    return V


def _c_residual_row(G: LinFormMatrix, ctil: Poly, dtil: Poly) -> ratlin.Vec | None:
    """Row direction whose image is (multiple of c, multiple of d)."""
    eqs: list[list[Fraction]] = []
    for j, form in ((0, ctil), (1, dtil)):
        col = G.column(j)
        fc = form.as_linear()
        coeffs = [p.as_linear() for p in col]
        for s in range(5):
            for tt in range(s + 1, 5):
                eqs.append(
                    [
                        coeffs[i][s] * fc[tt] - coeffs[i][tt] * fc[s]
                        for i in range(3)
                    ]
                )
    ker = ratlin.kernel_basis(eqs)
    if len(ker) != 1:
        return None
    return ker[0]


# -- degree-2 families ---------------------------------------------------------


def s1_matrix(ell: Sequence[Poly]) -> list[list[Poly]]:
    l1, l2, l3, l4 = ell
    z = Poly.zero()
    return [
        [z, -l3, l2, z, z, l4],
        [l3, z, -l1, z, l4, z],
        [-l2, l1, z, l4, z, z],
        [z, z, z, -l3, -l2, -l1],
    ]


def s2_matrix(zs: Sequence[Fraction], ell: Sequence[Poly]) -> list[list[Poly]]:
    l2, l3, l4 = ell
    z2, z3, z4 = zs
    zero, one = Poly.zero(), Poly.one()
    return [
        [one, zero, zero, zero],
        [Poly.const(z2), zero, -l4, l3],
        [Poly.const(z3), l4, zero, -l2],
        [Poly.const(z4), -l3, l2, zero],
    ]


def s3_matrix(zs: Sequence[Fraction], ell: Sequence[Poly]) -> list[list[Poly]]:
    l3, l4 = ell
    z31, z32, z41, z42 = zs
    zero, one = Poly.zero(), Poly.one()
    return [
        [one, zero, zero],
        [zero, one, zero],
        [Poly.const(z31), Poly.const(z32), -l4],
        [Poly.const(z41), Poly.const(z42), l3],
    ]


def _solve_product(S: list[list[Poly]], col: list[Poly], scalar_slots: list[bool]):
    """Solve S * x = col where x mixes linear forms and scalars.

    scalar_slots[j] is True when x_j is a rational scalar and False when it
    is a linear form (5 coefficient unknowns).  Returns the mixed solution
    list or None.
    """
    unknown_cols: list[list[Poly]] = []
    layout: list[tuple[int, int]] = []
    for j, is_scalar in enumerate(scalar_slots):
        if is_scalar:
            layout.append((j, -1))
            unknown_cols.append([S[i][j] for i in range(len(S))])
        else:
            for t in range(5):
                layout.append((j, t))
                unknown_cols.append(
                    [S[i][j] * Poly.var(t + 1) for i in range(len(S))]
                )
    monos = set()
    for columns in unknown_cols:
        for p in columns:
            monos |= set(p.terms)
    for p in col:
        monos |= set(p.terms)
    monos = sorted(monos)
    A = []
    b = []
    for i in range(len(S)):
        for m in monos:
            A.append([unknown_cols[k][i].coeff(m) for k in range(len(unknown_cols))])
            b.append(col[i].coeff(m))
    sol = ratlin.solve(A, b)
    if sol is None:
        return None
    out: list = [None] * len(scalar_slots)
    coeffs: dict[int, list[Fraction]] = {}
    for val, (j, t) in zip(sol, layout):
        if t < 0:
            out[j] = val
        else:
            coeffs.setdefault(j, [Fraction(0)] * 5)[t] = val
    for j, cs in coeffs.items():
        out[j] = linear_form(cs)
    return out


def _classify_deg2(N: LinFormMatrix, minors: list[Poly], q: Poly) -> Canonicalization:
    ell = []
    for d in minors:
        l = divide_exact(d, q)
        if not l.is_zero and l.homogeneous_degree() != 1:
            return _specialized(N, "minor cofactors are not linear")
        ell.append(l)
    from .poly import span_dimension

    s = span_dimension(ell)
    if s == 4:
        return _classify_S1(N, q, ell)
    if s == 3:
        return _classify_S2(N, q)
    if s == 2:
        return _classify_S3(N, q)
    return _specialized(N, f"cofactor span has dimension {s}")


def _ell_for(N: LinFormMatrix, q: Poly) -> list[Poly]:
    return [divide_exact(d, q) for d in maximal_minors_signed(N)]


def _classify_S1(N: LinFormMatrix, q: Poly, ell: list[Poly]) -> Canonicalization:
    S1 = s1_matrix(ell)
    X = []
    for j in range(3):
        sol = _solve_product(S1, N.column(j), [True] * 6)
        if sol is None:
            return _specialized(N, "S1X1: column is not a Koszul combination")
        X.append(sol)
    X1 = ratlin.transpose(X)  # 6x3
    return _verified(
        N,
        FAMILY_S1,
        ratlin.identity(4),
        ratlin.identity(3),
        N,
        q,
        extras={"ell": ell, "X": X1},
    )


def _classify_S2(N: LinFormMatrix, q: Poly) -> Canonicalization:
    ell = _ell_for(N, q)
    dep = ratlin.kernel_basis(ratlin.transpose([list(l.as_linear()) for l in ell]))
    if len(dep) != 1:
        return _specialized(N, "S2X2: dependency space is not a line")
    d = dep[0]
    first = next(i for i in range(4) if d[i] != 0)
    perm = [first] + [i for i in range(4) if i != first]
    Pm = [[Fraction(1 if j == perm[i] else 0) for j in range(4)] for i in range(4)]
    Np = apply_transform(N, Pm, ratlin.identity(3))
    ell = _ell_for(Np, q)
    dep = ratlin.kernel_basis(ratlin.transpose([list(l.as_linear()) for l in ell]))
    if len(dep) != 1:
        return _specialized(N, "S2X2: dependency lost after row permutation")
    d = [x / dep[0][0] for x in dep[0]]
    zs = d[1:]
    S2 = s2_matrix(zs, ell[1:])
    X = []
    for j in range(3):
        sol = _solve_product(S2, Np.column(j), [False, True, True, True])
        if sol is None:
            return _specialized(N, "S2X2: column is not in the syzygy module")
        X.append(sol)
    X2 = [[X[j][i] for j in range(3)] for i in range(4)]
    return _verified(
        N,
        FAMILY_S2,
        Pm,
        ratlin.identity(3),
        Np,
        q,
        extras={"ell": ell, "z": zs, "X": X2},
    )


def _classify_S3(N: LinFormMatrix, q: Poly) -> Canonicalization:
    ell = _ell_for(N, q)
    pair = None
    from .poly import span_dimension

    for i in range(4):
        for j in range(i + 1, 4):
            if span_dimension([ell[i], ell[j]]) == 2:
                pair = (i, j)
                break
        if pair:
            break
    if pair is None:
        return _specialized(N, "S3X3: no independent cofactor pair")
    others = [t for t in range(4) if t not in pair]
    perm = others + list(pair)
    Pm = [[Fraction(1 if j == perm[i] else 0) for j in range(4)] for i in range(4)]
    Np = apply_transform(N, Pm, ratlin.identity(3))
    ell = _ell_for(Np, q)
    zs = []
    for idx in (0, 1):
        sol = _solve_form_system([ell[2], ell[3]], ell[idx])
        if sol is None:
            return _specialized(N, "S3X3: dependency solve failed")
        zs.append((-sol[0], -sol[1]))
    z31, z41 = zs[0]
    z32, z42 = zs[1]
    S3 = s3_matrix([z31, z32, z41, z42], ell[2:])
    X = []
    for j in range(3):
        sol = _solve_product(S3, Np.column(j), [False, False, True])
        if sol is None:
            return _specialized(N, "S3X3: column is not in the syzygy module")
        X.append(sol)
    X3 = [[X[j][i] for j in range(3)] for i in range(3)]
    return _verified(
        N,
        FAMILY_S3,
        Pm,
        ratlin.identity(3),
        Np,
        q,
        extras={"ell": ell, "z": [z31, z32, z41, z42], "X": X3},
    )


# -- family realizability (critical-locus context) ------------------------------


def family_realizable(tag: str) -> bool:
    """Whether the family can arise as a reduced critical matrix."""
    if tag not in REALIZABLE:
        raise ValueError(f"unknown family {tag}")
    return REALIZABLE[tag]


# -- builders --------------------------------------------------------------------


def random_linear_form(rng, nonzero: bool = True) -> Poly:
    while True:
        f = linear_form([int(rng.integers(-9, 10)) for _ in range(5)])
        if not nonzero or not f.is_zero:
            return f


def _draw(rng, build, validate, attempts: int = 80) -> LinFormMatrix:
    for k in range(attempts):
        params = build()
        try:
            validate(params)
        except InvalidParams:
            continue
        if k:
            log.debug("rejected %d degenerate draws", k)
        return params
    raise InvalidParams(f"no valid draw after {attempts} attempts")


def build_family(tag: str, params: dict | None = None, rng=None) -> LinFormMatrix:
    """Assemble a canonical-family instance from parameters or random draws.

    params keys per family:
      A: n11,n12,n21,n22,n31,n32,n41,n42,n43 (forms)
      B: n13,n31,n32,n33,n41,n42,n43
      C: alpha,beta (rationals), n22,n31,n41,n42
      D: n13,n23,n31,n33,n41,n42,n43
      S1X1: ell (4 forms), X (6x3 rationals)
      S2X2: z (3 rationals), ell (3 forms), top (3 forms), X (3x3 rationals)
      S3X3: z (4 rationals), ell (2 forms), top (2x3 forms), X (1x3 rationals)
    """
    if params is None:
        if rng is None:
            raise ValueError("need explicit params or an rng")
        return _build_random(tag, rng)
    return _assemble(tag, params)


def _assemble(tag: str, p: dict) -> LinFormMatrix:
    z = Poly.zero()
    if tag == FAMILY_A:
        N = LinFormMatrix.from_rows(
            [
                [p["n11"], p["n12"], z],
                [p["n21"], p["n22"], z],
                [p["n31"], p["n32"], z],
                [p["n41"], p["n42"], p["n43"]],
            ]
        )
        block = LinFormMatrix.from_rows(
            [[p["n11"], p["n12"]], [p["n21"], p["n22"]], [p["n31"], p["n32"]]]
        )
        if p["n43"].is_zero:
            raise InvalidParams("A: n43 must be nonzero")
        bm = maximal_minors_signed(block)
        if all(x.is_zero for x in bm) or gcd_many(bm).degree() != 0:
            raise InvalidParams("A: 3x2 block must have coprime minors")
        return N
    if tag == FAMILY_B:
        from .poly import span_dimension

        if span_dimension([p["n31"], p["n41"]]) != 2:
            raise InvalidParams("B: n31, n41 must be independent")
        N = LinFormMatrix.from_rows(
            [
                [z, z, p["n13"]],
                [z, p["n13"], z],
                [p["n31"], p["n32"], p["n33"]],
                [p["n41"], p["n42"], p["n43"]],
            ]
        )
        _require_gcd_degree(N, 1, "B")
        return N
    if tag == FAMILY_C:
        from .poly import span_dimension

        alpha, beta = ratlin.frac(p["alpha"]), ratlin.frac(p["beta"])
        if alpha == 0 and beta == 0:
            raise InvalidParams("C: (alpha, beta) must be nonzero")
        if span_dimension([p["n22"], p["n31"], p["n41"], p["n42"]]) != 4:
            raise InvalidParams("C: the four forms must be independent")
        N = LinFormMatrix.from_rows(
            [
                [z, z, alpha * p["n31"] + beta * p["n22"]],
                [z, p["n22"], alpha * p["n41"]],
                [p["n31"], z, beta * p["n42"]],
                [p["n41"], p["n42"], z],
            ]
        )
        _require_gcd_degree(N, 1, "C")
        return N
    if tag == FAMILY_D:
        from .poly import span_dimension

        if span_dimension([p["n31"], p["n41"], p["n42"]]) != 3:
            raise InvalidParams("D: n31, n41, n42 must be independent")
        if span_dimension([p["n31"], p["n13"]]) != 2:
            raise InvalidParams("D: n13 must be independent of n31")
        N = LinFormMatrix.from_rows(
            [
                [z, z, p["n13"]],
                [z, p["n31"], p["n23"]],
                [p["n31"], z, p["n33"]],
                [p["n41"], p["n42"], p["n43"]],
            ]
        )
        _require_gcd_degree(N, 1, "D")
        return N
    if tag == FAMILY_S1:
        from .poly import span_dimension

        ell = p["ell"]
        if span_dimension(ell) != 4:
            raise InvalidParams("S1X1: the four forms must be independent")
        X = ratlin.mat(p["X"])
        if ratlin.rank(X) != 3:
            raise InvalidParams("S1X1: X must have maximal rank")
        S1 = s1_matrix(ell)
        N = LinFormMatrix.from_rows(
            [
                [
                    sum((S1[i][k] * X[k][j] for k in range(6)), Poly.zero())
                    for j in range(3)
                ]
                for i in range(4)
            ]
        )
        _require_gcd_degree(N, 2, "S1X1")
        return N
    if tag == FAMILY_S2:
        from .poly import span_dimension

        ell = p["ell"]
        if span_dimension(ell) != 3:
            raise InvalidParams("S2X2: the three forms must be independent")
        S2 = s2_matrix([ratlin.frac(v) for v in p["z"]], ell)
        X_rows: list[list[Poly]] = [list(p["top"])]
        for row in p["X"]:
            X_rows.append([Poly.const(v) for v in row])
        N = LinFormMatrix.from_rows(
            [
                [
                    sum((S2[i][k] * X_rows[k][j] for k in range(4)), Poly.zero())
                    for j in range(3)
                ]
                for i in range(4)
            ]
        )
        _require_gcd_degree(N, 2, "S2X2")
        return N
    if tag == FAMILY_S3:
        from .poly import span_dimension

        ell = p["ell"]
        if span_dimension(ell) != 2:
            raise InvalidParams("S3X3: the two forms must be independent")
        S3 = s3_matrix([ratlin.frac(v) for v in p["z"]], ell)
        X_rows = [list(p["top"][0]), list(p["top"][1])]
        X_rows.append([Poly.const(v) for v in p["X"][0]])
        X3 = [[X_rows[i][j] for j in range(3)] for i in range(3)]
        if poly_det(X3).is_zero:
            raise InvalidParams("S3X3: X3 must be generically invertible")
        N = LinFormMatrix.from_rows(
            [
                [
                    sum((S3[i][k] * X_rows[k][j] for k in range(3)), Poly.zero())
                    for j in range(3)
                ]
                for i in range(4)
            ]
        )
        _require_gcd_degree(N, 2, "S3X3")
        return N
    raise ValueError(f"unknown family {tag}")


def _require_gcd_degree(N: LinFormMatrix, want: int, tag: str) -> None:
    minors = maximal_minors_signed(N)
    if all(p.is_zero for p in minors):
        raise InvalidParams(f"{tag}: minors vanish identically")
    if gcd_many(minors).degree() != want:
        raise InvalidParams(f"{tag}: minor gcd degree is not {want}")


def _build_random(tag: str, rng) -> LinFormMatrix:
    def forms(names):
        return {n: random_linear_form(rng) for n in names}

    def build():
        if tag == FAMILY_A:
            return _assemble(tag, forms("n11 n12 n21 n22 n31 n32 n41 n42 n43".split()))
        if tag == FAMILY_B:
            return _assemble(tag, forms("n13 n31 n32 n33 n41 n42 n43".split()))
        if tag == FAMILY_C:
            p = forms("n22 n31 n41 n42".split())
            p["alpha"] = int(rng.integers(1, 10))
            p["beta"] = int(rng.integers(1, 10))
            return _assemble(tag, p)
        if tag == FAMILY_D:
            return _assemble(tag, forms("n13 n23 n31 n33 n41 n42 n43".split()))
        if tag == FAMILY_S1:
            return _assemble(
                tag,
                {
                    "ell": [random_linear_form(rng) for _ in range(4)],
                    "X": [
                        [int(rng.integers(-9, 10)) for _ in range(3)]
                        for _ in range(6)
                    ],
                },
            )
        if tag == FAMILY_S2:
            return _assemble(
                tag,
                {
                    "z": [int(rng.integers(-9, 10)) for _ in range(3)],
                    "ell": [random_linear_form(rng) for _ in range(3)],
                    "top": [random_linear_form(rng) for _ in range(3)],
                    "X": [
                        [int(rng.integers(-9, 10)) for _ in range(3)]
                        for _ in range(3)
                    ],
                },
            )
        if tag == FAMILY_S3:
            return _assemble(
                tag,
                {
                    "z": [int(rng.integers(-9, 10)) for _ in range(4)],
                    "ell": [random_linear_form(rng) for _ in range(2)],
                    "top": [
                        [random_linear_form(rng) for _ in range(3)],
                        [random_linear_form(rng) for _ in range(3)],
                    ],
                    "X": [[int(rng.integers(-9, 10)) for _ in range(3)]],
                },
            )
        raise ValueError(f"unknown family {tag}")

    for k in range(80):
        try:
            return build()
        except InvalidParams:
            continue
    raise InvalidParams(f"no valid random draw for {tag} after 80 attempts")


def random_4x3(rng) -> LinFormMatrix:
    """A fully random 4x3 matrix (generically NonDegenerate)."""
    return LinFormMatrix.from_rows(
        [[random_linear_form(rng) for _ in range(3)] for _ in range(4)]
    )
