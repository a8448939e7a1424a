"""Exact linear algebra over the rationals (plain lists of Fraction).

Small dense matrices only; everything in this package is at most 9x9.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Vec = list[Fraction]
Mat = list[list[Fraction]]


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def mat(M: Sequence[Sequence]) -> Mat:
    return [[frac(x) for x in row] for row in M]


def identity(n: int) -> Mat:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence]) -> Mat:
    return [list(col) for col in zip(*mat(M))]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Mat:
    A, B = mat(A), mat(B)
    n, k, m = len(A), len(B), len(B[0])
    assert all(len(r) == k for r in A)
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            a = A[i][t]
            if a:
                for j in range(m):
                    out[i][j] += a * B[t][j]
    return out


def mat_vec(A: Sequence[Sequence], v: Sequence) -> Vec:
    return [sum((frac(a) * frac(x) for a, x in zip(row, v)), Fraction(0)) for row in A]


def rref(M: Sequence[Sequence]) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    R = mat(M)
    if not R:
        return R, []
    rows, cols = len(R), len(R[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if R[i][c]), None)
        if pivot is None:
            continue
        R[r], R[pivot] = R[pivot], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def kernel_basis(M: Sequence[Sequence]) -> list[Vec]:
    """Basis of the right kernel {v : M v = 0}."""
    if not M:
        return []
    cols = len(M[0])
    R, pivots = rref(M)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -R[r][f]
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> Vec | None:
    """One exact solution of A x = b, or None if inconsistent."""
    A = mat(A)
    bb = [frac(x) for x in b]
    n = len(A)
    cols = len(A[0]) if A else 0
    aug = [A[i] + [bb[i]] for i in range(n)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = R[r][cols]
    return x


def inverse(M: Sequence[Sequence]) -> Mat | None:
    A = mat(M)
    n = len(A)
    aug = [A[i] + identity(n)[i] for i in range(n)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in R]


def det(M: Sequence[Sequence]) -> Fraction:
    A = mat(M)
    n = len(A)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if A[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            A[c], A[pivot] = A[pivot], A[c]
            sign = -sign
        out *= A[c][c]
        inv = 1 / A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return out * sign


def int_kernel_basis(M: Sequence[Sequence[int]]) -> list[Vec]:
    """Right kernel of an integer matrix via fraction-free elimination.

    Much faster than rref on Fractions for the sizes the gcd solver needs;
    rows are gcd-normalized after each elimination to keep entries small.
    """
    if not M:
        return []
    ncols = len(M[0])
    work = [list(r) for r in M if any(r)]
    echelon: list[list[int]] = []
    pivots: list[int] = []
    for col in range(ncols):
        cand = None
        for r in work:
            if r[col] and (cand is None or abs(r[col]) < abs(cand[col])):
                cand = r
        if cand is None:
            continue
        work.remove(cand)
        g = 0
        for x in cand:
            g = math.gcd(g, x)
        if g > 1:
            cand = [x // g for x in cand]
        nxt = []
        a = cand[col]
        for r in work:
            if r[col]:
                b = r[col]
                r = [x * a - y * b for x, y in zip(r, cand)]
                g = 0
                for x in r:
                    g = math.gcd(g, x)
                if g > 1:
                    r = [x // g for x in r]
            if any(r):
                nxt.append(r)
        work = nxt
        echelon.append(cand)
        pivots.append(col)
        if not work:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(reversed(echelon), reversed(pivots)):
            s = sum((frac(row[c]) * v[c] for c in range(pc + 1, ncols) if v[c]), Fraction(0))
            v[pc] = -s / row[pc]
        basis.append(v)
    return basis


def rows_to_integer(M: Sequence[Sequence]) -> list[list[int]]:
    """Scale each row by its denominators' lcm (kernel is unchanged)."""
    out = []
    for row in M:
        row = [frac(x) for x in row]
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        out.append([int(x * lcm) for x in row])
    return out


def complete_rows_to_basis(rows: Sequence[Sequence], n: int) -> Mat:
    """Invertible n x n matrix whose first rows are the given ones."""
    base = mat(rows)
    out = [row[:] for row in base]
    for j in range(n):
        cand = [Fraction(1 if t == j else 0) for t in range(n)]
        if rank(out + [cand]) > rank(out):
            out.append(cand)
        if len(out) == n:
            break
    if rank(out) != n:
        raise ValueError("given rows are dependent")
    return out


def map_vector_to_unit(w: Sequence, k: int) -> Mat:
    """Invertible R with R w = e_k (0-based k); w must be nonzero."""
    n = len(w)
    wv = [frac(x) for x in w]
    if all(x == 0 for x in wv):
        raise ValueError("zero vector")
    # columns of R^-1: w in slot k, completed to a basis elsewhere
    cols = [wv]
    for j in range(n):
        cand = [Fraction(1 if t == j else 0) for t in range(n)]
        if rank(cols + [cand]) > rank(cols):
            cols.append(cand)
        if len(cols) == n:
            break
    order = list(range(1, k + 1)) + [0] + list(range(k + 1, n))
    Rinv = transpose([cols[i] for i in order])
    R = inverse(Rinv)
    assert R is not None
    return R
