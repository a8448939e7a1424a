"""Trifocal tensor estimation from correspondences and rank diagnostics.

Each point-point-line correspondence triple (x, y, p) contributes one row
x_i y_j p_k (in lexicographic (i, j, k) order) to a design matrix with 27
columns; the tensor is the unit-norm minimizer of ||M t||, i.e. the
singular vector for the smallest singular value.  With generic cameras
and >= 26 triples the matrix has rank 26 and the minimizer is unique up
to sign; configurations with intersecting centers drop the rank to 24.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .multiview import (
    Camera,
    DependentPoints,
    OnCenter,
    TrifocalTensor,
    line_through,
    project,
)

RANK_TOL = 1e-8


@dataclass(frozen=True)
class CorrespondenceTriple:
    x: tuple
    y: tuple
    p: tuple

    def row(self) -> list:
        return [
            self.x[i] * self.y[j] * self.p[k]
            for i in range(3)
            for j in range(3)
            for k in range(3)
        ]


@dataclass
class DesignMatrix:
    rows: list[list]

    def as_array(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.rows])

    def __len__(self) -> int:
        return len(self.rows)


@dataclass
class EstimationResult:
    tensor: TrifocalTensor
    singular_values: list[float]
    numerical_rank: int
    unique: bool


def correspondences_from_scene(
    Ps: Sequence[Camera], pts: Sequence, rng
) -> list[CorrespondenceTriple]:
    """Project scene points and attach a random view-3 line through each image."""
    out = []
    for X in pts:
        x = project(Ps[0], X)
        y = project(Ps[1], X)
        z = project(Ps[2], X)
        exact = all(isinstance(v, (int, Fraction)) for v in z)
        for _ in range(20):
            if exact:
                aux = tuple(Fraction(int(rng.integers(-9, 10))) for _ in range(3))
            else:
                aux = tuple(rng.standard_normal(3))
            try:
                p = line_through(z, aux)
                break
            except DependentPoints:
                continue
        else:
            raise DependentPoints("no auxiliary direction found")
        out.append(CorrespondenceTriple(tuple(x), tuple(y), tuple(p)))
    return out


def assemble_MT(triples: Sequence[CorrespondenceTriple]) -> DesignMatrix:
    if not triples:
        raise ValueError("need at least one triple")
    return DesignMatrix([t.row() for t in triples])


def estimate_tensor(M: DesignMatrix, rank_tol: float = RANK_TOL) -> EstimationResult:
    """Least-singular-vector estimate of the tensor from a design matrix."""
    arr = M.as_array()
    _, s, vt = np.linalg.svd(arr)
    svals = [0.0] * 27
    for i, v in enumerate(s[:27]):
        svals[i] = float(v)
    rank = int(np.sum(s > rank_tol * s[0])) if s.size and s[0] > 0 else 0
    t = vt[-1]
    entries = tuple(
        tuple(tuple(float(t[9 * i + 3 * j + k]) for k in range(3)) for j in range(3))
        for i in range(3)
    )
    unique = rank == 26 and len(M) >= 26
    return EstimationResult(
        TrifocalTensor(entries, (2, 2, 1)), svals, rank, unique
    )


def nullspace_tensors(M: DesignMatrix, rank_tol: float = RANK_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the numerical nullspace, reshaped to 3x3x3."""
    arr = M.as_array()
    _, s, vt = np.linalg.svd(arr)
    out = []
    for i in range(min(27, len(s))):
        if s[i] <= rank_tol * s[0]:
            out.append(vt[i].reshape(3, 3, 3))
    for i in range(len(s), 27):
        out.append(vt[i].reshape(3, 3, 3))
    return out


def triples_to_csv(path, triples: Sequence[CorrespondenceTriple]) -> None:
    """Nine columns per row: x1..x3, y1..y3, p1..p3 (debugging aid)."""
    with open(path, "w", encoding="utf-8") as fh:
        for t in triples:
            fh.write(",".join(str(float(v)) for v in (*t.x, *t.y, *t.p)) + "\n")


def design_matrix_to_csv(path, M: DesignMatrix) -> None:
    """The 27 monomial columns of each design row (debugging aid)."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in M.rows:
            fh.write(",".join(str(float(v)) for v in row) + "\n")


def tensor_distance(A, B) -> float:
    """min(||A - B||, ||A + B||) on unit Frobenius representatives."""
    a = A.unit() if isinstance(A, TrifocalTensor) else np.asarray(A, dtype=float)
    b = B.unit() if isinstance(B, TrifocalTensor) else np.asarray(B, dtype=float)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))


def rank_MT_diagnostic(
    Ps: Sequence[Camera],
    n_triples: int,
    rng,
    scene: Sequence | None = None,
    rank_tol: float = RANK_TOL,
) -> int:
    """Numerical rank of the design matrix built from random scene points."""
    pts = list(scene) if scene is not None else []
    attempts = 0
    while len(pts) < n_triples:
        attempts += 1
        if attempts > 20 * n_triples:
            raise OnCenter("could not draw enough off-center scene points")
        X = tuple(Fraction(int(rng.integers(-9, 10))) for _ in range(5))
        if all(v == 0 for v in X):
            continue
        try:
            for P in Ps:
                project(P, X)
        except OnCenter:
            continue
        pts.append(X)
    triples = correspondences_from_scene(Ps, pts[:n_triples], rng)
    M = assemble_MT(triples)
    arr = M.as_array()
    s = np.linalg.svd(arr, compute_uv=False)
    return int(np.sum(s > rank_tol * s[0]))
