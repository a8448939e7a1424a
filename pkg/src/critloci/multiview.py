"""Cameras P^4 -> P^2, centers, epipoles, and trifocal Grassmann tensors.

A camera is a full-rank 3x5 matrix defined up to scale; its right kernel
is a line in P^4 (the center).  For three cameras and a profile (a
partition of 5 into codimensions 2,2,1 in some order), the trifocal
tensor is the 3x3x3 array of signed 5x5 determinants built from pairs of
camera rows; corresponding point-point-line triples annihilate it.

Exact rational arithmetic is used whenever the cameras and inputs are
rational; float inputs switch the same formulas to numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import ratlin

PROFILES = ((2, 2, 1), (2, 1, 2), (1, 2, 2))


class RankDeficient(ValueError):
    """Camera matrix does not have rank 3."""


class OnCenter(ValueError):
    """The point projects to zero (it lies on the camera's center)."""


class DegenerateImage(ValueError):
    """The two center basis points map to the same image point."""


class DependentPoints(ValueError):
    """Two image points that should span a line are proportional."""


def _is_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


@dataclass(frozen=True)
class Camera:
    """3x5 projection matrix; entries rational (exact paths) or float."""

    rows: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.rows) != 3 or any(len(r) != 5 for r in self.rows):
            raise ValueError("camera must be 3x5")

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "Camera":
        return Camera(tuple(tuple(x) for x in rows))

    @property
    def exact(self) -> bool:
        return all(_is_exact(r) for r in self.rows)

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.rows])

    def rank(self) -> int:
        if self.exact:
            return ratlin.rank([list(r) for r in self.rows])
        s = np.linalg.svd(self.as_array(), compute_uv=False)
        return int(np.sum(s > 1e-10 * s[0]))


@dataclass(frozen=True)
class CenterLine:
    """Basis of the 2-dimensional right kernel of a camera."""

    basis: tuple[tuple, ...]

    def point(self, s, t) -> tuple:
        return tuple(s * a + t * b for a, b in zip(self.basis[0], self.basis[1]))


@dataclass(frozen=True)
class TrifocalTensor:
    """3x3x3 tensor attached to a camera triple and a profile."""

    entries: tuple
    profile: tuple[int, int, int]

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                [[float(self.entries[i][j][k]) for k in range(3)] for j in range(3)]
                for i in range(3)
            ]
        )

    def flat(self) -> list:
        """27-vector in lexicographic (i, j, k) order."""
        return [
            self.entries[i][j][k]
            for i in range(3)
            for j in range(3)
            for k in range(3)
        ]

    def unit(self) -> np.ndarray:
        arr = self.as_array()
        n = np.linalg.norm(arr)
        if n == 0:
            raise ValueError("zero tensor cannot be normalized")
        return arr / n


def center(P: Camera) -> CenterLine:
    """The camera's center of projection, as a kernel basis (exact)."""
    if P.rank() != 3:
        raise RankDeficient("camera must have rank 3")
    if P.exact:
        ker = ratlin.kernel_basis([list(r) for r in P.rows])
        return CenterLine(tuple(tuple(v) for v in ker))
    _, _, vt = np.linalg.svd(P.as_array())
    return CenterLine((tuple(vt[-2]), tuple(vt[-1])))


def project(P: Camera, X: Sequence):
    """Homogeneous image P X; raises OnCenter when it vanishes."""
    exact = P.exact and _is_exact(X)
    if exact:
        img = tuple(
            sum((r[i] * ratlin.frac(X[i]) for i in range(5)), Fraction(0))
            for r in P.rows
        )
        if all(v == 0 for v in img):
            raise OnCenter("point lies on the center of projection")
        return img
    img = P.as_array() @ np.asarray([float(v) for v in X])
    if np.allclose(img, 0, atol=1e-14 * max(1.0, np.abs(P.as_array()).max())):
        raise OnCenter("point lies on the center of projection")
    return tuple(img)


def line_through(z: Sequence, w: Sequence):
    """Dual coordinates of the view line through two image points."""
    p = (
        z[1] * w[2] - z[2] * w[1],
        z[2] * w[0] - z[0] * w[2],
        z[0] * w[1] - z[1] * w[0],
    )
    if _is_exact(p):
        if all(v == 0 for v in p):
            raise DependentPoints("image points are proportional")
    elif np.allclose([float(v) for v in p], 0):
        raise DependentPoints("image points are (numerically) proportional")
    return p


def epipole_line(P_r: Camera, C_s: CenterLine):
    """Dual coordinates of the epipole P_r(C_s), a line in the view."""
    a = project(P_r, C_s.basis[0])
    b = project(P_r, C_s.basis[1])
    try:
        return line_through(a, b)
    except DependentPoints as exc:
        raise DegenerateImage("center projects to a single point") from exc


def _det5(rows) -> Fraction:
    return ratlin.det([[ratlin.frac(x) for x in r] for r in rows])


def trifocal_from_cameras(
    P1: Camera, P2: Camera, P3: Camera, profile: tuple[int, int, int] = (2, 2, 1)
) -> TrifocalTensor:
    """Trifocal Grassmann tensor of three cameras for a given profile.

    Entry (i, j, k), all indices 0-based, is the signed determinant of the
    5x5 matrix stacking, in view order: each point view's camera with its
    index row deleted, and the line view's single index row.  The sign is
    (-1)^(1 + sum of point-view indices); with this convention the 9x9
    correspondence determinant equals the trilinear form on the nose when
    view lines are given by the cross product of two spanning points.
    """
    if profile not in PROFILES:
        raise ValueError(f"profile must be one of {PROFILES}")
    cams = (P1, P2, P3)
    for P in cams:
        if P.rank() != 3:
            raise RankDeficient("cameras must have rank 3")
    exact = all(P.exact for P in cams)

    def blocks(indices):
        rows = []
        sign = 1
        for v, P in enumerate(cams):
            idx = indices[v]
            if profile[v] == 2:
                rows.extend(P.rows[r] for r in range(3) if r != idx)
                if idx % 2 == 1:
                    sign = -sign
            else:
                rows.append(P.rows[idx])
        return rows, sign

    out = [[[None] * 3 for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            for k in range(3):
                rows, sign = blocks((i, j, k))
                if exact:
                    d = _det5(rows)
                else:
                    d = float(np.linalg.det(np.array(rows, dtype=float)))
                out[i][j][k] = sign * d
    entries = tuple(tuple(tuple(row) for row in plane) for plane in out)
    return TrifocalTensor(entries, profile)


def grassmann_det(
    cams: Sequence[Camera],
    spaces: Sequence,
    profile: tuple[int, int, int] = (2, 2, 1),
):
    """Determinant of the 9x9 correspondence system.

    spaces[v] is a single homogeneous 3-vector for a point view
    (codimension 2) and a pair of spanning 3-vectors for a line view
    (codimension 1).  Vanishing characterizes corresponding subspaces.
    """
    if profile not in PROFILES:
        raise ValueError(f"profile must be one of {PROFILES}")
    cols_per_view = [3 - a for a in profile]
    offsets = [sum(cols_per_view[:v]) for v in range(3)]
    width = sum(cols_per_view) + 5
    rows = []
    for v, P in enumerate(cams):
        basis = spaces[v] if profile[v] == 1 else (spaces[v],)
        for r in range(3):
            row = [0] * (width - 5)
            for c, vec in enumerate(basis):
                row[offsets[v] + c] = vec[r]
            row.extend(P.rows[r])
            rows.append(row)
    flat = [x for row in rows for x in row]
    if _is_exact(flat):
        return ratlin.det([[ratlin.frac(x) for x in row] for row in rows])
    return float(np.linalg.det(np.array(rows, dtype=float)))


def trilinear_value(T: TrifocalTensor, c1: Sequence, c2: Sequence, c3: Sequence):
    """sum_ijk T_ijk c1_i c2_j c3_k (dual coordinates on the line view)."""
    acc = None
    for i in range(3):
        for j in range(3):
            for k in range(3):
                term = T.entries[i][j][k] * c1[i] * c2[j] * c3[k]
                acc = term if acc is None else acc + term
    return acc


def degenerate_structure_check(T: TrifocalTensor, tol: float = 1e-9) -> bool:
    """True iff only T[0][1][k] = -T[1][0][k] survive, after normalization."""
    arr = T.as_array()
    n = np.linalg.norm(arr)
    if n == 0:
        return False
    arr = arr / n
    for i in range(3):
        for j in range(3):
            for k in range(3):
                if (i, j) in ((0, 1), (1, 0)):
                    continue
                if abs(arr[i][j][k]) > tol:
                    return False
    return bool(np.all(np.abs(arr[0, 1, :] + arr[1, 0, :]) <= tol))
