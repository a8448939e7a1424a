"""Instability experiments near the non-linear critical-locus components.

Protocol, per trial: generate scene points on the critical component,
perturb them with 4-dimensional Gaussian noise of deviation sigma in the
affine chart x5 = 1, project through the three P-cameras, perturb the
images with 2-dimensional Gaussian noise (deviation 0.01), estimate the
trifocal tensor from the noisy correspondences, and record its distance
to the true tensor T_P.  A trial is "near" when that distance is below a
radius delta calibrated from the mean distance m over reconstructions of
random (non-critical) scenes under the same image noise.

Sweeps run 10 repeats for each sigma in a grid over (1e-4, 1) and are
bitwise reproducible: every trial draws from an RNG stream derived from
(seed, stage, sigma index, repeat index).
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .critical import CameraPairConfig, fixtures, reduce_to_N
from .linclass import FAMILY_A, FAMILY_S1
from .loci import SamplingFailed, decompose, residual
from .multiview import center, trifocal_from_cameras
from .poly import Poly, quadric_sym_matrix
from .recon import tensor_distance

log = logging.getLogger(__name__)

EXPERIMENT_CASES = ("scroll_i", "cone_iv", "quadric_v", "quadric_v_recorded")
REFUSED_CASES = {
    "plane_ii": "no experiments are run for the plane-and-cubic case",
    "case_iii": "no profile admits a unique tensor when all centers share a 2-plane",
    "case_vi": "no profile admits a unique tensor when all centers share a 2-plane",
}

# The recorded quadric-case matrices do not realize the smooth-quadric
# geometry their surrounding description asserts (their critical locus is a
# rank-4 quadric plus a 2-plane, with two camera centers meeting in a
# point).  The quadric_v experiment therefore runs on the verified
# smooth-quadric configuration quadric_v_model; quadric_v_recorded runs the
# recorded matrices verbatim, sampling their actual quadric component.
_CASE_FIXTURE = {
    "scroll_i": "scroll_i",
    "cone_iv": "cone_iv",
    "quadric_v": "quadric_v_model",
    "quadric_v_recorded": "quadric_v",
}

CSV_HEADER = ["case", "sigma", "repeat", "distance", "m", "delta", "is_near", "attempts"]


class ImageAtInfinity(ValueError):
    """An image point cannot be dehomogenized."""


@dataclass
class ExperimentConfig:
    case_tag: str
    seed: int
    n_points: int | None = None
    sigma_grid: list[float] = field(default_factory=list)
    repeats: int = 10
    image_sigma: float = 0.01
    delta_policy: tuple[str, float] = ("multiple", 2.0)
    calibration_trials: int = 1000
    fixed_scene: bool = False

    def __post_init__(self):
        if self.case_tag in REFUSED_CASES:
            raise ValueError(
                f"case {self.case_tag!r} refused: {REFUSED_CASES[self.case_tag]}"
            )
        if self.case_tag not in EXPERIMENT_CASES:
            raise ValueError(f"unknown case {self.case_tag!r}")
        if self.n_points is None:
            self.n_points = 99 if self.case_tag.startswith("quadric_v") else 100
        if not self.sigma_grid:
            self.sigma_grid = default_sigma_grid()
        if any(s <= 0 for s in self.sigma_grid) or sorted(self.sigma_grid) != list(
            self.sigma_grid
        ):
            raise ValueError("sigma grid must be positive and increasing")
        kind, value = self.delta_policy
        if kind not in ("multiple", "fixed") or value <= 0:
            raise ValueError("delta policy must be ('multiple'|'fixed', positive)")


def default_sigma_grid() -> list[float]:
    return [1e-4 + 0.01 * k for k in range(100)]


@dataclass
class TrialRecord:
    case: str
    sigma: float
    repeat: int
    distance: float
    m: float
    delta: float
    is_near: bool
    attempts: int


@dataclass
class SweepSummary:
    case: str
    m: float
    delta: float
    per_sigma: list[dict]

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "m": self.m,
            "delta": self.delta,
            "per_sigma": self.per_sigma,
        }


# -- per-case runtime ------------------------------------------------------------


@dataclass
class CaseRuntime:
    """Everything a sweep needs, derived once from the fixture cameras."""

    tag: str
    cfg: CameraPairConfig
    T_true: np.ndarray
    cameras: list[np.ndarray]
    generators: list[Poly]
    sampler: object


def prepare_case(case_tag: str) -> CaseRuntime:
    cfg = fixtures(_CASE_FIXTURE.get(case_tag, case_tag))
    rcm = reduce_to_N(cfg)
    cls = rcm.classification
    T = trifocal_from_cameras(*cfg.P)
    T_true = T.unit()
    cams = [P.as_array() for P in cfg.P]
    if case_tag == "scroll_i":
        if cls.family != FAMILY_A:
            raise SamplingFailed("scroll fixture did not classify as family A")
        dec = decompose(cls)
        comp = dec.component("CubicScroll")
        centers = [center(P).basis for P in cfg.P]
        sampler = _ScrollSampler(comp.generators, centers)
        gens = comp.generators
    elif case_tag == "cone_iv":
        if cls.family != FAMILY_S1:
            raise SamplingFailed("cone fixture did not classify as S1X1")
        q = cls.common_factor
        sampler = _QuadricSolveSampler(q)
        gens = [q]
    else:
        q = cls.common_factor
        anchors = []
        from .poly import compose_linear

        for P in cfg.P:
            basis = center(P).basis
            if compose_linear(q, list(basis)).is_zero:
                anchors.append(basis)
        if not anchors:
            raise SamplingFailed("no camera center lies on the quadric component")
        sampler = _QuadricChordSampler(q, anchors)
        gens = [q]
    return CaseRuntime(case_tag, cfg, T_true, cams, gens, sampler)


class _ScrollSampler:
    """Third intersection of the scroll with a plane through two centers.

    The plane spans one point on each of two distinct camera centers plus
    a random point; restricted to it, two of the scroll quadrics become
    conics through the two center points, their pencil eliminates to a
    residual line, and the line meets the first conic in the scroll point
    plus one spurious point filtered by the remaining quadric.
    """

    def __init__(self, minors: list[Poly], centers):
        self.minors = minors
        self.centers = [np.array([[float(x) for x in b] for b in basis]) for basis in centers]

    def sample(self, rng) -> np.ndarray | None:
        i, j = sorted(rng.choice(3, size=2, replace=False))
        c1 = rng.standard_normal(2) @ self.centers[i]
        c2 = rng.standard_normal(2) @ self.centers[j]
        r = rng.standard_normal(5)
        basis = [c1, c2, r]

        def conic(poly):
            # coefficients of q(s c1 + t c2 + u r) via evaluations
            def ev(s, t, u):
                return float(poly.evaluate(tuple(s * c1 + t * c2 + u * r)))

            c_ss, c_tt, c_uu = ev(1, 0, 0), ev(0, 1, 0), ev(0, 0, 1)
            c_st = ev(1, 1, 0) - c_ss - c_tt
            c_su = ev(1, 0, 1) - c_ss - c_uu
            c_tu = ev(0, 1, 1) - c_tt - c_uu
            return c_ss, c_tt, c_uu, c_st, c_su, c_tu

        A1 = conic(self.minors[0])
        A2 = conic(self.minors[1])
        scale = max(abs(v) for v in A1 + A2)
        if scale == 0:
            return None
        # the centers lie on the scroll, so the s^2 and t^2 terms vanish
        if max(abs(A1[0]), abs(A1[1]), abs(A2[0]), abs(A2[1])) > 1e-8 * scale:
            return None
        d1, d2 = A1[3], A2[3]
        if max(abs(d1), abs(d2)) < 1e-12 * scale:
            return None
        # eliminate the st term: d2 C1 - d1 C2 = u * (residual line)
        alpha = d2 * A1[4] - d1 * A2[4]  # su
        beta = d2 * A1[5] - d1 * A2[5]  # tu
        gamma = d2 * A1[2] - d1 * A2[2]  # uu
        line = np.array([alpha, beta, gamma])
        if np.linalg.norm(line) < 1e-12 * scale:
            return None
        # parametrize the line and intersect with C1
        k = int(np.argmax(np.abs(line)))
        base = []
        for t in range(3):
            if t == k:
                continue
            v = np.zeros(3)
            v[t] = 1.0
            v[k] = -line[t] / line[k]
            base.append(v)
        b0, b1 = base

        def c1_at(v):
            s, t, u = v
            return (
                A1[0] * s * s
                + A1[1] * t * t
                + A1[2] * u * u
                + A1[3] * s * t
                + A1[4] * s * u
                + A1[5] * t * u
            )

        qa = c1_at(b0)
        qb = c1_at(b1)
        qm = c1_at(b0 + b1) - qa - qb
        disc = qm * qm - 4 * qa * qb
        if disc < 0 or qa == 0 and qb == 0:
            return None
        candidates = []
        if abs(qa) >= abs(qb):
            for root in ((-qm + np.sqrt(disc)) / (2 * qa), (-qm - np.sqrt(disc)) / (2 * qa)):
                candidates.append(root * b0 + b1)
        else:
            for root in ((-qm + np.sqrt(disc)) / (2 * qb), (-qm - np.sqrt(disc)) / (2 * qb)):
                candidates.append(b0 + root * b1)
        for v in candidates:
            X = v[0] * c1 + v[1] * c2 + v[2] * r
            n = np.linalg.norm(X)
            if n < 1e-9:
                continue
            X = X / n
            # discard the two known center points, keep the third one
            near_center = any(
                min(np.linalg.norm(X - c / np.linalg.norm(c)),
                    np.linalg.norm(X + c / np.linalg.norm(c))) < 1e-6
                for c in (c1, c2)
            )
            if near_center:
                continue
            if all(residual(m, tuple(X)) < 1e-10 for m in self.minors):
                return X
        return None


class _QuadricSolveSampler:
    """Points of a quadric that is linear in x4: solve for x4 directly."""

    def __init__(self, q: Poly):
        self.q = q

    def sample(self, rng) -> np.ndarray | None:
        x1, x2, x3 = rng.standard_normal(3)
        x5 = 1.0

        def ev(x4):
            return float(self.q.evaluate((x1, x2, x3, x4, x5)))

        q0 = ev(0.0)
        qp = ev(1.0)
        qm = ev(-1.0)
        a = (qp + qm) / 2 - q0
        b = (qp - qm) / 2
        if abs(a) > 1e-9 * max(abs(b), 1.0):
            disc = b * b - 4 * a * q0
            if disc < 0:
                return None
            x4 = (-b + np.sqrt(disc)) / (2 * a)
        else:
            if abs(b) < 1e-12:
                return None
            x4 = -q0 / b
        return np.array([x1, x2, x3, x4, x5])


class _QuadricChordSampler:
    """Second intersection of the quadric with a line through a center point."""

    def __init__(self, q: Poly, center_bases):
        self.q = q
        self.S = np.array([[float(x) for x in row] for row in quadric_sym_matrix(q)])
        self.anchors = [
            np.array([[float(x) for x in b] for b in basis]) for basis in center_bases
        ]

    def sample(self, rng) -> np.ndarray | None:
        basis = self.anchors[int(rng.integers(len(self.anchors)))]
        c = rng.standard_normal(2) @ basis
        r = rng.standard_normal(5)
        a = r @ self.S @ r
        b = c @ self.S @ r
        if abs(a) < 1e-12:
            return None
        t = -2 * b / a
        if abs(t) < 1e-12:
            return None
        return c + t * r


# -- scene generation and perturbation ---------------------------------------------


def generate_critical_points(
    case_tag: str, n: int, rng, runtime: CaseRuntime | None = None
) -> np.ndarray:
    """n affine scene points (4 coordinates, chart x5 = 1) on the component."""
    rt = runtime or prepare_case(case_tag)
    out = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 60 * n + 200:
            raise SamplingFailed(f"critical-point generation stalled for {case_tag}")
        X = rt.sampler.sample(rng)
        if X is None:
            continue
        if abs(X[4]) < 1e-9 * np.linalg.norm(X):
            continue
        Xa = X / X[4]
        if not all(residual(g, tuple(Xa)) < 1e-10 for g in rt.generators):
            continue
        out.append(Xa[:4])
    return np.array(out)


def perturb_scene(points: np.ndarray, sigma: float, rng) -> np.ndarray:
    """Add independent Gaussian offsets to the four affine coordinates."""
    if sigma == 0:
        return points.copy()
    return points + sigma * rng.standard_normal(points.shape)


def project_scene(cameras: Sequence[np.ndarray], points: np.ndarray) -> list[np.ndarray]:
    """Dehomogenized images (u, v) per camera; ImageAtInfinity when unstable."""
    homog = np.hstack([points, np.ones((len(points), 1))])
    images = []
    for P in cameras:
        img = homog @ P.T
        denom = img[:, 2]
        scale = np.abs(img).max(axis=1)
        if np.any(np.abs(denom) < 1e-9 * np.maximum(scale, 1e-30)):
            raise ImageAtInfinity("a projected point is too close to infinity")
        images.append(img[:, :2] / denom[:, None])
    return images


def perturb_images(images: list[np.ndarray], image_sigma: float, rng) -> list[np.ndarray]:
    if image_sigma == 0:
        return [img.copy() for img in images]
    return [img + image_sigma * rng.standard_normal(img.shape) for img in images]


def triples_matrix(images: list[np.ndarray], rng) -> np.ndarray:
    """Design-matrix rows x_i y_j p_k from noisy images, one per point."""
    n = len(images[0])
    x = np.hstack([images[0], np.ones((n, 1))])
    y = np.hstack([images[1], np.ones((n, 1))])
    z = np.hstack([images[2], np.ones((n, 1))])
    aux = rng.standard_normal((n, 3))
    p = np.cross(z, aux)
    norms = np.linalg.norm(p, axis=1)
    bad = norms < 1e-12
    if np.any(bad):
        raise ImageAtInfinity("degenerate auxiliary line direction")
    rows = np.einsum("ni,nj,nk->nijk", x, y, p).reshape(n, 27)
    return rows


def estimate_from_rows(rows: np.ndarray) -> np.ndarray:
    _, _, vt = np.linalg.svd(rows)
    t = vt[-1].reshape(3, 3, 3)
    return t / np.linalg.norm(t)


def _trial_rng(seed: int, stage: int, a: int, b: int):
    return np.random.default_rng(np.random.SeedSequence((seed, stage, a, b)))


# -- calibration --------------------------------------------------------------------


def calibrate_delta(cfg: ExperimentConfig, runtime: CaseRuntime | None = None):
    """Mean tensor distance m over random-scene reconstructions, and delta.

    Each calibration trial draws a fresh random scene in the affine chart,
    projects it, applies the image noise, re-estimates the tensor, and
    measures its distance to T_P; delta is a policy multiple of the mean.
    """
    rt = runtime or prepare_case(cfg.case_tag)
    dists = []
    for trial in range(cfg.calibration_trials):
        rng = _trial_rng(cfg.seed, 0, trial, 0)
        for _ in range(10):
            pts = rng.standard_normal((cfg.n_points, 4))
            try:
                images = project_scene(rt.cameras, pts)
            except ImageAtInfinity:
                continue
            images = perturb_images(images, cfg.image_sigma, rng)
            rows = triples_matrix(images, rng)
            break
        else:
            raise SamplingFailed("calibration scene generation stalled")
        t = estimate_from_rows(rows)
        dists.append(tensor_distance(rt.T_true, t))
    m = float(np.mean(dists))
    kind, value = cfg.delta_policy
    delta = value * m if kind == "multiple" else value
    return m, delta


# -- the sweep ----------------------------------------------------------------------


def run_trial(
    cfg: ExperimentConfig,
    rt: CaseRuntime,
    sigma: float,
    rng,
    m: float,
    delta: float,
    scene: np.ndarray | None = None,
):
    attempts = 0
    while True:
        attempts += 1
        if attempts > 10:
            raise SamplingFailed("trial failed 10 times in a row")
        try:
            pts = (
                scene
                if scene is not None
                else generate_critical_points(cfg.case_tag, cfg.n_points, rng, rt)
            )
            noisy = perturb_scene(pts, sigma, rng)
            images = project_scene(rt.cameras, noisy)
            images = perturb_images(images, cfg.image_sigma, rng)
            rows = triples_matrix(images, rng)
        except (ImageAtInfinity, SamplingFailed):
            if scene is not None:
                scene = None  # redraw even in fixed-scene mode rather than stall
            continue
        t = estimate_from_rows(rows)
        d = tensor_distance(rt.T_true, t)
        return d, attempts


def run_sweep(cfg: ExperimentConfig):
    """All trials of the sigma grid; returns (records, summary)."""
    rt = prepare_case(cfg.case_tag)
    m, delta = calibrate_delta(cfg, rt)
    records: list[TrialRecord] = []
    fixed = None
    if cfg.fixed_scene:
        fixed = generate_critical_points(
            cfg.case_tag, cfg.n_points, _trial_rng(cfg.seed, 2, 0, 0), rt
        )
    for si, sigma in enumerate(cfg.sigma_grid):
        for rep in range(cfg.repeats):
            rng = _trial_rng(cfg.seed, 1, si, rep)
            d, attempts = run_trial(cfg, rt, sigma, rng, m, delta, scene=fixed)
            records.append(
                TrialRecord(
                    cfg.case_tag, sigma, rep, d, m, delta, bool(d < delta), attempts
                )
            )
    return records, summarize(records)


def summarize(records: Sequence[TrialRecord]) -> SweepSummary:
    if not records:
        raise ValueError("no records to summarize")
    case = records[0].case
    m, delta = records[0].m, records[0].delta
    by_sigma: dict[float, list[TrialRecord]] = {}
    for r in records:
        by_sigma.setdefault(r.sigma, []).append(r)
    per_sigma = []
    for sigma in sorted(by_sigma):
        rows = by_sigma[sigma]
        near = sum(1 for r in rows if r.is_near)
        per_sigma.append(
            {
                "sigma": sigma,
                "near": near,
                "far": len(rows) - near,
                "mean_distance": float(np.mean([r.distance for r in rows])),
            }
        )
    return SweepSummary(case, m, delta, per_sigma)


# -- serialization ---------------------------------------------------------------------


def records_to_csv(records: Sequence[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(
            [
                r.case,
                repr(r.sigma),
                r.repeat,
                repr(r.distance),
                repr(r.m),
                repr(r.delta),
                int(r.is_near),
                r.attempts,
            ]
        )
    return buf.getvalue()


def write_csv(path, records: Sequence[TrialRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv(records))


def read_csv(path) -> list[TrialRecord]:
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        for row in reader:
            out.append(
                TrialRecord(
                    case=row[0],
                    sigma=float(row[1]),
                    repeat=int(row[2]),
                    distance=float(row[3]),
                    m=float(row[4]),
                    delta=float(row[5]),
                    is_near=bool(int(row[6])),
                    attempts=int(row[7]),
                )
            )
    return out


def write_summary(path, summary: SweepSummary) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary.to_json(), fh, indent=2)
        fh.write("\n")
