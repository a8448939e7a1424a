"""Explicit components of degeneration loci and sampling-based verification.

Each canonical family of 4x3 matrices of linear forms has a degeneration
locus (where the matrix drops to rank <= 2) that decomposes into named
components with closed-form generators.  decompose() builds them from a
classification certificate; samplers produce points on each component,
and the verification helpers confirm rank drop, incidence facts, and
degrees by restricting generators to random lines and planes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import ratlin
from .linclass import (
    FAMILY_A,
    FAMILY_B,
    FAMILY_C,
    FAMILY_D,
    FAMILY_S1,
    FAMILY_S2,
    FAMILY_S3,
    Canonicalization,
    LinFormMatrix,
)
from .poly import (
    Poly,
    compose_linear,
    poly_det,
    quadric_rank,
    quadric_sym_matrix,
    span_dimension,
)

VANISH_TOL = 1e-10

KIND_DIMS = {
    "Hyperplane": (3, 1),
    "Plane": (2, 1),
    "Line": (1, 1),
    "Point": (0, 1),
    "QuadricHypersurface": (3, 2),
    "QuadricSurface": (2, 2),
    "Cone": (3, 2),
    "TwistedCubic": (1, 3),
    "CubicScroll": (2, 3),
}


class DegenerateInstance(ValueError):
    """A genericity assumption behind the component formulas fails."""


class SamplingFailed(RuntimeError):
    """No valid sample after bounded retries."""


class IncidenceMismatch(AssertionError):
    """A stated intersection fact failed verification."""


@dataclass
class LocusComponent:
    kind: str
    generators: list[Poly]
    extras: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return KIND_DIMS[self.kind][0]

    @property
    def degree(self) -> int:
        return KIND_DIMS[self.kind][1]


@dataclass
class LocusDecomposition:
    family: str
    components: list[LocusComponent]
    canonical: LinFormMatrix

    def component(self, kind: str) -> LocusComponent:
        for c in self.components:
            if c.kind == kind:
                return c
        raise KeyError(kind)


# -- the 4x4 symmetric matrix of the S1 cone ------------------------------------


def symmetric_matrix_D(X1: Sequence[Sequence]) -> ratlin.Mat:
    """4x4 symmetric matrix D with q = L^T D L built from 3x3 minors of X1.

    X1 is the 6x3 rational coefficient matrix of an S1-family member; the
    minor (i, j, k) is the determinant of rows i, j, k (1-based).
    """
    X = ratlin.mat(X1)
    if len(X) != 6 or any(len(r) != 3 for r in X):
        raise ValueError("X1 must be 6x3")
    if ratlin.rank(X) != 3:
        raise ValueError("X1 must have maximal rank")

    def m(i, j, k):
        return ratlin.det([X[i - 1], X[j - 1], X[k - 1]])

    half = Fraction(1, 2)
    # the (1,3) entry is -(2,3,4)-(1,2,6); exact fitting over random
    # instances pins the second minor as (1,2,6), not (1,2,3)
    D = [
        [
            -m(2, 3, 6),
            half * (-m(2, 3, 5) + m(1, 3, 6)),
            half * (-m(2, 3, 4) - m(1, 2, 6)),
            half * (m(3, 4, 6) + m(2, 5, 6)),
        ],
        [
            None,
            m(1, 3, 5),
            half * (m(1, 3, 4) - m(1, 2, 5)),
            half * (m(3, 4, 5) - m(1, 5, 6)),
        ],
        [None, None, -m(1, 2, 4), half * (-m(2, 4, 5) - m(1, 4, 6))],
        [None, None, None, m(4, 5, 6)],
    ]
    for i in range(4):
        for j in range(i):
            D[i][j] = D[j][i]
    return [[ratlin.frac(x) for x in row] for row in D]


def cone_quadric(ell: Sequence[Poly], X1: Sequence[Sequence]) -> Poly:
    """q = L^T D L for the S1 family; equals the minors' common factor."""
    D = symmetric_matrix_D(X1)
    acc = Poly.zero()
    for i in range(4):
        for j in range(4):
            acc = acc + D[i][j] * ell[i] * ell[j]
    return acc


# -- decomposition per family -----------------------------------------------------


def decompose(c: Canonicalization) -> LocusDecomposition:
    """Components of the degeneration locus from a classification."""
    if c.family is None or c.family == "NonDegenerate":
        raise ValueError("decompose needs a degenerate classified matrix")
    K = c.canonical.entries
    if c.family == FAMILY_A:
        block = [[K[i][j] for j in range(2)] for i in range(3)]
        minors = [
            block[r1][0] * block[r2][1] - block[r1][1] * block[r2][0]
            for r1, r2 in ((0, 1), (0, 2), (1, 2))
        ]
        if all(m.is_zero for m in minors):
            raise DegenerateInstance("A: the 3x2 block has rank <= 1")
        comps = [
            LocusComponent("Hyperplane", [K[3][2]]),
            LocusComponent("CubicScroll", minors, extras={"block": block}),
        ]
    elif c.family == FAMILY_B:
        n13 = K[0][2]
        n31, n32, n33 = K[2]
        n41, n42, n43 = K[3]
        if span_dimension([n13, n31, n41]) != 3:
            raise DegenerateInstance("B: n13, n31, n41 are dependent")
        q1 = n32 * n43 - n42 * n33
        q2 = n31 * n43 - n41 * n33
        q3 = n31 * n42 - n41 * n32
        comps = [
            LocusComponent("Hyperplane", [n13]),
            LocusComponent("Plane", [n31, n41]),
            LocusComponent(
                "TwistedCubic",
                [n13, q1, q2, q3],
                extras={"pencil": ([n31, n32, n33], [n41, n42, n43]), "n13": n13},
            ),
        ]
    elif c.family == FAMILY_C:
        h = K[0][2]
        n22, n42 = K[1][1], K[3][1]
        n31, n41 = K[2][0], K[3][0]
        if span_dimension([n22, n31, n41, n42]) != 4:
            raise DegenerateInstance("C: defining forms are dependent")
        comps = [
            LocusComponent("Hyperplane", [h]),
            LocusComponent("Plane", [n31, n41], extras={"label": "L_C1"}),
            LocusComponent("Plane", [n22, n42], extras={"label": "L_C2"}),
        ]
    elif c.family == FAMILY_D:
        n13, n23 = K[0][2], K[1][2]
        n31 = K[2][0]
        n33 = K[2][2]
        n41, n42, n43 = K[3]
        if span_dimension([n31, n41, n42]) != 3:
            raise DegenerateInstance("D: n31, n41, n42 are dependent")
        Q = n31 * n43 - n42 * n23 - n41 * n33
        anchor = _point_from_forms([n13, n31, n41, n42])
        comps = [
            LocusComponent("Hyperplane", [n31]),
            LocusComponent("QuadricSurface", [n13, Q], extras={"anchor": anchor}),
            LocusComponent("Line", [n31, n41, n42]),
        ]
    elif c.family == FAMILY_S1:
        ell = c.extras["ell"]
        X1 = c.extras["X"]
        q = cone_quadric(ell, X1)
        S = quadric_sym_matrix(q)
        vertex_basis = ratlin.kernel_basis([list(l.as_linear()) for l in ell])
        if len(vertex_basis) != 1:
            raise DegenerateInstance("S1X1: cofactors do not cut a single point")
        if ratlin.rank(S) != 4:
            raise DegenerateInstance("S1X1: cone quadric is not rank 4")
        ker = ratlin.kernel_basis(S)
        if len(ker) != 1 or not _proportional_vec(ker[0], vertex_basis[0]):
            raise DegenerateInstance("S1X1: cone vertex mismatch")
        comps = [
            LocusComponent("Cone", [q], extras={"vertex": tuple(vertex_basis[0])}),
            LocusComponent("Point", list(ell), extras={"point": tuple(vertex_basis[0])}),
        ]
    elif c.family == FAMILY_S2:
        ell = c.extras["ell"]
        X2 = c.extras["X"]

        def minor(rows):
            return poly_det([[_as_poly_entry(X2[r - 1][j]) for j in range(3)] for r in rows])

        q = ell[1] * minor((1, 3, 4)) - ell[2] * minor((1, 2, 4)) + ell[3] * minor((1, 2, 3))
        line_forms = [ell[1], ell[2], ell[3]]
        if span_dimension(line_forms) != 3:
            raise DegenerateInstance("S2X2: line forms are dependent")
        # any point of the contained line r is a rational anchor on Q
        line_basis = ratlin.kernel_basis([list(f.as_linear()) for f in line_forms])
        anchor = tuple(line_basis[0]) if line_basis else None
        comps = [
            LocusComponent(
                "QuadricHypersurface",
                [q],
                extras={"anchor": anchor, "smooth": quadric_rank(q) == 5},
            ),
            LocusComponent("Line", line_forms),
        ]
    elif c.family == FAMILY_S3:
        ell = c.extras["ell"]
        X3 = c.extras["X"]
        q = poly_det([[_as_poly_entry(x) for x in row] for row in X3])
        if q.is_zero:
            raise DegenerateInstance("S3X3: det X3 vanishes identically")
        comps = [
            LocusComponent(
                "QuadricHypersurface",
                [q],
                extras={"smooth": quadric_rank(q) == 5},
            ),
            LocusComponent("Plane", [ell[2], ell[3]]),
        ]
    else:
        raise ValueError(f"unknown family {c.family}")
    return LocusDecomposition(c.family, comps, c.canonical)


def _as_poly_entry(x):
    return x if isinstance(x, Poly) else Poly.const(x)


def _point_from_forms(forms: Sequence[Poly]):
    ker = ratlin.kernel_basis([list(f.as_linear()) for f in forms])
    if len(ker) != 1:
        return None
    return tuple(ker[0])


def _random_fixed_form() -> Poly:
    from .poly import linear_form

    return linear_form([3, -1, 4, 1, -5])


def _proportional_vec(a, b) -> bool:
    n = len(a)
    for i in range(n):
        for j in range(n):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return True


# -- sampling ---------------------------------------------------------------------


def _norm_point(p) -> float:
    return float(np.linalg.norm([float(v) for v in p]))


def residual(f: Poly, p) -> float:
    """|f(p)| normalized by coefficient norm and |p|^deg."""
    scale = f.coeff_norm() * _norm_point(p) ** max(f.degree(), 0)
    if scale == 0:
        return 0.0
    return abs(float(f.evaluate(tuple(p)))) / scale


def on_component(comp: LocusComponent, p, tol: float = VANISH_TOL) -> bool:
    exact = all(isinstance(v, (int, Fraction)) for v in p)
    if exact:
        return all(g.evaluate(tuple(p)) == 0 for g in comp.generators)
    return all(residual(g, p) < tol for g in comp.generators)


def _rand_rational(rng, span=9) -> Fraction:
    return Fraction(int(rng.integers(-span, span + 1)))


def _rand_point(rng) -> tuple:
    return tuple(_rand_rational(rng) for _ in range(5))


def sample_component(comp: LocusComponent, n: int, rng) -> list[tuple]:
    """n points on the component; exact rational where an anchor or a
    parametrization exists, floating chords otherwise."""
    out: list[tuple] = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 60 * n + 100:
            raise SamplingFailed(f"sampling {comp.kind} stalled")
        p = _sample_once(comp, rng)
        if p is None:
            continue
        if not on_component(comp, p):
            continue
        out.append(p)
    return out


def _sample_once(comp: LocusComponent, rng):
    kind = comp.kind
    if kind in ("Hyperplane", "Plane", "Line", "Point"):
        ker = ratlin.kernel_basis([list(g.as_linear()) for g in comp.generators])
        if not ker:
            return None
        coeffs = [_rand_rational(rng) for _ in ker]
        if all(c == 0 for c in coeffs):
            return None
        return tuple(
            sum((c * b[i] for c, b in zip(coeffs, ker)), Fraction(0)) for i in range(5)
        )
    if kind == "CubicScroll":
        block = comp.extras["block"]
        s, t = _rand_rational(rng), _rand_rational(rng)
        if s == 0 and t == 0:
            return None
        rows = [
            [s * a + t * b for a, b in zip(block[i][0].as_linear(), block[i][1].as_linear())]
            for i in range(3)
        ]
        ker = ratlin.kernel_basis(rows)
        if len(ker) < 2:
            return None
        u, v = _rand_rational(rng), _rand_rational(rng)
        if u == 0 and v == 0:
            return None
        return tuple(u * a + v * b for a, b in zip(ker[0], ker[1]))
    if kind == "TwistedCubic":
        row3, row4 = comp.extras["pencil"]
        lam = _rand_rational(rng)
        eqs = [list((row3[j] - lam * row4[j]).as_linear()) for j in range(3)]
        eqs.append(list(comp.extras["n13"].as_linear()))
        ker = ratlin.kernel_basis(eqs)
        if len(ker) != 1:
            return None
        return tuple(ker[0])
    if kind in ("Cone", "QuadricSurface", "QuadricHypersurface"):
        anchor = comp.extras.get("anchor")
        quad = next(g for g in comp.generators if g.degree() == 2)
        linear = [g for g in comp.generators if g.degree() == 1]
        if anchor is not None:
            return _chord_sample(quad, linear, anchor, rng)
        return _float_chord_sample(quad, linear, rng)
    raise ValueError(f"no sampler for {kind}")


def _chord_sample(quad: Poly, linear: list[Poly], anchor, rng):
    """Second intersection of a chord through a rational point of the quadric."""
    if linear:
        ker = ratlin.kernel_basis([list(g.as_linear()) for g in linear])
        coeffs = [_rand_rational(rng) for _ in ker]
        direction = tuple(
            sum((c * b[i] for c, b in zip(coeffs, ker)), Fraction(0)) for i in range(5)
        )
    else:
        direction = _rand_point(rng)
    if all(v == 0 for v in direction):
        return None
    a = quad.evaluate(direction)
    if a == 0:
        return None
    S = quadric_sym_matrix(quad)
    b2 = sum(
        ratlin.frac(anchor[i]) * S[i][j] * direction[j]
        for i in range(5)
        for j in range(5)
    )
    t = -2 * b2 / a
    if t == 0:
        return None
    pt = tuple(ratlin.frac(anchor[i]) + t * direction[i] for i in range(5))
    if all(v == 0 for v in pt):
        return None
    return pt


def _float_chord_sample(quad: Poly, linear: list[Poly], rng):
    if linear:
        ker = ratlin.kernel_basis([list(g.as_linear()) for g in linear])
        base = np.array([[float(x) for x in b] for b in ker])
        a_pt = rng.standard_normal(len(ker)) @ base
        d_pt = rng.standard_normal(len(ker)) @ base
    else:
        a_pt = rng.standard_normal(5)
        d_pt = rng.standard_normal(5)
    qa = float(quad.evaluate(tuple(a_pt)))
    qd = float(quad.evaluate(tuple(d_pt)))
    S = np.array([[float(x) for x in row] for row in quadric_sym_matrix(quad)])
    b = a_pt @ S @ d_pt
    disc = b * b - qa * qd
    if qd == 0 or disc < 0:
        return None
    t = (-b + np.sqrt(disc)) / qd
    return tuple(a_pt + t * d_pt)


# -- verification -------------------------------------------------------------------


def matrix_rank_at(N: LinFormMatrix, p, tol: float = 1e-8) -> int:
    exact = all(isinstance(v, (int, Fraction)) for v in p)
    vals = [[e.evaluate(tuple(p)) for e in row] for row in N.entries]
    if exact:
        return ratlin.rank([[ratlin.frac(v) for v in row] for row in vals])
    arr = np.array(vals, dtype=float)
    s = np.linalg.svd(arr, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def verify_rank_drop(
    N: LinFormMatrix,
    pts: Sequence,
    rng=None,
    off_count: int = 50,
    avoid: Sequence[LocusComponent] = (),
) -> dict:
    """Rank <= 2 at each given on-locus point, rank 3 at random points.

    Random draws that happen to land on a component in `avoid` are
    redrawn: they are on-locus, not counterexamples.
    """
    on_ranks = [matrix_rank_at(N, p) for p in pts]
    report = {
        "on_locus_ok": all(r <= 2 for r in on_ranks),
        "on_locus_max_rank": max(on_ranks) if on_ranks else None,
        "off_locus_ok": True,
    }
    if rng is not None:
        checked = 0
        guard = 0
        while checked < off_count and guard < 100 * off_count:
            guard += 1
            p = _rand_point(rng)
            if all(v == 0 for v in p):
                continue
            if any(on_component(c, p) for c in avoid):
                continue
            checked += 1
            if matrix_rank_at(N, p) != 3:
                report["off_locus_ok"] = False
    return report


def scan_completeness(
    N: LinFormMatrix,
    decomposition: LocusDecomposition,
    rng,
    count: int = 10_000,
    rank_tol: float = 1e-6,
) -> dict:
    """Every random point with numerically deficient rank sits on a component."""
    arrs = [
        np.array([[float(c) for c in e.as_linear()] for e in row])
        for row in N.entries
    ]
    pts = rng.standard_normal((count, 5))
    vals = np.stack([pts @ a.T for a in arrs], axis=1)  # (count, 4, 3)
    svals = np.linalg.svd(vals, compute_uv=False)
    deficient = svals[:, 2] <= rank_tol * svals[:, 0]
    misses = 0
    hits = 0
    for idx in np.nonzero(deficient)[0]:
        p = tuple(pts[idx])
        hits += 1
        if not any(on_component(c, p, tol=1e-6) for c in decomposition.components):
            misses += 1
    return {"deficient_found": hits, "off_component": misses, "ok": misses == 0}


def _restrict_forms(gens: Sequence[Poly], basis) -> list[Poly]:
    return [compose_linear(g, basis) for g in gens]


def incidence_checks(d: LocusDecomposition) -> dict:
    """Verify the stated intersection facts for the decomposition's family."""
    report: dict = {"family": d.family, "checks": {}}

    def fail(name, msg):
        raise IncidenceMismatch(f"{d.family}/{name}: {msg}")

    if d.family == FAMILY_B:
        cubic = d.component("TwistedCubic")
        n13 = cubic.extras["n13"]
        plane = d.component("Plane")
        line_forms = [n13] + plane.generators
        basis = ratlin.kernel_basis([list(f.as_linear()) for f in line_forms])
        if len(basis) != 2:
            fail("r_B", "H_B and L_B do not meet in a line")
        q1 = cubic.generators[1]
        restricted = compose_linear(q1, basis)
        if restricted.is_zero:
            fail("r_B.C_B", "q1 vanishes on all of r_B")
        if restricted.homogeneous_degree() != 2:
            fail("r_B.C_B", "restricted q1 is not a binary quadric")
        report["checks"]["rB_meets_CB_in"] = 2
    elif d.family == FAMILY_C:
        planes = [c for c in d.components if c.kind == "Plane"]
        forms = planes[0].generators + planes[1].generators
        ker = ratlin.kernel_basis([list(f.as_linear()) for f in forms])
        if len(ker) != 1:
            fail("LC1.LC2", "planes do not meet in a single point")
        p = tuple(ker[0])
        h = d.component("Hyperplane").generators[0]
        if h.evaluate(p) != 0:
            fail("LC1.LC2", "intersection point is off H_C")
        report["checks"]["planes_meet_at_point_on_HC"] = True
    elif d.family == FAMILY_D:
        line = d.component("Line")
        surf = d.component("QuadricSurface")
        basis = ratlin.kernel_basis([list(f.as_linear()) for f in line.generators])
        if len(basis) != 2:
            fail("r_D", "line generators do not cut a line")
        lin, quad = surf.generators
        lin_r = compose_linear(lin, basis)
        quad_r = compose_linear(quad, basis)
        if not quad_r.is_zero:
            fail("QD.rD", "the degree-2 generator does not vanish on r_D")
        if lin_r.is_zero or lin_r.homogeneous_degree() != 1:
            fail("QD.rD", "restricted hyperplane form is degenerate")
        report["checks"]["QD_meets_rD_in"] = 1
    elif d.family == FAMILY_S1:
        cone = d.component("Cone")
        vertex = d.component("Point")
        p = vertex.extras["point"]
        if cone.generators[0].evaluate(p) != 0:
            fail("vertex", "vertex is off the cone")
        if not _proportional_vec(list(cone.extras["vertex"]), list(p)):
            fail("vertex", "vertex differs from the cone's singular point")
        report["checks"]["vertex_on_cone"] = True
    elif d.family == FAMILY_S2:
        line = d.component("Line")
        quad = d.component("QuadricHypersurface").generators[0]
        basis = ratlin.kernel_basis([list(f.as_linear()) for f in line.generators])
        if len(basis) != 2:
            fail("r", "line generators do not cut a line")
        if not compose_linear(quad, basis).is_zero:
            fail("r_in_Q", "line is not contained in the quadric")
        report["checks"]["line_in_quadric"] = True
    elif d.family == FAMILY_S3:
        plane = d.component("Plane")
        quad = d.component("QuadricHypersurface").generators[0]
        basis = ratlin.kernel_basis([list(f.as_linear()) for f in plane.generators])
        if len(basis) != 3:
            fail("plane", "plane generators do not cut a plane")
        conic = compose_linear(quad, basis)
        if conic.is_zero:
            fail("plane_vs_Q", "quadric contains the plane")
        report["checks"]["restriction_is_nonzero_conic"] = True
    elif d.family == FAMILY_A:
        report["checks"]["none"] = True
    return report


# -- degree checks -------------------------------------------------------------------


def _binary_resultant_u(f: Poly, g: Poly) -> Poly:
    """Resultant of two conics in (s, t, u) with respect to u.

    Inputs use variable slots 1..3; the result is a binary form in s, t.
    """

    def u_coeffs(p: Poly) -> list[Poly]:
        out = [Poly.zero()] * 3
        for e, c in p.terms.items():
            k = e[2]
            e2 = list(e)
            e2[2] = 0
            out[k] = out[k] + Poly({tuple(e2): c})
        return out

    a = u_coeffs(f)
    b = u_coeffs(g)
    syl = [
        [a[2], a[1], a[0], Poly.zero()],
        [Poly.zero(), a[2], a[1], a[0]],
        [b[2], b[1], b[0], Poly.zero()],
        [Poly.zero(), b[2], b[1], b[0]],
    ]
    return poly_det(syl)


def _binary_gcd_degree(f: Poly, g: Poly) -> int:
    from .poly import _uni_gcd_degree

    def split(p: Poly):
        d = p.homogeneous_degree()
        coeffs = [Fraction(0)] * (d + 1)
        for e, c in p.terms.items():
            coeffs[e[0]] = c
        smax = max(i for i, c in enumerate(coeffs) if c)
        return coeffs[: smax + 1], d - smax

    cf, tf = split(f)
    cg, tg = split(g)
    return _uni_gcd_degree(cf, cg) + min(tf, tg)


def component_degree_check(comp: LocusComponent, rng, retries: int = 20) -> int:
    """Count, over C, intersections with a random complementary linear space.

    Dimension-3 components are cut with a line, dimension-2 with a 2-plane,
    and curves with a hyperplane; the count must equal the degree.
    """
    for _ in range(retries):
        got = _degree_once(comp, rng)
        if got is not None:
            return got
    raise SamplingFailed(f"degree check for {comp.kind} found no generic slice")


def _degree_once(comp: LocusComponent, rng):
    kind = comp.kind
    if kind in ("Hyperplane", "QuadricHypersurface", "Cone"):
        a, b = _rand_point(rng), _rand_point(rng)
        r = compose_linear(comp.generators[0], [a, b])
        if r.is_zero or r.homogeneous_degree() != comp.degree:
            return None
        return r.homogeneous_degree()
    if kind in ("Plane", "Line", "Point"):
        # complementary slice: solve generators plus enough random forms
        from .poly import linear_form

        extra = comp.dim
        forms = list(comp.generators) + [
            linear_form([_rand_rational(rng) for _ in range(5)]) for _ in range(extra)
        ]
        ker = ratlin.kernel_basis([list(f.as_linear()) for f in forms])
        return 1 if len(ker) == 1 else None
    if kind == "QuadricSurface":
        basis = [_rand_point(rng) for _ in range(3)]
        lin, quad = (
            compose_linear(comp.generators[0], basis),
            compose_linear(comp.generators[1], basis),
        )
        if lin.is_zero:
            return None
        line = ratlin.kernel_basis([list(lin.as_linear())[:3]])
        if len(line) != 2:
            return None
        # restrict the conic to the line inside the slice plane
        l3 = [tuple(list(v) + [Fraction(0), Fraction(0)]) for v in line]
        rq = compose_linear(quad, l3)
        if rq.is_zero or rq.homogeneous_degree() != 2:
            return None
        return 2
    if kind == "TwistedCubic":
        row3, row4 = comp.extras["pencil"]
        n13 = comp.extras["n13"]
        from .poly import divide_exact, gcd_many, linear_form

        h = linear_form([_rand_rational(rng) for _ in range(5)])
        # Cramer parametrization: the kernel of the system whose rows are
        # (row3_j - lambda row4_j) and n13 has components equal to signed
        # 4x4 minors, polynomials of degree <= 3 in lambda (slot x1)
        lam = Poly.var(1)
        mat = []
        for j in range(3):
            a = row3[j].as_linear()
            b = row4[j].as_linear()
            mat.append([Poly.const(a[t]) - lam * b[t] for t in range(5)])
        mat.append([Poly.const(x) for x in n13.as_linear()])
        comps = []
        for col in range(5):
            sub = [[mat[r][c] for c in range(5) if c != col] for r in range(4)]
            m = poly_det(sub)
            comps.append(m if col % 2 == 0 else -m)
        if all(c.is_zero for c in comps):
            return None
        content = gcd_many(comps)
        if content.degree() > 0:
            comps = [divide_exact(c, content) for c in comps]
        hp = Poly.zero()
        for coeff, c in zip(h.as_linear(), comps):
            hp = hp + coeff * c
        if hp.is_zero:
            return None
        return hp.degree()
    if kind == "CubicScroll":
        basis = [_rand_point(rng) for _ in range(3)]
        m = [compose_linear(g, basis) for g in comp.generators]
        if any(x.is_zero for x in m):
            return None
        r12 = _binary_resultant_u(m[0], m[1])
        r13 = _binary_resultant_u(m[0], m[2])
        if r12.is_zero or r13.is_zero:
            return None
        return _binary_gcd_degree(r12, r13)
    raise ValueError(f"no degree check for {kind}")
