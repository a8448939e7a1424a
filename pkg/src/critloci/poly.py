"""Exact sparse multivariate polynomials over the rationals in x1..x5.

A polynomial is a dict mapping exponent 5-tuples to nonzero Fraction
coefficients; the zero polynomial is the empty dict.  x1..x5 are the
projective coordinates of P^4.  Everything here is exact: no floats enter
unless a caller evaluates at a floating point.

The fixed monomial order used for normalization and text output is graded
lexicographic with x1 > x2 > x3 > x4 > x5.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

NVARS = 5

Exponent = tuple[int, int, int, int, int]

_ZERO_EXP: Exponent = (0, 0, 0, 0, 0)


class UnsupportedDegree(ValueError):
    """Raised by gcd when an input exceeds the supported degree (3)."""


class NotDivisible(ArithmeticError):
    """Raised by divide_exact when the division leaves a remainder."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Poly:
    """Immutable sparse polynomial; do not mutate .terms after construction."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exponent, Fraction] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, c in terms.items():
                c = _frac(c)
                if c != 0:
                    clean[tuple(exp)] = c  # type: ignore[index]
        self.terms: dict[Exponent, Fraction] = clean

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def const(c) -> "Poly":
        return Poly({_ZERO_EXP: _frac(c)})

    @staticmethod
    def one() -> "Poly":
        return Poly.const(1)

    @staticmethod
    def var(i: int) -> "Poly":
        """The variable x_i, i in 1..5."""
        if not 1 <= i <= NVARS:
            raise ValueError(f"variable index {i} out of range 1..{NVARS}")
        e = [0] * NVARS
        e[i - 1] = 1
        return Poly({tuple(e): Fraction(1)})

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneous_degree(self) -> int | None:
        """The common degree of all terms, or None if inhomogeneous/zero."""
        degs = {sum(e) for e in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    def coeff(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))  # type: ignore[arg-type]

    def variables(self) -> set[int]:
        """1-based indices of variables that actually occur."""
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i + 1)
        return used

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = Poly.__new__(Poly)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) + (-self)

    def __mul__(self, other) -> "Poly":
        other = _as_poly(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        p = Poly.__new__(Poly)
        p.terms = out  # type: ignore[assignment]
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other) if other else Poly.zero()
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, point: Sequence) -> Fraction | float:
        """Evaluate at a 5-tuple; exact if all coordinates are rational."""
        if len(point) != NVARS:
            raise ValueError("point must have 5 coordinates")
        exact = all(isinstance(v, (int, Fraction)) for v in point)
        if exact:
            total = Fraction(0)
            for e, c in self.terms.items():
                t = c
                for v, k in zip(point, e):
                    if k:
                        t *= _frac(v) ** k
                total += t
            return total
        total_f = 0.0
        pf = [float(v) for v in point]
        for e, c in self.terms.items():
            t = float(c)
            for v, k in zip(pf, e):
                if k:
                    t *= v**k
            total_f += t
        return total_f

    # -- monomial order (grlex, x1 > ... > x5) -------------------------------

    def lead_term(self) -> tuple[Exponent, Fraction]:
        """Leading (exponent, coefficient) in grlex order; error on zero."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=lambda t: (sum(t), t))
        return e, self.terms[e]

    def monic(self) -> "Poly":
        """Scale so the grlex leading coefficient is 1 (zero stays zero)."""
        if not self.terms:
            return self
        _, c = self.lead_term()
        return self * (1 / c)

    def coeff_norm(self) -> float:
        """Euclidean norm of the coefficient vector (float)."""
        return math.sqrt(sum(float(c) * float(c) for c in self.terms.values()))

    # -- linear forms --------------------------------------------------------

    def as_linear(self) -> tuple[Fraction, ...]:
        """Coefficient 5-tuple of a homogeneous degree-<=1 form (0 allowed)."""
        coeffs = [Fraction(0)] * NVARS
        for e, c in self.terms.items():
            if sum(e) != 1:
                raise ValueError("not a linear form")
            coeffs[e.index(1)] = c
        return tuple(coeffs)

    # -- text form ------------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text: grlex-descending sum of c*x1^a1*...*x5^a5 terms."""
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t), reverse=True):
            c = self.terms[e]
            factors = [str(c)]
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(f"x{i + 1}")
                elif k > 1:
                    factors.append(f"x{i + 1}^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    @staticmethod
    def from_text(text: str) -> "Poly":
        text = text.strip()
        if text in ("0", ""):
            return Poly.zero()
        terms: dict[Exponent, Fraction] = {}
        for part in text.split("+"):
            part = part.strip()
            coeff = Fraction(1)
            exp = [0] * NVARS
            for factor in part.split("*"):
                factor = factor.strip()
                m = re.fullmatch(r"x([1-5])(?:\^(\d+))?", factor)
                if m:
                    exp[int(m.group(1)) - 1] += int(m.group(2) or 1)
                else:
                    coeff *= Fraction(factor)
            e = tuple(exp)
            terms[e] = terms.get(e, Fraction(0)) + coeff  # type: ignore[index]
        return Poly(terms)

    def __repr__(self) -> str:
        return f"Poly({self.to_text()})"


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x) if x else Poly.zero()
    raise TypeError(f"cannot coerce {x!r} to Poly")


def linear_form(coeffs: Sequence) -> Poly:
    """Build the form c1*x1 + ... + c5*x5 from a coefficient 5-tuple."""
    if len(coeffs) != NVARS:
        raise ValueError("need 5 coefficients")
    terms: dict[Exponent, Fraction] = {}
    for i, c in enumerate(coeffs):
        c = _frac(c)
        if c:
            e = [0] * NVARS
            e[i] = 1
            terms[tuple(e)] = c  # type: ignore[index]
    return Poly(terms)


# -- matrices of polynomials ----------------------------------------------


def poly_mat_vec(M: Sequence[Sequence[Poly]], v: Sequence) -> list[Poly]:
    """M @ v where v has rational (or Poly) entries."""
    out = []
    for row in M:
        acc = Poly.zero()
        for a, b in zip(row, v):
            acc = acc + a * b
        out.append(acc)
    return out


def poly_det(M: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a small (<=5) square matrix of polynomials.

    Cofactor expansion along the row with the most zero entries.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix not square")
    rows = [[_as_poly(x) for x in row] for row in M]
    return _det_rec(rows)


def _det_rec(rows: list[list[Poly]]) -> Poly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    best = max(range(n), key=lambda i: sum(1 for p in rows[i] if p.is_zero))
    acc = Poly.zero()
    rest = [rows[i] for i in range(n) if i != best]
    for j in range(n):
        a = rows[best][j]
        if a.is_zero:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in rest]
        sub = _det_rec(minor)
        if (best + j) % 2:
            acc = acc - a * sub
        else:
            acc = acc + a * sub
    return acc


# -- exact division and gcd --------------------------------------------------


def divide_exact(f: Poly, g: Poly) -> Poly:
    """Return h with f = g*h, or raise NotDivisible."""
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero:
        return Poly.zero()
    rem = f
    quot = Poly.zero()
    ge, gc = g.lead_term()
    while not rem.is_zero:
        re_, rc = rem.lead_term()
        diff = tuple(a - b for a, b in zip(re_, ge))
        if any(d < 0 for d in diff):
            raise NotDivisible(f"{g.to_text()} does not divide {f.to_text()}")
        t = Poly({diff: rc / gc})  # type: ignore[dict-item]
        quot = quot + t
        rem = rem - t * g
    return quot


def _divides(g: Poly, f: Poly) -> bool:
    try:
        divide_exact(f, g)
        return True
    except NotDivisible:
        return False


def _coeffs_in_var(f: Poly, k: int) -> dict[int, Poly]:
    """View f as univariate in x_k: degree -> coefficient polynomial."""
    out: dict[int, dict[Exponent, Fraction]] = {}
    for e, c in f.terms.items():
        d = e[k - 1]
        e0 = list(e)
        e0[k - 1] = 0
        out.setdefault(d, {})[tuple(e0)] = c  # type: ignore[index]
    return {d: Poly(t) for d, t in out.items()}


def _from_coeffs_in_var(coeffs: dict[int, Poly], k: int) -> Poly:
    acc = Poly.zero()
    xk = Poly.var(k)
    for d, p in coeffs.items():
        acc = acc + p * xk**d
    return acc


def _deg_in(f: Poly, k: int) -> int:
    if f.is_zero:
        return -1
    return max(e[k - 1] for e in f.terms)


def _lc_in(f: Poly, k: int) -> Poly:
    d = _deg_in(f, k)
    return _coeffs_in_var(f, k).get(d, Poly.zero())


def _prem(f: Poly, g: Poly, k: int) -> Poly:
    """Pseudo-remainder of f by g with respect to x_k."""
    df, dg = _deg_in(f, k), _deg_in(g, k)
    lg = _lc_in(g, k)
    r = f
    while not r.is_zero and _deg_in(r, k) >= dg:
        dr = _deg_in(r, k)
        lr = _lc_in(r, k)
        shift = Poly.var(k) ** (dr - dg)
        r = lg * r - lr * shift * g
    return r


def _content_pp(f: Poly, k: int) -> tuple[Poly, Poly]:
    coeffs = list(_coeffs_in_var(f, k).values())
    cont = _gcd_raw_many(coeffs)
    return cont, divide_exact(f, cont)


def _gcd_raw(f: Poly, g: Poly) -> Poly:
    if f.is_zero:
        return g
    if g.is_zero:
        return f
    if f.degree() == 0 or g.degree() == 0:
        return Poly.one()
    shared = f.variables() | g.variables()
    # main variable: the one occurring in the fewest terms overall
    def occurrences(i: int) -> int:
        return sum(1 for e in f.terms if e[i - 1]) + sum(
            1 for e in g.terms if e[i - 1]
        )

    k = min(shared, key=lambda i: (occurrences(i), i))
    if _deg_in(f, k) == 0 or _deg_in(g, k) == 0:
        # the chosen variable occurs in only one input; gcd divides contents
        cf = _content_pp(f, k)[0] if _deg_in(f, k) > 0 else f
        cg = _content_pp(g, k)[0] if _deg_in(g, k) > 0 else g
        return _gcd_raw(cf, cg)
    cf, pf = _content_pp(f, k)
    cg, pg = _content_pp(g, k)
    c = _gcd_raw(cf, cg)
    a, b = (pf, pg) if _deg_in(pf, k) >= _deg_in(pg, k) else (pg, pf)
    # primitive pseudo-remainder sequence in x_k
    while not b.is_zero:
        r = _prem(a, b, k)
        if not r.is_zero:
            r = _content_pp(r, k)[1] if _deg_in(r, k) > 0 else Poly.one()
        a, b = b, r
    if _deg_in(a, k) == 0:
        return c
    return c * _content_pp(a, k)[1]


def _gcd_raw_many(polys: Iterable[Poly]) -> Poly:
    acc = Poly.zero()
    for p in polys:
        acc = _gcd_raw(acc, p)
        if acc.degree() == 0:
            return Poly.one()
    return acc


def _check_gcd_degree(f: Poly) -> None:
    if f.degree() > 3:
        raise UnsupportedDegree(
            f"gcd supports degree <= 3, got degree {f.degree()}"
        )


def _monomials(deg: int) -> list[Exponent]:
    out: list[Exponent] = []

    def rec(prefix: list[int], remaining: int, slot: int):
        if slot == NVARS - 1:
            out.append(tuple(prefix + [remaining]))  # type: ignore[arg-type]
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k, slot + 1)

    rec([], deg, 0)
    return out


_PROBE_PLANES = [
    ([3, -7, 2, 11, -5], [1, 4, -9, 2, 8]),
    ([-2, 5, 13, -3, 7], [6, -1, 4, 9, -11]),
    ([9, 2, -5, 7, 3], [-4, 13, 1, -6, 2]),
    ([5, -3, 8, -13, 1], [2, 7, -2, 5, 9]),
]


def _restrict_binary(f: Poly, A, B) -> list[Fraction]:
    """Coefficients of t^k in f(s A + t B) at s = 1, by interpolation."""
    d = f.degree()
    lams = list(range(d + 1))
    vals = []
    for lam in lams:
        pt = tuple(a + lam * b for a, b in zip(A, B))
        vals.append(f.evaluate(pt))
    from . import ratlin

    V = [[Fraction(lam) ** k for k in range(d + 1)] for lam in lams]
    sol = ratlin.solve(V, vals)
    assert sol is not None
    return sol


def _binary_gcd_degree(f: Poly, g: Poly, plane) -> int | None:
    """deg gcd of f, g restricted to a 2-plane, or None if degenerate.

    The restriction is the binary form sum_k gamma_k s^(d-k) t^k; the gcd
    degree adds the shared s- and t-valuations to the degree of the gcd of
    the stripped univariate cores.
    """
    A, B = plane
    cof = _restrict_binary(f, A, B)
    cog = _restrict_binary(g, A, B)
    if not any(cof) or not any(cog):
        return None

    def parts(coeffs, d):
        kmin = min(i for i, c in enumerate(coeffs) if c)
        kmax = max(i for i, c in enumerate(coeffs) if c)
        return coeffs[kmin : kmax + 1], kmin, d - kmax

    cf, tf, sf = parts(cof, f.degree())
    cg, tg, sg = parts(cog, g.degree())
    return min(tf, tg) + min(sf, sg) + _uni_gcd_degree(cf, cg)


def _uni_gcd_degree(a: list[Fraction], b: list[Fraction]) -> int:
    def deg(p):
        for i in range(len(p) - 1, -1, -1):
            if p[i]:
                return i
        return -1

    def rem(p, q):
        p = p[:]
        dq = deg(q)
        while deg(p) >= dq >= 0:
            dp = deg(p)
            factor = p[dp] / q[dq]
            for i in range(dq + 1):
                p[i + dp - dq] -= factor * q[i]
            p[dp] = Fraction(0)
        return p

    while deg(b) >= 0:
        a, b = b, rem(a, b)
    return deg(a)


def _gcd_syzygy(f: Poly, g: Poly, d: int) -> Poly | None:
    """The degree-d gcd of homogeneous f, g via p*f = q*g, or None."""
    df, dg = f.homogeneous_degree(), g.homogeneous_degree()
    assert df is not None and dg is not None
    bp = _monomials(dg - d)
    bq = _monomials(df - d)
    target = _monomials(df + dg - d)
    index = {m: i for i, m in enumerate(target)}
    ncols = len(bp) + len(bq)
    rows = [[Fraction(0)] * ncols for _ in target]
    for col, m in enumerate(bp):
        for e, c in f.terms.items():
            rows[index[tuple(a + b for a, b in zip(m, e))]][col] += c
    for col, m in enumerate(bq):
        for e, c in g.terms.items():
            rows[index[tuple(a + b for a, b in zip(m, e))]][len(bp) + col] -= c
    from . import ratlin

    kernel = ratlin.int_kernel_basis(ratlin.rows_to_integer(rows))
    if not kernel:
        return None
    v = kernel[0]
    q = Poly({m: v[len(bp) + i] for i, m in enumerate(bq)})
    if q.is_zero:
        return None
    try:
        h = divide_exact(f, q)
        divide_exact(g, h)
    except NotDivisible:
        return None
    return h


def _gcd_homogeneous(f: Poly, g: Poly) -> Poly:
    """Gcd of two nonzero homogeneous polynomials of degree <= 3.

    A couple of random 2-plane restrictions give the gcd degree (they can
    only overestimate, never underestimate); the gcd itself then comes out
    of the one-dimensional kernel of the linear system p*f = q*g at the
    matching degrees, verified by exact division.
    """
    cap = min(f.degree(), g.degree())
    probe = cap
    hits = 0
    for plane in _PROBE_PLANES:
        got = _binary_gcd_degree(f, g, plane)
        if got is None:
            continue
        probe = min(probe, got)
        hits += 1
        if hits == 2:
            break
    for d in range(probe, 0, -1):
        h = _gcd_syzygy(f, g, d)
        if h is not None:
            return h
    return Poly.one()


def gcd(f: Poly, g: Poly) -> Poly:
    """Gcd of two polynomials of degree <= 3, monic in grlex order.

    Exact over Q; homogeneous inputs (the supported regime) use the
    restriction-probe/syzygy-solve path, anything else falls back to a
    primitive pseudo-remainder sequence.
    """
    _check_gcd_degree(f)
    _check_gcd_degree(g)
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    if f.degree() == 0 or g.degree() == 0:
        return Poly.one()
    if f.homogeneous_degree() is not None and g.homogeneous_degree() is not None:
        return _gcd_homogeneous(f, g).monic()
    return _gcd_raw(f, g).monic()


_GCD_MANY_CACHE: dict = {}


def gcd_many(polys: Sequence[Poly]) -> Poly:
    """Gcd of a list (0 for an all-zero list), monic in grlex order.

    Memoized by value: classification recomputes the gcd of the same minor
    set that instance validation just checked.
    """
    for p in polys:
        _check_gcd_degree(p)
    key = tuple(sorted((frozenset(p.terms.items()) for p in polys), key=hash))
    hit = _GCD_MANY_CACHE.get(key)
    if hit is not None:
        return hit
    acc = Poly.zero()
    for p in polys:
        acc = gcd(acc, p)
        if acc.degree() == 0:
            acc = Poly.one()
            break
    if len(_GCD_MANY_CACHE) > 256:
        _GCD_MANY_CACHE.clear()
    _GCD_MANY_CACHE[key] = acc
    return acc


# -- linear span of forms ------------------------------------------------------


def span_dimension(forms: Sequence[Poly]) -> int:
    """Rank of the coefficient matrix of a list of linear forms."""
    from . import ratlin

    rows = [list(f.as_linear()) for f in forms]
    return ratlin.rank(rows)


# -- linear change of variables / restriction ---------------------------------


def compose_linear(f: Poly, cols: Sequence[Sequence]) -> Poly:
    """Substitute x_i = sum_j cols[j][i-1] * y_j (cols = new basis vectors).

    Each element of cols is a 5-vector; the result is a polynomial in
    y_1..y_len(cols), returned in the same 5-slot exponent encoding (unused
    trailing slots stay at exponent 0).
    """
    m = len(cols)
    if m > NVARS:
        raise ValueError("too many basis vectors")
    subs = []
    for i in range(NVARS):
        terms: dict[Exponent, Fraction] = {}
        for j in range(m):
            c = _frac(cols[j][i])
            if c:
                e = [0] * NVARS
                e[j] = 1
                terms[tuple(e)] = terms.get(tuple(e), Fraction(0)) + c  # type: ignore[index]
        subs.append(Poly(terms))
    acc = Poly.zero()
    for e, c in f.terms.items():
        t = Poly.const(c)
        for i, k in enumerate(e):
            for _ in range(k):
                t = t * subs[i]
        acc = acc + t
    return acc


# -- quadrics: symmetric matrix, rank, splitting into linear factors ----------


def quadric_sym_matrix(q: Poly) -> list[list[Fraction]]:
    """Symmetric 5x5 coefficient matrix of a homogeneous quadric."""
    if not q.is_zero and q.homogeneous_degree() != 2:
        raise ValueError("not a homogeneous quadric")
    S = [[Fraction(0)] * NVARS for _ in range(NVARS)]
    for e, c in q.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            S[i][i] = c
        else:
            S[i][j] = c / 2
            S[j][i] = c / 2
    return S


def quadric_rank(q: Poly) -> int:
    from . import ratlin

    return ratlin.rank(quadric_sym_matrix(q))


def _frac_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    n, d = c.numerator, c.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def split_quadric(q: Poly) -> tuple[Poly, Poly] | None:
    """Factor a homogeneous quadric as a product of two rational linear forms.

    Returns None when the symmetric matrix has rank > 2 (irreducible over
    the algebraic closure) or when the rank-2 form only splits over a
    quadratic extension of Q.
    """
    if q.is_zero:
        return Poly.zero(), Poly.zero()
    if q.homogeneous_degree() != 2:
        raise ValueError("not a homogeneous quadric")
    if quadric_rank(q) > 2:
        return None

    def diag_coeffs(p: Poly) -> list[Fraction]:
        return [
            p.coeff(tuple(2 if t == r else 0 for t in range(NVARS)))
            for r in range(NVARS)
        ]

    def unit(t: int, extra: int | None = None, sign: int = 1) -> list[Fraction]:
        v = [Fraction(0)] * NVARS
        v[t] = Fraction(1)
        if extra is not None:
            v[extra] = Fraction(sign)
        return v

    # ensure some square term is present, via y_i := x_i "+ x_j" if needed
    diag = diag_coeffs(q)
    back: tuple[int, int] | None = None
    if not any(diag):
        e, _ = q.lead_term()
        i, j = [t for t, k in enumerate(e) for _ in range(k)][:2]
        # substitute x = sum y_t b_t with b_i = e_i + e_j: gives a y_i^2 term
        q = compose_linear(q, [unit(t, j if t == i else None) for t in range(NVARS)])
        back = (i, j)
        diag = diag_coeffs(q)
    i = next(r for r in range(NVARS) if diag[r])
    a = diag[i]
    # complete the square on x_i:  q = a*l^2 + rest,  rest free of x_i
    S = quadric_sym_matrix(q)
    l = linear_form([S[i][t] / a for t in range(NVARS)])
    rest = q - a * l * l
    if rest.is_zero:
        u, v = a * l, l
    else:
        # rest has rank 1: rest = d*m^2
        Sr = quadric_sym_matrix(rest)
        jj = next((t for t in range(NVARS) if Sr[t][t]), None)
        if jj is None:
            return None
        d = Sr[jj][jj]
        m = linear_form([Sr[jj][t] / d for t in range(NVARS)])
        if not (rest - d * m * m).is_zero:
            return None
        s = _frac_sqrt(-d / a)
        if s is None:
            return None  # splits only over an extension of Q
        u, v = a * (l + s * m), l - s * m
    if back is not None:
        i0, j0 = back
        undo = [unit(t, j0 if t == i0 else None, sign=-1) for t in range(NVARS)]
        u, v = compose_linear(u, undo), compose_linear(v, undo)
    return u, v


def poly_sqrt(f: Poly) -> Poly | None:
    """Exact square root of a perfect-square polynomial, else None."""
    if f.is_zero:
        return Poly.zero()
    e, c = f.lead_term()
    if any(k % 2 for k in e):
        return None
    r = _frac_sqrt(c)
    if r is None:
        return None
    half = tuple(k // 2 for k in e)
    q = Poly({half: r})  # type: ignore[dict-item]
    rem = f - q * q
    guard = 0
    while not rem.is_zero:
        guard += 1
        if guard > 1000:
            return None
        et, ct = rem.lead_term()
        diff = tuple(a - b for a, b in zip(et, half))
        if any(d < 0 for d in diff):
            return None
        t = Poly({diff: ct / (2 * r)})  # type: ignore[dict-item]
        q = q + t
        rem = f - q * q
    return q
