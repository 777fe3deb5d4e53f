"""Locally constant functions on Q^n with bounded support, in canonical form.

A TestFunction is stored by its period g, its grid (points of (1/h)Z^n), and
the finite map of nonzero values on [0, g)^n.  The canonical form makes
equality structural, so the refinement identities hold by construction.

Points of Q^n are rows; the group acts by (gamma.f)(x) = f(x.gamma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cyclotomic import Cyc, root_of_unity
from .qlinalg import QMatrix, q_to_str, qv

Q = Fraction


def rgcd(values) -> Q:
    """gcd of rationals: the largest q with every value in q*Z."""
    g = Q(0)
    for v in values:
        v = abs(Q(v))
        if v == 0:
            continue
        if g == 0:
            g = v
        else:
            g = Q(math.gcd(g.numerator * v.denominator, v.numerator * g.denominator),
                  g.denominator * v.denominator)
    return g


def rlcm(values) -> Q:
    """lcm of positive rationals: the smallest q in every value's v*Z."""
    out = Q(0)
    for v in values:
        v = Q(v)
        if v <= 0:
            raise ValueError("rlcm needs positive values")
        if out == 0:
            out = v
        else:
            out = Q(math.lcm(out.numerator * v.denominator, v.numerator * out.denominator),
                    out.denominator * v.denominator)
    return out


@dataclass(frozen=True)
class Coset:
    """The product coset prod_i (a_i + d_i Z), normalized to 0 <= a_i < d_i."""

    base: tuple
    moduli: tuple

    def __post_init__(self):
        base = qv(self.base)
        moduli = qv(self.moduli)
        if len(base) != len(moduli):
            raise ValueError("base and moduli lengths differ")
        if any(d <= 0 for d in moduli):
            raise ValueError("moduli must be positive")
        base = tuple(a % d for a, d in zip(base, moduli))
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "moduli", moduli)

    @property
    def n(self):
        return len(self.base)

    def contains(self, x) -> bool:
        return all((Q(xi) - a) % d == 0 for xi, a, d in zip(x, self.base, self.moduli))


class TestFunction:
    """Canonical form: minimal period g, minimal grid h, values on [0,g)^n."""

    __test__ = False  # keep pytest collection away
    __slots__ = ("n", "h", "g", "values")

    def __init__(self, n: int, h: Q, g: Q, values: Mapping):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "values", dict(values))

    def __setattr__(self, *a):
        raise AttributeError("TestFunction is immutable")

    # -- canonicalization ------------------------------------------------

    @staticmethod
    def canonical(n: int, period: Q, values: Mapping) -> "TestFunction":
        """Build the canonical form from any valid period and value map."""
        merged: dict = {}
        for p, v in values.items():
            if v.is_zero():
                continue
            key = tuple(Q(c) % period for c in p)
            cur = merged.get(key)
            merged[key] = v if cur is None else cur + v
        vals = {p: v for p, v in merged.items() if not v.is_zero()}
        if not vals:
            return TestFunction(n, Q(1), Q(1), {})
        g = _minimal_period(n, period, vals)
        if g != period:
            vals = {tuple(c % g for c in p): v for p, v in vals.items()}
        coords = [c for p in vals for c in p]
        h_inv = rgcd(coords + [g])
        h = 1 / h_inv
        return TestFunction(n, h, g, dict(sorted(vals.items())))

    def __eq__(self, other):
        return (
            isinstance(other, TestFunction)
            and (self.n, self.h, self.g) == (other.n, other.h, other.g)
            and self.values == other.values
        )

    def __repr__(self):
        return "TestFunction(n=%d, h=%s, g=%s, %d points)" % (self.n, self.h, self.g, len(self.values))

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.values

    def value_at(self, x) -> Cyc:
        if self.is_zero():
            return Cyc.zero()
        key = tuple(Q(c) % self.g for c in x)
        return self.values.get(key, Cyc.zero())

    def support_points(self):
        """Representatives of the support in [0, g)^n."""
        return list(self.values)

    def is_integer_valued(self) -> bool:
        return all(v.is_rational() and v.as_rational().denominator == 1 for v in self.values.values())

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "TestFunction") -> "TestFunction":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        G = rlcm([self.g, other.g])
        vals: dict = {}
        for f in (self, other):
            reps = int(G / f.g)
            for p, v in f.values.items():
                for shift in _shift_grid(self.n, f.g, reps):
                    q = tuple(a + b for a, b in zip(p, shift))
                    vals[q] = vals.get(q, Cyc.zero()) + v
        return TestFunction.canonical(self.n, G, vals)

    def __neg__(self):
        return TestFunction(self.n, self.h, self.g, {p: -v for p, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c) -> "TestFunction":
        if not isinstance(c, Cyc):
            c = Cyc.rational(c)
        if c.is_zero():
            return TestFunction(self.n, Q(1), Q(1), {})
        # scaling by a nonzero field element changes no support or period
        return TestFunction(self.n, self.h, self.g, {p: v * c for p, v in self.values.items()})

    def to_json(self):
        return {
            "n": self.n,
            "h": q_to_str(self.h),
            "g": q_to_str(self.g),
            "values": [
                {"point": [q_to_str(c) for c in p], "cycnum": v.to_json()}
                for p, v in sorted(self.values.items())
            ],
        }

    @staticmethod
    def from_json(data) -> "TestFunction":
        vals = {
            tuple(Q(c) for c in item["point"]): Cyc.from_json(item["cycnum"])
            for item in data["values"]
        }
        return TestFunction.canonical(data["n"], Q(data["g"]), vals)


def _shift_grid(n: int, step: Q, reps: int):
    out = [()]
    for _ in range(n):
        out = [m + (step * k,) for m in out for k in range(reps)]
    return out


def _minimal_period(n: int, period: Q, vals: dict) -> Q:
    """Smallest scalar g dividing `period` with all coordinate shifts fixing vals."""
    per_coord = []
    for i in range(n):
        best = period
        for k in sorted(_int_divisors_desc(period, vals, i), reverse=True):
            cand = period / k
            if _is_shift_invariant(vals, period, i, cand):
                best = cand
                break
        per_coord.append(best)
    return rlcm(per_coord)


def _int_divisors_desc(period: Q, vals: dict, i: int) -> list:
    # candidate divisors k of the number of grid steps per period along axis i
    coords = [p[i] for p in vals] + [period]
    step = rgcd(coords)
    if step == 0:
        return [1]
    m = int(period / step)
    return [k for k in range(1, m + 1) if m % k == 0]


def _is_shift_invariant(vals: dict, period: Q, i: int, shift: Q) -> bool:
    for p, v in vals.items():
        q = list(p)
        q[i] = (q[i] + shift) % period
        w = vals.get(tuple(q))
        if w is None or not w == v:
            return False
    return True


# ---------------------------------------------------------------------------
# construction from coset combinations

def normalize(terms: Iterable) -> TestFunction:
    """Canonical TestFunction of sum_j coeff_j * indicator(coset_j).

    Terms are (coeff, Coset) pairs; coeff may be Cyc, Fraction or int.
    """
    terms = list(terms)
    if not terms:
        return TestFunction(0, Q(1), Q(1), {})
    n = terms[0][1].n
    G = rlcm([d for _, c in terms for d in c.moduli])
    vals: dict = {}
    for coeff, coset in terms:
        if coset.n != n:
            raise ValueError("mixed dimensions")
        if not isinstance(coeff, Cyc):
            coeff = Cyc.rational(coeff)
        pts = [()]
        for a, d in zip(coset.base, coset.moduli):
            reps = int(G / d)
            pts = [p + (a + d * k,) for p in pts for k in range(reps)]
        for p in pts:
            vals[p] = vals.get(p, Cyc.zero()) + coeff
    return TestFunction.canonical(n, G, vals)


def indicator(base, moduli) -> TestFunction:
    return normalize([(1, Coset(qv(base), qv(moduli)))])


def chi_lattice(n: int, d=1) -> TestFunction:
    """chi_{dZ^n}."""
    return indicator((Q(0),) * n, (Q(d),) * n)


def tensor(factors: Sequence[TestFunction]) -> TestFunction:
    """(f1 (x) ... (x) fn)(x1..xn) = prod f_i(x_i) for one-dimensional f_i."""
    for f in factors:
        if f.n != 1:
            raise ValueError("tensor expects one-dimensional factors")
    n = len(factors)
    if any(f.is_zero() for f in factors):
        return TestFunction(n, Q(1), Q(1), {})
    G = rlcm([f.g for f in factors])
    out: dict = {}
    pts = [((), Cyc.one())]
    for f in factors:
        reps = int(G / f.g)
        new = []
        for p, v in pts:
            for (x,), w in f.values.items():
                for k in range(reps):
                    new.append((p + (x + f.g * k,), v * w))
        pts = new
    for p, v in pts:
        out[p] = v
    return TestFunction.canonical(n, G, out)


# ---------------------------------------------------------------------------
# period lattice helpers

def period_lattice(f: TestFunction) -> Q:
    """The minimal scalar period g; error on the zero function."""
    if f.is_zero():
        raise ValueError("the zero function has no period lattice")
    return f.g


def is_period(f: TestFunction, v) -> bool:
    """Does shifting by the vector v fix f?"""
    v = qv(v)
    if f.is_zero():
        return True
    if any((c / (1 / f.h)) % 1 != 0 for c in v):
        return False
    for p, val in f.values.items():
        q = tuple((a + b) % f.g for a, b in zip(p, v))
        w = f.values.get(q)
        if w is None or not w == val:
            return False
    return True


def minimal_period_multiple(f: TestFunction, v) -> Q:
    """Minimal positive rational m with m*v in the period lattice of f."""
    v = qv(v)
    if not any(v):
        raise ValueError("zero vector has no minimal period multiple")
    if f.is_zero():
        return Q(1)
    # m*v must lie on the grid (1/h)Z^n first
    m0 = 1 / rgcd([c * f.h for c in v if c])
    # k* m0 v lies in g Z^n, which is certainly a period; the valid k divide k*
    kstar = 1
    for c in v:
        if c:
            kstar = math.lcm(kstar, ((m0 * c) / f.g).denominator)
    for k in _sorted_divisors(kstar):
        if is_period(f, tuple(k * m0 * c for c in v)):
            return k * m0
    raise AssertionError("period search failed past the guaranteed bound")


def _sorted_divisors(n: int):
    out = []
    for d in range(1, int(math.isqrt(n)) + 1):
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
    return sorted(out)


# ---------------------------------------------------------------------------
# group action

def act_test(gamma: QMatrix, f: TestFunction) -> TestFunction:
    """(gamma.f)(x) = f(x.gamma), re-expressed on the canonical cubical grid."""
    if gamma.det() == 0:
        raise ValueError("group action needs det != 0")
    n = f.n
    if gamma.n != n:
        raise ValueError("dimension mismatch")
    if f.is_zero():
        return f
    # minimal output period: g' e_i is a period of gamma.f iff g' row_i(gamma)
    # is a period of f
    mults = [minimal_period_multiple(f, gamma.rows[i]) for i in range(n)]
    gp = rlcm(mults)
    ginv = gamma.inv()
    basis = [tuple(f.g * c for c in row) for row in ginv.rows]
    vals: dict = {}
    for p, v in f.values.items():
        off = ginv.act_row(p)
        for x in lattice_points_in_box(basis, off, gp):
            vals[x] = v
    return TestFunction.canonical(n, gp, vals)


def lattice_points_in_box(basis_rows, offset, hi: Q):
    """All offset + Z-combinations of basis rows inside [0, hi)^n, exactly.

    Works via the upper-triangular Hermite form of the (scaled) basis, so the
    enumeration is linear in the output size.
    """
    n = len(basis_rows)
    M = math.lcm(*(c.denominator for row in basis_rows for c in row))
    B = [[int(c * M) for c in row] for row in basis_rows]
    H = hnf_upper(B)
    if len(H) != n:
        raise ValueError("basis rows are linearly dependent")
    out = []

    def rec(level, point):
        if level == n:
            out.append(tuple(point))
            return
        row = H[level]
        step = Q(row[level], M)
        # need 0 <= point[level] + c*step < hi
        lo_c = math.ceil((-point[level]) / step)
        hi_c = math.ceil((hi - point[level]) / step)
        for c in range(lo_c, hi_c):
            newpt = [point[j] + c * Q(row[j], M) for j in range(n)]
            rec(level + 1, newpt)

    rec(0, list(offset))
    return out


def hnf_upper(rows):
    """Row-style Hermite normal form, upper triangular with positive diagonal."""
    m = [list(r) for r in rows]
    n = len(m[0])
    rank = 0
    for col in range(n):
        piv = None
        for r in range(rank, len(m)):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        # clear below by gcd steps
        for r in range(rank + 1, len(m)):
            while m[r][col] != 0:
                if abs(m[r][col]) < abs(m[rank][col]):
                    m[rank], m[r] = m[r], m[rank]
                q = m[r][col] // m[rank][col]
                m[r] = [a - q * b for a, b in zip(m[r], m[rank])]
        if m[rank][col] < 0:
            m[rank] = [-a for a in m[rank]]
        rank += 1
    m = [r for r in m if any(r)]
    # reduce above-diagonal entries for a unique form
    for i in range(len(m) - 1, -1, -1):
        lead = next(j for j in range(n) if m[i][j] != 0)
        for k in range(i):
            q = m[k][lead] // m[i][lead]
            if q:
                m[k] = [a - q * b for a, b in zip(m[k], m[i])]
    return m


# ---------------------------------------------------------------------------
# decomposition and Fourier transform

def scalar_modulus_decomposition(f: TestFunction):
    """f = sum_j b_j chi_{a_j + d Z^n} with integer b_j and the common d = g."""
    out = []
    for p, v in sorted(f.values.items()):
        if not (v.is_rational() and v.as_rational().denominator == 1):
            raise ValueError(
                "scalar_modulus_decomposition needs integer values, got %r at %s" % (v, p)
            )
        out.append((int(v.as_rational()), p, f.g))
    return out


def fourier(f: TestFunction) -> TestFunction:
    """hat f(y) = h-measure-weighted sum of f(x) e(-<x,y>) over a period cell.

    With the normalization h_Z(chi_{a+dZ}) = 1/d this sends the coset
    prod(a_i + d_i Z) to (1/prod d_i) e(-<a,y>) on the dual grid.  Cost scales
    with (g * g')^n where g' is the output period, so keep inputs small.
    """
    n = f.n
    if f.is_zero():
        return f
    g = f.g
    # output grid is (1/g)Z^n; the minimal value period is the inverse gcd of
    # the support coordinates, and the stored period must sit on the grid
    nonzero = [c for p in f.values for c in p if c]
    gp = rlcm(([1 / rgcd(nonzero)] if nonzero else []) + [1 / g])
    steps = int(g * gp)
    scale = (1 / g) ** n
    axis = [Q(k) / g for k in range(steps)]
    # separable partial transforms, one coordinate at a time
    cur = {p: v.__mul__(scale) for p, v in f.values.items()}
    for i in range(n):
        new: dict = {}
        for key, v in cur.items():
            p_i = key[i]
            for y in axis:
                w = v * root_of_unity(-p_i * y)
                nk = key[:i] + (y,) + key[i + 1 :]
                cur_w = new.get(nk)
                new[nk] = w if cur_w is None else cur_w + w
        cur = {k: v for k, v in new.items() if not v.is_zero()}
    return TestFunction.canonical(n, gp, cur)
