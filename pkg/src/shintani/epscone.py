"""The sign machinery of the perturbed polyhedral cone function.

Elements of the ordered field R((eps_1))...((eps_n)) that actually occur here
are polynomials in eps_1..eps_n over Q.  A monomial eps^r succeeds eps^s when,
reading exponents from the last variable backwards, the first difference has
r_i < s_i; the sign of an element is the sign of the coefficient of its most
succeeding (leading) monomial.  Intuitively each eps_{i+1} is infinitesimal
relative to every power of eps_i.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .qlinalg import QMatrix, qv

Q = Fraction


class DegenerateConeError(ValueError):
    """Raised when the real limit generators are linearly dependent."""


class EpsPoly:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        cleaned = {}
        if terms:
            for m, c in terms.items():
                c = Q(c)
                if c:
                    cleaned[tuple(m)] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, *a):
        raise AttributeError("EpsPoly is immutable")

    @staticmethod
    def const(n: int, c) -> "EpsPoly":
        return EpsPoly(n, {(0,) * n: Q(c)})

    @staticmethod
    def eps_power(n: int, j: int, k: int, coeff=1) -> "EpsPoly":
        """coeff * eps_j^k (j is 1-based)."""
        m = tuple(k if i == j - 1 else 0 for i in range(n))
        return EpsPoly(n, {m: Q(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "EpsPoly") -> "EpsPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Q(0)) + c
        return EpsPoly(self.n, out)

    def __neg__(self):
        return EpsPoly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "EpsPoly":
        if not isinstance(other, EpsPoly):
            return EpsPoly(self.n, {m: c * Q(other) for m, c in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Q(0)) + c1 * c2
        return EpsPoly(self.n, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __eq__(self, other):
        return isinstance(other, EpsPoly) and self.n == other.n and self.terms == other.terms

    def leading_monomial(self):
        """The most succeeding monomial: minimal reversed-exponent tuple."""
        if not self.terms:
            return None
        return min(self.terms, key=lambda m: m[::-1])

    def leading_coeff(self) -> Q:
        lm = self.leading_monomial()
        return Q(0) if lm is None else self.terms[lm]

    def __repr__(self):
        if not self.terms:
            return "EpsPoly(0)"
        bits = []
        for m in sorted(self.terms, key=lambda m: m[::-1]):
            mono = "*".join(
                "e%d^%d" % (i + 1, k) if k > 1 else "e%d" % (i + 1)
                for i, k in enumerate(m)
                if k
            )
            bits.append("%s%s" % (self.terms[m], "*" + mono if mono else ""))
        return "EpsPoly(%s)" % " + ".join(bits)

    def to_json(self):
        from .qlinalg import q_to_str

        return {
            "terms": [
                {"exponents": list(m), "coeff": q_to_str(c)}
                for m, c in sorted(self.terms.items(), key=lambda kv: kv[0][::-1])
            ]
        }


def eps_sign(p: EpsPoly) -> int:
    """Sign in the ordered field: 0 for zero, else the leading coefficient's."""
    c = p.leading_coeff()
    return 0 if c == 0 else (1 if c > 0 else -1)


def monomial_succeeds(r, s) -> bool:
    """eps^r > eps^s in magnitude (r strictly succeeds s)."""
    return tuple(r)[::-1] < tuple(s)[::-1]


# ---------------------------------------------------------------------------
# the perturbation matrix M = [alpha_1 b(eps_1), ..., alpha_n b(eps_n)]

def perturbation_matrix(alphas: Sequence[QMatrix]):
    n = len(alphas)
    for a in alphas:
        if a.n != n:
            raise ValueError("need n matrices of size n")
    cols = []
    for j, a in enumerate(alphas):
        # b(eps_j) = (1, eps_j, ..., eps_j^{n-1})^T
        col = []
        for i in range(n):
            p = EpsPoly(n)
            for k in range(n):
                if a.rows[i][k]:
                    p = p + EpsPoly.eps_power(n, j + 1, k, a.rows[i][k])
            col.append(p)
        cols.append(col)
    return [[cols[j][i] for j in range(n)] for i in range(n)]  # rows


def eps_det(mat) -> EpsPoly:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    acc = EpsPoly(mat[0][0].n)
    for j in range(n):
        entry = mat[0][j]
        if entry.is_zero():
            continue
        minor = [[r[k] for k in range(n) if k != j] for r in mat[1:]]
        term = entry * eps_det(minor)
        acc = acc + (-term if j % 2 else term)
    return acc


def eps_adjugate(mat):
    n = len(mat)
    if n == 1:
        return [[EpsPoly.const(mat[0][0].n, 1)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [mat[r][c] for c in range(n) if c != j] for r in range(n) if r != i
            ]
            cof = eps_det(minor)
            adj[j][i] = -cof if (i + j) % 2 else cof
    return adj


class SigmaEvaluator:
    """Precomputed adjugate data for evaluating one tuple on many points."""

    def __init__(self, alphas: Sequence[QMatrix]):
        self.n = len(alphas)
        M = perturbation_matrix(alphas)
        det = eps_det(M)
        self.det_sign = eps_sign(det)
        if self.det_sign == 0:
            raise DegenerateConeError(
                "perturbation matrix is singular over the ordered field"
            )
        self.adj = eps_adjugate(M)

    def __call__(self, w) -> int:
        w = qv(w)
        if len(w) != self.n:
            raise ValueError("dimension mismatch")
        for i in range(self.n):
            entry = EpsPoly(self.n)
            for j in range(self.n):
                if w[j]:
                    entry = entry + self.adj[i][j] * w[j]
            if eps_sign(entry) != self.det_sign:
                return 0
        return self.det_sign


_sigma_cache: dict = {}


def sigma_evaluator(alphas: Sequence[QMatrix]) -> SigmaEvaluator:
    key = tuple(alphas)
    ev = _sigma_cache.get(key)
    if ev is None:
        ev = SigmaEvaluator(alphas)
        if len(_sigma_cache) > 256:
            _sigma_cache.clear()
        _sigma_cache[key] = ev
    return ev


def sigma_eval(alphas: Sequence[QMatrix], w) -> int:
    """The perturbed cone function at the rational point w (a row).

    Returns sign(det M) when M^{-1} w is entrywise positive in the ordered
    field, else 0; implemented through adjugate sign tests.
    """
    return sigma_evaluator(alphas)(w)


# ---------------------------------------------------------------------------
# rational simplicial cones

def primitive_row(v) -> tuple:
    v = qv(v)
    if not any(v):
        raise ValueError("zero generator")
    den = math.lcm(*(c.denominator for c in v))
    ints = [c.numerator * (den // c.denominator) for c in v]
    g = math.gcd(*(abs(x) for x in ints))
    return tuple(Q(x, g) for x in ints)


class SimplicialCone:
    """Open cone R+ v_1 + ... + R+ v_r on independent rational rows."""

    __slots__ = ("generators",)

    def __init__(self, generators):
        gens = tuple(primitive_row(v) for v in generators)
        if not gens:
            raise ValueError("need at least one generator")
        if _rank(gens) != len(gens):
            raise DegenerateConeError("cone generators are linearly dependent")
        object.__setattr__(self, "generators", gens)

    def __setattr__(self, *a):
        raise AttributeError("SimplicialCone is immutable")

    @property
    def n(self):
        return len(self.generators[0])

    @property
    def dim(self):
        return len(self.generators)

    def __eq__(self, other):
        return isinstance(other, SimplicialCone) and self.generators == other.generators

    def __repr__(self):
        return "SimplicialCone(%s)" % (self.generators,)

    def coords(self, w):
        """Exact lambda with w = sum lambda_j v_j, or None when w not in span."""
        return _solve_coords(self.generators, qv(w))

    def contains(self, w) -> bool:
        lam = self.coords(w)
        return lam is not None and all(x > 0 for x in lam)


def naive_cone_coords(generators, w):
    """(coordinates, member flag) of w in the open cone on the generators."""
    gens = tuple(qv(v) for v in generators)
    if _rank(gens) != len(gens):
        raise DegenerateConeError("dependent generators")
    lam = _solve_coords(gens, qv(w))
    if lam is None:
        return None, False
    return lam, all(x > 0 for x in lam)


def _rank(rows) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [e * inv for e in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c]
                m[r] = [e - f * p for e, p in zip(m[r], m[rank])]
        rank += 1
    return rank


def _solve_coords(gens, w):
    """Solve w = sum lam_j gens_j exactly; None if w is outside the span."""
    r, n = len(gens), len(w)
    # augmented system over the coordinates: n equations, r unknowns
    aug = [[gens[j][i] for j in range(r)] + [w[i]] for i in range(n)]
    rank = 0
    piv_cols = []
    for c in range(r):
        piv = next((k for k in range(rank, n) if aug[k][c] != 0), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = 1 / aug[rank][c]
        aug[rank] = [e * inv for e in aug[rank]]
        for k in range(n):
            if k != rank and aug[k][c] != 0:
                f = aug[k][c]
                aug[k] = [e - f * p for e, p in zip(aug[k], aug[rank])]
        piv_cols.append(c)
        rank += 1
    for k in range(rank, n):
        if aug[k][r] != 0:
            return None
    lam = [Q(0)] * r
    for k, c in enumerate(piv_cols):
        lam[c] = aug[k][r]
    return tuple(lam)


class ConeChain:
    """Integer combination of open simplicial cones."""

    __slots__ = ("n", "parts")

    def __init__(self, n: int, parts):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "parts", tuple((int(s), c) for s, c in parts))

    def __setattr__(self, *a):
        raise AttributeError("ConeChain is immutable")

    def evaluate(self, w) -> int:
        return sum(s for s, c in self.parts if c.contains(w))

    def __repr__(self):
        return "ConeChain(%r)" % (list(self.parts),)

    def to_json(self):
        from .qlinalg import q_to_str

        return [
            {"sign": s, "generators": [[q_to_str(x) for x in g] for g in c.generators]}
            for s, c in self.parts
        ]


def face_decompose(alphas: Sequence[QMatrix]) -> ConeChain:
    """Signed open faces of the real cone on the first columns of the alphas,
    with coefficients sampled from the perturbed cone function.

    The perturbed function is constant on each relatively open face, so one
    interior sample per face (the sum of its generators) determines the chain.
    """
    n = len(alphas)
    limits = [tuple(a.column(0)) for a in alphas]
    if _rank(tuple(limits)) != n:
        raise DegenerateConeError(
            "real limit generators are dependent; this decomposition is unsupported"
        )
    parts = []
    for r in range(1, n + 1):
        for subset in combinations(range(n), r):
            w = tuple(sum(limits[j][i] for j in subset) for i in range(n))
            coeff = sigma_eval(alphas, w)
            if coeff:
                parts.append((coeff, SimplicialCone([limits[j] for j in subset])))
    return ConeChain(n, parts)
