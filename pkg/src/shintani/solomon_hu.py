"""The Solomon-Hu pairing and the two cone-side evaluators.

<c, f> = prod_j 1/(1 - e^{w_j . T}) * sum_{w in P} f(w) e^{w . T}, where the
generators are rescaled (by the minimal positive rational multiple) into the
lattice of periods of f and P is the half-open parallelepiped (0,1]w_1 + ...

Points are enumerated by an exact bounding-box scan with integer-scaled
membership tests on the lambda coordinates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cyclotomic import Cyc
from .epscone import DegenerateConeError, SimplicialCone, face_decompose, _rank, _solve_coords
from .qlinalg import QMatrix, qv
from .schwartz import TestFunction, minimal_period_multiple
from .series import (
    FormalFraction,
    MultiSeries,
    reciprocal_one_minus,
)

Q = Fraction


def scaled_generators(generators, f: TestFunction):
    """Each generator scaled by the minimal positive integer multiple that
    lands it in the period lattice of f (generators already inside stay put).
    """
    gens = [qv(v) for v in generators]
    if _rank(tuple(gens)) != len(gens):
        raise DegenerateConeError("dependent cone generators")
    out = []
    for v in gens:
        m_rat = minimal_period_multiple(f, v)
        # integer multiples of v landing in the lattice form numerator(m)*Z
        m = m_rat.numerator
        out.append(tuple(m * c for c in v))
    return out


@lru_cache(maxsize=512)
def _monomial_tree(n: int, D: int):
    """Grlex-ordered monomials with (index of parent, coordinate) links so
    u^m can be built with one multiplication each."""
    monomials = sorted(_monomials(n, D), key=lambda m: (sum(m), m))
    index = {m: i for i, m in enumerate(monomials)}
    links = []
    for m in monomials:
        if sum(m) == 0:
            links.append((0, -1))
            continue
        i = next(k for k, e in enumerate(m) if e)
        parent = m[:i] + (m[i] - 1,) + m[i + 1 :]
        links.append((index[parent], i))
    return monomials, links


def _monomials(n, D):
    out = [()]
    for _ in range(n):
        out = [m + (k,) for m in out for k in range(D + 1 - sum(m))]
    return out


def enumerate_fundamental_domain(generators, f: TestFunction):
    """Nonzero (point, value) pairs of f on its grid inside the half-open
    fundamental parallelepiped of the rescaled generators."""
    if f.is_zero():
        return []
    gens = scaled_generators(generators, f)
    return _domain_points(tuple(gens), f)


def _domain_points(gens, f):
    r = len(gens)
    n = f.n
    h = f.h
    # exact bounding box from the 2^r parallelepiped vertices
    lo = [Q(0)] * n
    hi = [Q(0)] * n
    for i in range(n):
        for v in gens:
            if v[i] > 0:
                hi[i] += v[i]
            else:
                lo[i] += v[i]
    out = []
    if r == n:
        W = QMatrix(gens)
        det = W.det()
        inv = W.inv()
        # lambda = (u/h) W^{-1}; scale to integers: 0 < u . C_j <= h*s
        s = math.lcm(*(c.denominator for row in inv.rows for c in row))
        C = [[int(inv.rows[i][j] * s) for j in range(n)] for i in range(n)]
        bound = int(h * s)
        ranges = [range(math.ceil(lo[i] * h), math.floor(hi[i] * h) + 1) for i in range(n)]
        grid = [()]
        for rg in ranges:
            grid = [p + (u,) for p in grid for u in rg]
        for u in grid:
            ok = True
            for j in range(n):
                acc = 0
                for i in range(n):
                    acc += u[i] * C[i][j]
                if not (0 < acc <= bound):
                    ok = False
                    break
            if ok:
                w = tuple(Q(ui, 1) / h for ui in u)
                val = f.value_at(w)
                if not val.is_zero():
                    out.append((w, val))
    else:
        ranges = [range(math.ceil(lo[i] * h), math.floor(hi[i] * h) + 1) for i in range(n)]
        grid = [()]
        for rg in ranges:
            grid = [p + (u,) for p in grid for u in rg]
        for u in grid:
            w = tuple(Q(ui, 1) / h for ui in u)
            lam = _solve_coords(tuple(gens), w)
            if lam is None or not all(0 < x <= 1 for x in lam):
                continue
            val = f.value_at(w)
            if not val.is_zero():
                out.append((w, val))
    out.sort(key=lambda pv: pv[0])
    return out


def exponential_sum(points, n: int, D) -> MultiSeries:
    """sum f(w) e^{w.T} truncated at total degree D, grouped by value class."""
    monomials, links = _monomial_tree(n, int(D))
    buckets: dict = {}
    denom = 1
    for w, _ in points:
        denom = math.lcm(denom, *(c.denominator for c in w))
    for w, val in points:
        key = (val.n, val.num, val.den)
        acc = buckets.get(key)
        if acc is None:
            acc = [0] * len(monomials)
            buckets[key] = (val, acc)
        else:
            acc = acc[1]
        u = [int(c * denom) for c in w]
        vals = [0] * len(monomials)
        vals[0] = 1
        acc[0] += 1
        for idx in range(1, len(monomials)):
            parent, i = links[idx]
            vals[idx] = vals[parent] * u[i]
            acc[idx] += vals[idx]
    out: dict = {}
    for val, acc in buckets.values():
        for idx, total in enumerate(acc):
            if total:
                m = monomials[idx]
                k = sum(m)
                scale = Q(total, denom**k)
                for e in m:
                    scale /= math.factorial(e)
                term = val * scale
                cur = out.get(m)
                out[m] = term if cur is None else cur + term
    return MultiSeries(n, int(D), out)


def sh_pair(cone: SimplicialCone, f: TestFunction, D) -> FormalFraction:
    """The Solomon-Hu pairing of an open simplicial cone with f, trusted
    through total degree D."""
    n = f.n
    if cone.n != n:
        raise ValueError("dimension mismatch")
    if f.is_zero():
        return FormalFraction.zero(n)
    gens = scaled_generators(cone.generators, f)
    r = len(gens)
    points = _domain_points(tuple(gens), f)
    num = exponential_sum(points, n, D + r)
    total = FormalFraction.from_series(num)
    for v in gens:
        total = total * reciprocal_one_minus(0, v, D + r - 1)
    return total


def phi_nsh(gammas: Sequence[QMatrix], f: TestFunction, D) -> FormalFraction:
    """Pairing against the open cone on the first columns of the gammas."""
    rows = [tuple(g.column(0)) for g in gammas]
    cone = SimplicialCone(rows)  # raises DegenerateConeError when dependent
    return sh_pair(cone, f, D)


def phi_sh(alphas: Sequence[QMatrix], f: TestFunction, D) -> FormalFraction:
    """Pairing against the perturbed-cone chain: the sum of the signed faces."""
    chain = face_decompose(alphas)
    n = f.n
    total = FormalFraction.zero(n)
    for sign, cone in chain.parts:
        total = total + sh_pair(cone, f, D).scaled(sign)
    return total
