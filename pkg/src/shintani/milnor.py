"""Trigonometric units, formal Milnor symbols and the Stevens construction.

A TrigUnit is a multiplicative word in generators eps_w = e(lam.z - r) and
1 - eps_w (plus a sign), never reduced modulo Steinberg-type relations; every
identity the package certifies about symbols goes through dlog, which is
where the relations become series equalities.

Under T_j = 2 pi i z_j: dlog eps_w = lam . dT (a constant one-form) and
dlog(1 - eps_w) = -(eps_w / (1 - eps_w)) lam . dT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cyclotomic import Cyc, root_of_unity
from .qlinalg import QMatrix, QVector, basis_to_group, covector, qv
from .schwartz import TestFunction, act_test, scalar_modulus_decomposition
from .series import (
    INF,
    FormalFraction,
    LinForm,
    MultiSeries,
    OneForm,
    TopForm,
    canonical_form,
    compose_linear,
    eq_fraction,
    exp_affine,
    reciprocal_one_minus,
    substitute,
    _univ_invert,
    _univ_exp_minus_one_over_x,
    _univ_reciprocal_unit,
)

Q = Fraction


@dataclass(frozen=True)
class TrigParam:
    """w = (r, lam) for eps_w(z) = e(lam(z) - r); lam a nonzero covector."""

    r: Q
    lam: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", Q(self.r) % 1)
        lam = qv(self.lam)
        if not any(lam):
            raise ValueError("covector of a trigonometric parameter must be nonzero")
        object.__setattr__(self, "lam", lam)

    @property
    def n(self):
        return len(self.lam)


class TrigUnit:
    """sign * prod eps_w^k * prod (1 - eps_w)^k, factors canonically merged."""

    __slots__ = ("n", "sign", "eps", "one_minus")

    def __init__(self, n: int, sign: int = 1, eps=(), one_minus=()):
        if sign not in (1, -1):
            raise ValueError("sign must be +-1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "eps", _merge_factors(eps))
        object.__setattr__(self, "one_minus", _merge_factors(one_minus))

    def __setattr__(self, *a):
        raise AttributeError("TrigUnit is immutable")

    @staticmethod
    def one(n: int) -> "TrigUnit":
        return TrigUnit(n, 1)

    def __mul__(self, other: "TrigUnit") -> "TrigUnit":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return TrigUnit(
            self.n,
            self.sign * other.sign,
            self.eps + other.eps,
            self.one_minus + other.one_minus,
        )

    def inv(self) -> "TrigUnit":
        return TrigUnit(
            self.n,
            self.sign,
            tuple((p, -k) for p, k in self.eps),
            tuple((p, -k) for p, k in self.one_minus),
        )

    def __pow__(self, k: int) -> "TrigUnit":
        if k == 0:
            return TrigUnit.one(self.n)
        base = self if k > 0 else self.inv()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    def __eq__(self, other):
        return (
            isinstance(other, TrigUnit)
            and (self.n, self.sign) == (other.n, other.sign)
            and sorted(self.eps, key=_factor_key) == sorted(other.eps, key=_factor_key)
            and sorted(self.one_minus, key=_factor_key) == sorted(other.one_minus, key=_factor_key)
        )

    def __repr__(self):
        bits = [] if self.sign == 1 else ["-1"]
        for p, k in self.eps:
            bits.append("e(%s.z - %s)^%d" % (list(map(str, p.lam)), p.r, k))
        for p, k in self.one_minus:
            bits.append("(1 - e(%s.z - %s))^%d" % (list(map(str, p.lam)), p.r, k))
        return "TrigUnit(%s)" % (" * ".join(bits) or "1")

    def to_json(self):
        from .qlinalg import q_to_str

        def fac(fs):
            return [
                {"r": q_to_str(p.r), "lambda": [q_to_str(c) for c in p.lam], "exp": k}
                for p, k in fs
            ]

        return {"sign": self.sign, "eps": fac(self.eps), "one_minus": fac(self.one_minus)}


def _factor_key(fk):
    p, k = fk
    return (p.lam, p.r, k)


def _merge_factors(factors):
    acc: dict = {}
    order = []
    for p, k in factors:
        key = (p.lam, p.r)
        if key not in acc:
            acc[key] = [p, 0]
            order.append(key)
        acc[key][1] += k
    out = []
    for key in sorted(order):
        p, k = acc[key]
        if k:
            out.append((p, int(k)))
    return tuple(out)


def one_minus_unit(n: int, r, lam, exp: int = 1) -> TrigUnit:
    return TrigUnit(n, 1, (), ((TrigParam(Q(r), qv(lam)), exp),))


def eps_unit(n: int, r, lam, exp: int = 1) -> TrigUnit:
    return TrigUnit(n, 1, ((TrigParam(Q(r), qv(lam)), exp),), ())


# ---------------------------------------------------------------------------
# the multiplicative Kubota-Leopoldt distribution and its sine variant

def eta_of_cosets(terms) -> TrigUnit:
    """prod_i (1 - e((z - a_i)/d_i))^{alpha_i} from an explicit presentation.

    The word depends on the presentation; its dlog does not (the refinement
    identity), which is what the tests certify.
    """
    out = TrigUnit.one(1)
    for alpha, a, d in terms:
        a, d = Q(a), Q(d)
        if d <= 0:
            raise ValueError("modulus must be positive")
        out = out * one_minus_unit(1, a / d, (1 / d,), int(alpha))
    return out


def eta(f: TestFunction) -> TrigUnit:
    """eta(sum alpha_i chi_{a_i + d_i Z}) = prod (1 - e((z-a_i)/d_i))^alpha_i."""
    if f.n != 1:
        raise ValueError("eta is a distribution on Q (one dimension)")
    dec = scalar_modulus_decomposition(f)  # rejects non-integer values
    return eta_of_cosets([(b, a[0], d) for b, a, d in dec])


def eta_plus_of_cosets(terms) -> TrigUnit:
    """prod_i (e((z-a_i)/2d_i) - e((-z+a_i)/2d_i))^{alpha_i}.

    Each factor is encoded through e^x - e^{-x} = -e^{-x}(1 - e^{2x})."""
    out = TrigUnit.one(1)
    for alpha, a, d in terms:
        a, d = Q(a), Q(d)
        alpha = int(alpha)
        factor = TrigUnit(
            1,
            -1,
            ((TrigParam(-a / (2 * d), (Q(-1) / (2 * d),)), 1),),
            ((TrigParam(a / d, (1 / d,)), 1),),
        )
        out = out * factor**alpha
    return out


def eta_plus(f: TestFunction) -> TrigUnit:
    if f.n != 1:
        raise ValueError("eta_plus is a distribution on Q (one dimension)")
    dec = scalar_modulus_decomposition(f)
    return eta_plus_of_cosets([(b, a[0], d) for b, a, d in dec])


# ---------------------------------------------------------------------------
# the group action on units

def unit_action(gamma: QMatrix, u: TrigUnit) -> TrigUnit:
    """(F|_gamma)(x) = F(x gamma^{-1}); parameters pull back along gamma^{-1}."""
    ginv = gamma.inv()

    def pull(fs):
        return tuple((TrigParam(p.r, ginv.act_column(p.lam)), k) for p, k in fs)

    return TrigUnit(u.n, u.sign, pull(u.eps), pull(u.one_minus))


# ---------------------------------------------------------------------------
# symbols and chains

KSymbol = tuple  # of TrigUnit
KChain = list  # of (int, KSymbol)


def symbol_action(gamma: QMatrix, sym: KSymbol) -> KSymbol:
    return tuple(unit_action(gamma, u) for u in sym)


def chain_action(gamma: QMatrix, chain: KChain) -> KChain:
    return [(c, symbol_action(gamma, s)) for c, s in chain]


def chain_to_json(chain: KChain):
    return [{"coeff": c, "symbol": [u.to_json() for u in sym]} for c, sym in chain]


# ---------------------------------------------------------------------------
# the Stevens construction

def xi_st(lams: Sequence[QVector], f: TestFunction) -> KChain:
    """The covector-basis symbol: with gamma lam_i = e_{i+1}^*, decompose
    gamma.f into cubical cosets and emit the eta-symbols pulled back by gamma.
    """
    n = f.n
    if len(lams) != n:
        raise ValueError("need an n-tuple of covectors")
    gamma = basis_to_group(lams)
    g = act_test(gamma, f)
    if g.is_zero():
        return []
    dec = scalar_modulus_decomposition(g)
    ginv = gamma.inv()
    chain: KChain = []
    for b, a, d in dec:
        units = []
        for i in range(n):
            lam = tuple((1 / d) if j == i else Q(0) for j in range(n))
            pulled = ginv.act_column(lam)
            units.append(one_minus_unit(n, Q(a[i]) / d, pulled))
        chain.append((b, tuple(units)))
    return chain


def phi_st(gammas: Sequence[QMatrix], f: TestFunction) -> KChain:
    """Symbol of the tuple: xi at the covectors gamma_j . e_1^*."""
    n = f.n
    lams = [covector(g.column(0)) for g in gammas]
    return xi_st(lams, f)


# ---------------------------------------------------------------------------
# dlog

@lru_cache(maxsize=4096)
def _univ_minus_eps_over_one_minus(r: Q, D: int) -> tuple:
    """-zeta e^x / (1 - zeta e^x) through degree D for zeta = e(-r) != 1.

    Equals 1/(1 - zeta e^x) - 1 with a sign flip: y/(1-y) = 1/(1-y) - 1."""
    recip = _univ_reciprocal_unit((-r) % 1, D)
    out = [Cyc.one() - recip[0]]
    out.extend(-c for c in recip[1:])
    return tuple(out)


@lru_cache(maxsize=4096)
def _univ_exp_over_E(D: int) -> tuple:
    """e^x / E(x) where E = (e^x - 1)/x; this is x e^x/(e^x - 1)."""
    invE = _univ_invert(_univ_exp_minus_one_over_x(D))
    expx = tuple(Cyc.rational(Q(1, math.factorial(k))) for k in range(D + 1))
    out = []
    for k in range(D + 1):
        acc = Cyc.zero()
        for j in range(k + 1):
            acc = acc + expx[j] * invE[k - j]
        out.append(acc)
    return tuple(out)


def _one_minus_dlog_scalar(r: Q, lam: tuple, D) -> FormalFraction:
    """The scalar fraction S with dlog(1 - eps_{(r,lam)}) = S * (lam . dT)."""
    r = Q(r) % 1
    if r != 0:
        univ = _univ_minus_eps_over_one_minus(r, int(D))
        return FormalFraction(compose_linear(univ, lam, D), ())
    # -e^{lam T}/(1 - e^{lam T}) = (1/(lam T)) * [e^x/E(x)]_{x = lam T}
    form, scale = canonical_form(lam)
    univ = _univ_exp_over_E(int(D) + 1)
    num = compose_linear(univ, lam, D + 1).scaled(1 / scale)
    return FormalFraction(num, (form,))


_scalar_cache: dict = {}


def _dlog_scalar_cached(r: Q, lam: tuple, D) -> FormalFraction:
    key = (r, lam, D)
    out = _scalar_cache.get(key)
    if out is None:
        out = _one_minus_dlog_scalar(r, lam, D)
        if len(_scalar_cache) > 4096:
            _scalar_cache.clear()
        _scalar_cache[key] = out
    return out


def dlog_unit(u: TrigUnit, D) -> OneForm:
    """Sum of the factor contributions; the sign contributes nothing."""
    n = u.n
    coeffs = [FormalFraction.zero(n) for _ in range(n)]
    for p, k in u.eps:
        for i, li in enumerate(p.lam):
            if li:
                coeffs[i] = coeffs[i] + FormalFraction.from_series(
                    MultiSeries.constant(n, Cyc.rational(k * li))
                )
    for p, k in u.one_minus:
        S = _dlog_scalar_cached(p.r, p.lam, D)
        for i, li in enumerate(p.lam):
            if li:
                coeffs[i] = coeffs[i] + S.scaled(k * li)
    return OneForm(coeffs)


def _unit_factor_forms(u: TrigUnit, D):
    """[(scalar fraction or None, covector)] per factor, for wedge expansion;
    None stands for the constant fraction 1."""
    out = []
    for p, k in u.eps:
        out.append((None, tuple(k * c for c in p.lam)))
    for p, k in u.one_minus:
        out.append((_dlog_scalar_cached(p.r, p.lam, D), tuple(k * c for c in p.lam)))
    return out


def dlog_symbol(sym: KSymbol, D) -> TopForm:
    """dlog f_1 ^ ... ^ dlog f_n via multilinear expansion over the factors."""
    n = sym[0].n
    if len(sym) != n:
        raise ValueError("symbol length must equal the dimension")
    # n-fold products of trusted-degree-Dw fractions stay trusted through D
    Dw = int(D) + n - 1
    factor_lists = [_unit_factor_forms(u, Dw) for u in sym]
    total = FormalFraction.zero(n)

    def rec(i, chosen):
        nonlocal total
        if i == n:
            det = QMatrix([c for _, c in chosen]).det()
            if det == 0:
                return
            frac = None
            for S, _ in chosen:
                if S is not None:
                    frac = S if frac is None else frac * S
            piece = (
                FormalFraction.from_series(MultiSeries.constant(n, Cyc.rational(det)))
                if frac is None
                else frac.scaled(det)
            )
            total = total + piece
            return
        for S, c in factor_lists[i]:
            rec(i + 1, chosen + [(S, c)])

    rec(0, [])
    return TopForm(total)


def dlog_chain(chain: KChain, D) -> TopForm:
    if not chain:
        raise ValueError("cannot infer the dimension of an empty chain")
    n = chain[0][1][0].n
    total = TopForm(FormalFraction.zero(n))
    for c, sym in chain:
        if c:
            total = total + dlog_symbol(sym, D).scaled(c)
    return total


# ---------------------------------------------------------------------------
# fast evaluator for dlog of the Stevens symbol

def dlog_xi_st(lams: Sequence[QVector], f: TestFunction, D) -> TopForm:
    """dlog of xi_st(lams, f) computed in standard coordinates first.

    For the canonical gamma (gamma lam_i = e_{i+1}^*), every symbol of the
    chain has covector directions gamma^{-1} e_i^*/d, so its wedge is the
    substitution by gamma^{-1} of a product of one-variable fractions; the
    substitution is performed once on the accumulated sum.  Exactly equal to
    dlog_chain(xi_st(lams, f), D), which the tests verify.
    """
    n = f.n
    if len(lams) != n:
        raise ValueError("need an n-tuple of covectors")
    gamma = basis_to_group(lams)
    g = act_test(gamma, f)
    if g.is_zero():
        return TopForm(FormalFraction.zero(n))
    dec = scalar_modulus_decomposition(g)
    budget = int(D) + n
    # per-coordinate univariate factors, cached by residue
    univ_cache: dict = {}

    def univ_factor(r: Q, d: Q):
        """(coefficients c_0..c_budget, has_pole) of S((T/d)) with T-powers
        shifted up by one in the pole case so everything is a power series."""
        key = (r, d)
        got = univ_cache.get(key)
        if got is not None:
            return got
        if r % 1 != 0:
            base = _univ_minus_eps_over_one_minus(r % 1, budget)
            coeffs = [base[k] * (1 / d) ** k for k in range(budget + 1)]
            got = (coeffs, False)
        else:
            base = _univ_exp_over_E(budget + 1)
            # value = (d/T) sum base_k (T/d)^k; shifted numerator: coefficient
            # of T^k is base_k d^{1-k}
            coeffs = [base[k] * (d ** (1 - k)) for k in range(budget + 2)]
            got = (coeffs[: budget + 2], True)
        univ_cache[key] = got
        return got

    # accumulate numerators by pole signature
    by_sig: dict = {}
    d_common = Q(dec[0][2])
    for b, a, d in dec:
        factors = [univ_factor(Q(a[i]) / d, Q(d)) for i in range(n)]
        sig = tuple(i for i in range(n) if factors[i][1])
        acc = by_sig.get(sig)
        if acc is None:
            acc = {}
            by_sig[sig] = acc
        _accumulate_product(acc, [fc[0] for fc in factors], b, budget + len(sig))
    total = FormalFraction.zero(n)
    for sig, acc in by_sig.items():
        num = MultiSeries(n, budget + len(sig), acc)
        dens = tuple(LinForm(tuple(1 if j == i else 0 for j in range(n))) for i in sig)
        total = total + FormalFraction(num, dens)
    # per-symbol wedge determinant in standard coordinates: det(diag(1/d));
    # det(gamma^{-1}) then arrives through the substitution below
    core = TopForm(total.scaled((1 / d_common) ** n))
    lam_mat = gamma.inv()  # columns are the lam_i
    return substitute(lam_mat, core)


def _accumulate_product(acc: dict, coeff_lists, b: int, cap: int):
    """acc[m] += b * prod_i coeff_lists[i][m_i] for |m| <= cap."""
    n = len(coeff_lists)

    def rec(i, m, partial):
        if i == n:
            term = partial if b == 1 else partial * b
            cur = acc.get(m)
            acc[m] = term if cur is None else cur + term
            return
        lst = coeff_lists[i]
        room = cap - sum(m)
        for k in range(min(room, len(lst) - 1) + 1):
            c = lst[k]
            if c.is_zero():
                continue
            rec(i + 1, m + (k,), c if i == 0 else partial * c)

    rec(0, (), None)


def dlog_phi_st(gammas: Sequence[QMatrix], f: TestFunction, D) -> TopForm:
    lams = [covector(g.column(0)) for g in gammas]
    return dlog_xi_st(lams, f, D)


# ---------------------------------------------------------------------------
# series expansion of a unit (for additive certificates)

def unit_series(u: TrigUnit, D) -> FormalFraction:
    """The value of the unit as a formal fraction, trusted through D."""
    n = u.n
    out = FormalFraction.from_series(
        MultiSeries.constant(n, Cyc.rational(u.sign), INF)
    )
    for p, k in u.eps:
        piece = FormalFraction.from_series(exp_affine(-p.r, p.lam, D + n))
        for _ in range(abs(k)):
            out = out * piece if k > 0 else out * _fraction_inverse_unit(piece, D + n)
    for p, k in u.one_minus:
        if k > 0:
            piece = FormalFraction.from_series(
                MultiSeries.one(n, D + n + 1) - exp_affine(-p.r, p.lam, D + n + 1)
            )
            for _ in range(k):
                out = out * piece
        else:
            piece = reciprocal_one_minus(-p.r, p.lam, D + n)
            for _ in range(-k):
                out = out * piece
    return out


def _fraction_inverse_unit(fr: FormalFraction, D) -> FormalFraction:
    """Inverse of a fraction whose numerator has an invertible constant term."""
    if fr.dens:
        raise ValueError("only unit series are inverted here")
    s = fr.num
    c0 = s[(0,) * s.n]
    if c0.is_zero():
        raise ZeroDivisionError("series has no constant term")
    # Newton-free triangular inversion on the truncated series
    inv0 = c0.inv()
    n = s.n
    out = {(0,) * n: inv0}
    deg = int(min(s.degree, D))
    order = sorted(
        (m for m in _all_monomials(n, deg) if sum(m) > 0), key=lambda m: (sum(m), m)
    )
    for m in order:
        acc = Cyc.zero()
        for k, c in s.coeffs.items():
            if sum(k) == 0 or any(a > b for a, b in zip(k, m)):
                continue
            rest = tuple(b - a for a, b in zip(k, m))
            got = out.get(rest)
            if got is not None:
                acc = acc + c * got
        out[m] = -inv0 * acc
    return FormalFraction(MultiSeries(n, deg, out), ())


@lru_cache(maxsize=64)
def _all_monomials(n: int, D: int) -> tuple:
    out = [()]
    for _ in range(n):
        out = [m + (k,) for m in out for k in range(D + 1 - sum(m))]
    return tuple(m for m in out if sum(m) <= D)


# ---------------------------------------------------------------------------
# Dedekind reciprocity at the dlog level

class CertificateError(ValueError):
    """A caller-supplied partial-sum certificate failed its series check."""


def dedekind_wedge_check(units: Sequence[TrigUnit], partial_sums: Sequence[TrigUnit], D) -> bool:
    """Check sum_i (-1)^i dlog{u_0, ..., hat u_i, ..., u_n} = 0 through D.

    units = (u_1, ..., u_n); partial_sums = (p_1, ..., p_n) with p_k a unit
    representing u_1 + ... + u_k (so u_0 := p_n).  The certificate is checked
    exactly: series(p_k) = series(p_{k-1}) + series(u_k).
    """
    n = len(units)
    if len(partial_sums) != n:
        raise CertificateError("need one partial sum per unit")
    Dc = int(D)
    prev = None
    for k in range(n):
        lhs = unit_series(partial_sums[k], Dc)
        rhs = unit_series(units[k], Dc) if prev is None else prev + unit_series(units[k], Dc)
        if not eq_fraction(lhs, rhs, Dc):
            raise CertificateError("partial sum %d is not the sum of the first units" % (k + 1,))
        prev = lhs
    u0 = partial_sums[-1]
    all_units = (u0,) + tuple(units)
    total = None
    for i in range(n + 1):
        sym = tuple(u for j, u in enumerate(all_units) if j != i)
        piece = dlog_symbol(sym, D)
        if i % 2:
            piece = piece.scaled(-1)
        total = piece if total is None else total + piece
    return eq_fraction(total.coeff, FormalFraction.zero(units[0].n), D)


def stevens_units(a, d, n: int):
    """The telescoping units of the coboundary computation at chi_{a + d Z^n}.

    u_0 = 1 - e((z_1+..+z_n - sum a)/d), u_1 = 1 - e((z_1-a_1)/d),
    u_i = (1 - e((z_i-a_i)/d)) prod_{m<i} e((z_m-a_m)/d);
    returns (units u_1..u_n, partial sums p_1..p_n with p_n = u_0).
    """
    a = qv(a)
    d = Q(d)
    units = []
    for i in range(n):
        lam = tuple(Q(1) / d if j == i else Q(0) for j in range(n))
        u = one_minus_unit(n, a[i] / d, lam)
        for m in range(i):
            lam_m = tuple(Q(1) / d if j == m else Q(0) for j in range(n))
            u = u * eps_unit(n, a[m] / d, lam_m)
        units.append(u)
    partial = []
    for k in range(1, n + 1):
        lam = tuple(Q(1) / d if j < k else Q(0) for j in range(n))
        partial.append(one_minus_unit(n, sum(a[:k]) / d, lam))
    return units, partial


# ---------------------------------------------------------------------------
# the Stevens coboundary certificate

def stevens_coboundary_check(a, d, n: int, D):
    """Certify (del* xi)([e_1^*+...+e_n^*, e_1^*, ..., e_n^*])(chi_{a+dZ^n})
    through its dlog: the face chain A must exactly equal the residual R
    coming from the multilinear eps-expansions of the telescoping units.

    Returns (A, R, passed); every residual wedge contains a constant one-form
    factor, which is asserted structurally.
    """
    from .qlinalg import std_covector

    a = qv(a)
    d = Q(d)
    f = _cube_indicator(a, d, n)
    lam_sum = covector((1,) * n)
    basis = [std_covector(n, i + 1) for i in range(n)]
    tuple_cov = [lam_sum] + basis
    # A: alternating sum over the faces of the (n+1)-tuple
    A = None
    for i in range(n + 1):
        face = [tuple_cov[j] for j in range(n + 1) if j != i]
        piece = dlog_chain(xi_st(face, f), D)
        if i % 2:
            piece = piece.scaled(-1)
        A = piece if A is None else A + piece
    # R: minus the dlog of the pure-eps residual terms of the expansion of
    # sum_i (-1)^i {u_0, .., hat u_i, .., u_n}
    units, partial = stevens_units(a, d, n)
    u0 = partial[-1]
    all_units = (u0,) + tuple(units)
    R = None
    for i in range(n + 1):
        sym = tuple(u for j, u in enumerate(all_units) if j != i)
        for piece, has_eps in _expand_symbol_dlog(sym, D):
            if not has_eps:
                continue  # the pure part reproduces the faces
            piece = piece.scaled((-1) ** (i + 1))
            R = piece if R is None else R + piece
    if R is None:
        R = TopForm(FormalFraction.zero(n))
    passed = eq_fraction(A.coeff, R.coeff, D)
    return A, R, passed


def _expand_symbol_dlog(sym: KSymbol, D):
    """Multilinear expansion of a symbol into per-entry factor choices.

    Yields (TopForm, has_eps_entry) per choice; choices picking at least one
    pure eps entry are the residual (ideal) terms, and their wedge visibly
    contains the constant one-form of that entry.
    """
    n = len(sym)
    choices_per_entry = []
    for u in sym:
        opts = []
        if u.one_minus:
            opts.append((TrigUnit(u.n, 1, (), u.one_minus), False))
        if u.eps:
            for p, k in u.eps:
                opts.append((TrigUnit(u.n, 1, ((p, k),), ()), True))
        if not opts:
            raise ValueError("entry with no multiplicative content")
        choices_per_entry.append(opts)

    def rec(i, chosen, has_eps):
        if i == n:
            yield dlog_symbol(tuple(u for u, _ in chosen), D), has_eps
            return
        for u, is_eps in choices_per_entry[i]:
            yield from rec(i + 1, chosen + [(u, is_eps)], has_eps or is_eps)

    yield from rec(0, [], False)


def _cube_indicator(a, d: Q, n: int) -> TestFunction:
    from .schwartz import indicator

    return indicator(tuple(a), (d,) * n)
