"""Truncated multivariate power series over cyclotomic numbers, and formal
fractions whose denominators are products of rational linear forms.

Precision model: a MultiSeries carries the total degree through which its
coefficients are exact (math.inf for exact polynomials).  A FormalFraction
num / prod(forms) is trusted through degree num.degree - len(forms); all
operations propagate trust so that equality checks can refuse to answer
instead of silently comparing garbage.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .cyclotomic import Cyc, root_of_unity
from .qlinalg import QMatrix, q_to_str

Q = Fraction

INF = math.inf


class PrecisionError(RuntimeError):
    """An operation needed more series precision than is available."""


def factorial(k: int) -> int:
    return math.factorial(k)


# ---------------------------------------------------------------------------
# linear forms

class LinForm:
    """A nonzero rational linear form c1*T1 + ... + cn*Tn, canonically scaled:
    primitive integer coefficients with first nonzero entry positive."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(Q(c) for c in coeffs)
        if not any(coeffs):
            raise ValueError("zero linear form")
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("LinForm is immutable")

    @property
    def n(self):
        return len(self.coeffs)

    def is_canonical(self) -> bool:
        lead = next(c for c in self.coeffs if c)
        return lead > 0 and all(c.denominator == 1 for c in self.coeffs) and math.gcd(
            *(abs(c.numerator) for c in self.coeffs)
        ) == 1

    def __eq__(self, other):
        return isinstance(other, LinForm) and self.coeffs == other.coeffs

    def __lt__(self, other):
        return self.coeffs < other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "LinForm(%s)" % (tuple(str(c) for c in self.coeffs),)


def canonical_form(coeffs) -> tuple:
    """(canonical LinForm, positive scale) with coeffs = scale * canonical."""
    coeffs = tuple(Q(c) for c in coeffs)
    if not any(coeffs):
        raise ValueError("zero linear form")
    den = math.lcm(*(c.denominator for c in coeffs))
    ints = [c.numerator * (den // c.denominator) for c in coeffs]
    g = math.gcd(*(abs(x) for x in ints))
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return LinForm(tuple(Q(x, g) for x in ints)), Q(g, den)


# ---------------------------------------------------------------------------
# multivariate series

def _grlex_key(m):
    return (sum(m), m)


class MultiSeries:
    """Finitely supported map multi-index -> Cyc, exact through total degree
    `degree` (math.inf for exact polynomials)."""

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n: int, degree, coeffs=None):
        cleaned = {}
        if coeffs:
            for m, c in coeffs.items():
                if sum(m) <= degree and not c.is_zero():
                    cleaned[m] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", cleaned)

    def __setattr__(self, *a):
        raise AttributeError("MultiSeries is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(n: int, degree=INF) -> "MultiSeries":
        return MultiSeries(n, degree, {})

    @staticmethod
    def constant(n: int, c: Cyc, degree=INF) -> "MultiSeries":
        return MultiSeries(n, degree, {(0,) * n: c})

    @staticmethod
    def one(n: int, degree=INF) -> "MultiSeries":
        return MultiSeries.constant(n, Cyc.one(), degree)

    @staticmethod
    def from_linear_form(coeffs, scale=1) -> "MultiSeries":
        coeffs = tuple(Q(c) for c in coeffs)
        n = len(coeffs)
        s = Q(scale)
        d = {}
        for i, c in enumerate(coeffs):
            if c:
                m = tuple(1 if j == i else 0 for j in range(n))
                d[m] = Cyc.rational(c * s)
        return MultiSeries(n, INF, d)

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self):
        if not self.coeffs:
            return INF
        return min(sum(m) for m in self.coeffs)

    def __getitem__(self, m):
        return self.coeffs.get(tuple(m), Cyc.zero())

    def items_grlex(self):
        return sorted(self.coeffs.items(), key=lambda kv: _grlex_key(kv[0]))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        deg = min(self.degree, other.degree)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            cur = out.get(m)
            out[m] = c if cur is None else cur + c
        return MultiSeries(self.n, deg, out)

    def __neg__(self):
        return MultiSeries(self.n, self.degree, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c) -> "MultiSeries":
        if not isinstance(c, Cyc):
            c = Cyc.rational(c)
        if c.is_zero():
            return MultiSeries.zero(self.n, INF)
        return MultiSeries(self.n, self.degree, {m: v * c for m, v in self.coeffs.items()})

    def __mul__(self, other: "MultiSeries") -> "MultiSeries":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        if self.is_zero() or other.is_zero():
            return MultiSeries.zero(self.n, INF)
        deg = min(self.degree + other.order(), other.degree + self.order())
        cap = deg if deg != INF else None
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            s1 = sum(m1)
            for m2, c2 in other.coeffs.items():
                if cap is not None and s1 + sum(m2) > cap:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                p = c1 * c2
                cur = out.get(m)
                out[m] = p if cur is None else cur + p
        return MultiSeries(self.n, deg, out)

    def truncated(self, degree) -> "MultiSeries":
        return MultiSeries(self.n, min(self.degree, degree), self.coeffs)

    def with_degree(self, degree) -> "MultiSeries":
        """Assert exactness through `degree` (caller's responsibility)."""
        return MultiSeries(self.n, degree, self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, MultiSeries)
            and self.n == other.n
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def eq_through(self, other: "MultiSeries", D) -> bool:
        if self.degree < D or other.degree < D:
            raise PrecisionError(
                "comparison through degree %s needs both series exact that far "
                "(have %s and %s)" % (D, self.degree, other.degree)
            )
        keys = set(self.coeffs) | set(other.coeffs)
        for m in keys:
            if sum(m) <= D and self[m] != other[m]:
                return False
        return True

    def first_discrepancy(self, other: "MultiSeries", D):
        """Lowest grlex monomial <= D where the two differ, or None."""
        keys = sorted((m for m in set(self.coeffs) | set(other.coeffs) if sum(m) <= D), key=_grlex_key)
        for m in keys:
            if self[m] != other[m]:
                return m, self[m], other[m]
        return None

    def __repr__(self):
        terms = ", ".join("%s:%r" % (m, c) for m, c in list(self.items_grlex())[:6])
        return "MultiSeries(n=%d, deg=%s, {%s%s})" % (
            self.n,
            self.degree,
            terms,
            ", ..." if len(self.coeffs) > 6 else "",
        )

    def to_json(self, degree=None):
        deg = self.degree if degree is None else min(degree, self.degree)
        return {
            "n": self.n,
            "D": None if deg == INF else int(deg),
            "terms": [
                {"exponent": list(m), "cycnum": c.to_json()}
                for m, c in self.items_grlex()
                if sum(m) <= deg
            ],
        }


# powers of a linear form with Fraction coefficients, cached

@lru_cache(maxsize=4096)
def _form_powers(coeffs: tuple, k: int) -> dict:
    """(c . T)^k as {multi-index: Fraction} by multinomial recursion."""
    n = len(coeffs)
    if k == 0:
        return {(0,) * n: Q(1)}
    prev = _form_powers(coeffs, k - 1)
    out: dict = {}
    for m, c in prev.items():
        for i, ci in enumerate(coeffs):
            if ci:
                m2 = m[:i] + (m[i] + 1,) + m[i + 1 :]
                out[m2] = out.get(m2, Q(0)) + c * ci
    return out


def compose_linear(univ: Sequence[Cyc], coeffs, D) -> MultiSeries:
    """sum_k univ[k] * (c.T)^k truncated at total degree D."""
    coeffs = tuple(Q(c) for c in coeffs)
    n = len(coeffs)
    out: dict = {}
    for k, ck in enumerate(univ):
        if k > D:
            break
        if ck.is_zero():
            continue
        for m, frac in _form_powers(coeffs, k).items():
            term = ck * frac
            cur = out.get(m)
            out[m] = term if cur is None else cur + term
    return MultiSeries(n, D, out)


def exp_affine(q, coeffs, D) -> MultiSeries:
    """e(q) * exp(c.T) truncated at total degree D."""
    zeta = root_of_unity(Q(q))
    univ = [zeta * Q(1, factorial(k)) for k in range(int(D) + 1)]
    return compose_linear(univ, coeffs, D)


# ---------------------------------------------------------------------------
# formal fractions

class FormalFraction:
    """num / prod(denominators); denominators are canonical linear forms."""

    __slots__ = ("num", "dens")

    def __init__(self, num: MultiSeries, dens: Iterable[LinForm] = ()):
        dens = tuple(sorted(dens))
        if num.is_zero():
            dens = ()
        for d in dens:
            if d.n != num.n:
                raise ValueError("dimension mismatch in denominators")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "dens", dens)

    def __setattr__(self, *a):
        raise AttributeError("FormalFraction is immutable")

    @property
    def n(self):
        return self.num.n

    @property
    def trusted(self):
        return self.num.degree - len(self.dens)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @staticmethod
    def from_series(s: MultiSeries) -> "FormalFraction":
        return FormalFraction(s, ())

    @staticmethod
    def zero(n: int) -> "FormalFraction":
        return FormalFraction(MultiSeries.zero(n), ())

    @staticmethod
    def one(n: int) -> "FormalFraction":
        return FormalFraction(MultiSeries.one(n), ())

    def __add__(self, other: "FormalFraction") -> "FormalFraction":
        if not isinstance(other, FormalFraction):
            return NotImplemented
        union = _multiset_union(self.dens, other.dens)
        a = self.num * _forms_poly(self.n, _multiset_diff(union, self.dens))
        b = other.num * _forms_poly(self.n, _multiset_diff(union, other.dens))
        return FormalFraction(a + b, union)

    def __neg__(self):
        return FormalFraction(-self.num, self.dens)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "FormalFraction":
        if isinstance(other, FormalFraction):
            return FormalFraction(self.num * other.num, self.dens + other.dens)
        return FormalFraction(self.num.scaled(other), self.dens)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scaled(self, c) -> "FormalFraction":
        return FormalFraction(self.num.scaled(c), self.dens)

    def cancelled(self) -> "FormalFraction":
        """Divide out denominator forms that divide the numerator exactly."""
        num, dens = self.num, list(self.dens)
        changed = True
        while changed and dens:
            changed = False
            for d in list(dens):
                q = divide_by_form(num, d)
                if q is not None:
                    num = q
                    dens.remove(d)
                    changed = True
        return FormalFraction(num, tuple(dens))

    def require(self, D) -> None:
        if self.trusted < D:
            raise PrecisionError(
                "fraction trusted only through degree %s, need %s" % (self.trusted, D)
            )

    def __repr__(self):
        return "FormalFraction(%r / %r)" % (self.num, list(self.dens))

    def to_json(self, degree=None):
        data = self.num.to_json(degree)
        return {
            "n": self.n,
            "D": data["D"],
            "terms": data["terms"],
            "denominators": [[q_to_str(c) for c in d.coeffs] for d in self.dens],
        }


def _multiset_union(a: tuple, b: tuple) -> tuple:
    out = list(a)
    rem = list(a)
    for x in b:
        if x in rem:
            rem.remove(x)
        else:
            out.append(x)
    return tuple(sorted(out))


def _multiset_diff(a: tuple, b: tuple) -> tuple:
    out = list(a)
    for x in b:
        if x in out:
            out.remove(x)
    return tuple(out)


def _forms_poly(n: int, forms: Iterable[LinForm]) -> MultiSeries:
    out = MultiSeries.one(n)
    for f in forms:
        out = out * MultiSeries.from_linear_form(f.coeffs)
    return out


def frac_arith(x: FormalFraction, y: FormalFraction, op: str) -> FormalFraction:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise ValueError("unknown op %r" % (op,))


def eq_fraction(x: FormalFraction, y: FormalFraction, D) -> bool:
    """Exact equality through total degree D via cross multiplication."""
    x.require(D)
    y.require(D)
    union = _multiset_union(x.dens, y.dens)
    a = x.num * _forms_poly(x.n, _multiset_diff(union, x.dens))
    b = y.num * _forms_poly(y.n, _multiset_diff(union, y.dens))
    return a.eq_through(b, D + len(union))


def fraction_discrepancy(x: FormalFraction, y: FormalFraction, D):
    """None if equal through D, else (monomial, lhs, rhs) of the cross product."""
    union = _multiset_union(x.dens, y.dens)
    a = x.num * _forms_poly(x.n, _multiset_diff(union, x.dens))
    b = y.num * _forms_poly(y.n, _multiset_diff(union, y.dens))
    return a.first_discrepancy(b, D + len(union))


def divide_by_form(s: MultiSeries, form: LinForm):
    """Exact quotient s / form, or None when not exactly divisible."""
    if s.is_zero():
        return s
    c = form.coeffs
    piv = next(i for i, ci in enumerate(c) if ci)
    bound = s.degree - 1 if s.degree != INF else max(sum(m) for m in s.coeffs) - 1
    if bound < 0:
        return None
    q: dict = {}
    # within each total degree, larger pivot exponents are needed first
    idxs = sorted(
        _monomials_upto(s.n, int(bound)), key=lambda m: (sum(m), -m[piv])
    )
    for m in idxs:
        top = m[:piv] + (m[piv] + 1,) + m[piv + 1 :]
        val = s[top]
        for i, ci in enumerate(c):
            if i != piv and ci and top[i] >= 1:
                ref = top[:i] + (top[i] - 1,) + top[i + 1 :]
                val = val - q.get(ref, Cyc.zero()) * ci
        val = val * (1 / c[piv])
        if not val.is_zero():
            q[m] = val
    quot = MultiSeries(s.n, s.degree if s.degree == INF else s.degree - 1, q)
    check = quot * MultiSeries.from_linear_form(c)
    lim = s.degree if s.degree != INF else INF
    keys = set(check.coeffs) | set(s.coeffs)
    for m in keys:
        if sum(m) <= lim and check[m] != s[m]:
            return None
    return quot


@lru_cache(maxsize=64)
def _monomials_upto(n: int, D: int) -> tuple:
    out = [()]
    for _ in range(n):
        out = [m + (k,) for m in out for k in range(D + 1 - sum(m))]
    return tuple(m for m in out if sum(m) <= D)


# ---------------------------------------------------------------------------
# series-building blocks for the pairing side

@lru_cache(maxsize=4096)
def _univ_exp_minus_one_over_x(D: int) -> tuple:
    """(e^x - 1)/x = sum x^k/(k+1)! through degree D."""
    return tuple(Cyc.rational(Q(1, factorial(k + 1))) for k in range(D + 1))


def _univ_invert(coeffs: Sequence[Cyc]) -> tuple:
    """Multiplicative inverse of a univariate series with unit constant term."""
    c0 = coeffs[0]
    inv0 = c0.inv()
    out = [inv0]
    for k in range(1, len(coeffs)):
        acc = Cyc.zero()
        for j in range(1, k + 1):
            cj = coeffs[j] if j < len(coeffs) else Cyc.zero()
            acc = acc + cj * out[k - j]
        out.append(-inv0 * acc)
    return tuple(out)


@lru_cache(maxsize=4096)
def _univ_reciprocal_unit(q: Q, D: int) -> tuple:
    """1/(1 - e(q) e^x) through degree D, for q not integral."""
    zeta = root_of_unity(q)
    series = [Cyc.one() - zeta * Q(1, factorial(k)) if k == 0 else -zeta * Q(1, factorial(k)) for k in range(D + 1)]
    return _univ_invert(series)


@lru_cache(maxsize=4096)
def _univ_minus_inv_E(D: int) -> tuple:
    """-1/E(x) where E(x) = (e^x-1)/x, through degree D."""
    inv = _univ_invert(_univ_exp_minus_one_over_x(D))
    return tuple(-c for c in inv)


def reciprocal_one_minus(q, coeffs, D) -> FormalFraction:
    """1/(1 - e(q) e^{c.T}) trusted through total degree D.

    Integral q gives a genuine pole along c.T = 0: the result has the
    canonical form of c as its single denominator.
    """
    q = Q(q) % 1
    coeffs = tuple(Q(c) for c in coeffs)
    n = len(coeffs)
    if q == 0 and not any(coeffs):
        raise ZeroDivisionError("1/(1 - 1) is not defined")
    if q != 0:
        univ = _univ_reciprocal_unit(q, int(D))
        return FormalFraction(compose_linear(univ, coeffs, D), ())
    # 1 - e^{cT} = -(cT) E(cT) with E a unit, so 1/(1-e^{cT}) = (-1/E(cT)) / (cT)
    form, scale = canonical_form(coeffs)
    univ = _univ_minus_inv_E(int(D) + 1)
    num = compose_linear(univ, coeffs, D + 1).scaled(1 / scale)
    return FormalFraction(num, (form,))


# ---------------------------------------------------------------------------
# substitution and differential forms

def _substitute_series(gamma: QMatrix, s: MultiSeries) -> MultiSeries:
    """T |-> T.gamma, so T_j |-> sum_i T_i gamma[i][j] (column j of gamma)."""
    n = s.n
    if gamma.n != n:
        raise ValueError("dimension mismatch")
    cols = [tuple(gamma.rows[i][j] for i in range(n)) for j in range(n)]
    out: dict = {}
    for m, c in s.coeffs.items():
        # expand prod_j (col_j . T)^(m_j)
        poly = {(0,) * n: Q(1)}
        for j, mj in enumerate(m):
            if mj:
                pw = _form_powers(cols[j], mj)
                new: dict = {}
                for m1, f1 in poly.items():
                    for m2, f2 in pw.items():
                        key = tuple(a + b for a, b in zip(m1, m2))
                        new[key] = new.get(key, Q(0)) + f1 * f2
                poly = new
        for mm, f in poly.items():
            if f:
                term = c * f
                cur = out.get(mm)
                out[mm] = term if cur is None else cur + term
    return MultiSeries(n, s.degree, out)


class TopForm:
    """coefficient * dT_1 ^ ... ^ dT_n."""

    __slots__ = ("coeff",)

    def __init__(self, coeff: FormalFraction):
        object.__setattr__(self, "coeff", coeff)

    def __setattr__(self, *a):
        raise AttributeError("TopForm is immutable")

    @property
    def n(self):
        return self.coeff.n

    def __add__(self, other):
        return TopForm(self.coeff + other.coeff)

    def __neg__(self):
        return TopForm(-self.coeff)

    def __sub__(self, other):
        return TopForm(self.coeff - other.coeff)

    def scaled(self, c):
        return TopForm(self.coeff.scaled(c))

    def __repr__(self):
        return "TopForm(%r)" % (self.coeff,)

    def to_json(self, degree=None):
        return {"kind": "topform", **self.coeff.to_json(degree)}


class OneForm:
    """sum_i coeffs[i] dT_i with FormalFraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[FormalFraction]):
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):
        raise AttributeError("OneForm is immutable")

    @property
    def n(self):
        return len(self.coeffs)

    def __add__(self, other):
        return OneForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return OneForm(tuple(-a for a in self.coeffs))

    @staticmethod
    def constant(coeffs) -> "OneForm":
        """A constant one-form c . dT."""
        n = len(tuple(coeffs))
        return OneForm(
            tuple(
                FormalFraction(MultiSeries.constant(n, Cyc.rational(c)))
                for c in coeffs
            )
        )


def substitute(gamma: QMatrix, obj):
    """The left variable action T |-> T.gamma (TopForm picks up det gamma)."""
    if gamma.det() == 0:
        raise ValueError("substitution by a singular matrix")
    if isinstance(obj, MultiSeries):
        return _substitute_series(gamma, obj)
    if isinstance(obj, FormalFraction):
        num = _substitute_series(gamma, obj.num)
        scale = Q(1)
        dens = []
        for d in obj.dens:
            newc = gamma.act_column(d.coeffs)
            form, s = canonical_form(newc)
            dens.append(form)
            scale *= s
        return FormalFraction(num.scaled(1 / scale), tuple(dens))
    if isinstance(obj, TopForm):
        inner = substitute(gamma, obj.coeff)
        return TopForm(inner.scaled(gamma.det()))
    raise TypeError("cannot substitute into %r" % type(obj))


def wedge(forms: Sequence[OneForm]) -> TopForm:
    """dlog-style wedge: the determinant of the coefficient matrix."""
    n = len(forms)
    for f in forms:
        if f.n != n:
            raise ValueError("need n one-forms in n variables")
    det = _fraction_det([[f.coeffs[j] for j in range(n)] for f in forms])
    return TopForm(det)


def _fraction_det(rows) -> FormalFraction:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [[r[k] for k in range(n) if k != j] for r in rows[1:]]
        term = entry * _fraction_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        return FormalFraction.zero(rows[0][0].n)
    return acc
