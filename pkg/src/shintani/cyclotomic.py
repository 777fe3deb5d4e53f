"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) of
Q[x]/Phi_N(x) as an integer coefficient vector with a single positive
denominator.  Equality across conductors is decided by raising both sides
to the joint conductor lcm(N1, N2), where the representation is canonical.

Multiplication uses Kronecker substitution (polynomial product as one
big-integer product) followed by reduction with precomputed rows for
x^k mod Phi_N; this is the hot path of the whole package.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache

Q = Fraction

DEFAULT_CONDUCTOR_CAP = 2**4 * 3**2 * 5 * 7  # 5040

_cap = DEFAULT_CONDUCTOR_CAP


class ConductorCapError(RuntimeError):
    pass


def set_conductor_cap(n: int) -> None:
    global _cap
    _cap = int(n)


def get_conductor_cap() -> int:
    return _cap


@contextmanager
def conductor_cap(n: int):
    global _cap
    old = _cap
    _cap = int(n)
    try:
        yield
    finally:
        _cap = old


def _check_cap(n: int) -> None:
    if n > _cap:
        raise ConductorCapError(
            "conductor %d exceeds the cap %d (raise it with conductor_cap)" % (n, _cap)
        )


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficient tuple of Phi_n, low degree first."""
    if n == 1:
        return (-1, 1)
    # (x^n - 1) / prod_{d | n, d < n} Phi_d, exact integer division
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_divexact(a, b):
    # exact division of integer polynomials, b monic up to sign
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // lead
        out[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    assert not any(a), "inexact cyclotomic polynomial division"
    return out


@lru_cache(maxsize=None)
class _Field:
    """Per-conductor tables: reduction rows and power-of-zeta vectors."""

    def __init__(self, n: int):
        self.n = n
        self.phi = euler_phi(n)
        poly = cyclotomic_polynomial(n)
        # x^phi = -(poly without leading coeff), monic
        self.tail = tuple(-c for c in poly[:-1])
        self._pows = [
            tuple(1 if i == k else 0 for i in range(self.phi)) for k in range(self.phi)
        ]
        self._packed_rows: dict = {}

    def power(self, k: int) -> tuple:
        """zeta^k in the power basis, k reduced mod n."""
        k %= self.n
        while len(self._pows) <= k:
            prev = self._pows[-1]
            # multiply by x: shift and reduce the overflow coefficient
            top = prev[-1]
            shifted = [0] + list(prev[:-1])
            if top:
                for i, t in enumerate(self.tail):
                    if t:
                        shifted[i] += top * t
            self._pows.append(tuple(shifted))
        return self._pows[k]

    def reduction_rows(self):
        # rows for x^(phi+k), k = 0 .. phi-2 (exponents may wrap mod n)
        if not hasattr(self, "_rrows"):
            self._rrows = tuple(self.power(k) for k in range(self.phi, 2 * self.phi - 1))
        return self._rrows

    def packed_rows(self, bits: int):
        cached = self._packed_rows.get(bits)
        if cached is None:
            cached = tuple(_pack(r, bits) for r in self.reduction_rows())
            self._packed_rows[bits] = cached
        return cached


def _pack(vec, bits: int) -> int:
    acc = 0
    for c in reversed(vec):
        acc = (acc << bits) + c
    return acc


def _unpack(x: int, bits: int, length: int):
    out = []
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    for _ in range(length):
        r = x & mask
        x >>= bits
        if r >= half:
            r -= mask + 1
            x += 1
        out.append(r)
    return out


def _conv(a, b):
    """Integer polynomial product; Kronecker substitution for long vectors."""
    la, lb = len(a), len(b)
    if la == 1:
        return [a[0] * x for x in b]
    if lb == 1:
        return [b[0] * x for x in a]
    if la <= 12 or lb <= 12:
        out = [0] * (la + lb - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        return out
    ma = max(map(abs, a))
    mb = max(map(abs, b))
    if ma == 0 or mb == 0:
        return [0] * (la + lb - 1)
    bits = (ma * mb * min(la, lb)).bit_length() + 2
    return _unpack(_pack(a, bits) * _pack(b, bits), bits, la + lb - 1)


def _mul_vec(field: _Field, a, b):
    phi = field.phi
    conv = _conv(a, b)
    if phi == 1:
        return (conv[0],)
    lo = conv[:phi]
    hi = conv[phi:]
    if any(hi):
        mh = max(abs(x) for x in hi)
        rows = field.reduction_rows()
        mr = max((max(abs(c) for c in r) if r else 0) for r in rows)
        bits = (mh * max(mr, 1) * len(hi)).bit_length() + 2
        packed = field.packed_rows(bits)
        acc = 0
        for h, row in zip(hi, packed):
            if h:
                acc += h * row
        if acc:
            corr = _unpack(acc, bits, phi)
            lo = [x + y for x, y in zip(lo, corr)]
    return tuple(lo)


@lru_cache(maxsize=None)
def _raise_map(n: int, m: int) -> tuple:
    """Rows expressing each power-basis element of Q(zeta_n) inside Q(zeta_m)."""
    assert m % n == 0
    _check_cap(m)
    fm = _Field(m)
    step = m // n
    return tuple(fm.power(k * step) for k in range(euler_phi(n)))


def _apply_map(rows, vec):
    phi_m = len(rows[0])
    out = [0] * phi_m
    for c, row in zip(vec, rows):
        if c:
            for i, r in enumerate(row):
                if r:
                    out[i] += c * r
    return tuple(out)


class Cyc:
    """An element of Q(zeta_n): integer vector over the power basis / den."""

    __slots__ = ("n", "num", "den")

    def __init__(self, n: int, num, den: int = 1, _normalized: bool = False):
        if not _normalized:
            num = tuple(int(x) for x in num)
            den = int(den)
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if den < 0:
                num, den = tuple(-x for x in num), -den
            g = math.gcd(den, *num) if num else 1
            if g > 1:
                num = tuple(x // g for x in num)
                den //= g
            if not any(num):
                n, num, den = 1, (0,), 1
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("Cyc is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def rational(x) -> "Cyc":
        x = Q(x)
        return Cyc(1, (x.numerator,), x.denominator)

    @staticmethod
    def zero() -> "Cyc":
        return _ZERO

    @staticmethod
    def one() -> "Cyc":
        return _ONE

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return self.n == 1 or not any(self.num[1:])

    def as_rational(self) -> Q:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Q(self.num[0], self.den)

    # -- conductor handling --------------------------------------------

    def raised(self, m: int) -> "Cyc":
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError("can only raise to a multiple of the conductor")
        rows = _raise_map(self.n, m)
        return Cyc(m, _apply_map(rows, self.num), self.den)

    def reduced(self) -> "Cyc":
        """Rewrite at the minimal divisor conductor that represents the value."""
        if self.is_zero():
            return _ZERO
        if self.n == 1:
            return self
        for d in sorted(_divisors(self.n)):
            if d == self.n:
                return self
            sol = _solve_in_subfield(self, d)
            if sol is not None:
                return sol
        return self

    # -- arithmetic -----------------------------------------------------

    def _joint(self, other: "Cyc"):
        if self.n == other.n:
            return self, other
        m = self.n * other.n // math.gcd(self.n, other.n)
        _check_cap(m)
        return self.raised(m), other.raised(m)

    def __add__(self, other):
        if not isinstance(other, Cyc):
            other = Cyc.rational(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        a, b = self._joint(other)
        da, db = a.den, b.den
        g = math.gcd(da, db)
        la, lb = db // g, da // g
        return Cyc(a.n, tuple(x * la + y * lb for x, y in zip(a.num, b.num)), da * la)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Cyc(self.n, tuple(-x for x in self.num), self.den, _normalized=True)

    def __sub__(self, other):
        if not isinstance(other, Cyc):
            other = Cyc.rational(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyc):
            x = Q(other)
            if x == 0:
                return _ZERO
            return Cyc(self.n, tuple(c * x.numerator for c in self.num), self.den * x.denominator)
        if self.is_zero() or other.is_zero():
            return _ZERO
        a, b = self._joint(other)
        f = _Field(a.n)
        return Cyc(a.n, _mul_vec(f, a.num, b.num), a.den * b.den)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out, base = _ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def inv(self) -> "Cyc":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero cyclotomic number")
        if self.is_rational():
            return Cyc.rational(1 / self.as_rational())
        phi_poly = [Q(c) for c in cyclotomic_polynomial(self.n)]
        a = [Q(x, self.den) for x in self.num]
        inv = _poly_modinv(a, phi_poly)
        den = math.lcm(*(c.denominator for c in inv)) if inv else 1
        return Cyc(self.n, tuple(c.numerator * (den // c.denominator) for c in inv), den)

    def __truediv__(self, other):
        if not isinstance(other, Cyc):
            return self * (1 / Q(other))
        return self * other.inv()

    def __eq__(self, other):
        if not isinstance(other, Cyc):
            try:
                other = Cyc.rational(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.n == other.n:
            return self.num == other.num and self.den == other.den
        a, b = self._joint(other)
        return a.num == b.num and a.den == b.den

    def __repr__(self):
        return "Cyc(n=%d, %s/%d)" % (self.n, list(self.num), self.den)

    def approx(self) -> complex:
        """Float evaluation for debugging only; no exactness contract."""
        z = complex(math.cos(2 * math.pi / self.n), math.sin(2 * math.pi / self.n))
        return sum(c * z**k for k, c in enumerate(self.num)) / self.den

    def to_json(self):
        from .qlinalg import q_to_str

        return {
            "conductor": self.n,
            "coefficients": [q_to_str(Q(c, self.den)) for c in self.num],
        }

    @staticmethod
    def from_json(data) -> "Cyc":
        coeffs = [Q(c) for c in data["coefficients"]]
        den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        return Cyc(data["conductor"], tuple(c.numerator * (den // c.denominator) for c in coeffs), den)


_ZERO = Cyc(1, (0,), 1, _normalized=True)
_ONE = Cyc(1, (1,), 1, _normalized=True)


def root_of_unity(q) -> Cyc:
    """e(q) = exp(2 pi i q) for rational q, reduced mod 1."""
    q = Q(q) % 1
    _check_cap(q.denominator)
    return _root_of_unity_cached(q)


@lru_cache(maxsize=None)
def _root_of_unity_cached(q: Q) -> Cyc:
    n = q.denominator
    if n == 1:
        return _ONE
    f = _Field(n)
    return Cyc(n, f.power(q.numerator % n), 1)


def _divisors(n: int):
    out = []
    for d in range(1, int(math.isqrt(n)) + 1):
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
    return out


def _poly_modinv(a, mod):
    """Inverse of polynomial a modulo mod over Q (extended Euclid)."""

    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    def divmod_poly(x, y):
        x = list(x)
        q = [Q(0)] * max(len(x) - len(y) + 1, 0)
        inv_lead = 1 / y[-1]
        for i in range(len(q) - 1, -1, -1):
            c = x[i + len(y) - 1] * inv_lead
            q[i] = c
            if c:
                for j, yj in enumerate(y):
                    x[i + j] -= c * yj
        return trim(q), trim(x)

    r0, r1 = trim(list(mod)), trim(list(a))
    s0, s1 = [], [Q(1)]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        # s_{k+1} = s_{k-1} - q s_k
        prod = [Q(0)] * (len(q) + len(s1) - 1) if q and s1 else []
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s1):
                    prod[i + j] += qi * sj
        new = [Q(0)] * max(len(s0), len(prod))
        for i, c in enumerate(s0):
            new[i] += c
        for i, c in enumerate(prod):
            new[i] -= c
        s0, s1 = s1, trim(new)
    if len(r0) != 1:
        raise ZeroDivisionError("element is a zero divisor (should not happen mod Phi_N)")
    c = r0[0]
    out = [x / c for x in s0]
    out += [Q(0)] * (len(mod) - 1 - len(out))
    return out[: len(mod) - 1]


def _solve_in_subfield(x: Cyc, d: int):
    """Express x in Q(zeta_d) if possible, else None."""
    phi_d = euler_phi(d)
    rows = _raise_map(d, x.n)  # phi_d vectors of length phi_n
    phi_n = euler_phi(x.n)
    # solve sum_j c_j rows[j] = x over Q
    aug = [[Q(rows[j][i]) for j in range(phi_d)] + [Q(x.num[i], x.den)] for i in range(phi_n)]
    piv_cols = []
    r = 0
    for c in range(phi_d):
        piv = next((i for i in range(r, phi_n) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [e * inv for e in aug[r]]
        for i in range(phi_n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [e - f * p for e, p in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    # consistency: rows beyond rank must have zero rhs
    for i in range(r, phi_n):
        if aug[i][phi_d] != 0:
            return None
    coeffs = [Q(0)] * phi_d
    for i, c in enumerate(piv_cols):
        coeffs[c] = aug[i][phi_d]
    den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return Cyc(d, tuple(c.numerator * (den // c.denominator) for c in coeffs), den)


def cyc_arith(a: Cyc, b: Cyc, op: str) -> Cyc:
    """Dispatch form used by the CLI: op in {'add', 'mul', 'inv'} (inv ignores b)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    raise ValueError("unknown op %r" % (op,))
