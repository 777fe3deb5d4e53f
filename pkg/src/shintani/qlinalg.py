"""Exact rational linear algebra and the row/column conventions.

Conventions used across the whole package:

* points of V = Q^n are ROWS, acted on the right: x |-> x*g
* covectors (elements of V*) are COLUMNS, acted on the left: lam |-> g*lam
* lam(x) is the plain dot product x . lam

so that both "x*g" and "g*lam" are ordinary matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction


def qv(entries) -> tuple:
    """Coerce an iterable of ints/strings/Fractions to a tuple of Fractions."""
    return tuple(Q(e) for e in entries)


def dot(x: Sequence[Q], y: Sequence[Q]) -> Q:
    if len(x) != len(y):
        raise ValueError("dimension mismatch in dot product")
    return sum((a * b for a, b in zip(x, y)), Q(0))


@dataclass(frozen=True)
class QVector:
    """A vector with an explicit orientation ('row' for V, 'column' for V*)."""

    entries: tuple
    orientation: str = "row"

    def __post_init__(self):
        object.__setattr__(self, "entries", qv(self.entries))
        if self.orientation not in ("row", "column"):
            raise ValueError("orientation must be 'row' or 'column'")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def covector(entries) -> QVector:
    return QVector(qv(entries), "column")


def std_covector(n: int, i: int) -> QVector:
    """e_i^* (1-based index i)."""
    return covector(tuple(Q(1) if j == i - 1 else Q(0) for j in range(n)))


class SingularMatrixError(ValueError):
    pass


class QMatrix:
    """Square matrix over Q, immutable."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(qv(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *a):
        raise AttributeError("QMatrix is immutable")

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "QMatrix(%s)" % (tuple(tuple(str(e) for e in r) for r in self.rows),)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        return QMatrix(tuple(tuple(dot(r, c) for c in cols) for r in self.rows))

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "QMatrix":
        return QMatrix(tuple(zip(*self.rows)))

    def det(self) -> Q:
        return _det(self.rows)

    def sign(self) -> int:
        d = self.det()
        if d == 0:
            raise SingularMatrixError("sign of a singular matrix")
        return 1 if d > 0 else -1

    def inv(self) -> "QMatrix":
        return QMatrix(_inverse(self.rows))

    def act_row(self, x: Sequence[Q]) -> tuple:
        """x . gamma for a row vector x."""
        if len(x) != self.n:
            raise ValueError("dimension mismatch")
        return tuple(dot(x, self.column(j)) for j in range(self.n))

    def act_column(self, lam: Sequence[Q]) -> tuple:
        """gamma . lam for a column vector lam."""
        if len(lam) != self.n:
            raise ValueError("dimension mismatch")
        return tuple(dot(r, lam) for r in self.rows)

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for r in self.rows for e in r)


def identity(n: int) -> QMatrix:
    return QMatrix(tuple(tuple(Q(1) if i == j else Q(0) for j in range(n)) for i in range(n)))


def diagonal(entries) -> QMatrix:
    d = qv(entries)
    n = len(d)
    return QMatrix(tuple(tuple(d[i] if i == j else Q(0) for j in range(n)) for i in range(n)))


def _det(rows) -> Q:
    # fraction-free would be overkill; plain elimination over Q is exact
    n = len(rows)
    m = [list(r) for r in rows]
    det = Q(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Q(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] * inv
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def _inverse(rows):
    n = len(rows)
    m = [list(r) + [Q(1) if i == j else Q(0) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [e * inv for e in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [e - f * p for e, p in zip(m[r], m[c])]
    return tuple(tuple(r[n:]) for r in m)


def matrix_ops(gamma: QMatrix):
    """(inverse, transpose, det, sign) of a nonsingular matrix."""
    d = gamma.det()
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    return gamma.inv(), gamma.T, d, (1 if d > 0 else -1)


def shift_permutation(n: int) -> QMatrix:
    """The cyclic shift rho with rho[1,n] = 1 and rho[i+1,i] = 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rows = [[Q(0)] * n for _ in range(n)]
    rows[0][n - 1] = Q(1)
    for i in range(n - 1):
        rows[i + 1][i] = Q(1)
    return QMatrix(rows)


def covector_action(gamma: QMatrix, lam: QVector) -> QVector:
    """(gamma.lam)(x) = lam(x.gamma); as matrices just gamma @ lam."""
    if lam.orientation != "column":
        raise ValueError("covector_action expects a column vector")
    return covector(gamma.act_column(lam.entries))


def basis_to_group(lams: Sequence[QVector]) -> QMatrix:
    """The unique gamma with gamma . lam_i = e_{i+1}^* for 0 <= i <= n-1.

    Stacking the lam_i as columns of L, the condition reads gamma @ L = 1,
    so gamma = L^{-1}.  Dependent input raises SingularMatrixError.
    """
    n = len(lams)
    for lam in lams:
        if len(lam) != n:
            raise ValueError("need n covectors of length n")
    L = QMatrix(tuple(zip(*(tuple(l) for l in lams))))
    return L.inv()


def columns_matrix(lams: Sequence[QVector]) -> QMatrix:
    """Matrix whose j-th column is lams[j]."""
    return QMatrix(tuple(zip(*(tuple(l) for l in lams))))


# ---------------------------------------------------------------------------
# JSON encoding: matrices as arrays of arrays of "p/q" strings

def q_to_str(x: Q) -> str:
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def matrix_to_json(m: QMatrix):
    return [[q_to_str(e) for e in r] for r in m.rows]


def matrix_from_json(data) -> QMatrix:
    return QMatrix(tuple(tuple(Q(e) for e in r) for r in data))
