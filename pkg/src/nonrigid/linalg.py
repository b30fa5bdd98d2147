"""Fraction-free linear algebra over the constant subring R.

Matrices hold :class:`Poly` entries free of derivation variables. Elimination
is Bareiss-style, so every intermediate entry stays in R and each division is
exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .ring import Poly, VarTable, univariate_gcd


class FullRank(ArithmeticError):
    """The matrix has no nonzero null vector."""


@dataclass(frozen=True)
class ConstMatrix:
    table: VarTable
    rows: tuple[tuple[Poly, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        for row in self.rows:
            if len(row) != n:
                raise ValueError("matrix must be square")
            for a in row:
                if a.table != self.table:
                    raise ValueError("entry over a different table")
                if not a.is_constant():
                    raise ValueError(f"entry {a} involves a derivation variable")

    @classmethod
    def from_rows(cls, table: VarTable, rows: Sequence[Sequence]) -> ConstMatrix:
        return cls(table, tuple(tuple(_lift(table, a) for a in row) for row in rows))

    @classmethod
    def zeros(cls, table: VarTable, n: int) -> ConstMatrix:
        return cls.from_rows(table, [[0] * n for _ in range(n)])

    @classmethod
    def identity(cls, table: VarTable, n: int) -> ConstMatrix:
        return cls.from_rows(table, [[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.rows[i][j]

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.rows for a in row)

    def __matmul__(self, other: ConstMatrix) -> ConstMatrix:
        n = self.n
        zero = self.table.zero()
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a = self.rows[i][k]
                    if a:
                        b = other.rows[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return ConstMatrix(self.table, tuple(out))

    def apply(self, vec: Sequence[Poly]) -> tuple[Poly, ...]:
        zero = self.table.zero()
        out = []
        for row in self.rows:
            acc = zero
            for a, v in zip(row, vec):
                acc = acc + a * v
            out.append(acc)
        return tuple(out)

    def to_lists(self) -> list[list[str]]:
        return [[str(a) for a in row] for row in self.rows]


def _lift(table: VarTable, a) -> Poly:
    return a if isinstance(a, Poly) else Poly.constant(table, a)


def matrix_is_nilpotent(a: ConstMatrix) -> tuple[bool, int | None]:
    """Return ``(True, k)`` with the least k such that a**k == 0, else ``(False, None)``."""
    power = a
    for k in range(1, a.n + 1):
        if power.is_zero():
            return True, k
        power = power @ a
    return False, None


def bareiss_echelon(rows: Sequence[Sequence[Poly]]) -> tuple[list[list[Poly]], list[int]]:
    """Fraction-free row echelon form and its pivot columns.

    Pivots are the first nonzero entry in each column scanning rows top to
    bottom; columns without a pivot are skipped.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    prev = None
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, n_rows):
            lead = m[i][c]
            for j in range(c + 1, n_cols):
                v = piv * m[i][j] - lead * m[r][j]
                m[i][j] = v.exact_div(prev) if prev is not None and v else v
            m[i][c] = piv.table.zero()
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots


def matrix_rank(rows: Sequence[Sequence[Poly]]) -> int:
    return len(bareiss_echelon(rows)[1])


def content_normalize(vec: Sequence[Poly]) -> tuple[Poly, ...]:
    """Remove common content from a nonzero vector over R.

    Always strips the rational content. When R has at most one generator the
    monic polynomial gcd of the entries is divided out as well. The first
    nonzero entry ends with a positive leading coefficient.
    """
    nonzero = [v for v in vec if v]
    if not nonzero:
        raise ValueError("cannot normalize the zero vector")
    table = nonzero[0].table
    if table.m <= 1:
        g = nonzero[0]
        for v in nonzero[1:]:
            g = univariate_gcd(g, v)
        g = g.monic()
        vec = [v.exact_div(g) for v in vec]
    content = 0
    for v in vec:
        if v:
            c = v.rational_content()
            content = c if not content else _frac_gcd(content, c)
    first = next(v for v in vec if v)
    if first.leading()[1] < 0:
        content = -content
    return tuple(v.scale(Fraction(1) / content) for v in vec)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    num = gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    return Fraction(num, den)


def nullspace_vector(a: ConstMatrix) -> tuple[Poly, ...]:
    """A content-normalized nonzero vector in the right kernel of ``a``.

    The first free column of the echelon form is set to one, all other free
    columns to zero, and pivot unknowns are solved bottom-up; whenever a
    pivot would need dividing, the whole vector is scaled by it instead.
    """
    echelon, pivots = bareiss_echelon(a.rows)
    n = a.n
    free = [c for c in range(n) if c not in pivots]
    if not free:
        raise FullRank("matrix has full rank over Frac(R)")
    zero = a.table.zero()
    x = [zero] * n
    x[free[0]] = a.table.one()
    for r in reversed(range(len(pivots))):
        c = pivots[r]
        s = zero
        for j in range(c + 1, n):
            if echelon[r][j] and x[j]:
                s = s + echelon[r][j] * x[j]
        if not s:
            continue
        piv = echelon[r][c]
        x = [v * piv for v in x]
        x[c] = -s
    return content_normalize(x)
