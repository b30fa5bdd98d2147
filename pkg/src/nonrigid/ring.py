"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` lives over a :class:`VarTable` that splits its symbols into
ring constants (generators of R = Q[t1..tm]) and derivation variables
(X1..Xn). Exponent vectors run over ``constants + variables`` in that order,
and terms are kept in descending lexicographic order so that structural
equality is semantic equality.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational
from operator import add, sub
from typing import Iterable, Iterator, Mapping, Union

Exponent = tuple[int, ...]
Coeff = Union[int, Fraction]


class TableMismatch(ValueError):
    """Operands live over different variable tables."""


class UnknownSymbol(KeyError):
    pass


class NotDivisible(ArithmeticError):
    pass


@dataclass(frozen=True)
class VarTable:
    constants: tuple[str, ...]
    variables: tuple[str, ...]

    def __init__(self, constants: Iterable[str] = (), variables: Iterable[str] = ()):
        object.__setattr__(self, "constants", tuple(constants))
        object.__setattr__(self, "variables", tuple(variables))
        if not self.variables:
            raise ValueError("at least one variable is required")
        symbols = self.symbols
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"duplicate symbols in {symbols}")

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.constants + self.variables

    @property
    def m(self) -> int:
        return len(self.constants)

    @property
    def n(self) -> int:
        return len(self.variables)

    def index(self, symbol: str) -> int:
        """Position of ``symbol`` in the full exponent vector."""
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise UnknownSymbol(symbol) from None

    def var_slot(self, i: int) -> int:
        """Exponent-vector slot of the i-th derivation variable (0-based)."""
        return self.m + i

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return Poly.constant(self, 1)

    def gen(self, symbol: str) -> Poly:
        e = [0] * len(self.symbols)
        e[self.index(symbol)] = 1
        return Poly(self, {tuple(e): 1})

    def var(self, i: int) -> Poly:
        return self.gen(self.variables[i])


def _as_fraction(c) -> Coeff:
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        c = Fraction(c)
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"exact rational coefficient required, got {type(c).__name__}")


def _norm(c: Coeff) -> Coeff:
    # integral coefficients are kept as int; int arithmetic is much faster
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    """Immutable polynomial with nonzero exact rational coefficients.

    Coefficients are ``int`` when integral and ``Fraction`` otherwise.
    """

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VarTable, terms: Mapping[Exponent, object]):
        self.table = table
        width = len(table.symbols)
        clean = {}
        for e, c in terms.items():
            c = _as_fraction(c)
            if c == 0:
                continue
            if len(e) != width:
                raise ValueError(f"exponent {e} has wrong length for {table}")
            clean[tuple(e)] = c
        self._terms = dict(sorted(clean.items(), reverse=True))
        self._hash = None

    @classmethod
    def _raw(cls, table: VarTable, terms: dict[Exponent, Coeff]) -> Poly:
        # caller guarantees nonzero, normalized coefficients
        p = object.__new__(cls)
        p.table = table
        p._terms = dict(sorted(terms.items(), reverse=True))
        p._hash = None
        return p

    @classmethod
    def constant(cls, table: VarTable, c) -> Poly:
        return cls(table, {(0,) * len(table.symbols): c})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Coeff]:
        return self._terms

    def items(self) -> Iterator[tuple[Exponent, Coeff]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def leading(self) -> tuple[Exponent, Coeff]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return next(iter(self._terms.items()))

    def is_constant(self) -> bool:
        """True iff no term involves a derivation variable (membership in R)."""
        m = self.table.m
        return all(not any(e[m:]) for e in self._terms)

    def is_scalar(self) -> bool:
        """True iff the polynomial is a rational number."""
        return all(not any(e) for e in self._terms)

    def scalar_value(self) -> Coeff:
        if not self.is_scalar():
            raise ValueError(f"{self} is not a rational number")
        return next(iter(self._terms.values()), 0)

    def degree_in(self, symbol: str) -> int:
        k = self.table.index(symbol)
        return max((e[k] for e in self._terms), default=0)

    def involves(self, symbol: str) -> bool:
        k = self.table.index(symbol)
        return any(e[k] for e in self._terms)

    def var_degree(self) -> int:
        """Total degree in the derivation variables; -1 for the zero polynomial."""
        m = self.table.m
        return max((sum(e[m:]) for e in self._terms), default=-1)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: Poly) -> None:
        if self.table != other.table:
            raise TableMismatch(f"{self.table} vs {other.table}")

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)):
            return Poly.constant(self.table, other)
        return NotImplemented

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                out.pop(e, None)
        return Poly._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(self.table, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Coeff] = {}
        get = out.get
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(map(add, e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return Poly._raw(self.table, {e: _norm(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        c = _as_fraction(c)
        if c == 0:
            return self.table.zero()
        return Poly._raw(self.table, {e: _norm(c * v) for e, v in self._terms.items()})

    def __pow__(self, k: int) -> Poly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.table.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.table == other.table and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self == Poly.constant(self.table, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.table, tuple(self._terms.items())))
        return self._hash

    # -- calculus ---------------------------------------------------------

    def partial(self, symbol: str) -> Poly:
        k = self.table.index(symbol)
        out = {}
        for e, c in self._terms.items():
            if e[k]:
                d = list(e)
                d[k] -= 1
                out[tuple(d)] = _norm(c * e[k])
        return Poly._raw(self.table, out)

    # -- division ---------------------------------------------------------

    def divmod(self, divisor: Poly) -> tuple[Poly, Poly]:
        """Multivariate division by one divisor under the lex term order.

        The remainder has no term divisible by the divisor's leading
        monomial. For univariate operands this is Euclidean division.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead_e, lead_c = divisor.leading()
        tail = [(e, c) for e, c in divisor._terms.items() if e != lead_e]
        rest = dict(self._terms)
        heap = [_Desc(e) for e in rest]
        heapq.heapify(heap)
        quot: dict[Exponent, Coeff] = {}
        rem: dict[Exponent, Coeff] = {}
        while heap:
            e = heapq.heappop(heap).e
            c = rest.pop(e, 0)
            if not c:
                continue  # cancelled, or a stale duplicate heap entry
            if all(a >= b for a, b in zip(e, lead_e)):
                qe = tuple(map(sub, e, lead_e))
                qc = _norm(Fraction(c) / lead_c)
                quot[qe] = qc
                for de, dc in tail:
                    t = tuple(map(add, qe, de))
                    if t not in rest:
                        heapq.heappush(heap, _Desc(t))
                    rest[t] = _norm(rest.get(t, 0) - qc * dc)
            else:
                rem[e] = c
        return Poly._raw(self.table, quot), Poly._raw(self.table, rem)

    def exact_div(self, divisor: Poly) -> Poly:
        q, r = self.divmod(divisor)
        if r:
            raise NotDivisible(f"{divisor} does not divide {self}")
        return q

    def divides(self, other: Poly) -> bool:
        return not other.divmod(self)[1]

    # -- content ----------------------------------------------------------

    def rational_content(self) -> Fraction:
        """Positive rational c with self / c integral and primitive."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> Poly:
        """Integer-coefficient, content-one associate with positive leading coefficient."""
        if not self._terms:
            return self
        c = self.rational_content()
        if self.leading()[1] < 0:
            c = -c
        return self.scale(Fraction(1) / c)

    def monic(self) -> Poly:
        return self.scale(Fraction(1) / self.leading()[1])

    # -- evaluation -------------------------------------------------------

    def substitute(self, values: Mapping[str, Poly]) -> Poly:
        """Replace symbols by polynomials over the same table."""
        slots = {self.table.index(s): p for s, p in values.items()}
        out = self.table.zero()
        for e, c in self._terms.items():
            term = Poly.constant(self.table, c)
            rest = list(e)
            for k, p in slots.items():
                if e[k]:
                    term = term * p ** e[k]
                    rest[k] = 0
            mono = Poly._raw(self.table, {tuple(rest): 1})
            out = out + term * mono
        return out

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


class _Desc:
    """Heap key giving max-first order on exponent vectors."""

    __slots__ = ("e",)

    def __init__(self, e: Exponent):
        self.e = e

    def __lt__(self, other: _Desc) -> bool:
        return self.e > other.e


def _format_coeff(c: Coeff) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    """Canonical text with explicit ``*`` and ``^``; parseable back."""
    if p.is_zero():
        return "0"
    symbols = p.table.symbols
    parts = []
    for idx, (e, c) in enumerate(p.items()):
        mono = [s if k == 1 else f"{s}^{k}" for s, k in zip(symbols, e) if k]
        a = abs(c)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = "*".join(mono)
        else:
            body = "*".join([_format_coeff(a)] + mono)
        if idx == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def partial(p: Poly, symbol: str) -> Poly:
    return p.partial(symbol)


def is_constant_poly(p: Poly) -> bool:
    return p.is_constant()


def univariate_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd of polynomials in at most one symbol (Euclid)."""
    while q:
        p, q = q, p.divmod(q)[1]
    return p.monic() if p else p
