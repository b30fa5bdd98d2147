"""R-derivations of R[X1..Xn] stored by their generator images."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .ring import Poly, TableMismatch, VarTable

DEFAULT_BUDGET = 64


class BudgetExceeded(RuntimeError):
    """Iteration budget ran out. Says nothing about non-nilpotency."""

    def __init__(self, message: str, budget: int):
        super().__init__(message)
        self.budget = budget


class NotLnd(ValueError):
    """Proof that a derivation is not locally nilpotent."""


class LndMethod(str, enum.Enum):
    LINEAR_MATRIX = "LINEAR_MATRIX"
    TRIANGULAR_STRUCTURE = "TRIANGULAR_STRUCTURE"
    BOUNDED_ITERATION = "BOUNDED_ITERATION"


@dataclass(frozen=True)
class Derivation:
    """D = sum_i images[i] * d/dX_i; constants are sent to zero."""

    table: VarTable
    images: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.table.n:
            raise ValueError(f"need {self.table.n} images, got {len(self.images)}")
        for f in self.images:
            if f.table != self.table:
                raise TableMismatch("image over a different table")

    @classmethod
    def zero(cls, table: VarTable) -> Derivation:
        return cls(table, (table.zero(),) * table.n)

    @classmethod
    def coordinate(cls, table: VarTable, j: int) -> Derivation:
        """d/dX_j."""
        return cls.from_constants(table, [int(i == j) for i in range(table.n)])

    @classmethod
    def from_constants(cls, table: VarTable, coeffs: Sequence) -> Derivation:
        """sum_i coeffs[i] * d/dX_i with coefficients in R."""
        images = [c if isinstance(c, Poly) else Poly.constant(table, c) for c in coeffs]
        return cls(table, tuple(images))

    def is_zero(self) -> bool:
        return not any(self.images)

    def __call__(self, p: Poly) -> Poly:
        return apply(self, p)

    def __str__(self) -> str:
        pieces = []
        for x, f in zip(self.table.variables, self.images):
            pieces.append(f"D({x}) = {f}")
        return "; ".join(pieces)


@dataclass(frozen=True)
class LndCertificate:
    indices: tuple[int, ...]
    method: LndMethod
    budget_used: int


def apply(d: Derivation, p: Poly) -> Poly:
    if p.table != d.table:
        raise TableMismatch("polynomial and derivation use different tables")
    out = d.table.zero()
    for x, f in zip(d.table.variables, d.images):
        if f:
            dp = p.partial(x)
            if dp:
                out = out + f * dp
    return out


def commutator(d: Derivation, e: Derivation) -> Derivation:
    """[D, E] evaluated on generators.

    A derivation is determined by its values on X1..Xn (constants go to
    zero), so [D, E] = 0 as an operator iff every image below vanishes.
    """
    if d.table != e.table:
        raise TableMismatch("derivations use different tables")
    images = tuple(apply(d, g) - apply(e, f) for f, g in zip(d.images, e.images))
    return Derivation(d.table, images)


def nilpotency_index(d: Derivation, p: Poly, budget: int = DEFAULT_BUDGET) -> int:
    """Least k <= budget with D^k(p) = 0 (so 0 for p = 0, 1 for kernel elements)."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    k = 0
    q = p
    while q:
        if k == budget:
            raise BudgetExceeded(f"D^{budget}({p}) is still nonzero", budget)
        q = apply(d, q)
        k += 1
    return k


def orbit(d: Derivation, p: Poly) -> list[Poly]:
    """[p, D(p), ..., D^(v-1)(p)] for a p of finite index (no budget)."""
    out = []
    while p:
        out.append(p)
        p = apply(d, p)
    return out


def certify_lnd(d: Derivation, budget: int = DEFAULT_BUDGET) -> LndCertificate:
    from .linalg import matrix_is_nilpotent
    from .structure import detect_linear, detect_triangular

    if budget < 1:
        raise ValueError("budget must be at least 1")
    matrix = detect_linear(d)
    if matrix is not None:
        nilpotent, _ = matrix_is_nilpotent(matrix)
        if not nilpotent:
            raise NotLnd("coefficient matrix is not nilpotent")
        # rows of A^k give D^k(X_i); index of X_i is the first power killing row i
        indices = [0] * d.table.n
        power = None
        k = 0
        pending = set(range(d.table.n))
        while pending:
            power = matrix if power is None else power @ matrix
            k += 1
            for i in sorted(pending):
                if not any(power.rows[i]):
                    indices[i] = k
                    pending.discard(i)
        return LndCertificate(tuple(indices), LndMethod.LINEAR_MATRIX, max(indices))
    method = (
        LndMethod.TRIANGULAR_STRUCTURE
        if detect_triangular(d) is not None
        else LndMethod.BOUNDED_ITERATION
    )
    indices = tuple(nilpotency_index(d, d.table.var(i), budget) for i in range(d.table.n))
    return LndCertificate(indices, method, max(indices))


def check_lnd_certificate(d: Derivation, cert: LndCertificate) -> bool:
    """Recheck D^v(X_i) = 0 and minimality of every stated index."""
    if len(cert.indices) != d.table.n:
        return False
    for i, v in enumerate(cert.indices):
        if v < 1:
            return False
        q = d.table.var(i)
        for _ in range(v - 1):
            q = apply(d, q)
        if not q or apply(d, q):
            return False
    return True


def divergence_condition(d: Derivation) -> bool:
    """True iff sum_j df_i/dX_j = 0 for every image f_i."""
    for f in d.images:
        total = d.table.zero()
        for x in d.table.variables:
            total = total + f.partial(x)
        if total:
            return False
    return True
