"""Structural facts about a derivation in its given coordinates.

Detection works up to permuting the declared variables only; a derivation
that becomes triangular or linear after a genuine polynomial change of
coordinates is not recognized.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .derivation import Derivation, divergence_condition
from .linalg import ConstMatrix
from .ring import Poly


@dataclass(frozen=True)
class Classification:
    missing_variable: int | None
    triangular_order: tuple[int, ...] | None
    linear_matrix: ConstMatrix | None
    divergence_zero: bool


def detect_missing_variable(d: Derivation) -> int | None:
    for j, x in enumerate(d.table.variables):
        if not any(f.involves(x) for f in d.images):
            return j
    return None


def dependency_graph(d: Derivation) -> list[set[int]]:
    """deps[i] = indices j such that the image of X_i involves X_j."""
    variables = d.table.variables
    return [{j for j, x in enumerate(variables) if f.involves(x)} for f in d.images]


def detect_triangular(d: Derivation) -> tuple[int, ...] | None:
    """Order in which each image only involves earlier variables, or None.

    Kahn's algorithm, always taking the smallest available index.
    """
    deps = dependency_graph(d)
    n = len(deps)
    users: list[list[int]] = [[] for _ in range(n)]
    remaining = [len(s) for s in deps]
    for i, s in enumerate(deps):
        for j in s:
            users[j].append(i)
    ready = [i for i in range(n) if remaining[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        j = heapq.heappop(ready)
        order.append(j)
        for i in users[j]:
            remaining[i] -= 1
            if remaining[i] == 0:
                heapq.heappush(ready, i)
    return tuple(order) if len(order) == n else None


def is_triangular_order(d: Derivation, order: tuple[int, ...]) -> bool:
    if sorted(order) != list(range(d.table.n)):
        return False
    variables = d.table.variables
    for pos, i in enumerate(order):
        later = order[pos:]
        if any(d.images[i].involves(variables[j]) for j in later):
            return False
    return True


def linear_form_coefficients(p: Poly) -> tuple[Poly, ...] | None:
    """(a_1..a_n) in R with p = sum_j a_j X_j, or None if p is not such a form."""
    table = p.table
    m, n = table.m, table.n
    coeffs: list[dict] = [{} for _ in range(n)]
    for e, c in p.items():
        xs = e[m:]
        if sum(xs) != 1:
            return None
        j = next(k for k, a in enumerate(xs) if a)
        coeffs[j][e[:m] + (0,) * n] = c
    return tuple(Poly(table, terms) for terms in coeffs)


def detect_linear(d: Derivation) -> ConstMatrix | None:
    rows = []
    for f in d.images:
        row = linear_form_coefficients(f)
        if row is None:
            return None
        rows.append(row)
    return ConstMatrix(d.table, tuple(rows))


def linear_images(matrix: ConstMatrix) -> tuple[Poly, ...]:
    """Images sum_j a_ij X_j of the linear derivation with this matrix."""
    table = matrix.table
    xs = [table.var(j) for j in range(matrix.n)]
    return tuple(sum((a * x for a, x in zip(row, xs)), table.zero()) for row in matrix.rows)


def classify(d: Derivation) -> Classification:
    return Classification(
        missing_variable=detect_missing_variable(d),
        triangular_order=detect_triangular(d),
        linear_matrix=detect_linear(d),
        divergence_zero=divergence_condition(d),
    )

