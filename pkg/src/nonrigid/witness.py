"""Witness derivations and non-rigidity certificates.

Every witness E built here has images in R, so E^2 vanishes on the
generators and E is locally nilpotent. Given E commuting with D, E maps
ker D into itself; the certificate then either exhibits a kernel element
that E moves (E restricts to a nonzero LND of ker D), or shows ker D equals
the polynomial ring ker E.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from math import factorial
from typing import Iterable, Sequence, Union

from .derivation import (
    BudgetExceeded,
    Derivation,
    LndCertificate,
    apply,
    certify_lnd,
    check_lnd_certificate,
    commutator,
    divergence_condition,
    nilpotency_index,
    orbit,
)
from .linalg import ConstMatrix, matrix_is_nilpotent, matrix_rank, nullspace_vector
from .ring import NotDivisible, Poly, VarTable
from .structure import (
    detect_linear,
    is_triangular_order,
    linear_form_coefficients,
)


class WitnessError(ValueError):
    """A witness construction was called outside its hypotheses."""


class NoSlice(ValueError):
    """D vanishes on every generator, so it has no local slice."""


class Provenance(str, enum.Enum):
    MISSING_VARIABLE = "MISSING_VARIABLE"
    TRIANGULAR = "TRIANGULAR"
    DIVERGENCE = "DIVERGENCE"
    LINEAR = "LINEAR"


# -- witnesses --------------------------------------------------------------


def witness_missing_variable(d: Derivation, j: int) -> Derivation:
    x = d.table.variables[j]
    if any(f.involves(x) for f in d.images):
        raise WitnessError(f"{x} occurs in an image of D")
    return Derivation.coordinate(d.table, j)


def witness_divergence(d: Derivation) -> Derivation:
    if not divergence_condition(d):
        raise WitnessError("some image has nonzero row sum of partials")
    return Derivation.from_constants(d.table, [1] * d.table.n)


def witness_triangular(d: Derivation, order: Sequence[int]) -> Derivation:
    order = tuple(order)
    if not is_triangular_order(d, order):
        raise WitnessError(f"D is not triangular in the order {order}")
    return witness_missing_variable(d, order[-1])


def witness_linear(d: Derivation, matrix: ConstMatrix) -> Derivation:
    """E = sum lambda_i d/dX_i for a null vector lambda of the coefficient matrix.

    Then E(D(X_i)) = sum_j a_ij lambda_j = 0 and D(E(X_i)) = D(lambda_i) = 0.
    """
    if detect_linear(d) != matrix:
        raise WitnessError("matrix does not match the images of D")
    if not matrix_is_nilpotent(matrix)[0]:
        raise WitnessError("coefficient matrix is not nilpotent")
    return Derivation.from_constants(d.table, nullspace_vector(matrix))


# -- kernel samples ----------------------------------------------------------


@dataclass(frozen=True)
class SampleOrigin:
    kind: str  # "USER_SUPPLIED" or "DIXMIER"
    source: Poly | None = None
    slice: tuple[Poly, Poly] | None = None
    k: int = 0

    @classmethod
    def user(cls) -> SampleOrigin:
        return cls("USER_SUPPLIED")


@dataclass(frozen=True)
class KernelSample:
    element: Poly
    origin: SampleOrigin = field(default_factory=SampleOrigin.user)


def find_local_slice(d: Derivation, cert: LndCertificate) -> tuple[Poly, Poly]:
    """(s, r) with D(s) = r != 0 and D(r) = 0, taken from the first X_i of index >= 2."""
    for i, v in enumerate(cert.indices):
        if v >= 2:
            s = d.table.var(i)
            for _ in range(v - 2):
                s = apply(d, s)
            return s, apply(d, s)
    raise NoSlice("D is zero on all generators")


def dixmier_sample(
    d: Derivation,
    s: Poly | None,
    r: Poly | None,
    b: Poly,
    budget: int,
) -> tuple[Poly, int] | None:
    """Kernel element from the Dixmier map pi(b) = sum (-1)^i/i! D^i(b) (s/r)^i.

    Returns ``(numerator, k)`` with pi(b) = c * numerator / r^k for a nonzero
    rational c, or None when pi(b) = 0. Elements already in the kernel are
    returned unchanged and need no slice.
    """
    v = nilpotency_index(d, b, budget)
    if v == 0:
        return None
    if v == 1:
        return b, 0
    if s is None or r is None:
        raise NoSlice("a local slice is required for elements outside the kernel")
    terms = orbit(d, b)
    top = v - 1
    # numerator of pi(b) * r^top, with r_pows[i] = r^i
    r_pows = [d.table.one()]
    for _ in range(top):
        r_pows.append(r_pows[-1] * r)
    # scaled by top! so every weight (-1)^i top!/i! is an integer
    num = d.table.zero()
    s_pow = d.table.one()
    for i, t in enumerate(terms):
        c = (-1) ** i * (factorial(top) // factorial(i))
        num = num + (t * s_pow * r_pows[top - i]).scale(c)
        s_pow = s_pow * s
    if not num:
        return None
    k = top
    while k > 0:
        try:
            num = num.exact_div(r)
        except NotDivisible:
            break
        k -= 1
    return num.primitive(), k


def random_sample_polys(table: VarTable, count: int, rng: random.Random) -> list[Poly]:
    """Nonzero polynomials of degree <= 2 in the variables, coefficients in [-3, 3]."""
    n = table.n
    monomials = [()]
    monomials += [(i,) for i in range(n)]
    monomials += [(i, j) for i in range(n) for j in range(i, n)]
    out = []
    while len(out) < count:
        p = table.zero()
        for _ in range(rng.randint(1, 3)):
            mono = rng.choice(monomials)
            term = Poly.constant(table, rng.randint(-3, 3))
            for i in mono:
                term = term * table.var(i)
            p = p + term
        if p:
            out.append(p)
    return out


def kernel_samples(
    d: Derivation,
    cert: LndCertificate,
    extra: Iterable[Poly] = (),
    budget: int = 64,
) -> list[KernelSample]:
    """Dixmier images of the generators, then of ``extra``, skipping zeros.

    Elements whose index exceeds ``budget`` are silently dropped.
    """
    try:
        s, r = find_local_slice(d, cert)
    except NoSlice:
        s = r = None
    out = []
    for b in [d.table.var(i) for i in range(d.table.n)] + list(extra):
        try:
            res = dixmier_sample(d, s, r, b, budget)
        except BudgetExceeded:
            continue
        if res is None:
            continue
        num, k = res
        origin = SampleOrigin("DIXMIER", b, None if s is None else (s, r), k)
        out.append(KernelSample(num, origin))
    return out


# -- certificates ------------------------------------------------------------


@dataclass(frozen=True)
class InheritedLnd:
    sample: KernelSample
    image: Poly


@dataclass(frozen=True)
class CoordinateKernel:
    forms: tuple[Poly, ...]


@dataclass(frozen=True)
class InconclusiveSamples:
    tried: int


Branch = Union[InheritedLnd, CoordinateKernel, InconclusiveSamples]


@dataclass(frozen=True)
class NonRigidityCertificate:
    witness: Derivation
    commutation_check: bool
    witness_lnd: LndCertificate
    branch: Branch
    provenance: Provenance | None = None

    @property
    def conclusive(self) -> bool:
        return not isinstance(self.branch, InconclusiveSamples)


def coordinate_forms(e: Derivation) -> tuple[Poly, ...] | None:
    """n-1 independent linear forms killed by E = sum lambda_i d/dX_i, lambda_i in R."""
    if not all(f.is_constant() for f in e.images) or e.is_zero():
        return None
    lam = e.images
    j0 = next(i for i, c in enumerate(lam) if c)
    x0 = e.table.var(j0)
    forms = []
    for m in range(e.table.n):
        if m != j0:
            forms.append((lam[j0] * e.table.var(m) - lam[m] * x0).primitive())
    return tuple(forms)


def assemble_certificate(
    d: Derivation,
    e: Derivation,
    samples: Sequence[KernelSample],
    budget: int = 64,
    provenance: Provenance | None = None,
) -> NonRigidityCertificate:
    if e.is_zero():
        raise WitnessError("witness derivation is zero")
    if not commutator(d, e).is_zero():
        raise WitnessError("witness does not commute with D")
    e_cert = certify_lnd(e, budget)

    tried = 0
    for sample in samples:
        if apply(d, sample.element):
            raise WitnessError(f"sample {sample.element} is not in ker D")
        tried += 1
        image = apply(e, sample.element)
        if image:
            return NonRigidityCertificate(e, True, e_cert, InheritedLnd(sample, image), provenance)

    forms = coordinate_forms(e)
    if forms and all(not apply(d, form) for form in forms):
        return NonRigidityCertificate(e, True, e_cert, CoordinateKernel(forms), provenance)
    return NonRigidityCertificate(e, True, e_cert, InconclusiveSamples(tried), provenance)


def check_certificate(d: Derivation, cert: NonRigidityCertificate) -> list[tuple[str, bool]]:
    """Recompute every equality a certificate asserts, from scratch."""
    e = cert.witness
    checks = [
        ("witness nonzero", not e.is_zero()),
        ("commutator [D,E] = 0", commutator(d, e).is_zero()),
        ("witness LND indices", check_lnd_certificate(e, cert.witness_lnd)),
    ]
    branch = cert.branch
    if isinstance(branch, InheritedLnd):
        a = branch.sample.element
        checks.append(("D(sample) = 0", not apply(d, a)))
        checks.append(("E(sample) = image", apply(e, a) == branch.image))
        checks.append(("image nonzero", bool(branch.image)))
    elif isinstance(branch, CoordinateKernel):
        n = d.table.n
        coeffs = [linear_form_coefficients(f) for f in branch.forms]
        linear = all(c is not None for c in coeffs)
        checks.append(("n-1 linear forms", linear and len(coeffs) == n - 1 and n >= 2))
        checks.append(("E(L) = 0", all(not apply(e, f) for f in branch.forms)))
        checks.append(("D(L) = 0", all(not apply(d, f) for f in branch.forms)))
        checks.append(("forms independent", linear and matrix_rank(coeffs) == n - 1))
    return checks
