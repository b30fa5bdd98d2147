"""End-to-end analysis: spec document in, report out, and report re-verification."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Any, Mapping

from .derivation import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Derivation,
    LndCertificate,
    LndMethod,
    NotLnd,
    apply,
    certify_lnd,
    check_lnd_certificate,
)
from .linalg import ConstMatrix, matrix_is_nilpotent
from .parser import parse_expression
from .ring import Poly, VarTable
from .structure import Classification, classify, is_triangular_order
from .witness import (
    CoordinateKernel,
    InconclusiveSamples,
    InheritedLnd,
    KernelSample,
    NonRigidityCertificate,
    Provenance,
    SampleOrigin,
    assemble_certificate,
    check_certificate,
    kernel_samples,
    random_sample_polys,
    witness_divergence,
    witness_linear,
    witness_missing_variable,
    witness_triangular,
)

SCHEMA = "nonrigid.report/1"
STRATEGIES = ("auto", "all", "missing", "triangular", "divergence", "linear")


class Status(str, enum.Enum):
    CERTIFIED = "CERTIFIED"
    INCONCLUSIVE = "INCONCLUSIVE"
    NOT_LND = "NOT_LND"
    UNSUPPORTED = "UNSUPPORTED"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


EXIT_CODES = {
    Status.CERTIFIED: 0,
    Status.INCONCLUSIVE: 2,
    Status.NOT_LND: 3,
    Status.UNSUPPORTED: 4,
    Status.BUDGET_EXCEEDED: 4,
}


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class DerivationSpec:
    constants: tuple[str, ...]
    variables: tuple[str, ...]
    images: Mapping[str, str]
    kernel_hints: tuple[str, ...] = ()

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> DerivationSpec:
        unknown = set(doc) - {"constants", "variables", "images", "kernel_hints"}
        if unknown:
            raise SpecError(f"unknown keys {sorted(unknown)}")
        try:
            variables = tuple(doc["variables"])
            images = dict(doc["images"])
        except KeyError as exc:
            raise SpecError(f"missing key {exc}") from None
        missing = [x for x in variables if x not in images]
        extra = [x for x in images if x not in variables]
        if missing or extra:
            raise SpecError(f"images must cover exactly the variables (missing {missing}, extra {extra})")
        return cls(
            constants=tuple(doc.get("constants", ())),
            variables=variables,
            images=images,
            kernel_hints=tuple(doc.get("kernel_hints", ())),
        )

    def to_dict(self) -> dict:
        doc = {
            "constants": list(self.constants),
            "variables": list(self.variables),
            "images": {x: self.images[x] for x in self.variables},
        }
        if self.kernel_hints:
            doc["kernel_hints"] = list(self.kernel_hints)
        return doc

    def table(self) -> VarTable:
        try:
            return VarTable(self.constants, self.variables)
        except ValueError as exc:
            raise SpecError(str(exc)) from None

    def build(self) -> tuple[Derivation, list[Poly]]:
        """Parse every expression; raises ParseError or SpecError."""
        table = self.table()
        images = [parse_expression(self.images[x], table) for x in self.variables]
        hints = [parse_expression(h, table) for h in self.kernel_hints]
        return Derivation(table, tuple(images)), hints


@dataclass(frozen=True)
class Options:
    max_iter: int = DEFAULT_BUDGET
    samples: int = 4
    seed: int = 0
    strategy: str = "auto"

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.max_iter < 1 or self.samples < 0:
            raise ValueError("max_iter must be >= 1 and samples >= 0")


@dataclass
class Report:
    derivation: Derivation
    options: Options
    status: Status
    classification: Classification
    lnd: LndCertificate | None = None
    certificates: list[NonRigidityCertificate] = field(default_factory=list)
    message: str = ""
    samples: list[KernelSample] = field(default_factory=list)  # not serialized

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


def _witnesses(d: Derivation, cls: Classification, strategy: str) -> list[tuple[Provenance, Derivation]]:
    found = []
    if strategy in ("auto", "all", "missing") and cls.missing_variable is not None:
        found.append((Provenance.MISSING_VARIABLE, witness_missing_variable(d, cls.missing_variable)))
    if strategy in ("auto", "all", "triangular") and cls.triangular_order is not None:
        found.append((Provenance.TRIANGULAR, witness_triangular(d, cls.triangular_order)))
    if strategy in ("auto", "all", "divergence") and cls.divergence_zero:
        found.append((Provenance.DIVERGENCE, witness_divergence(d)))
    if strategy in ("auto", "all", "linear") and cls.linear_matrix is not None:
        found.append((Provenance.LINEAR, witness_linear(d, cls.linear_matrix)))
    if strategy == "auto":
        found = found[:1]
    return found


def run_pipeline(spec: DerivationSpec, options: Options = Options()) -> Report:
    d, hints = spec.build()
    budget = options.max_iter
    cls = classify(d)
    report = Report(d, options, Status.UNSUPPORTED, cls)

    try:
        report.lnd = certify_lnd(d, budget)
    except NotLnd as exc:
        report.status = Status.NOT_LND
        report.message = str(exc)
        return report
    except BudgetExceeded as exc:
        report.status = Status.BUDGET_EXCEEDED
        report.message = f"local nilpotency not established within {exc.budget} iterations"
        return report

    if d.table.n < 2 and not d.is_zero():
        report.message = "non-rigidity of the kernel needs at least two variables"
        return report

    witnesses = _witnesses(d, cls, options.strategy)
    if not witnesses:
        report.message = f"no detector applies under strategy {options.strategy!r}"
        return report

    samples = [KernelSample(h) for h in hints if not apply(d, h)]
    extra = [h for h in hints if apply(d, h)]
    extra += random_sample_polys(d.table, options.samples, random.Random(options.seed))
    samples += kernel_samples(d, report.lnd, extra, budget)
    report.samples = samples

    for provenance, e in witnesses:
        report.certificates.append(assemble_certificate(d, e, samples, budget, provenance))
    if any(c.conclusive for c in report.certificates):
        report.status = Status.CERTIFIED
        report.message = "kernel of D is non-rigid"
    else:
        report.status = Status.INCONCLUSIVE
        report.message = "no explicit kernel witness found at this budget"
    return report


# -- serialization -------------------------------------------------------------


def _images(d: Derivation) -> dict[str, str]:
    return {x: str(f) for x, f in zip(d.table.variables, d.images)}


def _lnd_dict(d: Derivation, cert: LndCertificate) -> dict:
    return {
        "indices": dict(zip(d.table.variables, cert.indices)),
        "method": cert.method.value,
        "budget_used": cert.budget_used,
    }


def _branch_dict(branch) -> dict:
    if isinstance(branch, InheritedLnd):
        origin = branch.sample.origin
        o: dict[str, Any] = {"kind": origin.kind}
        if origin.kind == "DIXMIER":
            o["source"] = str(origin.source)
            o["slice"] = None if origin.slice is None else [str(p) for p in origin.slice]
            o["k"] = origin.k
        return {
            "kind": "INHERITED_LND",
            "sample": str(branch.sample.element),
            "origin": o,
            "image": str(branch.image),
        }
    if isinstance(branch, CoordinateKernel):
        return {"kind": "COORDINATE_KERNEL", "forms": [str(f) for f in branch.forms]}
    return {"kind": "INCONCLUSIVE_SAMPLES", "samples_tried": branch.tried}


def report_to_dict(report: Report) -> dict:
    d = report.derivation
    t = d.table
    cls = report.classification
    doc: dict[str, Any] = {
        "schema": SCHEMA,
        "status": report.status.value,
        "message": report.message,
        "options": {
            "max_iter": report.options.max_iter,
            "samples": report.options.samples,
            "seed": report.options.seed,
            "strategy": report.options.strategy,
        },
        "constants": list(t.constants),
        "variables": list(t.variables),
        "images": _images(d),
        "classification": {
            "missing_variable": None if cls.missing_variable is None else t.variables[cls.missing_variable],
            "triangular_order": None
            if cls.triangular_order is None
            else [t.variables[i] for i in cls.triangular_order],
            "linear_matrix": None if cls.linear_matrix is None else cls.linear_matrix.to_lists(),
            "divergence_zero": cls.divergence_zero,
        },
        "lnd": None if report.lnd is None else _lnd_dict(d, report.lnd),
        "certificates": [
            {
                "provenance": c.provenance.value if c.provenance else None,
                "witness": _images(c.witness),
                "commutation_check": c.commutation_check,
                "witness_lnd": _lnd_dict(c.witness, c.witness_lnd),
                "branch": _branch_dict(c.branch),
            }
            for c in report.certificates
        ],
    }
    return doc


def report_to_text(report: Report) -> str:
    d = report.derivation
    t = d.table
    cls = report.classification
    lines = [f"status: {report.status.value}"]
    if report.message:
        lines.append(f"message: {report.message}")
    if t.constants:
        lines.append(f"constants: {', '.join(t.constants)}")
    lines.append("derivation:")
    lines += [f"  D({x}) = {f}" for x, f in zip(t.variables, d.images)]
    lines.append("classification:")
    mv = "none" if cls.missing_variable is None else t.variables[cls.missing_variable]
    lines.append(f"  missing variable: {mv}")
    order = "none" if cls.triangular_order is None else ", ".join(t.variables[i] for i in cls.triangular_order)
    lines.append(f"  triangular order: {order}")
    if cls.linear_matrix is None:
        lines.append("  linear: no")
    else:
        lines.append("  linear matrix:")
        lines += ["    [" + ", ".join(row) + "]" for row in cls.linear_matrix.to_lists()]
    lines.append(f"  divergence condition: {'yes' if cls.divergence_zero else 'no'}")
    if report.lnd is not None:
        idx = ", ".join(f"{x}:{v}" for x, v in zip(t.variables, report.lnd.indices))
        lines.append(f"lnd: indices {idx} via {report.lnd.method.value}")
    for c in report.certificates:
        lines.append(f"witness ({c.provenance.value if c.provenance else 'given'}):")
        lines += [f"  E({x}) = {f}" for x, f in zip(t.variables, c.witness.images)]
        lines.append(f"  [D, E] = 0: {c.commutation_check}")
        b = c.branch
        if isinstance(b, InheritedLnd):
            lines.append("  branch: INHERITED_LND")
            lines.append(f"    sample a = {b.sample.element}")
            origin = b.sample.origin
            if origin.kind == "DIXMIER" and origin.slice is not None:
                s, r = origin.slice
                lines.append(f"    from Dixmier map of {origin.source}, slice ({s}, {r}), k = {origin.k}")
            lines.append(f"    D(a) = 0, E(a) = {b.image}")
        elif isinstance(b, CoordinateKernel):
            lines.append("  branch: COORDINATE_KERNEL")
            lines += [f"    L = {f}" for f in b.forms]
        else:
            lines.append(f"  branch: INCONCLUSIVE_SAMPLES ({b.tried} samples tried)")
    return "\n".join(lines) + "\n"


# -- verification -------------------------------------------------------------


def _lnd_from_dict(t: VarTable, doc: Mapping) -> LndCertificate:
    return LndCertificate(
        tuple(int(doc["indices"][x]) for x in t.variables),
        LndMethod(doc["method"]),
        int(doc["budget_used"]),
    )


def _derivation_from(t: VarTable, images: Mapping[str, str]) -> Derivation:
    return Derivation(t, tuple(parse_expression(images[x], t) for x in t.variables))


def verify_report(doc: Mapping[str, Any]) -> list[tuple[str, bool]]:
    """Re-execute every equality stated in a JSON report.

    Parse or schema problems propagate as exceptions; failed checks are
    returned as ``(name, False)`` entries.
    """
    if doc.get("schema") != SCHEMA:
        raise SpecError(f"unsupported report schema {doc.get('schema')!r}")
    t = VarTable(doc["constants"], doc["variables"])
    d = _derivation_from(t, doc["images"])
    status = Status(doc["status"])
    checks: list[tuple[str, bool]] = []

    cls = doc["classification"]
    fresh = classify(d)
    mv = cls["missing_variable"]
    checks.append(("missing variable", (None if mv is None else t.variables.index(mv)) == fresh.missing_variable))
    if mv is not None:
        checks.append((f"{mv} absent from all images", not any(f.involves(mv) for f in d.images)))
    order = cls["triangular_order"]
    if order is None:
        checks.append(("not triangular", fresh.triangular_order is None))
    else:
        checks.append(("triangular order", is_triangular_order(d, tuple(t.variables.index(x) for x in order))))
    lin = cls["linear_matrix"]
    if lin is None:
        checks.append(("not linear", fresh.linear_matrix is None))
    else:
        matrix = ConstMatrix.from_rows(t, [[parse_expression(a, t) for a in row] for row in lin])
        checks.append(("linear matrix", matrix == fresh.linear_matrix))
    checks.append(("divergence condition", cls["divergence_zero"] == fresh.divergence_zero))

    if status is Status.NOT_LND:
        nil = fresh.linear_matrix is not None and not matrix_is_nilpotent(fresh.linear_matrix)[0]
        checks.append(("coefficient matrix not nilpotent", nil))
    if doc.get("lnd") is not None:
        checks.append(("D LND indices", check_lnd_certificate(d, _lnd_from_dict(t, doc["lnd"]))))
    elif status in (Status.CERTIFIED, Status.INCONCLUSIVE):
        checks.append(("LND certificate present", False))

    conclusive = False
    for n, cdoc in enumerate(doc["certificates"]):
        cert = _certificate_from_dict(t, cdoc)
        prefix = f"certificate {n + 1}: "
        checks.append((prefix + "commutation flag", cdoc["commutation_check"] is True))
        checks += [(prefix + name, ok) for name, ok in check_certificate(d, cert)]
        checks += [(prefix + name, ok) for name, ok in _provenance_checks(d, fresh, cert)]
        bdoc = cdoc["branch"]
        if bdoc["kind"] == "INHERITED_LND" and bdoc["origin"]["kind"] == "DIXMIER" and bdoc["origin"]["slice"]:
            s, r = (parse_expression(p, t) for p in bdoc["origin"]["slice"])
            checks.append((prefix + "slice D(s) = r != 0, D(r) = 0", apply(d, s) == r and bool(r) and not apply(d, r)))
        conclusive = conclusive or cert.conclusive
    if status is Status.CERTIFIED:
        checks.append(("some certificate conclusive", conclusive))
    elif status is Status.INCONCLUSIVE:
        checks.append(("no certificate conclusive", bool(doc["certificates"]) and not conclusive))
    return checks


def _certificate_from_dict(t: VarTable, cdoc: Mapping) -> NonRigidityCertificate:
    e = _derivation_from(t, cdoc["witness"])
    bdoc = cdoc["branch"]
    kind = bdoc["kind"]
    if kind == "INHERITED_LND":
        odoc = bdoc["origin"]
        if odoc["kind"] == "DIXMIER":
            sl = odoc.get("slice")
            origin = SampleOrigin(
                "DIXMIER",
                parse_expression(odoc["source"], t),
                None if sl is None else tuple(parse_expression(p, t) for p in sl),
                int(odoc["k"]),
            )
        else:
            origin = SampleOrigin.user()
        sample = KernelSample(parse_expression(bdoc["sample"], t), origin)
        branch = InheritedLnd(sample, parse_expression(bdoc["image"], t))
    elif kind == "COORDINATE_KERNEL":
        branch = CoordinateKernel(tuple(parse_expression(f, t) for f in bdoc["forms"]))
    elif kind == "INCONCLUSIVE_SAMPLES":
        branch = InconclusiveSamples(int(bdoc["samples_tried"]))
    else:
        raise SpecError(f"unknown branch kind {kind!r}")
    provenance = Provenance(cdoc["provenance"]) if cdoc.get("provenance") else None
    return NonRigidityCertificate(
        e, bool(cdoc["commutation_check"]), _lnd_from_dict(t, cdoc["witness_lnd"]), branch, provenance
    )


def _provenance_checks(d: Derivation, cls: Classification, cert: NonRigidityCertificate) -> list[tuple[str, bool]]:
    e = cert.witness
    p = cert.provenance
    constant_images = all(f.is_constant() for f in e.images)
    if p is Provenance.MISSING_VARIABLE:
        ok = cls.missing_variable is not None and e == Derivation.coordinate(d.table, cls.missing_variable)
        return [("witness is d/dX_j for the missing variable", ok)]
    if p is Provenance.TRIANGULAR:
        ok = cls.triangular_order is not None and e == Derivation.coordinate(d.table, cls.triangular_order[-1])
        return [("witness is d/dX for the last triangular variable", ok)]
    if p is Provenance.DIVERGENCE:
        return [("witness is sum of d/dX_i", e == Derivation.from_constants(d.table, [1] * d.table.n))]
    if p is Provenance.LINEAR:
        ok = cls.linear_matrix is not None and constant_images
        ok = ok and not any(cls.linear_matrix.apply(e.images))
        return [("A * lambda = 0", ok)]
    return []
