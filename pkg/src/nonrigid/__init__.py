"""Exact certificates that kernels of triangular and linear LNDs are non-rigid."""

from .derivation import (
    BudgetExceeded,
    Derivation,
    LndCertificate,
    LndMethod,
    NotLnd,
    apply,
    certify_lnd,
    commutator,
    divergence_condition,
    nilpotency_index,
)
from .linalg import ConstMatrix, FullRank, matrix_is_nilpotent, nullspace_vector
from .parser import ParseError, parse_expression
from .pipeline import DerivationSpec, Options, Report, Status, run_pipeline, verify_report
from .ring import Poly, VarTable, is_constant_poly, partial, poly_add, poly_mul
from .structure import (
    Classification,
    classify,
    detect_linear,
    detect_missing_variable,
    detect_triangular,
)
from .witness import (
    NoSlice,
    NonRigidityCertificate,
    assemble_certificate,
    dixmier_sample,
    find_local_slice,
    witness_divergence,
    witness_linear,
    witness_missing_variable,
    witness_triangular,
)

__version__ = "0.1.0"
