import pytest
from hypothesis import given, settings

from conftest import TABLE, derivations, make, polys
from nonrigid.derivation import (
    BudgetExceeded,
    Derivation,
    LndCertificate,
    LndMethod,
    NotLnd,
    apply,
    certify_lnd,
    check_lnd_certificate,
    commutator,
    divergence_condition,
    nilpotency_index,
)
from nonrigid.parser import parse_expression
from nonrigid.ring import TableMismatch, VarTable


def P(d, src):
    return parse_expression(src, d.table)


def test_apply_examples(weitzenboeck):
    assert apply(weitzenboeck, P(weitzenboeck, "2*x1*x3 - x2^2")).is_zero()
    d = make({"x1": "1"})
    assert apply(d, P(d, "x1^2")) == P(d, "2*x1")
    dt = make({"x1": "x1", "x2": "x1*x2 + t"}, constants=["t"])
    assert apply(dt, P(dt, "t^3 + 5")).is_zero()


def test_apply_rejects_other_table(weitzenboeck):
    with pytest.raises(TableMismatch):
        apply(weitzenboeck, VarTable([], ["y"]).gen("y"))


def test_commutator_examples(weitzenboeck):
    d = make({"x1": "1", "x2": "0"})
    e = make({"x1": "0", "x2": "x1"})
    assert commutator(d, e) == make({"x1": "0", "x2": "1"})
    assert commutator(weitzenboeck, weitzenboeck).is_zero()
    assert commutator(weitzenboeck, Derivation.coordinate(weitzenboeck.table, 2)).is_zero()


def test_nilpotency_index_examples(weitzenboeck):
    assert nilpotency_index(weitzenboeck, P(weitzenboeck, "x3"), 64) == 3
    dt = make({"x1": "x1"}, constants=["t"])
    assert nilpotency_index(dt, P(dt, "t"), 64) == 1
    assert nilpotency_index(dt, dt.table.zero(), 1) == 0
    with pytest.raises(BudgetExceeded):
        nilpotency_index(dt, P(dt, "x1"), 64)
    with pytest.raises(ValueError):
        nilpotency_index(dt, P(dt, "x1"), 0)


def test_certify_examples(weitzenboeck, quasi_translation):
    cert = certify_lnd(weitzenboeck, 64)
    assert cert == LndCertificate((1, 2, 3), LndMethod.LINEAR_MATRIX, 3)
    with pytest.raises(NotLnd):
        certify_lnd(make({"x1": "x1"}), 64)
    cert = certify_lnd(quasi_translation, 64)
    assert cert.indices == (2, 2) and cert.method is LndMethod.BOUNDED_ITERATION


def test_certify_triangular_method():
    d = make({"x1": "0", "x2": "x1^2", "x3": "x2"})
    cert = certify_lnd(d)
    assert cert.method is LndMethod.TRIANGULAR_STRUCTURE and cert.indices == (1, 2, 3)
    assert check_lnd_certificate(d, cert)


def test_certify_budget_exceeded_not_refutation():
    with pytest.raises(BudgetExceeded):
        certify_lnd(make({"x1": "x1^2"}), 64)
    # genuine LND with index above a tiny budget
    with pytest.raises(BudgetExceeded):
        certify_lnd(make({"x1": "0", "x2": "x1^2", "x3": "x2"}), 2)


def test_check_lnd_certificate_rejects_wrong_indices(weitzenboeck):
    assert not check_lnd_certificate(weitzenboeck, LndCertificate((1, 2, 4), LndMethod.LINEAR_MATRIX, 4))
    assert not check_lnd_certificate(weitzenboeck, LndCertificate((1, 1, 3), LndMethod.LINEAR_MATRIX, 3))


def test_divergence_examples(weitzenboeck, quasi_translation):
    assert divergence_condition(quasi_translation)
    assert not divergence_condition(weitzenboeck)
    assert divergence_condition(Derivation.zero(VarTable([], ["x1", "x2"])))


@given(derivations(), polys(max_terms=3), polys(max_terms=3))
def test_leibniz(d, p, q):
    assert apply(d, p * q) == apply(d, p) * q + p * apply(d, q)
    assert apply(d, p + q) == apply(d, p) + apply(d, q)


@given(derivations(), polys(max_terms=3))
def test_constants_in_kernel(d, p):
    constant = p.substitute({x: TABLE.zero() for x in TABLE.variables})
    assert apply(d, constant).is_zero()


@settings(max_examples=50)
@given(derivations(max_terms=2), derivations(max_terms=2), polys(max_terms=2), polys(max_terms=2))
def test_commutator_is_antisymmetric_derivation(d, e, p, q):
    c = commutator(d, e)
    assert commutator(e, d) == Derivation(TABLE, tuple(-f for f in c.images))
    # commutator agrees with the operator DE - ED and obeys Leibniz
    assert apply(c, p) == apply(d, apply(e, p)) - apply(e, apply(d, p))
    assert apply(c, p * q) == apply(c, p) * q + p * apply(c, q)


@given(polys(max_terms=3), polys(max_terms=3))
def test_kernel_subring(p, q):
    d = make({"x1": "0", "x2": "x1", "x3": "x2"}, constants=["t"])
    a = parse_expression("2*x1*x3 - x2^2", d.table)
    # build kernel elements from p, q by substituting kernel generators
    table = d.table
    kp = p.substitute({"x2": a, "x3": table.zero()})
    kq = q.substitute({"x2": a * a, "x3": table.zero()})
    assert apply(d, kp).is_zero() and apply(d, kq).is_zero()
    assert apply(d, kp + kq).is_zero()
    assert apply(d, kp * kq).is_zero()
