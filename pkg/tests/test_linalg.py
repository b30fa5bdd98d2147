import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import make_table, random_nilpotent_conjugate, random_rank_deficient
from nonrigid.linalg import (
    ConstMatrix,
    FullRank,
    bareiss_echelon,
    matrix_is_nilpotent,
    matrix_rank,
    nullspace_vector,
)
from nonrigid.ring import VarTable
from oracles import frac_field, int_matrix_powers, naive_nullspace, to_field

Q = VarTable([], ["x1", "x2", "x3"])
QT = VarTable(["t"], ["x1", "x2", "x3"])


def test_nilpotent_shift_matrix():
    # powers by hand: A^2 = e31, A^3 = 0
    a = [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
    powers = int_matrix_powers(a, 3)
    assert not powers[1].is_zero_matrix and powers[2].is_zero_matrix
    assert matrix_is_nilpotent(ConstMatrix.from_rows(Q, a)) == (True, 3)


def test_identity_not_nilpotent():
    assert matrix_is_nilpotent(ConstMatrix.from_rows(VarTable([], ["x"]), [[1]])) == (False, None)


def test_rank_one_nilpotent():
    a = [[2, -4], [1, -2]]
    assert int_matrix_powers(a, 2)[1].is_zero_matrix
    assert matrix_is_nilpotent(ConstMatrix.from_rows(VarTable([], ["x1", "x2"]), a)) == (True, 2)


def test_zero_matrix_is_nilpotent_of_index_one():
    assert matrix_is_nilpotent(ConstMatrix.zeros(Q, 3)) == (True, 1)


def test_nullspace_examples():
    t2 = VarTable(["t"], ["x1", "x2"])
    tt = t2.gen("t")
    one, zero = t2.one(), t2.zero()
    assert nullspace_vector(ConstMatrix.from_rows(t2, [[2, -4], [1, -2]])) == (one.scale(2), one)
    assert nullspace_vector(ConstMatrix.from_rows(t2, [[0, tt], [0, 0]])) == (one, zero)
    assert nullspace_vector(ConstMatrix.zeros(t2, 2)) == (one, zero)


def test_nullspace_full_rank_raises():
    with pytest.raises(FullRank):
        nullspace_vector(ConstMatrix.identity(Q, 3))
    with pytest.raises(FullRank):
        nullspace_vector(ConstMatrix.from_rows(Q, [[1, 2, 0], [3, 4, 0], [0, 0, 5]]))


def test_matrix_rejects_variable_entries():
    with pytest.raises(ValueError):
        ConstMatrix.from_rows(Q, [[Q.gen("x1")]])


def test_content_normalization_divides_polynomial_gcd():
    t2 = VarTable(["t"], ["x1", "x2"])
    tt = t2.gen("t")
    # null vector (t, t) before normalization; gcd t removed
    a = ConstMatrix.from_rows(t2, [[tt, -tt], [2 * tt, -2 * tt]])
    assert nullspace_vector(a) == (t2.one(), t2.one())


def test_bareiss_divisions_are_exact():
    rng = random.Random(5)
    for _ in range(50):
        a = random_rank_deficient(rng, rng.randint(2, 5), QT)
        echelon, pivots = bareiss_echelon(a.rows)
        assert len(pivots) <= a.n - 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_nullspace_against_frac_field_oracle(seed, n):
    rng = random.Random(seed)
    a = random_rank_deficient(rng, n, QT)
    lam = nullspace_vector(a)
    assert any(lam) and not any(a.apply(lam))
    field = frac_field(QT.constants)
    rank, basis = naive_nullspace([[to_field(x, field) for x in row] for row in a.rows], field)
    assert rank == matrix_rank(a.rows)
    if rank == n - 1:
        (v,) = basis
        lf = [to_field(x, field) for x in lam]
        assert all(lf[i] * v[j] == lf[j] * v[i] for i in range(n) for j in range(n))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_nilpotent_conjugates(seed, n):
    rng = random.Random(seed)
    a = random_nilpotent_conjugate(rng, n, Q)
    ok, k = matrix_is_nilpotent(a)
    ints = [[int(x.scalar_value()) for x in row] for row in a.rows]
    powers = int_matrix_powers(ints, n)
    assert ok and powers[k - 1].is_zero_matrix
    assert k == 1 or not powers[k - 2].is_zero_matrix


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_perturbed_diagonal_not_nilpotent(seed, n):
    rng = random.Random(seed)
    a = random_nilpotent_conjugate(rng, n, Q)
    i = rng.randrange(n)
    rows = [[x.scalar_value() for x in row] for row in a.rows]
    rows[i][i] += rng.choice([-2, -1, 1, 2])
    b = ConstMatrix.from_rows(Q, rows)
    # trace(B) != 0 so B is not nilpotent
    assert matrix_is_nilpotent(b) == (False, None)


def test_nullspace_over_two_constants():
    table = make_table(3, 2)
    rng = random.Random(11)
    for _ in range(20):
        a = random_rank_deficient(rng, rng.randint(2, 4), table)
        lam = nullspace_vector(a)
        assert any(lam) and not any(a.apply(lam))
