import random
from fractions import Fraction

import pytest

from hopt import linalg
from hopt.semantics import BOOLEAN, ConsistencyError, ExactMatrix, random_matrix


def test_rank_and_rref():
    m = ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert linalg.rank(m) == 2
    r, t, pivots = linalg.rref_with_transform(m)
    assert t.mul(m) == r
    assert pivots == [0, 1]


def test_solve_feasible():
    a = ExactMatrix.from_rows([[2, 0], [1, 3]])
    b = ExactMatrix.column([4, 5])
    x, cert = linalg.solve(a, b)
    assert cert is None
    assert a.mul(x) == b
    assert x.data == [Fraction(2), Fraction(1)]


def test_solve_underdetermined_particular():
    a = ExactMatrix.from_rows([[1, 1, 0], [0, 0, 1]])
    b = ExactMatrix.column([3, 7])
    x, cert = linalg.solve(a, b)
    assert cert is None
    assert a.mul(x) == b


def test_solve_infeasible_yields_rechecking_certificate():
    a = ExactMatrix.from_rows([[1, 2], [2, 4]])
    b = ExactMatrix.column([1, 3])
    x, cert = linalg.solve(a, b)
    assert x is None
    # the certificate re-checks: cert.a == 0 and cert.b != 0
    assert cert.mul(a).is_zero()
    assert not cert.mul(b).is_zero()


def test_nullspace():
    a = ExactMatrix.from_rows([[1, 2, 3]])
    basis = linalg.nullspace(a)
    assert len(basis) == 2
    for v in basis:
        assert a.mul(v).is_zero()


def test_inverse():
    rng = random.Random(4)
    while True:
        m = random_matrix(4, 4, rng)
        if linalg.rank(m) == 4:
            break
    inv = linalg.inverse(m)
    assert inv.mul(m) == ExactMatrix.identity(4)
    assert m.mul(inv) == ExactMatrix.identity(4)
    singular = ExactMatrix.from_rows([[1, 2], [2, 4]])
    assert linalg.inverse(singular) is None
    assert not linalg.is_invertible(ExactMatrix.from_rows([[1, 2, 3], [0, 1, 0]]))


def test_affine_membership():
    s0 = ExactMatrix.column([1, 0, 0])
    s1 = ExactMatrix.column([0, 1, 0])
    inside = ExactMatrix.column([Fraction(1, 2), Fraction(1, 2), 0])
    coeffs, cert = linalg.affine_membership(inside, [s0, s1])
    assert cert is None
    assert sum(coeffs.data) == 1
    outside = ExactMatrix.column([0, 0, 1])
    coeffs, cert = linalg.affine_membership(outside, [s0, s1])
    assert coeffs is None
    diffs = linalg.hstack_columns([s1.sub(s0)])
    assert cert.mul(diffs).is_zero()
    assert not cert.mul(outside.sub(s0)).is_zero()


def test_boolean_semiring_rejected():
    m = ExactMatrix(1, 1, [True], BOOLEAN)
    with pytest.raises(ConsistencyError):
        linalg.rank(m)
