import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import naive_rank
from orbitclosure import kernels
from orbitclosure.exactla import (
    GF,
    QQ,
    FieldMismatchError,
    FpElem,
    Matrix,
    PrimeField,
    checked_modular_rank,
    fraction_free_eliminate,
    int_det,
    minor_det,
    nullspace,
    rank,
    rref,
)

small = st.integers(-6, 6)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rref_proportional_rows():
    res = rref(Matrix([[1, 2], [2, 4]]))
    assert res.rank == 1 and res.pivot_cols == [0]
    assert res.echelon.tolist() == [[1, 2], [0, 0]]


def test_rref_full_rank_gives_identity():
    res = rref(Matrix([[1, 2], [3, 4]]))
    assert res.rank == 2
    assert res.echelon == Matrix.identity(2)


def test_rref_empty_matrix():
    res = rref(Matrix([], 4))
    assert res.rank == 0 and res.echelon.nrows == 0 and res.pivot_cols == []


def test_rref_fractions():
    res = rref(Matrix([[Fraction(1, 2), 1], [1, 3]]))
    assert res.echelon.tolist() == [[1, 0], [0, 1]]


def test_nullspace_examples():
    ns = nullspace(Matrix([[1, 2, 0], [1, 2, 2]]))
    assert len(ns) == 1
    v = ns[0]
    assert v[0] / v[1] == -2 and v[2] == 0
    assert nullspace(Matrix.identity(3)) == []
    assert [list(v) for v in nullspace(Matrix([[0, 0, 0]]))] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_minor_det_examples():
    m = Matrix([[1, 2], [3, 4]])
    assert minor_det(m, [0, 1], [0, 1]) == -2
    big = Matrix([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    assert minor_det(big, [2], [1]) == 8
    rep = Matrix([[1, 2, 3], [1, 2, 3], [0, 1, 5]])
    assert minor_det(rep, [0, 1], [0, 2]) == 0


def test_minor_det_validation():
    m = Matrix([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        minor_det(m, [0], [0, 1])
    with pytest.raises(ValueError):
        minor_det(m, [1, 0], [0, 1])
    with pytest.raises(IndexError):
        minor_det(m, [0, 2], [0, 1])


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        Matrix([[Fraction(1, 2), FpElem(3, 7)]])


def test_prime_field_arithmetic():
    f = GF(7)
    a, b = f.convert(3), f.convert(5)
    assert int(a * b) == 1
    assert int(f.div(a, b)) == int(a * f.convert(3))
    assert f.convert(Fraction(1, 2)) * 2 == 1
    with pytest.raises(ValueError):
        PrimeField(8)


def test_rref_over_prime_field_matches_hand():
    f = GF(5)
    m = Matrix([[f.convert(v) for v in r] for r in [[1, 2, 3], [2, 4, 2]]], field=f)
    res = rref(m)
    assert res.rank == 2 and res.pivot_cols == [0, 2]
    assert [[int(v) for v in r] for r in res.echelon.tolist()] == [[1, 2, 0], [0, 0, 1]]


def test_int_det_matches_numpy():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.integers(-9, 10, size=(4, 4))
        assert int_det(a.tolist()) == round(np.linalg.det(a))


def test_fraction_free_sign_and_pivots():
    rows = [[0, 1], [1, 0]]
    _, piv, perm, sign = fraction_free_eliminate([list(r) for r in rows])
    assert piv == [0, 1] and sign == -1 and sorted(perm) == [0, 1]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_equals_transpose_rank(rows):
    m = Matrix(rows)
    assert rank(m) == rank(m.transpose()) == naive_rank(rows, len(rows[0]))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_idempotent(rows):
    e = rref(Matrix(rows)).echelon
    assert rref(e).echelon == e


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_is_annihilated(rows):
    m = Matrix(rows)
    ns = nullspace(m)
    assert len(ns) == m.ncols - rank(m)
    for v in ns:
        for r in rows:
            assert sum(Fraction(a) * b for a, b in zip(r, v)) == 0


@settings(max_examples=40, deadline=None)
@given(matrices(), st.integers(0, 10**6))
def test_modular_rank_agrees_with_rational(rows, seed):
    m = Matrix(rows)
    r, p, _ = checked_modular_rank(m, random.Random(seed))
    assert p >= 2**20
    assert r == rank(m)


@pytest.mark.parametrize("use_jit", [True, False])
def test_kernel_paths_agree(use_jit):
    rng = np.random.default_rng(0)
    p = 1000003
    for _ in range(10):
        a = rng.integers(0, p, size=(6, 5), dtype=np.int64)
        a[3] = (2 * a[1]) % p
        r1, e1, piv1 = kernels.rref_modp(a.copy(), p, use_jit=use_jit)
        r2, e2, piv2 = kernels.rref_modp(a.copy(), p, use_jit=not use_jit)
        assert r1 == r2 and list(piv1) == list(piv2)
        assert np.array_equal(e1, e2)


def test_kernel_rejects_large_modulus():
    with pytest.raises(ValueError):
        kernels.rref_modp(np.zeros((1, 1), dtype=np.int64), 2**31 + 11)


def test_qq_random_element_bounded():
    rng = random.Random(1)
    for _ in range(50):
        v = QQ.random_element(rng)
        assert abs(v.numerator) <= 1000 and v.denominator <= 1000
