import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from grayson_lab import intlinalg as il


def smith_divisors(M):
    S = smith_normal_form(Matrix(M), domain=ZZ)
    return [abs(int(S[i, i])) for i in range(min(S.shape))]


small = st.integers(-4, 4)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_det_and_inverse():
    A = [[2, 1], [1, 1]]
    assert il.det(A) == 1
    assert il.matmul(A, il.inverse(A)) == il.identity(2)
    assert il.det([[0, 1], [1, 0]]) == -1
    with pytest.raises(ValueError):
        il.inverse([[2, 0], [0, 1]])


def test_as_int_matrix_rejects_fractions():
    with pytest.raises(ValueError):
        il.as_int_matrix([[1.5]])


@given(matrices(3, 3))
def test_det_matches_sympy(A):
    assert il.det(A) == int(Matrix(A).det())


@given(matrices(3, 4))
def test_column_echelon_is_unimodular_transform(A):
    H, U = il.column_echelon(A, 4)
    assert il.matmul(A, U) == H
    assert abs(il.det(U)) == 1


@given(matrices(2, 4))
def test_kernel_is_saturated_basis(A):
    K = il.kernel(A, 4)
    r = il.rank(A)
    if not K:
        assert r == 4
        return
    assert len(K[0]) == 4 - r
    assert all(v == 0 for row in il.matmul(A, K) for v in row)
    assert il.content(il.maximal_minors(K)) == 1


@given(matrices(4, 2))
def test_saturation_has_trivial_elementary_divisors(B):
    if il.rank(B) < 2:
        return
    S = il.saturate_columns(B, 4)
    assert smith_divisors(S) == [1, 1]
    # the original columns lie in the saturation's rational span
    assert il.rank([r + s for r, s in zip(S, B)]) == 2


def test_hnf_is_canonical():
    B = [[2, 1], [0, 1], [1, 0]]
    U = [[1, 1], [0, 1]]
    assert il.hnf_columns(B) == il.hnf_columns(il.matmul(B, U))
