import pytest
from hypothesis import given, settings, strategies as st

from heartforge.linalg import (
    FieldSpec,
    Mat,
    in_row_space,
    intersect_row_spaces,
    kernel_basis,
    quotient_coordinates,
    rank,
    rref,
    solve,
)


def test_fieldspec_rejects_composite():
    with pytest.raises(ValueError):
        FieldSpec(4)
    assert FieldSpec(2).p == 2
    assert FieldSpec(7).inv(3) == 5


def test_rref_identity_f2():
    R, rk, piv = rref(Mat.identity(2, 2))
    assert rk == 2 and piv == [0, 1]
    assert R == Mat.identity(2, 2)


def test_rref_zero_f3():
    R, rk, piv = rref(Mat.zero(3, 3, 3))
    assert rk == 0 and piv == []


def test_rref_rank_one_f2():
    R, rk, piv = rref(Mat(2, [[1, 1], [1, 1]]))
    assert rk == 1 and piv == [0]
    assert R.rows == [[1, 1]]


def test_kernel_identity_empty():
    K = kernel_basis(Mat.identity(2, 4))
    assert K.nrows == 0 and K.ncols == 4


def test_kernel_zero_matrix():
    K = kernel_basis(Mat.zero(3, 2, 3))
    assert K.nrows == 3


def test_kernel_single_relation():
    K = kernel_basis(Mat(2, [[1, 1]]))
    assert K.rows == [[1, 1]]


def test_solve_identity():
    assert solve(Mat.identity(3, 3), [1, 2, 0]) == [1, 2, 0]


def test_solve_inconsistent():
    assert solve(Mat.zero(3, 2, 2), [1, 0]) is None


def test_solve_particular_f3():
    assert solve(Mat(3, [[1, 1]]), [2]) == [2, 0]


def test_solve_shape_check():
    with pytest.raises(ValueError):
        solve(Mat.identity(2, 2), [1, 0, 0])


def _mat_strategy(p):
    return st.integers(1, 12).flatmap(
        lambda m: st.integers(1, 12).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(0, p - 1), min_size=n, max_size=n),
                min_size=m,
                max_size=m,
            ).map(lambda rows: Mat(p, rows))
        )
    )


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]).flatmap(lambda p: _mat_strategy(p)))
def test_rank_transpose_and_nullity(A):
    rk = rank(A)
    assert rk == rank(A.transpose())
    K = kernel_basis(A)
    assert K.nrows + rk == A.ncols
    for row in K.rows:
        assert all(v == 0 for v in A.apply(row))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]).flatmap(lambda p: _mat_strategy(p)))
def test_rref_idempotent(A):
    R, rk, piv = rref(A)
    R2, rk2, piv2 = rref(R)
    assert R2 == R and rk2 == rk and piv2 == piv


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]).flatmap(lambda p: _mat_strategy(p)))
def test_solve_consistency(A):
    b = [sum(row) % A.p for row in A.rows]  # b = A·(1,...,1)
    x = solve(A, b)
    assert x is not None
    assert A.apply(x) == [v % A.p for v in b]


def test_intersect_row_spaces():
    A = Mat(2, [[1, 0, 0], [0, 1, 0]])
    B = Mat(2, [[0, 1, 0], [0, 0, 1]])
    I = intersect_row_spaces(A, B)
    assert I.rows == [[0, 1, 0]]


def test_quotient_coordinates():
    sub = Mat(3, [[1, 0, 2]])
    comp, Q = quotient_coordinates(sub, 3)
    assert comp == [1, 2]
    # v = (1,0,2) is in the subspace: coordinates vanish
    assert Q.apply([1, 0, 2]) == [0, 0]
    assert Q.apply([0, 1, 0]) == [1, 0]
    assert in_row_space(sub, [2, 0, 4])
