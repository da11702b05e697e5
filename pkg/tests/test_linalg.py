from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from lamplighter.linalg import (
    EchelonBasis, QMatrix, QVector, format_rat, in_image, kernel_basis, mat_rank, solve,
)
from lamplighter.strata import d_stratum, enumerate_stratum


small_rats = st.builds(
    Fraction, st.integers(-6, 6), st.sampled_from([1, 1, 1, 2, 3])
)


@st.composite
def matrices(draw, max_side=7):
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(0, max_side))
    # sparse-ish: many zeros so rank deficiency is common
    cells = draw(st.lists(st.one_of(st.just(Fraction(0)), small_rats), min_size=r * c, max_size=r * c))
    return QMatrix(r, c, {(i, j): cells[i * c + j] for i in range(r) for j in range(c)})


def sympy_rank(M: QMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return sympy.Matrix(M.rows, M.cols, lambda i, j: sympy.Rational(M[i, j].numerator, M[i, j].denominator)).rank()


def test_vector_drops_zeros_and_merges():
    v = QVector([(0, 1), (2, 0), (0, Fraction(-1, 2))])
    assert v.entries == {0: Fraction(1, 2)}
    assert not (v - v)


def test_matrix_rejects_out_of_range():
    with pytest.raises(IndexError):
        QMatrix(2, 2, {(2, 0): 1})


def test_format_rat():
    assert format_rat(Fraction(-3, 6)) == "-1/2"
    assert format_rat(Fraction(4)) == "4"


def test_rank_identity():
    assert mat_rank(QMatrix.identity(3)) == 3


def test_rank_proportional_rows():
    assert mat_rank(QMatrix.from_dense([[1, 2], [2, 4]])) == 1


def test_rank_of_lamplighter_differential():
    # V(2,3) = {(0,3),(1,2)} -> V(2,4) = {(0,4),(1,3)}:
    # (0,3) -> (0,4) + (1,3),  (1,2) -> (1,3) + (2,2) = (1,3)
    assert mat_rank(d_stratum(2, 3)) == 2


def test_kernel_identity_is_empty():
    assert kernel_basis(QMatrix.identity(4)) == []


def test_kernel_of_zero_matrix():
    K = kernel_basis(QMatrix.zero(2, 3))
    assert len(K) == 3
    assert mat_rank(QMatrix.from_columns(3, K)) == 3


def test_kernel_of_row_vector():
    (v,) = kernel_basis(QMatrix.from_dense([[1, 1]]))
    assert v == QVector({0: -1, 1: 1})


def test_kernel_is_reduced_echelon():
    M = QMatrix.from_dense([[1, 2, 0, 3], [0, 0, 1, 4]])
    assert kernel_basis(M) == [QVector({1: 1, 0: -2}), QVector({3: 1, 0: -3, 2: -4})]


def test_in_image_identity_returns_witness():
    v = QVector({0: Fraction(2, 3), 2: -1})
    ok, x = in_image(QMatrix.identity(3), v, witness=True)
    assert ok and x == v


def test_in_image_zero_matrix():
    assert not in_image(QMatrix.zero(2, 2), QVector.unit(1))


def test_x0_x5_not_a_boundary():
    target = enumerate_stratum(2, 5).vector((0, 5))
    assert not in_image(d_stratum(2, 4), target)


def test_echelon_basis_tracks_span():
    B = EchelonBasis([QVector({0: 1, 1: 1})])
    assert not B.add(QVector({0: 2, 1: 2}))
    assert B.add(QVector({1: 1}))
    assert B.contains(QVector({0: 5}))
    assert len(B) == 2


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_independent_oracle(M):
    assert mat_rank(M) == sympy_rank(M)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(M):
    K = kernel_basis(M)
    assert mat_rank(M) + len(K) == M.cols
    for v in K:
        assert not (M @ v)
    if K:
        assert mat_rank(QMatrix.from_columns(M.cols, K)) == len(K)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rank_of_transpose(M):
    assert mat_rank(M) == mat_rank(M.transpose())


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_image_membership_of_products(M, data):
    x = QVector.from_dense(data.draw(st.lists(small_rats, min_size=M.cols, max_size=M.cols)))
    ok, w = in_image(M, M @ x, witness=True)
    assert ok
    assert M @ w == M @ x


@settings(max_examples=100, deadline=None)
@given(matrices(max_side=5), st.data())
def test_solve_agrees_with_rank_test(M, data):
    v = QVector.from_dense(data.draw(st.lists(small_rats, min_size=M.rows, max_size=M.rows)))
    augmented = M.hstack(QMatrix.from_columns(M.rows, [v]))
    consistent = mat_rank(augmented) == mat_rank(M)
    x = solve(M, v)
    assert (x is not None) == consistent
    if x is not None:
        assert M @ x == v
