import numpy as np
import pytest

from pg_qldpc.gf2 import (
    BitMatrix,
    BitVector,
    RowReducer,
    ShapeMismatchError,
    SymplecticVector,
    block_diagonal,
    is_self_orthogonal,
    mul_transpose,
    nullspace_basis,
    rank,
    row_space_contains,
    rref,
    twisted_inner_product,
)


def test_bitvector_basics():
    v = BitVector.from_support(6, [0, 3, 5])
    assert v.weight == 3
    assert v.support() == [0, 3, 5]
    assert v.to_array().tolist() == [1, 0, 0, 1, 0, 1]
    assert BitVector.from_array([1, 0, 0, 1, 0, 1]) == v
    assert v.dot(BitVector.from_support(6, [3])) == 1
    assert (v ^ v).weight == 0


def test_bitvector_rejects_overflow():
    with pytest.raises(ValueError):
        BitVector(2, 0b100)


def test_rref_and_pivots():
    M = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    reduced, pivots = rref(M)
    assert pivots == [0, 1]
    assert reduced.to_numpy().tolist() == [[1, 0, 1], [0, 1, 1]]


def test_rank_of_identity_and_zero():
    assert rank(BitMatrix.identity(9)) == 9
    assert rank(BitMatrix.zeros(4, 7)) == 0
    # Three rows summing to zero.
    assert rank(BitMatrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 2


def test_nullspace_basis_is_annihilated():
    rng = np.random.default_rng(3)
    M = BitMatrix.from_dense(rng.integers(0, 2, size=(6, 11)))
    basis = nullspace_basis(M)
    assert basis.n_rows == M.n_cols - rank(M)
    assert mul_transpose(M, basis).is_zero()
    assert rank(basis) == basis.n_rows


def test_nullspace_small_example():
    M = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert nullspace_basis(M).to_numpy().tolist() == [[1, 1, 1]]


def test_mul_transpose_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        mul_transpose(BitMatrix.zeros(2, 3), BitMatrix.zeros(2, 4))


def test_twisted_inner_product():
    x0 = SymplecticVector(BitVector.from_support(2, [0]), BitVector(2))
    z0 = SymplecticVector(BitVector(2), BitVector.from_support(2, [0]))
    z1 = SymplecticVector(BitVector(2), BitVector.from_support(2, [1]))
    assert twisted_inner_product(x0, z0) == 1
    assert twisted_inner_product(x0, z1) == 0
    assert twisted_inner_product(x0, x0) == 0


def test_row_space_membership():
    M = BitMatrix.from_dense([[1, 1, 0, 0], [0, 0, 1, 1]])
    assert row_space_contains(M, BitVector.from_array([1, 1, 1, 1]))
    assert not row_space_contains(M, BitVector.from_array([1, 0, 0, 0]))
    reducer = RowReducer(M)
    assert reducer.contains(0b1111)
    assert not reducer.contains(0b0001)


def test_transpose_select_and_stack():
    M = BitMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
    assert M.transpose().transpose() == M
    assert M.select_columns([2, 0]).to_numpy().tolist() == [[1, 1], [1, 0]]
    assert M.append_column(BitVector.from_array([1, 1])).col_weights() == [1, 1, 2, 2]
    D = block_diagonal(M, BitMatrix.identity(2))
    assert D.shape == (4, 5)
    assert D.to_numpy().tolist()[2:] == [[0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]


def test_self_orthogonality():
    assert is_self_orthogonal(BitMatrix.from_dense([[1, 1, 1, 1], [1, 1, 0, 0]]))
    assert not is_self_orthogonal(BitMatrix.from_dense([[1, 1, 1, 0]]))


def test_rref_single_pivot_example():
    reduced, pivots = rref(BitMatrix.from_dense([[1, 1], [1, 1]]))
    assert pivots == [0]
    assert reduced.to_numpy().tolist() == [[1, 1], [0, 0]]


@pytest.mark.parametrize("seed", range(8))
def test_rank_equals_transpose_rank(seed):
    rng = np.random.default_rng(seed)
    rows, cols = rng.integers(1, 15, size=2)
    M = BitMatrix.from_dense(rng.integers(0, 2, size=(rows, cols)))
    assert rank(M) == rank(M.transpose())


@pytest.mark.parametrize("seed", range(8))
def test_rref_is_idempotent(seed):
    M = BitMatrix.from_dense(np.random.default_rng(seed).integers(0, 2, size=(10, 20)))
    reduced, pivots = rref(M)
    again, again_pivots = rref(reduced)
    assert again == reduced
    assert again_pivots == pivots
    assert rank(reduced) == rank(M) == len(pivots)


def test_swapped_parts_are_orthogonal():
    u = SymplecticVector(BitVector.from_array([1, 0]), BitVector.from_array([0, 1]))
    v = SymplecticVector(BitVector.from_array([0, 1]), BitVector.from_array([1, 0]))
    assert twisted_inner_product(u, v) == 0
