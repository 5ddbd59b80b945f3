"""Dense linear algebra over GF(2).

Rows are bit-packed into Python integers (bit ``j`` of a row is column ``j``),
so row operations are single XORs regardless of width. All matrices are
immutable; every operation returns a new value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class ShapeMismatchError(ValueError):
    """Raised when operand shapes are incompatible."""


@dataclass(frozen=True)
class BitVector:
    """A binary vector of fixed length."""

    length: int
    bits: int = 0

    def __post_init__(self):
        """Reject negative lengths and bits beyond the length."""
        if self.length < 0:
            raise ValueError(f"negative vector length {self.length}")
        if self.bits >> self.length:
            raise ValueError(f"bits set beyond length {self.length}")

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> "BitVector":
        """Build a vector with ones at the given positions."""
        bits = 0
        for j in support:
            bits |= 1 << j
        return cls(length, bits)

    @classmethod
    def from_array(cls, values: Sequence[int] | np.ndarray) -> "BitVector":
        """Build a vector from a 0/1 sequence."""
        arr = np.asarray(values, dtype=np.uint8) & 1
        return cls.from_support(len(arr), np.flatnonzero(arr).tolist())

    @property
    def weight(self) -> int:
        """Number of ones."""
        return self.bits.bit_count()

    def bit(self, j: int) -> int:
        """Return entry j."""
        return (self.bits >> j) & 1

    def support(self) -> list[int]:
        """Return the positions of the ones, ascending."""
        return [j for j in range(self.length) if (self.bits >> j) & 1]

    def to_array(self) -> np.ndarray:
        """Return the vector as a uint8 array."""
        return np.array([(self.bits >> j) & 1 for j in range(self.length)], dtype=np.uint8)

    def __xor__(self, other: "BitVector") -> "BitVector":
        """Add two vectors over GF(2)."""
        if self.length != other.length:
            raise ShapeMismatchError(f"cannot add vectors of length {self.length} and {other.length}")
        return BitVector(self.length, self.bits ^ other.bits)

    def dot(self, other: "BitVector") -> int:
        """Return the GF(2) inner product."""
        if self.length != other.length:
            raise ShapeMismatchError(f"cannot pair vectors of length {self.length} and {other.length}")
        return (self.bits & other.bits).bit_count() & 1


@dataclass(frozen=True)
class SymplecticVector:
    """The (a|b) image of the Pauli operator X(a)Z(b) on n qubits."""

    x_part: BitVector
    z_part: BitVector

    def __post_init__(self):
        """Reject parts of different lengths."""
        if self.x_part.length != self.z_part.length:
            raise ShapeMismatchError("x and z parts must have equal length")

    @property
    def n(self) -> int:
        """Number of qubits."""
        return self.x_part.length


@dataclass(frozen=True)
class BitMatrix:
    """A dense matrix over GF(2), one packed integer per row."""

    n_rows: int
    n_cols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        """Check the row count and that every row fits the width."""
        if len(self.rows) != self.n_rows:
            raise ShapeMismatchError(f"expected {self.n_rows} rows, got {len(self.rows)}")
        limit = 1 << self.n_cols
        for row in self.rows:
            if row < 0 or row >= limit:
                raise ValueError(f"row {row:#x} does not fit in {self.n_cols} columns")

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "BitMatrix":
        """Return the all-zero matrix."""
        return cls(n_rows, n_cols, (0,) * n_rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        """Return the n x n identity."""
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, n_cols: int, rows: Iterable[int]) -> "BitMatrix":
        """Build a matrix from packed integer rows."""
        packed = tuple(rows)
        return cls(len(packed), n_cols, packed)

    @classmethod
    def from_supports(cls, n_cols: int, supports: Iterable[Iterable[int]]) -> "BitMatrix":
        """Build a matrix whose i-th row has ones at ``supports[i]``."""
        return cls.from_rows(n_cols, (BitVector.from_support(n_cols, s).bits for s in supports))

    @classmethod
    def from_dense(cls, array: Sequence[Sequence[int]] | np.ndarray) -> "BitMatrix":
        """Build a matrix from a 0/1 array."""
        arr = np.atleast_2d(np.asarray(array, dtype=np.uint8) & 1)
        n_rows, n_cols = arr.shape
        rows = tuple(BitVector.from_array(r).bits for r in arr)
        return cls(n_rows, n_cols, rows)

    @property
    def shape(self) -> tuple[int, int]:
        """Return (rows, columns)."""
        return self.n_rows, self.n_cols

    def bit(self, i: int, j: int) -> int:
        """Return entry (i, j)."""
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> BitVector:
        """Return row i as a vector."""
        return BitVector(self.n_cols, self.rows[i])

    def row_support(self, i: int) -> list[int]:
        """Return the columns where row i is one."""
        return self.row(i).support()

    def column(self, j: int) -> BitVector:
        """Return column j as a vector of length n_rows."""
        return BitVector.from_support(self.n_rows, (i for i, r in enumerate(self.rows) if (r >> j) & 1))

    def row_weights(self) -> list[int]:
        """Return the number of ones in each row."""
        return [r.bit_count() for r in self.rows]

    def col_weights(self) -> list[int]:
        """Return the number of ones in each column."""
        return [sum((r >> j) & 1 for r in self.rows) for j in range(self.n_cols)]

    def ones(self) -> int:
        """Return the total number of ones."""
        return sum(self.row_weights())

    def to_numpy(self) -> np.ndarray:
        """Return a dense uint8 copy."""
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in range(self.n_cols):
                if (r >> j) & 1:
                    out[i, j] = 1
        return out

    def transpose(self) -> "BitMatrix":
        """Return the transpose."""
        cols = [0] * self.n_cols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(self.n_cols, self.n_rows, tuple(cols))

    def select_columns(self, indices: Sequence[int]) -> "BitMatrix":
        """Keep the given columns, in the given order."""
        new_rows = []
        for r in self.rows:
            packed = 0
            for new_j, old_j in enumerate(indices):
                if (r >> old_j) & 1:
                    packed |= 1 << new_j
            new_rows.append(packed)
        return BitMatrix(self.n_rows, len(indices), tuple(new_rows))

    def append_column(self, column: BitVector) -> "BitMatrix":
        """Return the matrix with one extra column on the right."""
        if column.length != self.n_rows:
            raise ShapeMismatchError(f"column of length {column.length} for {self.n_rows} rows")
        top = 1 << self.n_cols
        rows = tuple(r | top if column.bit(i) else r for i, r in enumerate(self.rows))
        return BitMatrix(self.n_rows, self.n_cols + 1, rows)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        """Place other to the right."""
        if self.n_rows != other.n_rows:
            raise ShapeMismatchError(f"cannot hstack {self.shape} and {other.shape}")
        rows = tuple(a | (b << self.n_cols) for a, b in zip(self.rows, other.rows))
        return BitMatrix(self.n_rows, self.n_cols + other.n_cols, rows)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        """Place other below."""
        if self.n_cols != other.n_cols:
            raise ShapeMismatchError(f"cannot vstack {self.shape} and {other.shape}")
        return BitMatrix(self.n_rows + other.n_rows, self.n_cols, self.rows + other.rows)

    def multiply_vector(self, v: BitVector) -> BitVector:
        """Return ``M · v^t`` as a vector of length ``n_rows``."""
        if v.length != self.n_cols:
            raise ShapeMismatchError(f"vector of length {v.length} against {self.n_cols} columns")
        bits = 0
        for i, r in enumerate(self.rows):
            if (r & v.bits).bit_count() & 1:
                bits |= 1 << i
        return BitVector(self.n_rows, bits)

    def is_zero(self) -> bool:
        """Return whether every entry is zero."""
        return not any(self.rows)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        """Add two matrices of the same shape."""
        if self.shape != other.shape:
            raise ShapeMismatchError(f"cannot add {self.shape} and {other.shape}")
        return BitMatrix(self.n_rows, self.n_cols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))


##########################
# Elimination
##########################

def _eliminate(rows: Sequence[int], n_cols: int) -> tuple[list[int], list[int]]:
    """Reduce rows to RREF, pivoting on the first nonzero row in each column."""
    work = list(rows)
    pivots: list[int] = []
    pivot_row = 0
    for col in range(n_cols):
        mask = 1 << col
        found = next((i for i in range(pivot_row, len(work)) if work[i] & mask), None)
        if found is None:
            continue
        work[pivot_row], work[found] = work[found], work[pivot_row]
        pivot = work[pivot_row]
        for i in range(len(work)):
            if i != pivot_row and work[i] & mask:
                work[i] ^= pivot
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(work):
            break
    return work, pivots


def rref(M: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Return the reduced row echelon form of M and its pivot columns."""
    work, pivots = _eliminate(M.rows, M.n_cols)
    return BitMatrix(M.n_rows, M.n_cols, tuple(work)), pivots


def rank(M: BitMatrix) -> int:
    """Return the dimension of the row space of M over GF(2)."""
    return len(RowReducer(M).pivots)


def nullspace_basis(M: BitMatrix) -> BitMatrix:
    """Return a basis of ``{v : M v^t = 0}``, one vector per free column."""
    reduced, pivots = rref(M)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.n_cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for r, p in enumerate(pivots):
            if (reduced.rows[r] >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return BitMatrix.from_rows(M.n_cols, basis)


def mul_transpose(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    """Return ``A · B^t`` over GF(2)."""
    if A.n_cols != B.n_cols:
        raise ShapeMismatchError(f"A has {A.n_cols} columns but B has {B.n_cols}")
    rows = []
    for a in A.rows:
        packed = 0
        for j, b in enumerate(B.rows):
            if (a & b).bit_count() & 1:
                packed |= 1 << j
        rows.append(packed)
    return BitMatrix(A.n_rows, B.n_rows, tuple(rows))


def twisted_inner_product(u: SymplecticVector, v: SymplecticVector) -> int:
    """Return ``a·b' + b·a' mod 2`` for ``u = (a|b)`` and ``v = (a'|b')``."""
    if u.n != v.n:
        raise ShapeMismatchError(f"cannot pair {u.n}-qubit and {v.n}-qubit operators")
    return u.x_part.dot(v.z_part) ^ u.z_part.dot(v.x_part)


class RowReducer:
    """Echelon basis of a row space, kept for repeated membership queries."""

    def __init__(self, M: BitMatrix):
        """Eliminate M once and keep its echelon basis."""
        self.n_cols = M.n_cols
        work, pivots = _eliminate(M.rows, M.n_cols)
        self.pivots = pivots
        self.basis = work[: len(pivots)]

    def reduce(self, bits: int) -> int:
        """Return the residue of ``bits`` after clearing every pivot column."""
        for row, p in zip(self.basis, self.pivots):
            if (bits >> p) & 1:
                bits ^= row
        return bits

    def contains(self, bits: int) -> bool:
        """Return whether the packed vector lies in the row space."""
        return self.reduce(bits) == 0


def row_space_contains(M: BitMatrix, v: BitVector) -> bool:
    """Return whether v is a GF(2) combination of rows of M."""
    if v.length != M.n_cols:
        raise ShapeMismatchError(f"vector of length {v.length} against {M.n_cols} columns")
    return RowReducer(M).contains(v.bits)


def is_self_orthogonal(M: BitMatrix) -> bool:
    """Return whether ``M M^t = 0``."""
    return mul_transpose(M, M).is_zero()


def block_diagonal(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    """Return ``[[A, 0], [0, B]]``."""
    top = A.hstack(BitMatrix.zeros(A.n_rows, B.n_cols))
    bottom = BitMatrix.zeros(B.n_rows, A.n_cols).hstack(B)
    return top.vstack(bottom)
