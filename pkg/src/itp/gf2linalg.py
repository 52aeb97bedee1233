"""Dense matrices over GF(2) with bit-packed rows.

Each row is stored as a Python ``int`` whose bit ``j`` holds the entry in
column ``j``.  Python integers are arbitrary-width word arrays, so XOR of two
rows is a single word-level operation regardless of the column count.

Besides the scalar rank kernel this module offers two batched kernels used by
the exponential enumerations elsewhere in the package: ranks of every column
subset of a matrix, and ranks of every principal submatrix of a square
matrix.  Both run vectorised over ``numpy.uint64`` lanes and are split into
chunks so callers can spread them across workers.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "BitMatrix",
    "rank",
    "rank_of_rows",
    "select_columns",
    "principal_submatrix",
    "hconcat",
    "delete_row_col",
    "column_subset_ranks",
    "principal_subset_ranks",
    "popcounts",
]

# Largest number of rows/columns handled by the uint64 batch kernels.
_LANE_BITS = 64
# Low mask bits handled inside one vectorised chunk.
DEFAULT_CHUNK_BITS = 16


class BitMatrix:
    """Immutable ``rows x cols`` matrix over GF(2).

    Args:
        rows: packed rows, bit ``j`` of ``rows[i]`` is entry ``(i, j)``.
        ncols: number of columns.
    """

    __slots__ = ("_rows", "_ncols", "_hash")

    def __init__(self, rows: Iterable[int], ncols: int):
        if ncols < 0:
            raise ValueError("column count must be non-negative")
        rows = tuple(int(r) for r in rows)
        limit = 1 << ncols
        for r in rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row word {r:#x} has bits outside {ncols} columns")
        self._rows = rows
        self._ncols = ncols
        self._hash = None

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> BitMatrix:
        """Build from a nested list of 0/1 entries.

        ``ncols`` is only needed for matrices with no rows.
        """
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        rows = []
        for line in entries:
            if len(line) != ncols:
                raise ValueError("ragged row in matrix literal")
            word = 0
            for j, bit in enumerate(line):
                if bit not in (0, 1):
                    raise ValueError(f"entry {bit!r} is not a GF(2) value")
                if bit:
                    word |= 1 << j
            rows.append(word)
        return cls(rows, ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls([1 << i for i in range(n)], n)

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), self._ncols

    @property
    def row_words(self) -> tuple[int, ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= j < self._ncols:
            raise IndexError(f"column {j} out of range")
        return (self._rows[i] >> j) & 1

    def column_word(self, j: int) -> int:
        """Column ``j`` packed with bit ``i`` holding row ``i``."""
        if not 0 <= j < self._ncols:
            raise IndexError(f"column {j} out of range")
        word = 0
        for i, r in enumerate(self._rows):
            if (r >> j) & 1:
                word |= 1 << i
        return word

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self._ncols)] for r in self._rows]

    def transpose(self) -> BitMatrix:
        return BitMatrix([self.column_word(j) for j in range(self._ncols)], len(self._rows))

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return BitMatrix([a ^ b for a, b in zip(self._rows, other._rows)], self._ncols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self._ncols == other._ncols and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._ncols, self._rows))
        return self._hash

    def __repr__(self) -> str:
        return f"BitMatrix({self.to_lists()!r}, ncols={self._ncols})"


def rank_of_rows(rows: Iterable[int]) -> int:
    """GF(2) rank of a collection of packed row words."""
    # pivots maps a column (lowest set bit) to the reduced row owning it
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            p = pivots.get(low)
            if p is None:
                pivots[low] = r
                break
            r ^= p
    return len(pivots)


def rank(m: BitMatrix) -> int:
    """Rank over GF(2).  The input is never modified."""
    return rank_of_rows(m.row_words)


def select_columns(m: BitMatrix, idx: Sequence[int]) -> BitMatrix:
    """Submatrix made of the columns ``idx``, in that order."""
    for j in idx:
        if not 0 <= j < m.ncols:
            raise IndexError(f"column {j} out of range for {m.ncols} columns")
    rows = []
    for r in m.row_words:
        word = 0
        for k, j in enumerate(idx):
            if (r >> j) & 1:
                word |= 1 << k
        rows.append(word)
    return BitMatrix(rows, len(idx))


def principal_submatrix(m: BitMatrix, s: Iterable[int]) -> BitMatrix:
    """Rows and columns ``s`` (ascending) of a square matrix."""
    if m.nrows != m.ncols:
        raise ValueError(f"principal submatrix of non-square {m.shape} matrix")
    idx = sorted(set(s))
    for i in idx:
        if not 0 <= i < m.nrows:
            raise IndexError(f"index {i} out of range for order {m.nrows}")
    cols = select_columns(m, idx)
    return BitMatrix([cols.row_words[i] for i in idx], len(idx))


def hconcat(left: BitMatrix, right: BitMatrix) -> BitMatrix:
    if left.nrows != right.nrows:
        raise ValueError(f"row counts differ: {left.nrows} vs {right.nrows}")
    shift = left.ncols
    return BitMatrix(
        [a | (b << shift) for a, b in zip(left.row_words, right.row_words)],
        left.ncols + right.ncols,
    )


def _drop_bit(word: int, j: int) -> int:
    low = word & ((1 << j) - 1)
    return low | ((word >> (j + 1)) << j)


def delete_row_col(m: BitMatrix, row: int, col: int) -> BitMatrix:
    if not 0 <= row < m.nrows:
        raise IndexError(f"row {row} out of range")
    if not 0 <= col < m.ncols:
        raise IndexError(f"column {col} out of range")
    rows = [_drop_bit(r, col) for i, r in enumerate(m.row_words) if i != row]
    return BitMatrix(rows, m.ncols - 1)


def delete_column(m: BitMatrix, col: int) -> BitMatrix:
    if not 0 <= col < m.ncols:
        raise IndexError(f"column {col} out of range")
    return BitMatrix([_drop_bit(r, col) for r in m.row_words], m.ncols - 1)


def reduced_row_echelon(m: BitMatrix) -> tuple[int, ...]:
    """Nonzero rows of the reduced row echelon form.

    Two matrices with the same number of columns have the same row space
    exactly when these tuples are equal.
    """
    pivots: dict[int, int] = {}
    for r in m.row_words:
        for low, p in pivots.items():
            if r & low:
                r ^= p
        if r:
            low = r & -r
            for key, p in pivots.items():
                if p & low:
                    pivots[key] = p ^ r
            pivots[low] = r
    return tuple(pivots[k] for k in sorted(pivots))


# ---------------------------------------------------------------------------
# Batched kernels


def popcounts(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values.astype(np.uint64)).astype(np.int64)


def _lane_dtype(nbits: int):
    return np.uint32 if nbits <= 32 else np.uint64


def _insert(basis: np.ndarray, vec: np.ndarray, bits: Iterable[int]) -> None:
    """Insert ``vec[k]`` into the XOR basis ``basis[:, k]`` for every lane ``k``.

    ``basis[b]`` holds, per lane, the basis vector whose highest set bit is
    ``b`` (or zero).  ``bits`` lists the bit positions that can be set, in
    decreasing order.  Everything is branch-free and works in place, so a
    step is a handful of contiguous ufunc calls.  ``vec`` is consumed.
    """
    dt = vec.dtype.type
    one, zero = dt(1), dt(0)
    top = dt(vec.dtype.itemsize * 8 - 1)
    has = np.empty_like(vec)
    tmp = np.empty_like(vec)
    for b in bits:
        slot = basis[b]
        # has = all ones where bit b of vec is set
        np.right_shift(vec, dt(b), out=has)
        has &= one
        np.subtract(zero, has, out=has)
        np.bitwise_and(slot, has, out=tmp)
        vec ^= tmp
        # narrow has to lanes whose slot is empty: (slot | -slot) >> top is 1 iff slot != 0
        np.negative(slot, out=tmp)
        tmp |= slot
        tmp >>= top
        tmp -= one
        has &= tmp
        np.bitwise_and(vec, has, out=tmp)
        slot |= tmp
        vec ^= tmp


def _basis_rank(basis: np.ndarray) -> np.ndarray:
    return np.count_nonzero(basis, axis=0).astype(np.int8)


def _chunk_ranges(total_bits: int, chunk_bits: int) -> list[tuple[int, int]]:
    chunk_bits = min(chunk_bits, total_bits)
    size = 1 << chunk_bits
    return [(start, start + size) for start in range(0, 1 << total_bits, size)]


def column_subset_ranks(
    m: BitMatrix, chunk_bits: int = DEFAULT_CHUNK_BITS
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(start, ranks)`` covering the rank of every column subset.

    ``ranks[k]`` is the rank of the columns whose indices are the set bits of
    ``start + k``.  Chunks are yielded in increasing ``start`` order.
    """
    for start, stop in _chunk_ranges(m.ncols, chunk_bits):
        yield _column_chunk(m, start, stop)


def column_subset_chunks(m: BitMatrix, chunk_bits: int = DEFAULT_CHUNK_BITS) -> list[tuple[int, int]]:
    return _chunk_ranges(m.ncols, chunk_bits)


def _column_chunk(m: BitMatrix, start: int, stop: int) -> tuple[int, np.ndarray]:
    """Ranks for masks ``start..stop-1`` where the chunk spans whole low bits."""
    if m.nrows > _LANE_BITS:
        ranks = np.array(
            [rank(select_columns(m, [j for j in range(m.ncols) if (mask >> j) & 1])) for mask in range(start, stop)],
            dtype=np.int8,
        )
        return start, ranks
    low_bits = (stop - start).bit_length() - 1
    cols = [m.column_word(j) for j in range(m.ncols)]
    nbits = max(m.nrows, 1)
    dt = _lane_dtype(nbits)
    bits = range(nbits - 1, -1, -1)
    # seed basis from the high (fixed) columns of this chunk
    basis = np.zeros((nbits, 1), dtype=dt)
    for j in range(low_bits, m.ncols):
        if (start >> j) & 1:
            _insert(basis, np.array([cols[j]], dtype=dt), bits)
    for j in range(low_bits):
        ext = basis.copy()
        _insert(ext, np.full(ext.shape[1], cols[j], dtype=dt), bits)
        basis = np.concatenate([basis, ext], axis=1)
    return start, _basis_rank(basis)


def principal_subset_ranks(
    m: BitMatrix, start: int, stop: int
) -> np.ndarray:
    """Ranks of ``m[S]`` for every vertex mask ``S`` in ``range(start, stop)``."""
    if m.nrows != m.ncols:
        raise ValueError("principal ranks need a square matrix")
    n = m.nrows
    masks = np.arange(start, stop, dtype=np.uint64)
    if n == 0:
        return np.zeros(len(masks), dtype=np.int8)
    if n > _LANE_BITS:
        return np.array(
            [rank(principal_submatrix(m, [i for i in range(n) if (s >> i) & 1])) for s in range(start, stop)],
            dtype=np.int8,
        )
    dt = _lane_dtype(n)
    masks = masks.astype(dt)
    # inside an aligned chunk the high vertex bits are fixed: rows and
    # columns of absent high vertices are identically zero, so skip them
    span = stop - start
    aligned = span & (span - 1) == 0 and start % span == 0
    low = span.bit_length() - 1 if aligned else n
    active = [i for i in range(n) if i < low or (start >> i) & 1]
    bits = active[::-1]
    one, zero = dt(1), dt(0)
    basis = np.zeros((n, len(masks)), dtype=dt)
    for i in active:
        vec = masks & dt(m.row_words[i])
        if i < low:
            vec &= zero - ((masks >> dt(i)) & one)
        _insert(basis, vec, bits)
    return _basis_rank(basis)
