import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itp.gf2linalg import (
    BitMatrix,
    column_subset_ranks,
    delete_row_col,
    hconcat,
    principal_subset_ranks,
    principal_submatrix,
    rank,
    reduced_row_echelon,
    select_columns,
)

from conftest import naive_rank


@st.composite
def matrices(draw, max_rows=8, max_cols=8):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
    return BitMatrix(rows, c)


def test_rank_examples():
    assert rank(BitMatrix.identity(3)) == 3
    assert rank(BitMatrix.zeros(2, 2)) == 0
    assert rank(BitMatrix.from_lists([[1, 1], [1, 1]])) == 1


def test_empty_shapes_have_rank_zero():
    assert rank(BitMatrix.zeros(0, 4)) == 0
    assert rank(BitMatrix.zeros(3, 0)) == 0
    assert BitMatrix.zeros(0, 0).shape == (0, 0)


def test_bits_outside_columns_rejected():
    with pytest.raises(ValueError):
        BitMatrix([0b100], 2)


def test_rank_leaves_input_untouched():
    m = BitMatrix.from_lists([[1, 1, 0], [1, 1, 0], [0, 1, 1]])
    before = m.to_lists()
    rank(m)
    assert m.to_lists() == before


def test_select_columns_examples():
    i2 = BitMatrix.identity(2)
    assert select_columns(i2, [0, 1]) == i2
    empty = select_columns(i2, [])
    assert empty.shape == (2, 0)
    ia_looped = BitMatrix.from_lists([[1, 1]])
    assert select_columns(ia_looped, [1]) == BitMatrix.from_lists([[1]])
    with pytest.raises(IndexError):
        select_columns(i2, [2])


def test_select_columns_respects_order():
    m = BitMatrix.from_lists([[1, 0, 1], [0, 1, 1]])
    assert select_columns(m, [2, 0]).to_lists() == [[1, 1], [1, 0]]


def test_principal_submatrix_examples():
    k2 = BitMatrix.from_lists([[0, 1], [1, 0]])
    assert principal_submatrix(k2, set()).shape == (0, 0)
    assert principal_submatrix(k2, {0, 1}) == k2
    assert principal_submatrix(k2, {0}).to_lists() == [[0]]
    with pytest.raises(ValueError):
        principal_submatrix(BitMatrix.zeros(2, 3), {0})
    with pytest.raises(IndexError):
        principal_submatrix(k2, {5})


def test_hconcat_examples():
    i2 = BitMatrix.identity(2)
    m = hconcat(i2, BitMatrix.zeros(2, 2))
    assert m.to_lists() == [[1, 0, 0, 0], [0, 1, 0, 0]]
    assert hconcat(i2, BitMatrix.zeros(2, 0)) == i2
    assert hconcat(BitMatrix.identity(1), BitMatrix.from_lists([[1]])).to_lists() == [[1, 1]]
    with pytest.raises(ValueError):
        hconcat(i2, BitMatrix.identity(3))


def test_delete_row_col_examples():
    i2 = BitMatrix.identity(2)
    assert delete_row_col(i2, 0, 0) == BitMatrix.identity(1)
    assert delete_row_col(i2, 0, 1).to_lists() == [[0]]
    assert delete_row_col(BitMatrix.identity(1), 0, 0).shape == (0, 0)
    with pytest.raises(IndexError):
        delete_row_col(i2, 2, 0)


@given(matrices())
def test_rank_matches_naive_eliminator(m):
    assert rank(m) == naive_rank(m.to_lists())


@given(matrices())
def test_rank_bounds_and_full_selection(m):
    r = rank(m)
    assert 0 <= r <= min(m.shape)
    assert rank(select_columns(m, list(range(m.ncols)))) == r


@given(matrices(), st.randoms(use_true_random=False))
def test_rank_invariant_under_permutations(m, rnd):
    rows = list(m.row_words)
    rnd.shuffle(rows)
    cols = list(range(m.ncols))
    rnd.shuffle(cols)
    assert rank(select_columns(BitMatrix(rows, m.ncols), cols)) == rank(m)


@given(matrices())
def test_duplicated_columns_add_nothing(m):
    assert rank(hconcat(m, m)) == rank(m)


@given(matrices())
def test_rref_is_a_row_space_invariant(m):
    rows = list(m.row_words)
    # add one row to another: same row space, same canonical form
    if len(rows) >= 2:
        rows[0] ^= rows[1]
    assert reduced_row_echelon(BitMatrix(rows, m.ncols)) == reduced_row_echelon(m)
    assert len(reduced_row_echelon(m)) == rank(m)


@settings(max_examples=30)
@given(matrices(max_rows=6, max_cols=9))
def test_column_subset_ranks_match_scalar(m):
    seen = 0
    for start, ranks in column_subset_ranks(m, chunk_bits=3):
        for k, r in enumerate(ranks.tolist()):
            mask = start + k
            cols = [j for j in range(m.ncols) if (mask >> j) & 1]
            assert r == rank(select_columns(m, cols))
            seen += 1
    assert seen == 1 << m.ncols


def _random_symmetric(n, rnd):
    rows = [0] * n
    for i in range(n):
        for j in range(i, n):
            if rnd.random() < 0.5:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return BitMatrix(rows, n)


@pytest.mark.parametrize("n", [0, 1, 4, 7])
def test_principal_subset_ranks_match_scalar(n):
    rnd = random.Random(n)
    m = _random_symmetric(n, rnd)
    ranks = principal_subset_ranks(m, 0, 1 << n)
    for mask in range(1 << n):
        idx = [i for i in range(n) if (mask >> i) & 1]
        assert ranks[mask] == naive_rank(principal_submatrix(m, idx).to_lists())


def test_principal_subset_ranks_chunk_offsets():
    m = _random_symmetric(6, random.Random(9))
    whole = principal_subset_ranks(m, 0, 64)
    parts = [principal_subset_ranks(m, s, s + 16) for s in range(0, 64, 16)]
    assert [int(x) for p in parts for x in p] == whole.tolist()
