"""Binary matroids represented by GF(2) matrices with labeled columns."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from typing import NamedTuple

from . import gf2linalg as gf2
from .gf2linalg import BitMatrix
from .graphs import LoopedGraph, adjacency_matrix

__all__ = [
    "GroundLabel",
    "BinaryMatroid",
    "PHI",
    "CHI",
    "PSI",
    "build_IA",
    "build_IAS",
    "rank_of",
    "is_loop",
    "is_coloop",
    "delete",
    "contract",
    "are_parallel",
]

PHI, CHI, PSI = "phi", "chi", "psi"
KINDS = (PHI, CHI, PSI)


class GroundLabel(NamedTuple):
    vertex: str
    kind: str

    def __str__(self) -> str:
        return f"{self.vertex}_{self.kind}"


class BinaryMatroid:
    """Matroid of the column vectors of ``matrix``, one label per column."""

    __slots__ = ("matrix", "labels", "_pos")

    def __init__(self, matrix: BitMatrix, labels: Sequence[GroundLabel]):
        labels = tuple(labels)
        if len(labels) != matrix.ncols:
            raise ValueError(f"{len(labels)} labels for {matrix.ncols} columns")
        pos = {lab: i for i, lab in enumerate(labels)}
        if len(pos) != len(labels):
            raise ValueError("ground labels must be distinct")
        self.matrix = matrix
        self.labels = labels
        self._pos = pos

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self._pos

    def column(self, label: GroundLabel) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise KeyError(f"{label} is not in the ground set") from None

    def column_word(self, label: GroundLabel) -> int:
        return self.matrix.column_word(self.column(label))

    def rank(self) -> int:
        return gf2.rank(self.matrix)

    def reorder(self, order: Sequence[GroundLabel]) -> BinaryMatroid:
        """Same matroid with columns permuted into ``order``."""
        if sorted(order) != sorted(self.labels):
            raise ValueError("order must be a permutation of the ground set")
        idx = [self.column(lab) for lab in order]
        return BinaryMatroid(gf2.select_columns(self.matrix, idx), order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMatroid):
            return NotImplemented
        return self.labels == other.labels and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.labels, self.matrix))

    def __repr__(self) -> str:
        names = ", ".join(str(lab) for lab in self.labels)
        return f"BinaryMatroid([{names}], {self.matrix.nrows} rows)"


def build_IA(g: LoopedGraph) -> BinaryMatroid:
    """M(IA(G)) with columns v_phi for every v, then v_chi for every v."""
    n = len(g)
    matrix = gf2.hconcat(BitMatrix.identity(n), adjacency_matrix(g))
    labels = [GroundLabel(v, PHI) for v in g.vertices] + [GroundLabel(v, CHI) for v in g.vertices]
    return BinaryMatroid(matrix, labels)


def build_IAS(g: LoopedGraph) -> BinaryMatroid:
    """M(IAS(G)): columns of I, then A(G), then A(G) + I."""
    n = len(g)
    ident = BitMatrix.identity(n)
    adj = adjacency_matrix(g)
    matrix = gf2.hconcat(gf2.hconcat(ident, adj), adj + ident)
    labels = [GroundLabel(v, k) for k in KINDS for v in g.vertices]
    return BinaryMatroid(matrix, labels)


def rank_of(m: BinaryMatroid, t: Iterable[GroundLabel]) -> int:
    idx = sorted({m.column(lab) for lab in t})
    return gf2.rank(gf2.select_columns(m.matrix, idx))


def is_loop(m: BinaryMatroid, w: GroundLabel) -> bool:
    return m.column_word(w) == 0


def is_coloop(m: BinaryMatroid, w: GroundLabel) -> bool:
    j = m.column(w)
    return gf2.rank(gf2.delete_column(m.matrix, j)) < gf2.rank(m.matrix)


def delete(m: BinaryMatroid, w: GroundLabel) -> BinaryMatroid:
    j = m.column(w)
    return BinaryMatroid(gf2.delete_column(m.matrix, j), m.labels[:j] + m.labels[j + 1 :])


def contract(m: BinaryMatroid, w: GroundLabel) -> BinaryMatroid:
    """M/w by row reduction on the column of ``w``.

    The lowest row with a 1 in that column is added to every other such row,
    then dropped together with the column.  A zero column is simply deleted.
    """
    j = m.column(w)
    rows = list(m.matrix.row_words)
    bit = 1 << j
    pivot = next((i for i, r in enumerate(rows) if r & bit), None)
    if pivot is None:
        return delete(m, w)
    prow = rows[pivot]
    rows = [r ^ prow if r & bit else r for i, r in enumerate(rows) if i != pivot]
    reduced = BitMatrix(rows, m.matrix.ncols)
    return BinaryMatroid(gf2.delete_column(reduced, j), m.labels[:j] + m.labels[j + 1 :])


def contract_all(m: BinaryMatroid, ws: Iterable[GroundLabel]) -> BinaryMatroid:
    for w in ws:
        m = contract(m, w)
    return m


def delete_all(m: BinaryMatroid, ws: Iterable[GroundLabel]) -> BinaryMatroid:
    for w in ws:
        m = delete(m, w)
    return m


def are_parallel(m: BinaryMatroid, a: GroundLabel, b: GroundLabel) -> bool:
    """True when ``a`` and ``b`` have equal nonzero columns."""
    ca, cb = m.column_word(a), m.column_word(b)
    return ca != 0 and ca == cb


def rank_table(m: BinaryMatroid) -> dict[frozenset[GroundLabel], int]:
    """Rank of every subset of the ground set (small matroids only)."""
    out = {}
    labels = m.labels
    for start, ranks in gf2.column_subset_ranks(m.matrix):
        for k, r in enumerate(ranks.tolist()):
            mask = start + k
            out[frozenset(labels[j] for j in range(len(labels)) if (mask >> j) & 1)] = r
    return out
