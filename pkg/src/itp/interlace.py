"""The two-variable interlace polynomial q(G), computed three ways.

``q_subset`` sums over vertex subsets, ``q_recursive`` applies the
local-complementation and pivot recursions, and ``q_from_section`` reads
q(G) off the transversal section of the identity-adjacency matroid.  The
three share no code beyond the GF(2) kernel and the polynomial type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import gf2linalg as gf2
from .graphs import LoopedGraph, adjacency_matrix, delete_vertex, delete_vertices, local_complement, pivot
from .matroid import CHI, PHI, GroundLabel, build_IA
from .polyring import ONE, Monomial, MultiPoly, divide_exact, eval_rational
from .tutte import (
    SUBSET_CAP,
    TRANSVERSAL_CAP,
    U,
    ParameterAssignment,
    TransversalScheme,
    _check_cap,
    _map_chunks,
    section_transversal,
)

__all__ = [
    "InterlaceResult",
    "METHODS",
    "interlace",
    "q_subset",
    "q_recursive",
    "q_from_section",
    "q_evaluate",
    "section_to_q",
    "q_assignment",
]

X, Y = "x", "y"
# stands for x - 1 inside section computations until the final division
XM1 = "t"
METHODS = ("subset", "recursive", "section")

_x = MultiPoly.var(X)
_y = MultiPoly.var(Y)


@lru_cache(maxsize=None)
def _xm1_pow(k: int) -> MultiPoly:
    return (_x - 1) ** k


@lru_cache(maxsize=None)
def _ym1_pow(k: int) -> MultiPoly:
    return (_y - 1) ** k


@lru_cache(maxsize=None)
def _summand(r: int, k: int) -> MultiPoly:
    return _xm1_pow(r) * _ym1_pow(k)


def _from_histogram(counts: dict[tuple[int, int], int]) -> MultiPoly:
    acc: dict[Monomial, int] = {}
    for (r, k), c in counts.items():
        for mono, coeff in _summand(r, k).items():
            acc[mono] = acc.get(mono, 0) + c * coeff
    return MultiPoly(acc)


def q_subset(g: LoopedGraph, cap: int = SUBSET_CAP, workers: int = 1, chunk_bits: int = gf2.DEFAULT_CHUNK_BITS) -> MultiPoly:
    """Sum of ``(x-1)^r(A[S]) (y-1)^(|S|-r(A[S]))`` over vertex subsets ``S``."""
    n = len(g)
    _check_cap(n, cap, "vertex set")
    adj = adjacency_matrix(g)
    width = n + 1

    def chunk(rng):
        start, stop = rng
        ranks = gf2.principal_subset_ranks(adj, start, stop).astype(np.int64)
        sizes = gf2.popcounts(np.arange(start, stop, dtype=np.uint64))
        return np.bincount(ranks * width + (sizes - ranks), minlength=width * width)

    counts = sum(_map_chunks(chunk, gf2._chunk_ranges(n, chunk_bits), workers))
    table = {(i // width, i % width): int(c) for i, c in enumerate(counts.tolist()) if c}
    return _from_histogram(table)


def q_recursive(g: LoopedGraph) -> MultiPoly:
    """q(G) from the two fundamental recursions.

    Isolated vertices are peeled off first (factor ``x`` if looped, ``y``
    if not).  Then a non-isolated looped ``v`` gives
    ``q(G-v) + (x-1) q(G^v - v)``; failing that the first edge ``vw`` joins
    two unlooped vertices and
    ``q(G-v) + q(G^vw - w) - q(G^vw - v - w) + (x-1)^2 q(G^vw - v - w)``.
    """
    isolated = [v for v in g.vertices if g.is_isolated(v)]
    looped = sum(1 for v in isolated if v in g.loops)
    base = MultiPoly.var(X, looped) * MultiPoly.var(Y, len(isolated) - looped)
    if isolated:
        g = delete_vertices(g, isolated)
    if not len(g):
        return base

    v = next((u for u in g.vertices if u in g.loops), None)
    if v is not None:
        rest = q_recursive(delete_vertex(g, v)) + (_x - 1) * q_recursive(delete_vertex(local_complement(g, v), v))
        return base * rest

    v, w = g.sorted_edges()[0]
    h = pivot(g, v, w)
    both = q_recursive(delete_vertices(h, (v, w)))
    rest = q_recursive(delete_vertex(g, v)) + q_recursive(delete_vertex(h, w)) + (_xm1_pow(2) - 1) * both
    return base * rest


def q_assignment(labels) -> ParameterAssignment:
    """a(v_phi)=1, a(v_chi)=t (t marks x-1), b=1 on every element."""
    t = MultiPoly.var(XM1)
    return ParameterAssignment({lab: (t if lab.kind == CHI else 1, 1) for lab in labels})


@lru_cache(maxsize=None)
def _cancelled(k: int, e: int) -> MultiPoly:
    return divide_exact(_xm1_pow(k), _xm1_pow(e))


def section_to_q(section: MultiPoly, extra: int = 0) -> MultiPoly:
    """Turn a section in ``t`` (for x-1) and ``u`` into a polynomial in x, y.

    Each term ``c t^k u^e`` becomes ``c (x-1)^(k+extra) (y-1)^e / (x-1)^e``,
    i.e. ``u`` is read as ``(y-1)/(x-1)``.  ``extra`` multiplies the whole
    section by ``(x-1)^extra`` first.  The division must be exact.
    """
    acc: dict[Monomial, int] = {}
    for mono, c in section.items():
        exps = dict(mono)
        k = exps.pop(XM1, 0) + extra
        e = exps.pop(U, 0)
        if exps:
            raise ValueError(f"section has unexpected variables {sorted(exps)}")
        term = _cancelled(k, e) * _ym1_pow(e)
        for m, coeff in term.items():
            acc[m] = acc.get(m, 0) + c * coeff
    return MultiPoly(acc)


def q_from_section(g: LoopedGraph, cap: int = TRANSVERSAL_CAP) -> MultiPoly:
    """q(G) recovered from the transversal section of M(IA(G))."""
    m = build_IA(g)
    section = section_transversal(m, TransversalScheme.for_matroid(m), q_assignment(m.labels), cap=cap)
    return section_to_q(section)


def q_evaluate(p: MultiPoly, x_val: Fraction | int, y_val: Fraction | int) -> Fraction:
    foreign = set(p.variables) - {X, Y}
    if foreign:
        raise ValueError(f"polynomial has variables other than x, y: {sorted(foreign)}")
    return eval_rational(p, {X: Fraction(x_val), Y: Fraction(y_val)})


@dataclass(frozen=True)
class InterlaceResult:
    polynomial: MultiPoly
    method: str
    graph_fingerprint: str


def interlace(g: LoopedGraph, method: str = "subset", workers: int = 1) -> InterlaceResult:
    if method == "subset":
        p = q_subset(g, workers=workers)
    elif method == "recursive":
        p = q_recursive(g)
    elif method == "section":
        p = q_from_section(g)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return InterlaceResult(p, method, g.fingerprint())
