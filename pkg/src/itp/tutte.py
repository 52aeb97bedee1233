"""Parametrized rank polynomials of binary matroids.

Three independent evaluators live here:

* :func:`param_rank_subset` sums over every subset of the ground set,
* :func:`param_rank_recursive` applies the loop / coloop / deletion-contraction
  rules one element at a time,
* :func:`section_transversal` sums only over transversals of a partition of
  the ground set into per-vertex classes, with ``u`` standing for ``s*z``.

:func:`pi_project` recovers the transversal section from a full symbolic
polynomial by discarding monomials that lie in the monomial ideal generated
by the per-class products; it is the oracle for :func:`section_transversal`.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import gf2linalg as gf2
from .matroid import (
    BinaryMatroid,
    GroundLabel,
    contract,
    delete,
    is_coloop,
    is_loop,
)
from .polyring import ONE, Monomial, MultiPoly

__all__ = [
    "EnumerationCapError",
    "ParameterAssignment",
    "TransversalScheme",
    "SUBSET_CAP",
    "TRANSVERSAL_CAP",
    "tutte_subset",
    "param_rank_subset",
    "param_rank_recursive",
    "pi_project",
    "section_transversal",
    "u_to_sz",
    "sz_to_u",
]

SUBSET_CAP = 30
TRANSVERSAL_CAP = 24

S, Z, U = "s", "z", "u"


class EnumerationCapError(RuntimeError):
    """The requested enumeration is larger than the configured cap."""


def param_name(prefix: str, label: GroundLabel) -> str:
    return f"{prefix}_{label.vertex}_{label.kind}"


class ParameterAssignment(Mapping):
    """Per-element ``(a, b)`` parameter pairs, keyed by ground label."""

    def __init__(self, values: Mapping[GroundLabel, tuple[MultiPoly | int, MultiPoly | int]]):
        self._values = {
            lab: tuple(v if isinstance(v, MultiPoly) else MultiPoly.const(v) for v in pair)
            for lab, pair in values.items()
        }

    @classmethod
    def symbolic(cls, labels: Iterable[GroundLabel]) -> ParameterAssignment:
        """Independent indeterminates ``a_<vertex>_<kind>``, ``b_<vertex>_<kind>``."""
        return cls(
            {lab: (MultiPoly.var(param_name("a", lab)), MultiPoly.var(param_name("b", lab))) for lab in labels}
        )

    @classmethod
    def constant(cls, labels: Iterable[GroundLabel], a: MultiPoly | int = 1, b: MultiPoly | int = 1) -> ParameterAssignment:
        return cls({lab: (a, b) for lab in labels})

    def __getitem__(self, label: GroundLabel) -> tuple[MultiPoly, MultiPoly]:
        return self._values[label]

    def __iter__(self) -> Iterator[GroundLabel]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def updated(self, values: Mapping[GroundLabel, tuple[MultiPoly | int, MultiPoly | int]]) -> ParameterAssignment:
        merged = dict(self._values)
        merged.update(values)
        return ParameterAssignment(merged)

    def check_covers(self, m: BinaryMatroid) -> None:
        missing = [str(lab) for lab in m.labels if lab not in self._values]
        if missing:
            raise KeyError(f"no parameters for {', '.join(missing)}")


@dataclass(frozen=True)
class TransversalScheme:
    """Partition of the ground set into one class per vertex."""

    classes: tuple[tuple[GroundLabel, ...], ...]

    def __post_init__(self):
        sizes = {len(c) for c in self.classes}
        if len(sizes) > 1 or sizes - {2, 3}:
            raise ValueError(f"classes must all have size 2 or all size 3, got sizes {sorted(sizes)}")
        flat = [lab for c in self.classes for lab in c]
        if len(set(flat)) != len(flat):
            raise ValueError("transversal classes overlap")

    @classmethod
    def for_matroid(cls, m: BinaryMatroid) -> TransversalScheme:
        """Group labels by vertex, in order of first appearance."""
        groups: dict[str, list[GroundLabel]] = {}
        for lab in m.labels:
            groups.setdefault(lab.vertex, []).append(lab)
        return cls(tuple(tuple(g) for g in groups.values()))

    def check_matches(self, m: BinaryMatroid) -> None:
        flat = {lab for c in self.classes for lab in c}
        if flat != set(m.labels):
            raise ValueError("transversal classes do not cover the matroid's ground set exactly")


def _check_cap(size: int, cap: int, what: str) -> None:
    if size > cap:
        raise EnumerationCapError(f"{what} of size {size} exceeds the enumeration cap {cap}")


def _poly_sz(table: Mapping[tuple[int, int], int]) -> MultiPoly:
    terms: dict[Monomial, int] = {}
    for (i, j), c in table.items():
        mono = tuple(p for p in ((S, i), (Z, j)) if p[1])
        terms[mono] = terms.get(mono, 0) + c
    return MultiPoly(terms)


def _map_chunks(fn, chunks: Sequence, workers: int) -> list:
    """Apply ``fn`` to every chunk and return results in chunk order."""
    if workers <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


# -- subset expansion ---------------------------------------------------------------


def tutte_subset(m: BinaryMatroid, cap: int = SUBSET_CAP, workers: int = 1) -> MultiPoly:
    """Sum of ``s^(r(W)-r(T)) z^(|T|-r(T))`` over all subsets ``T``."""
    k = len(m)
    _check_cap(k, cap, "ground set")
    full = m.rank()

    def chunk(rng):
        start, ranks = gf2._column_chunk(m.matrix, *rng)
        sizes = gf2.popcounts(np.arange(start, start + len(ranks), dtype=np.uint64))
        key = (full - ranks.astype(np.int64)) * (k + 1) + (sizes - ranks)
        return np.bincount(key, minlength=(k + 1) * (k + 1))

    counts = sum(_map_chunks(chunk, gf2.column_subset_chunks(m.matrix), workers))
    table = {(int(i) // (k + 1), int(i) % (k + 1)): int(c) for i, c in enumerate(counts) if c}
    return _poly_sz(table)


def _constant_values(m: BinaryMatroid, asg: ParameterAssignment) -> tuple[list[int], list[int]] | None:
    a_vals, b_vals = [], []
    for lab in m.labels:
        a, b = asg[lab]
        if not (a.is_constant() and b.is_constant()):
            return None
        a_vals.append(a.constant_value())
        b_vals.append(b.constant_value())
    return a_vals, b_vals


def param_rank_subset(
    m: BinaryMatroid, asg: ParameterAssignment, cap: int = SUBSET_CAP, workers: int = 1
) -> MultiPoly:
    """Parametrized rank polynomial by full subset expansion.

    Each subset ``T`` contributes the product of ``a`` over ``T``, the
    product of ``b`` over the complement, and ``s^(r(W)-r(T)) z^(|T|-r(T))``.
    """
    asg.check_covers(m)
    k = len(m)
    _check_cap(k, cap, "ground set")
    full = m.rank()
    chunks = gf2.column_subset_chunks(m.matrix)
    consts = _constant_values(m, asg)
    if consts is not None:
        return _param_subset_const(m, full, consts, chunks, workers)

    # weight(mask) = low_products[mask & low] * high_products[mask >> half]
    half = k // 2
    low_labels, high_labels = m.labels[:half], m.labels[half:]
    low_products = _subset_products([asg[lab] for lab in low_labels])
    high_products = _subset_products([asg[lab] for lab in high_labels])
    low_mask = (1 << half) - 1

    def chunk(rng):
        start, ranks = gf2._column_chunk(m.matrix, *rng)
        buckets: dict[tuple[int, int], dict[Monomial, int]] = {}
        for off, r in enumerate(ranks.tolist()):
            mask = start + off
            key = (full - r, mask.bit_count() - r)
            weight = low_products[mask & low_mask] * high_products[mask >> half]
            bucket = buckets.setdefault(key, {})
            for mono, c in weight.items():
                bucket[mono] = bucket.get(mono, 0) + c
        return buckets

    total: dict[Monomial, int] = {}
    for buckets in _map_chunks(chunk, chunks, workers):
        for (i, j), bucket in buckets.items():
            shift = tuple(p for p in ((S, i), (Z, j)) if p[1])
            for mono, c in MultiPoly(bucket).shift(dict(shift)).items():
                total[mono] = total.get(mono, 0) + c
    return MultiPoly(total)


def _subset_products(pairs: Sequence[tuple[MultiPoly, MultiPoly]]) -> list[MultiPoly]:
    """``out[mask]`` = prod of ``a`` over set bits times ``b`` over clear bits."""
    out = [ONE]
    for a, b in pairs:
        out = [p * b for p in out] + [p * a for p in out]
    return out


def _param_subset_const(m, full, consts, chunks, workers) -> MultiPoly:
    a_vals, b_vals = consts
    k = len(a_vals)
    bound = max([1] + [abs(v) for v in a_vals + b_vals]) ** k * (1 << k)
    dtype = np.int64 if bound < 2**62 else object

    def chunk(rng):
        start, ranks = gf2._column_chunk(m.matrix, *rng)
        masks = np.arange(start, start + len(ranks), dtype=np.uint64)
        weights = np.ones(len(ranks), dtype=dtype)
        for j in range(k):
            bit = ((masks >> np.uint64(j)) & np.uint64(1)).astype(bool)
            weights = weights * np.where(bit, a_vals[j], b_vals[j]).astype(dtype)
        sizes = gf2.popcounts(masks)
        keys = (full - ranks.astype(np.int64)) * (k + 1) + (sizes - ranks)
        acc = np.zeros((k + 1) * (k + 1), dtype=dtype)
        np.add.at(acc, keys, weights)
        return acc

    acc = sum(_map_chunks(chunk, chunks, workers))
    table = {(i // (k + 1), i % (k + 1)): int(c) for i, c in enumerate(acc.tolist()) if c}
    return _poly_sz(table)


# -- recursion -----------------------------------------------------------------------


def param_rank_recursive(
    m: BinaryMatroid,
    asg: ParameterAssignment,
    order: Sequence[GroundLabel] | None = None,
    cap: int = SUBSET_CAP,
) -> MultiPoly:
    """Parametrized rank polynomial by deletion and contraction.

    Elements are removed in ``order`` (label order by default).  A coloop
    contributes ``a + s*b`` and is contracted, a loop contributes ``b + z*a``
    and is deleted, anything else splits into ``b * tau(M-w) + a * tau(M/w)``.
    Minors that recur with the same row space are evaluated once.
    """
    asg.check_covers(m)
    _check_cap(len(m), cap, "ground set")
    if order is not None:
        m = m.reorder(order)
    s = MultiPoly.var(S)
    z = MultiPoly.var(Z)
    memo: dict[tuple, MultiPoly] = {}

    def tau(minor: BinaryMatroid) -> MultiPoly:
        if not minor.labels:
            return ONE
        key = (minor.labels, gf2.reduced_row_echelon(minor.matrix))
        hit = memo.get(key)
        if hit is not None:
            return hit
        w = minor.labels[0]
        a, b = asg[w]
        if is_coloop(minor, w):
            val = (a + s * b) * tau(contract(minor, w))
        elif is_loop(minor, w):
            val = (b + z * a) * tau(delete(minor, w))
        else:
            val = b * tau(delete(minor, w)) + a * tau(contract(minor, w))
        memo[key] = val
        return val

    return tau(m)


# -- sections -------------------------------------------------------------------------


def _class_lookup(scheme: TransversalScheme) -> dict[str, tuple[int, str]]:
    lookup = {}
    for ci, cls in enumerate(scheme.classes):
        for lab in cls:
            lookup[param_name("a", lab)] = (ci, "a")
            lookup[param_name("b", lab)] = (ci, "b")
    return lookup


def pi_project(p: MultiPoly, scheme: TransversalScheme) -> MultiPoly:
    """Drop every monomial lying in the ideal generated by the class products.

    A monomial dies when it holds two ``a`` parameters of one class, or all
    the ``b`` parameters of one class.  Parameter exponents must be 0 or 1.
    """
    lookup = _class_lookup(scheme)
    size = len(scheme.classes[0]) if scheme.classes else 0
    kept: dict[Monomial, int] = {}
    for mono, c in p.items():
        a_count: dict[int, int] = {}
        b_count: dict[int, int] = {}
        dead = False
        for v, e in mono:
            hit = lookup.get(v)
            if hit is None:
                continue
            if e > 1:
                raise ValueError(f"parameter {v} appears with exponent {e}; expected a multilinear polynomial")
            ci, kind = hit
            counts = a_count if kind == "a" else b_count
            counts[ci] = counts.get(ci, 0) + 1
            if (kind == "a" and counts[ci] >= 2) or (kind == "b" and counts[ci] == size):
                dead = True
                break
        if not dead:
            kept[mono] = c
    return MultiPoly(kept)


def _walk(
    m: BinaryMatroid,
    scheme: TransversalScheme,
    require: Iterable[GroundLabel],
    factor: Mapping[GroundLabel, MultiPoly] | None,
) -> Iterator[tuple[tuple[GroundLabel, ...], int, MultiPoly | None]]:
    """Depth-first walk over transversals with an incremental XOR basis.

    Yields ``(transversal, rank, weight)``; ``weight`` is the product of
    ``factor`` over the transversal, or ``None`` when no factors are given.
    """
    require = set(require)
    choices = []
    for cls in scheme.classes:
        forced = [lab for lab in cls if lab in require]
        if len(forced) > 1:
            return
        opts = forced or list(cls)
        choices.append([(lab, m.column_word(lab)) for lab in opts])
    chosen: list[GroundLabel] = []

    def step(depth: int, pivots: dict[int, int], weight):
        if depth == len(choices):
            yield tuple(chosen), len(pivots), weight
            return
        for lab, col in choices[depth]:
            basis = pivots
            while col:
                low = col & -col
                p = pivots.get(low)
                if p is None:
                    basis = dict(pivots)
                    basis[low] = col
                    break
                col ^= p
            chosen.append(lab)
            yield from step(depth + 1, basis, None if factor is None else weight * factor[lab])
            chosen.pop()

    yield from step(0, {}, None if factor is None else ONE)


def iter_transversals(
    m: BinaryMatroid, scheme: TransversalScheme, require: Iterable[GroundLabel] = ()
) -> Iterator[tuple[tuple[GroundLabel, ...], int]]:
    """Yield ``(transversal, rank)``, optionally only those containing ``require``."""
    for t, r, _ in _walk(m, scheme, require, None):
        yield t, r


def section_transversal(
    m: BinaryMatroid,
    scheme: TransversalScheme,
    asg: ParameterAssignment,
    cap: int = TRANSVERSAL_CAP,
    require: Iterable[GroundLabel] = (),
) -> MultiPoly:
    """Transversal section of the parametrized rank polynomial.

    Sums ``prod_{t in T} a(t) * prod_{w not in T} b(w) * u^(n - r(T))`` over
    transversals ``T``, where ``n`` is the number of classes and ``u``
    stands for ``s*z``.  ``require`` restricts the sum to transversals
    containing the given labels.
    """
    scheme.check_matches(m)
    asg.check_covers(m)
    n = len(scheme.classes)
    _check_cap(n, cap, "vertex set")
    if m.rank() != n:
        # u = s*z needs |T| == r(W) for every transversal T
        raise ValueError(f"matroid rank {m.rank()} differs from the number of classes {n}")
    # factor[label] = a(label) * prod of b over the rest of its class
    factor: dict[GroundLabel, MultiPoly] = {}
    for cls in scheme.classes:
        for lab in cls:
            f = asg[lab][0]
            for other in cls:
                if other != lab:
                    f = f * asg[other][1]
            factor[lab] = f
    buckets: dict[int, dict[Monomial, int]] = {}
    for _, r, weight in _walk(m, scheme, require, factor):
        bucket = buckets.setdefault(n - r, {})
        for mono, c in weight.items():
            bucket[mono] = bucket.get(mono, 0) + c
    total: dict[Monomial, int] = {}
    for e, bucket in buckets.items():
        for mono, c in MultiPoly(bucket).shift({U: e}).items():
            total[mono] = total.get(mono, 0) + c
    return MultiPoly(total)


def u_to_sz(p: MultiPoly) -> MultiPoly:
    """Replace each ``u^k`` by ``s^k z^k``."""
    out: dict[Monomial, int] = {}
    for mono, c in p.items():
        exps = dict(mono)
        k = exps.pop(U, 0)
        if k:
            exps[S] = exps.get(S, 0) + k
            exps[Z] = exps.get(Z, 0) + k
        key = tuple(sorted(exps.items()))
        out[key] = out.get(key, 0) + c
    return MultiPoly(out)


def sz_to_u(p: MultiPoly) -> MultiPoly:
    """Inverse of ``u -> s*z`` for polynomials where s and z always share an exponent."""
    out = {}
    for mono, c in p.items():
        exps = dict(mono)
        k = exps.pop(S, 0)
        if exps.pop(Z, 0) != k:
            raise ValueError("s and z exponents differ; not a transversal section")
        if k:
            exps[U] = k
        out[tuple(sorted(exps.items()))] = c
    return MultiPoly(out)
