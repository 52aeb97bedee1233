"""Looped simple graphs and the vertex operations used by the recursions.

A looped simple graph has named vertices, an independent loop flag per
vertex and at most one edge between two distinct vertices.  Values are
immutable; every operation returns a new graph and keeps the surviving
vertices in their original order so that adjacency matrices stay aligned.
"""

from __future__ import annotations

import hashlib
import re
from collections.abc import Iterable
from itertools import combinations

from .gf2linalg import BitMatrix

__all__ = [
    "LoopedGraph",
    "GraphParseError",
    "adjacency_matrix",
    "delete_vertex",
    "local_complement",
    "pivot",
    "disjoint_union",
    "parse_graph",
    "format_graph",
]

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")
RENAME_SEP = "__"


class GraphParseError(ValueError):
    pass


class LoopedGraph:
    """Immutable looped simple graph.

    Args:
        vertices: distinct vertex names, in the order used for matrices.
        loops: the looped vertices.
        edges: pairs of distinct vertices.
    """

    __slots__ = ("_vertices", "_index", "_loops", "_adj", "_hash")

    def __init__(self, vertices: Iterable[str], loops: Iterable[str] = (), edges: Iterable[Iterable[str]] = ()):
        verts = tuple(vertices)
        index = {v: i for i, v in enumerate(verts)}
        if len(index) != len(verts):
            raise ValueError("duplicate vertex names")
        loops = frozenset(loops)
        for v in loops:
            if v not in index:
                raise ValueError(f"loop on unknown vertex {v!r}")
        adj: dict[str, set[str]] = {v: set() for v in verts}
        for e in edges:
            a, b = tuple(e)
            if a == b:
                raise ValueError(f"self-edge {a}-{b}; use the loop flag instead")
            if a not in index or b not in index:
                raise ValueError(f"edge {a}-{b} has an unknown endpoint")
            adj[a].add(b)
            adj[b].add(a)
        self._vertices = verts
        self._index = index
        self._loops = loops
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._hash = None

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def loops(self) -> frozenset[str]:
        return self._loops

    @property
    def edges(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset((v, w)) for v in self._vertices for w in self._adj[v])

    def sorted_edges(self) -> list[tuple[str, str]]:
        """Edges as ordered pairs, sorted by vertex position."""
        idx = self._index
        out = []
        for v in self._vertices:
            for w in self._adj[v]:
                if idx[v] < idx[w]:
                    out.append((v, w))
        out.sort(key=lambda e: (idx[e[0]], idx[e[1]]))
        return out

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._index

    def index(self, v: str) -> int:
        return self._index[v]

    def neighbors(self, v: str) -> frozenset[str]:
        self._check(v)
        return self._adj[v]

    def is_looped(self, v: str) -> bool:
        self._check(v)
        return v in self._loops

    def is_isolated(self, v: str) -> bool:
        return not self.neighbors(v)

    def adjacent(self, v: str, w: str) -> bool:
        return w in self.neighbors(v)

    def _check(self, v: str) -> None:
        if v not in self._index:
            raise KeyError(f"unknown vertex {v!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LoopedGraph):
            return NotImplemented
        return (
            self._vertices == other._vertices
            and self._loops == other._loops
            and self._adj == other._adj
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vertices, self._loops, self.edges))
        return self._hash

    def __repr__(self) -> str:
        edges = " ".join(f"{a}-{b}" for a, b in self.sorted_edges())
        loops = " ".join(v for v in self._vertices if v in self._loops)
        return f"LoopedGraph(vertices={' '.join(self._vertices)!r}, loops={loops!r}, edges={edges!r})"

    def fingerprint(self) -> str:
        """SHA-256 of the canonical text serialization."""
        return hashlib.sha256(format_graph(self).encode()).hexdigest()

    @classmethod
    def from_masks(cls, n: int, loop_mask: int, edge_mask: int, names: list[str] | None = None) -> LoopedGraph:
        """Graph on ``n`` labeled vertices from bit masks.

        Bit ``k`` of ``edge_mask`` refers to the ``k``-th pair of
        ``itertools.combinations(range(n), 2)``.
        """
        names = names or [f"v{i}" for i in range(n)]
        pairs = list(combinations(range(n), 2))
        edges = [(names[a], names[b]) for k, (a, b) in enumerate(pairs) if (edge_mask >> k) & 1]
        loops = [names[i] for i in range(n) if (loop_mask >> i) & 1]
        return cls(names, loops, edges)


def adjacency_matrix(g: LoopedGraph) -> BitMatrix:
    rows = []
    for v in g.vertices:
        word = 1 << g.index(v) if v in g.loops else 0
        for w in g.neighbors(v):
            word |= 1 << g.index(w)
        rows.append(word)
    return BitMatrix(rows, len(g))


def _edge_set(g: LoopedGraph) -> set[frozenset[str]]:
    return set(g.edges)


def delete_vertex(g: LoopedGraph, v: str) -> LoopedGraph:
    """G - v."""
    g.neighbors(v)
    return LoopedGraph(
        [u for u in g.vertices if u != v],
        g.loops - {v},
        [e for e in g.edges if v not in e],
    )


def delete_vertices(g: LoopedGraph, vs: Iterable[str]) -> LoopedGraph:
    for v in vs:
        g = delete_vertex(g, v)
    return g


def local_complement(g: LoopedGraph, v: str) -> LoopedGraph:
    """G^v: toggle every edge among neighbours of ``v`` and each neighbour's loop.

    Defined for looped and unlooped ``v`` alike.
    """
    nbrs = [w for w in g.vertices if w in g.neighbors(v)]
    edges = _edge_set(g)
    for a, b in combinations(nbrs, 2):
        edges ^= {frozenset((a, b))}
    return LoopedGraph(g.vertices, g.loops ^ frozenset(nbrs), edges)


def pivot(g: LoopedGraph, v: str, w: str) -> LoopedGraph:
    """G^{vw}: toggle edges between vertices distinguished by ``{v, w}``.

    Two vertices outside ``{v, w}`` are distinguished when their
    neighbourhoods within ``{v, w}`` are nonempty and different.  Loop flags
    and edges meeting ``v`` or ``w`` are left alone.
    """
    if v == w:
        raise ValueError("pivot needs two distinct vertices")
    nv, nw = g.neighbors(v), g.neighbors(w)
    # classify each outside vertex by its neighbourhood inside {v, w}
    classes: dict[str, list[str]] = {"v": [], "w": [], "vw": []}
    for x in g.vertices:
        if x in (v, w):
            continue
        key = ("v" if x in nv else "") + ("w" if x in nw else "")
        if key:
            classes[key].append(x)
    edges = _edge_set(g)
    for c1, c2 in (("v", "w"), ("v", "vw"), ("w", "vw")):
        for a in classes[c1]:
            for b in classes[c2]:
                edges ^= {frozenset((a, b))}
    return LoopedGraph(g.vertices, g.loops, edges)


def disjoint_union(g: LoopedGraph, h: LoopedGraph) -> LoopedGraph:
    """Union of ``g`` and a copy of ``h``; clashing names in ``h`` are renamed.

    A clash ``a`` becomes ``a__1`` (or the next free counter).
    """
    taken = set(g.vertices)
    rename: dict[str, str] = {}
    for v in h.vertices:
        new = v
        k = 0
        while new in taken:
            k += 1
            new = f"{v}{RENAME_SEP}{k}"
        taken.add(new)
        rename[v] = new
    return LoopedGraph(
        list(g.vertices) + [rename[v] for v in h.vertices],
        set(g.loops) | {rename[v] for v in h.loops},
        list(g.edges) + [(rename[a], rename[b]) for a, b in h.sorted_edges()],
    )


# -- text format ----------------------------------------------------------------


def parse_graph(text: str) -> LoopedGraph:
    """Parse the ``vertices:/loops:/edges:`` text format.

    Raises:
        GraphParseError: on any malformed line, duplicate, unknown name,
            self-edge or repeated edge.
    """
    sections: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition(":")
        head = head.strip()
        if not sep or head not in ("vertices", "loops", "edges"):
            raise GraphParseError(f"line {lineno}: expected 'vertices:', 'loops:' or 'edges:'")
        if head in sections:
            raise GraphParseError(f"line {lineno}: repeated '{head}:' line")
        sections[head] = rest.split()
    if "vertices" not in sections:
        raise GraphParseError("missing 'vertices:' line")

    verts = sections["vertices"]
    seen: set[str] = set()
    for v in verts:
        if not _NAME_RE.match(v):
            raise GraphParseError(f"invalid vertex name {v!r}")
        if v in seen:
            raise GraphParseError(f"duplicate vertex {v!r}")
        seen.add(v)

    loops: set[str] = set()
    for v in sections.get("loops", []):
        if v not in seen:
            raise GraphParseError(f"loop on unknown vertex {v!r}")
        if v in loops:
            raise GraphParseError(f"duplicate loop {v!r}")
        loops.add(v)

    edges: set[frozenset[str]] = set()
    for tok in sections.get("edges", []):
        parts = tok.split("-")
        if len(parts) != 2 or not all(_NAME_RE.match(p) for p in parts):
            raise GraphParseError(f"malformed edge token {tok!r}")
        a, b = parts
        for end in parts:
            if end not in seen:
                raise GraphParseError(f"edge {tok!r} uses unknown vertex {end!r}")
        if a == b:
            raise GraphParseError(f"self-edge {tok!r}; mark the vertex in 'loops:' instead")
        e = frozenset(parts)
        if e in edges:
            raise GraphParseError(f"duplicate edge {tok!r}")
        edges.add(e)
    return LoopedGraph(verts, loops, edges)


def format_graph(g: LoopedGraph) -> str:
    lines = [
        "vertices: " + " ".join(g.vertices),
        "loops: " + " ".join(v for v in g.vertices if v in g.loops),
        "edges: " + " ".join(f"{a}-{b}" for a, b in g.sorted_edges()),
    ]
    return "\n".join(line.rstrip() for line in lines) + "\n"
