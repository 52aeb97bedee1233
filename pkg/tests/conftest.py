import random
from itertools import combinations

import pytest
from hypothesis import strategies as st

from itp.graphs import LoopedGraph


def naive_rank(entries):
    """Per-entry Gaussian elimination over GF(2) on a list of 0/1 lists.

    Independent of the bit-packed kernel: no packing, no word XOR.
    """
    a = [list(row) for row in entries]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] % 2), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(nrows):
            if i != r and a[i][c] % 2:
                a[i] = [(x + y) % 2 for x, y in zip(a[i], a[r])]
        r += 1
    return r


def all_graphs(n):
    pairs = n * (n - 1) // 2
    for loop_mask in range(1 << n):
        for edge_mask in range(1 << pairs):
            yield LoopedGraph.from_masks(n, loop_mask, edge_mask)


def all_graphs_upto(n):
    for k in range(n + 1):
        yield from all_graphs(k)


def random_graph(n, rng, p_edge=0.5, p_loop=0.5):
    names = [f"v{i}" for i in range(n)]
    loops = [v for v in names if rng.random() < p_loop]
    edges = [(a, b) for a, b in combinations(names, 2) if rng.random() < p_edge]
    return LoopedGraph(names, loops, edges)


@st.composite
def graphs(draw, min_vertices=0, max_vertices=6):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = n * (n - 1) // 2
    loop_mask = draw(st.integers(0, (1 << n) - 1))
    edge_mask = draw(st.integers(0, (1 << pairs) - 1))
    return LoopedGraph.from_masks(n, loop_mask, edge_mask)


@pytest.fixture
def rng():
    return random.Random(20261019)


def g_single(looped=False):
    return LoopedGraph(["v"], ["v"] if looped else [])


def g_k2():
    return LoopedGraph(["v", "w"], [], [("v", "w")])


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
