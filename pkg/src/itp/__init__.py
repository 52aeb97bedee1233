"""Exact interlace polynomials and parametrized Tutte polynomials.

Graphs are looped simple graphs; the matroids are the binary matroids of
``(I | A(G))`` and ``(I | A(G) | A(G) + I)``.  All polynomials are exact,
with arbitrary-precision integer coefficients.
"""

from .gf2linalg import BitMatrix, rank
from .graphs import LoopedGraph, adjacency_matrix, delete_vertex, local_complement, parse_graph, pivot
from .interlace import InterlaceResult, interlace, q_evaluate, q_from_section, q_recursive, q_subset
from .matroid import BinaryMatroid, GroundLabel, build_IA, build_IAS
from .polyring import MultiPoly, parse_poly
from .tutte import (
    EnumerationCapError,
    ParameterAssignment,
    TransversalScheme,
    param_rank_recursive,
    param_rank_subset,
    pi_project,
    section_transversal,
    tutte_subset,
)

__version__ = "0.1.0"
