"""Cross-checks between the evaluators and the rank identities, per graph.

Every check returns a :class:`CheckResult`; ``passed`` is ``None`` when a
check does not apply to the graph or is too large to run.
"""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import gf2linalg as gf2
from .graphs import LoopedGraph, adjacency_matrix, delete_vertex, delete_vertices, local_complement, pivot
from .interlace import q_assignment, q_evaluate, q_from_section, q_recursive, q_subset, section_to_q, _xm1_pow
from .matroid import (
    CHI,
    PHI,
    PSI,
    BinaryMatroid,
    GroundLabel,
    are_parallel,
    build_IA,
    build_IAS,
    contract,
    contract_all,
    delete,
    is_coloop,
    is_loop,
    rank_of,
)
from .polyring import ONE, MultiPoly
from .tutte import (
    TRANSVERSAL_CAP,
    EnumerationCapError,
    ParameterAssignment,
    TransversalScheme,
    iter_transversals,
    param_rank_recursive,
    param_rank_subset,
    pi_project,
    section_transversal,
    u_to_sz,
)

__all__ = ["CheckResult", "SUITES", "run_suite", "run_all"]

SUITES = ("methods", "section", "ias", "identities")

# size limits for the exponential checks inside one suite run
SYMBOLIC_MAX_VERTICES = 3
IA_SUBSET_MAX_VERTICES = 8
IAS_SUBSET_MAX_VERTICES = 6
IAS_SYMBOLIC_MAX_VERTICES = 5
IDENTITY_MAX_VERTICES = 9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool | None
    detail: str = ""

    @property
    def status(self) -> str:
        return {True: "PASS", False: "FAIL", None: "SKIP"}[self.passed]


def _rng_for(g: LoopedGraph, seed: int) -> random.Random:
    return random.Random(f"{seed}:{g.fingerprint()}")


def random_assignment(labels, rng: random.Random, lo: int = -3, hi: int = 3) -> ParameterAssignment:
    return ParameterAssignment({lab: (rng.randint(lo, hi), rng.randint(lo, hi)) for lab in labels})


# -- methods ------------------------------------------------------------------


def check_methods(g: LoopedGraph) -> list[CheckResult]:
    qs = q_subset(g)
    qr = q_recursive(g)
    qt = q_from_section(g)
    return [
        CheckResult("q_subset == q_recursive", qs == qr),
        CheckResult("q_subset == q_from_section", qs == qt),
        CheckResult("q_recursive == q_from_section", qr == qt),
    ]


# -- sections and evaluators ----------------------------------------------------


def _tau_checks(m: BinaryMatroid, tag: str, n: int, subset_limit: int, rng: random.Random) -> list[CheckResult]:
    scheme = TransversalScheme.for_matroid(m)
    if n > subset_limit:
        reason = f"{n} vertices above the subset-expansion limit {subset_limit}"
        return [
            CheckResult(f"tau recursive == tau subset ({tag})", None, reason),
            CheckResult(f"section == pi-filtered subset expansion ({tag})", None, reason),
        ]
    if n <= SYMBOLIC_MAX_VERTICES:
        asg = ParameterAssignment.symbolic(m.labels)
        mode = "symbolic"
    else:
        asg = random_assignment(m.labels, rng)
        mode = "integer parameters"
    full = param_rank_subset(m, asg)
    rec = param_rank_recursive(m, asg)
    out = [CheckResult(f"tau recursive == tau subset ({tag})", rec == full, mode)]
    if mode == "symbolic":
        sec = u_to_sz(section_transversal(m, scheme, asg))
        out.append(CheckResult(f"section == pi-filtered subset expansion ({tag})", sec == pi_project(full, scheme), mode))
    else:
        # with numeric parameters the monomial filter cannot see classes,
        # so the oracle filters subsets by class membership instead
        out.append(_section_vs_filter_numeric(m, scheme, asg, tag))
    return out


def _section_vs_filter_numeric(m, scheme, asg, tag) -> CheckResult:
    """Compare the section with a brute-force transversal filter of all subsets.

    Each subset meeting every class exactly once contributes the usual
    subset-expansion term; all others are dropped.
    """
    pos = {lab: i for i, lab in enumerate(m.labels)}
    class_masks = [sum(1 << pos[lab] for lab in cls) for cls in scheme.classes]
    full_rank = m.rank()
    terms: dict = {}
    for start, ranks in gf2.column_subset_ranks(m.matrix):
        masks = np.arange(start, start + len(ranks), dtype=np.uint64)
        keep = np.ones(len(ranks), dtype=bool)
        for cm in class_masks:
            keep &= gf2.popcounts(masks & np.uint64(cm)) == 1
        for off in np.flatnonzero(keep).tolist():
            mask = start + off
            r = int(ranks[off])
            weight = ONE
            for lab, j in pos.items():
                a, b = asg[lab]
                weight = weight * (a if (mask >> j) & 1 else b)
            term = weight.shift({"s": full_rank - r, "z": mask.bit_count() - r})
            for mono, c in term.items():
                terms[mono] = terms.get(mono, 0) + c
    expected = MultiPoly(terms)
    got = u_to_sz(section_transversal(m, scheme, asg))
    return CheckResult(f"section == pi-filtered subset expansion ({tag})", got == expected, "integer parameters")


def check_section(g: LoopedGraph, seed: int = 0) -> list[CheckResult]:
    rng = _rng_for(g, seed)
    n = len(g)
    return _tau_checks(build_IA(g), "IA", n, IA_SUBSET_MAX_VERTICES, rng) + _tau_checks(
        build_IAS(g), "IAS", n, IAS_SUBSET_MAX_VERTICES, rng
    )


# -- IAS restriction ------------------------------------------------------------


def ias_restriction_pair(g: LoopedGraph, symbolic: bool, rng: random.Random | None = None) -> tuple[MultiPoly, MultiPoly]:
    """IAS section with a(psi)=0, b(psi)=1 and the IA section, same phi/chi values."""
    ia = build_IA(g)
    ias = build_IAS(g)
    base = ParameterAssignment.symbolic(ia.labels) if symbolic else random_assignment(ia.labels, rng)
    psi = {GroundLabel(v, PSI): (0, 1) for v in g.vertices}
    ext = ParameterAssignment({**dict(base.items()), **psi})
    got = section_transversal(ias, TransversalScheme.for_matroid(ias), ext)
    want = section_transversal(ia, TransversalScheme.for_matroid(ia), base)
    return got, want


def check_ias(g: LoopedGraph, seed: int = 0) -> list[CheckResult]:
    n = len(g)
    if n > IDENTITY_MAX_VERTICES:
        return [CheckResult("IAS section restricted to psi-free == IA section", None, "graph too large")]
    symbolic = n <= IAS_SYMBOLIC_MAX_VERTICES
    got, want = ias_restriction_pair(g, symbolic, _rng_for(g, seed))
    mode = "symbolic" if symbolic else "integer parameters"
    return [CheckResult("IAS section restricted to psi-free == IA section", got == want, mode)]


# -- rank identities -------------------------------------------------------------


def transversal_rank_identity(g: LoopedGraph) -> bool:
    m = build_IA(g)
    adj = adjacency_matrix(g)
    n = len(g)
    for t, r in iter_transversals(m, TransversalScheme.for_matroid(m)):
        s = [g.index(lab.vertex) for lab in t if lab.kind == CHI]
        if r != n - len(s) + gf2.rank(gf2.principal_submatrix(adj, s)):
            return False
        if rank_of(m, t) != r:
            return False
    return True


def _rank_array(m: BinaryMatroid) -> np.ndarray:
    return np.concatenate([ranks for _, ranks in gf2.column_subset_ranks(m.matrix)])


def minor_identity(g: LoopedGraph, v: str) -> bool:
    """M(IA(G-v)) == (M(IA(G)) / v_phi) - v_chi as rank functions."""
    m = build_IA(g)
    minor = delete(contract(m, GroundLabel(v, PHI)), GroundLabel(v, CHI))
    target = build_IA(delete_vertex(g, v))
    if minor.labels != target.labels:
        return False
    return bool(np.array_equal(_rank_array(minor), _rank_array(target)))


def looped_lemma(g: LoopedGraph, v: str) -> bool:
    """r^G(T) == 1 + r^{G^v - v}(T - v_chi) for transversals T holding v_chi."""
    m = build_IA(g)
    vchi = GroundLabel(v, CHI)
    other = build_IA(delete_vertex(local_complement(g, v), v))
    for t, r in iter_transversals(m, TransversalScheme.for_matroid(m), [vchi]):
        if r != 1 + rank_of(other, [lab for lab in t if lab != vchi]):
            return False
    return True


def pivot_lemmas(g: LoopedGraph, v: str, w: str) -> tuple[bool, bool]:
    """The two unlooped-pivot rank identities for adjacent unlooped ``v, w``."""
    m = build_IA(g)
    scheme = TransversalScheme.for_matroid(m)
    h = pivot(g, v, w)
    vchi, wphi, wchi = GroundLabel(v, CHI), GroundLabel(w, PHI), GroundLabel(w, CHI)
    hw = build_IA(delete_vertex(h, w))
    hvw = build_IA(delete_vertices(h, (v, w)))
    first = all(
        r - 1 == rank_of(hw, [lab for lab in t if lab != wphi])
        for t, r in iter_transversals(m, scheme, [vchi, wphi])
    )
    second = all(
        r == 2 + rank_of(hvw, [lab for lab in t if lab not in (vchi, wchi)])
        for t, r in iter_transversals(m, scheme, [vchi, wchi])
    )
    return first, second


def _minor_phi_chi(g: LoopedGraph, v: str) -> BinaryMatroid:
    """(M(IA(G)) - v_phi) / v_chi."""
    m = build_IA(g)
    return contract(delete(m, GroundLabel(v, PHI)), GroundLabel(v, CHI))


def _q_section(m: BinaryMatroid, require=(), extra: int = 0) -> MultiPoly:
    sec = section_transversal(m, TransversalScheme.for_matroid(m), q_assignment(m.labels), require=require)
    return section_to_q(sec, extra)


def first_recursion(g: LoopedGraph, v: str) -> bool:
    """q(G) == q(G-v) + (x-1) * section of (M(IA(G)) - v_phi)/v_chi."""
    rhs = q_subset(delete_vertex(g, v)) + _q_section(_minor_phi_chi(g, v), extra=1)
    return q_subset(g) == rhs


def split_identities(g: LoopedGraph, v: str, w: str) -> dict[str, bool]:
    """The S_phi / S_chi / q_phi / q_chi relations for adjacent unlooped ``v, w``."""
    minor = _minor_phi_chi(g, v)
    h = pivot(g, v, w)
    hw = build_IA(delete_vertex(h, w))
    q_hvw = q_subset(delete_vertices(h, (v, w)))
    s_phi = _q_section(minor, [GroundLabel(w, PHI)], extra=1)
    s_chi = _q_section(minor, [GroundLabel(w, CHI)], extra=1)
    q_chi = _q_section(hw, [GroundLabel(v, CHI)])
    q_phi = _q_section(hw, [GroundLabel(v, PHI)])
    return {
        "(x-1) S_phi == q_chi": s_phi == q_chi,
        "S_chi == (x-1) q(G^vw - v - w)": s_chi == _xm1_pow(2) * q_hvw,
        "q_phi == q(G^vw - v - w)": q_phi == q_hvw,
    }


def basis_facts(g: LoopedGraph, v: str) -> bool:
    """v_phi, and v_chi after removing v_phi, are neither loops nor coloops."""
    m = build_IA(g)
    vphi, vchi = GroundLabel(v, PHI), GroundLabel(v, CHI)
    if is_loop(m, vphi) or is_coloop(m, vphi):
        return False
    for minor in (delete(m, vphi), contract(m, vphi)):
        if is_loop(minor, vchi) or is_coloop(minor, vchi):
            return False
    return True


def pendant_parallel(g: LoopedGraph, v: str) -> bool | None:
    """For unlooped ``v`` of degree one on ``w``: v_chi parallel to w_phi."""
    if v in g.loops or len(g.neighbors(v)) != 1:
        return None
    (w,) = g.neighbors(v)
    return are_parallel(build_IA(g), GroundLabel(v, CHI), GroundLabel(w, PHI))


def are_twins(g: LoopedGraph, v: str, w: str) -> bool:
    """Same loop status and the same nonempty neighbourhood outside ``{v, w}``."""
    if (v in g.loops) != (w in g.loops):
        return False
    nv = g.neighbors(v) - {w}
    nw = g.neighbors(w) - {v}
    return bool(nv) and nv == nw


def twin_parallel(g: LoopedGraph, v: str, w: str) -> bool:
    m = contract_all(build_IA(g), [GroundLabel(v, PHI), GroundLabel(w, PHI)])
    return are_parallel(m, GroundLabel(v, CHI), GroundLabel(w, CHI))


def check_identities(g: LoopedGraph) -> list[CheckResult]:
    n = len(g)
    if n > IDENTITY_MAX_VERTICES:
        return [CheckResult("rank identities", None, "graph too large")]
    out = [CheckResult("transversal rank identity", transversal_rank_identity(g))]

    def collect(name: str, items: list, fn: Callable) -> None:
        if not items:
            out.append(CheckResult(name, None, "no eligible vertices"))
            return
        bad = [it for it in items if not fn(*it)]
        out.append(CheckResult(name, not bad, f"{len(items)} cases" + (f"; first failure {bad[0]}" if bad else "")))

    verts = list(g.vertices)
    non_isolated = [(v,) for v in verts if not g.is_isolated(v)]
    looped = [(v,) for v in verts if v in g.loops and not g.is_isolated(v)]
    unlooped_edges = []
    for a, b in g.sorted_edges():
        if a not in g.loops and b not in g.loops:
            unlooped_edges += [(a, b), (b, a)]
    collect("minor identity M(IA(G-v)) == M(IA(G))/v_phi - v_chi", [(v,) for v in verts], lambda v: minor_identity(g, v))
    collect("v_phi, v_chi neither loop nor coloop", non_isolated, lambda v: basis_facts(g, v))
    collect("looped rank lemma", looped, lambda v: looped_lemma(g, v))
    lemmas = {pair: pivot_lemmas(g, *pair) for pair in unlooped_edges}
    collect("pivot rank lemma r(T)-1 == r'(T - w_phi)", unlooped_edges, lambda v, w: lemmas[(v, w)][0])
    collect("pivot rank lemma r(T) == 2 + r''(T - v_chi - w_chi)", unlooped_edges, lambda v, w: lemmas[(v, w)][1])
    collect("q(G) == q(G-v) + (x-1) section((M - v_phi)/v_chi)", non_isolated, lambda v: first_recursion(g, v))
    splits = {pair: split_identities(g, *pair) for pair in unlooped_edges}
    for key in ("(x-1) S_phi == q_chi", "S_chi == (x-1) q(G^vw - v - w)", "q_phi == q(G^vw - v - w)"):
        collect(key, unlooped_edges, lambda v, w, key=key: splits[(v, w)][key])
    pendants = [(v,) for v in verts if pendant_parallel(g, v) is not None]
    collect("pendant: v_chi parallel to w_phi", pendants, lambda v: pendant_parallel(g, v))
    twins = [(v, w) for v, w in combinations(verts, 2) if are_twins(g, v, w)]
    collect("twins: v_chi parallel to w_chi in M/{v_phi, w_phi}", twins, lambda v, w: twin_parallel(g, v, w))
    q = q_subset(g)
    out.append(CheckResult("q(G) at x=2, y=2 equals 2^|V|", q_evaluate(q, 2, 2) == 2**n))
    return out


def run_suite(g: LoopedGraph, suite: str, seed: int = 0) -> list[CheckResult]:
    if len(g) > TRANSVERSAL_CAP:
        raise EnumerationCapError(f"graph has {len(g)} vertices; checks are capped at {TRANSVERSAL_CAP}")
    if suite == "all":
        return [r for s in SUITES for r in run_suite(g, s, seed)]
    if suite == "methods":
        return check_methods(g)
    if suite == "section":
        return check_section(g, seed)
    if suite == "ias":
        return check_ias(g, seed)
    if suite == "identities":
        return check_identities(g)
    raise ValueError(f"unknown suite {suite!r}")


def run_all(g: LoopedGraph, seed: int = 0) -> list[CheckResult]:
    return run_suite(g, "all", seed)
