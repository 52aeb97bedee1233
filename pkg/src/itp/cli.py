"""Command-line entry point ``itp``.

Exit codes: 0 success, 1 a check failed, 2 unreadable or malformed input,
3 enumeration cap exceeded, 4 invalid flag combination.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import re
import sys
import time
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .checks import run_all, run_suite
from .graphs import GraphParseError, LoopedGraph, parse_graph
from .interlace import interlace
from .matroid import PSI, GroundLabel, build_IA, build_IAS
from .polyring import MultiPoly, PolyParseError, eval_rational, parse_poly
from .tutte import (
    EnumerationCapError,
    ParameterAssignment,
    TransversalScheme,
    param_rank_recursive,
    param_rank_subset,
    pi_project,
    section_transversal,
    sz_to_u,
    tutte_subset,
)

log = logging.getLogger("itp")

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP, EXIT_FLAGS = 0, 1, 2, 3, 4

KIND_CHOICES = ("q", "tutte_ia", "tutte_ias", "section_ia", "section_ias", "param_rank")
METHOD_CHOICES = ("subset", "recursive", "section")
SUITE_CHOICES = ("methods", "section", "ias", "identities", "all")
EXHAUSTIVE_MAX = 5
RANDOM_EXTRA_SIZES = (6, 9)


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


# -- input helpers ---------------------------------------------------------------


def read_graph(path: str) -> LoopedGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parse_graph(text)
    except GraphParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


_PARAM_LINE = re.compile(r"(\S+)\s+(phi|chi|psi)\s+a=(.*?)\s+b=(.*)\Z")


def parse_params(text: str, g: LoopedGraph) -> ParameterAssignment:
    """Parse ``<vertex> <phi|chi|psi> a=<poly> b=<poly>`` lines."""
    values: dict[GroundLabel, tuple[MultiPoly, MultiPoly]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _PARAM_LINE.match(line)
        if not m:
            raise InputError(f"params line {lineno}: expected '<vertex> <phi|chi|psi> a=<poly> b=<poly>'")
        vertex, kind, a_text, b_text = m.groups()
        if vertex not in g:
            raise InputError(f"params line {lineno}: unknown vertex {vertex!r}")
        label = GroundLabel(vertex, kind)
        if label in values:
            raise InputError(f"params line {lineno}: duplicate entry for {label}")
        try:
            a, b = parse_poly(a_text), parse_poly(b_text)
        except PolyParseError as exc:
            raise InputError(f"params line {lineno}: {exc}") from exc
        reserved = ({"s", "z", "u"} & (set(a.variables) | set(b.variables)))
        if reserved:
            raise InputError(f"params line {lineno}: variables {sorted(reserved)} are reserved")
        values[label] = (a, b)
    return ParameterAssignment(values)


def parse_eval(text: str) -> dict[str, Fraction]:
    point = {}
    for part in text.split(","):
        name, sep, value = part.partition("=")
        name = name.strip()
        if not sep or not name:
            raise UsageError(f"bad --eval item {part!r}; expected name=p/q")
        try:
            point[name] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad rational {value.strip()!r} in --eval") from exc
    return point


# -- compute ---------------------------------------------------------------------


def validate_compute(args) -> None:
    if args.method == "section" and args.kind not in ("q", "section_ia", "section_ias"):
        raise UsageError(f"--method section is only valid for kinds q, section_ia, section_ias (got {args.kind})")
    if args.kind == "param_rank" and not args.params:
        raise UsageError("--kind param_rank requires --params")
    if args.kind != "param_rank" and args.params:
        raise UsageError("--params is only allowed with --kind param_rank")


def compute_polynomial(g: LoopedGraph, kind: str, method: str, params: ParameterAssignment | None, workers: int) -> MultiPoly:
    if kind == "q":
        return interlace(g, method, workers=workers).polynomial
    if kind in ("tutte_ia", "tutte_ias"):
        m = build_IA(g) if kind == "tutte_ia" else build_IAS(g)
        if method == "subset":
            return tutte_subset(m, workers=workers)
        return param_rank_recursive(m, ParameterAssignment.constant(m.labels))
    if kind in ("section_ia", "section_ias"):
        m = build_IA(g) if kind == "section_ia" else build_IAS(g)
        scheme = TransversalScheme.for_matroid(m)
        asg = ParameterAssignment.symbolic(m.labels)
        if method == "section":
            return section_transversal(m, scheme, asg)
        full = param_rank_subset(m, asg, workers=workers) if method == "subset" else param_rank_recursive(m, asg)
        return sz_to_u(pi_project(full, scheme))
    if kind == "param_rank":
        uses_psi = any(lab.kind == PSI for lab in params)
        m = build_IAS(g) if uses_psi else build_IA(g)
        try:
            params.check_covers(m)
        except KeyError as exc:
            raise InputError(f"parameter file incomplete: {exc.args[0]}") from exc
        if method == "subset":
            return param_rank_subset(m, params, workers=workers)
        return param_rank_recursive(m, params)
    raise UsageError(f"unknown kind {kind!r}")


def format_value(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def cmd_compute(args) -> int:
    validate_compute(args)
    point = parse_eval(args.eval) if args.eval else None
    g = read_graph(args.input)
    params = None
    if args.params:
        try:
            params = parse_params(Path(args.params).read_text(), g)
        except OSError as exc:
            raise InputError(f"cannot read {args.params}: {exc.strerror}") from exc
    t0 = time.perf_counter()
    p = compute_polynomial(g, args.kind, args.method, params, args.workers)
    elapsed = time.perf_counter() - t0
    value = None
    if point is not None:
        try:
            value = eval_rational(p, point)
        except KeyError as exc:
            raise UsageError(f"--eval does not assign {exc.args[0]}") from exc
    if args.format == "json":
        doc = p.to_dict() if value is None else {"polynomial": p.to_dict(), "value": format_value(value)}
        print(json.dumps(doc, separators=(", ", ": ")))
    else:
        print(p.to_text())
        if value is not None:
            print(f"value: {format_value(value)}")
    # timing goes to stderr so stdout stays reproducible
    print(f"# vertices: {len(g)}", file=sys.stderr)
    print(f"# kind: {args.kind}", file=sys.stderr)
    print(f"# method: {args.method}", file=sys.stderr)
    print(f"# wall time: {elapsed:.6f} s", file=sys.stderr)
    return EXIT_OK


# -- check / selfcheck ---------------------------------------------------------------


def cmd_check(args) -> int:
    g = read_graph(args.input)
    results = run_suite(g, args.suite, seed=args.seed)
    for r in results:
        line = f"{r.status} {r.name}"
        if r.detail:
            line += f" ({r.detail})"
        print(line)
    return EXIT_FAIL if any(r.passed is False for r in results) else EXIT_OK


def all_graphs(n: int):
    """Every looped simple graph on ``n`` labeled vertices."""
    pairs = n * (n - 1) // 2
    for loop_mask in range(1 << n):
        for edge_mask in range(1 << pairs):
            yield LoopedGraph.from_masks(n, loop_mask, edge_mask)


def random_graph(n: int, rng: random.Random, p_edge: float = 0.5, p_loop: float = 0.5) -> LoopedGraph:
    names = [f"v{i}" for i in range(n)]
    loops = [v for v in names if rng.random() < p_loop]
    edges = [(a, b) for a, b in combinations(names, 2) if rng.random() < p_edge]
    return LoopedGraph(names, loops, edges)


def cmd_selfcheck(args) -> int:
    if args.max_vertices < 0:
        raise UsageError("--max-vertices must be non-negative")
    if args.max_vertices > EXHAUSTIVE_MAX:
        raise EnumerationCapError(
            f"exhaustive selfcheck is capped at {EXHAUSTIVE_MAX} vertices (asked for {args.max_vertices})"
        )
    rng = random.Random(args.seed)
    graphs = list(all_graphs(args.max_vertices))
    exhaustive = len(graphs)
    graphs += [random_graph(rng.randint(*RANDOM_EXTRA_SIZES), rng) for _ in range(args.random_extra)]
    failures = 0
    first = None
    for i, g in enumerate(graphs, 1):
        if i % 1000 == 0:
            log.info("checked %d/%d graphs", i, len(graphs))
        bad = [r for r in run_all(g, seed=args.seed) if r.passed is False]
        if bad:
            failures += 1
            if first is None:
                first = (g, bad[0])
    print(f"exhaustive graphs on {args.max_vertices} vertices: {exhaustive}")
    print(f"random graphs ({RANDOM_EXTRA_SIZES[0]}-{RANDOM_EXTRA_SIZES[1]} vertices): {args.random_extra}")
    print(f"graphs checked: {len(graphs)}")
    print(f"failures: {failures}")
    if first is not None:
        g, r = first
        print(f"first failure: {r.name} on {g!r}")
    return EXIT_FAIL if failures else EXIT_OK


# -- wiring ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="itp", description="Interlace and parametrized Tutte polynomials of looped graphs.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="compute one polynomial")
    p.add_argument("--input", required=True, metavar="FILE")
    p.add_argument("--kind", required=True, choices=KIND_CHOICES)
    p.add_argument("--method", default="subset", choices=METHOD_CHOICES)
    p.add_argument("--params", metavar="FILE", help="parameter file (kind param_rank only)")
    p.add_argument("--eval", metavar="x=R,y=R", help="evaluate at an exact rational point")
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.add_argument("--workers", type=int, default=1, help="threads for subset enumeration")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("check", help="run cross-checks on one graph")
    p.add_argument("--input", required=True, metavar="FILE")
    p.add_argument("--suite", default="all", choices=SUITE_CHOICES)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("selfcheck", help="exhaustive cross-checks on all small graphs")
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-extra", type=int, default=0, metavar="K")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"itp: error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except InputError as exc:
        print(f"itp: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EnumerationCapError as exc:
        print(f"itp: error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
