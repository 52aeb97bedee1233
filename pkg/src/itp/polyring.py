"""Sparse multivariate polynomials with exact integer coefficients.

A monomial is stored sparsely as a sorted tuple of ``(variable, exponent)``
pairs with positive exponents, so polynomials over different variable sets
combine without any realignment.  The dense exponent-vector view used by the
JSON format is produced on demand from the sorted variable list.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Mapping
from fractions import Fraction
from functools import reduce

__all__ = [
    "MultiPoly",
    "PolyDivisionError",
    "PolyParseError",
    "add",
    "mul",
    "neg",
    "substitute",
    "eval_rational",
    "divide_exact",
    "parse_poly",
    "to_json",
    "from_json",
]

Monomial = tuple[tuple[str, int], ...]

_VAR_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PolyDivisionError(ArithmeticError):
    """Raised when a divisor does not divide the dividend exactly."""


class PolyParseError(ValueError):
    pass


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_divides(d: Monomial, m: Monomial) -> Monomial | None:
    """Return ``m / d`` if ``d`` divides ``m``, else ``None``."""
    exps = dict(m)
    for v, e in d:
        left = exps.get(v, 0) - e
        if left < 0:
            return None
        if left:
            exps[v] = left
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


class MultiPoly:
    """Immutable polynomial with integer coefficients over named variables.

    Construct through the helpers (:meth:`const`, :meth:`var`,
    :meth:`from_terms`) or with arithmetic operators.  ``int`` operands are
    promoted automatically.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        # callers guarantee canonical monomials; zero coefficients are dropped here
        self._terms: dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def const(cls, c: int) -> MultiPoly:
        return cls({(): int(c)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> MultiPoly:
        if not _VAR_RE.match(name):
            raise ValueError(f"invalid variable name {name!r}")
        if power < 0:
            raise ValueError("negative exponent")
        return cls({((name, power),) if power else (): 1})

    @classmethod
    def from_terms(cls, variables: Iterable[str], terms: Iterable[tuple[int, Iterable[int]]]) -> MultiPoly:
        """Build from dense ``(coeff, exponent_vector)`` pairs."""
        variables = list(variables)
        acc: dict[Monomial, int] = {}
        for coeff, exp in terms:
            exp = list(exp)
            if len(exp) != len(variables):
                raise ValueError("exponent vector length does not match variables")
            if any(e < 0 for e in exp):
                raise ValueError("negative exponent")
            mono = tuple(sorted((v, e) for v, e in zip(variables, exp) if e))
            acc[mono] = acc.get(mono, 0) + int(coeff)
        return cls(acc)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    @property
    def variables(self) -> tuple[str, ...]:
        names = {v for m in self._terms for v, _ in m}
        return tuple(sorted(names))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._terms.get((), 0)

    def degree(self, var: str | None = None) -> int:
        if not self._terms:
            return 0
        if var is None:
            return max(_mono_degree(m) for m in self._terms)
        return max(dict(m).get(var, 0) for m in self._terms)

    def coefficient(self, exps: Mapping[str, int]) -> int:
        mono = tuple(sorted((v, e) for v, e in exps.items() if e))
        return self._terms.get(mono, 0)

    def dense_terms(self) -> tuple[tuple[str, ...], list[tuple[int, tuple[int, ...]]]]:
        """Variables and ``(coeff, exponent_vector)`` pairs in canonical order.

        Canonical order is graded lexicographic: higher total degree first,
        ties broken by comparing exponent vectors lexicographically, larger
        first, over the sorted variable list.
        """
        variables = self.variables
        pos = {v: i for i, v in enumerate(variables)}
        rows = []
        for m, c in self._terms.items():
            exp = [0] * len(variables)
            for v, e in m:
                exp[pos[v]] = e
            rows.append((c, tuple(exp)))
        rows.sort(key=lambda ce: (-sum(ce[1]), tuple(-e for e in ce[1])))
        return variables, rows

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, int):
            return MultiPoly.const(other)
        return NotImplemented

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> MultiPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> MultiPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other) -> MultiPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, exps: Mapping[str, int]) -> MultiPoly:
        """Multiply by the monomial ``prod(v**e)``."""
        mono = tuple(sorted((v, e) for v, e in exps.items() if e))
        if not mono:
            return self
        return MultiPoly({_mono_mul(m, mono): c for m, c in self._terms.items()})

    def scale(self, k: int) -> MultiPoly:
        return MultiPoly({m: c * k for m, c in self._terms.items()})

    # -- equality / display -------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self) -> str:
        variables, rows = self.dense_terms()
        if not rows:
            return "0"
        parts = []
        for c, exp in rows:
            factors = []
            for v, e in zip(variables, exp):
                if e == 1:
                    factors.append(v)
                elif e:
                    factors.append(f"{v}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        variables, rows = self.dense_terms()
        return {
            "variables": list(variables),
            "terms": [{"coeff": str(c), "exp": list(exp)} for c, exp in rows],
        }


ZERO = MultiPoly()
ONE = MultiPoly.const(1)


def add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p + q


def mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p * q


def neg(p: MultiPoly) -> MultiPoly:
    return -p


def poly_sum(polys: Iterable[MultiPoly]) -> MultiPoly:
    acc: dict[Monomial, int] = {}
    for p in polys:
        for m, c in p.items():
            acc[m] = acc.get(m, 0) + c
    return MultiPoly(acc)


def poly_prod(polys: Iterable[MultiPoly]) -> MultiPoly:
    return reduce(mul, polys, ONE)


def substitute(p: MultiPoly, var: str, value: MultiPoly | int) -> MultiPoly:
    """Replace every ``var**k`` in ``p`` by ``value**k``."""
    if isinstance(value, int):
        value = MultiPoly.const(value)
    if var not in p.variables:
        return p
    powers = {0: ONE}
    out = ZERO
    grouped: dict[int, dict[Monomial, int]] = {}
    for m, c in p.items():
        k = 0
        rest = []
        for v, e in m:
            if v == var:
                k = e
            else:
                rest.append((v, e))
        bucket = grouped.setdefault(k, {})
        rest_t = tuple(rest)
        bucket[rest_t] = bucket.get(rest_t, 0) + c
    for k in sorted(grouped):
        if k not in powers:
            powers[k] = value**k
        out = out + MultiPoly(grouped[k]) * powers[k]
    return out


def substitute_many(p: MultiPoly, values: Mapping[str, MultiPoly | int]) -> MultiPoly:
    """Simultaneous substitution; values may mention substituted names."""
    values = {v: MultiPoly.const(x) if isinstance(x, int) else x for v, x in values.items()}
    cache: dict[tuple[str, int], MultiPoly] = {}
    acc: dict[Monomial, int] = {}
    for m, c in p.items():
        term = MultiPoly.const(c)
        keep = []
        for v, e in m:
            if v in values:
                key = (v, e)
                if key not in cache:
                    cache[key] = values[v] ** e
                term = term * cache[key]
            else:
                keep.append((v, e))
        if keep:
            term = term.shift(dict(keep))
        for tm, tc in term.items():
            acc[tm] = acc.get(tm, 0) + tc
    return MultiPoly(acc)


def eval_rational(p: MultiPoly, point: Mapping[str, Fraction | int]) -> Fraction:
    """Exact value of ``p`` at a rational point."""
    missing = [v for v in p.variables if v not in point]
    if missing:
        raise KeyError(f"unassigned variables: {', '.join(missing)}")
    total = Fraction(0)
    for m, c in p.items():
        term = Fraction(c)
        for v, e in m:
            term *= Fraction(point[v]) ** e
        total += term
    return total


def divide_exact(p: MultiPoly, d: MultiPoly) -> MultiPoly:
    """Quotient ``p / d``; raises :class:`PolyDivisionError` unless exact.

    Uses the division algorithm under graded lex order.  With a single
    divisor the remainder is zero iff ``d`` divides ``p``, so the first
    leading term not divisible by ``LT(d)`` proves inexactness.
    """
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    # fix a common variable order so leading terms are consistent
    names = sorted(set(p.variables) | set(d.variables))
    pos = {v: i for i, v in enumerate(names)}

    def key(m: Monomial):
        exp = [0] * len(names)
        for v, e in m:
            exp[pos[v]] = e
        return (sum(exp), tuple(exp))

    lead_d = max(d.items(), key=lambda mc: key(mc[0]))
    ld_mono, ld_coeff = lead_d
    rem = dict(p.items())
    quot: dict[Monomial, int] = {}
    while rem:
        mono, coeff = max(rem.items(), key=lambda mc: key(mc[0]))
        q_mono = _mono_divides(ld_mono, mono)
        if q_mono is None or coeff % ld_coeff:
            raise PolyDivisionError(f"{d} does not divide {MultiPoly(p.terms)} exactly")
        q_coeff = coeff // ld_coeff
        quot[q_mono] = quot.get(q_mono, 0) + q_coeff
        for m, c in d.items():
            prod = _mono_mul(m, q_mono)
            s = rem.get(prod, 0) - c * q_coeff
            if s:
                rem[prod] = s
            else:
                rem.pop(prod, None)
    return MultiPoly(quot)


# -- text and JSON formats ----------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("var", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    # expr := ['+'|'-'] term (('+'|'-') term)*
    # term := power (('*')? power)*     -- juxtaposition allowed: 2x, (x-1)(y-1)
    # power := atom ('^' int)?
    # atom := int | name | '(' expr ')'

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg: str):
        raise PolyParseError(f"{msg} in {self.text!r}")

    def parse(self) -> MultiPoly:
        if not self.tokens:
            self.fail("empty polynomial")
        p = self.expr()
        if self.i != len(self.tokens):
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> MultiPoly:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> MultiPoly:
        acc = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.power()
            elif kind in ("num", "var") or (kind == "op" and val == "("):
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> MultiPoly:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val = self.take()
            if kind != "num":
                self.fail("exponent must be a non-negative integer")
            return base ** int(val)
        return base

    def atom(self) -> MultiPoly:
        kind, val = self.take()
        if kind == "num":
            return MultiPoly.const(int(val))
        if kind == "var":
            return MultiPoly.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val = self.take()
            if val != ")":
                self.fail("missing ')'")
            return inner
        self.fail("unexpected end of input" if kind is None else f"unexpected token {val!r}")


def parse_poly(text: str) -> MultiPoly:
    """Parse text such as ``x^2 - 2*x + 2*y`` or ``(x-1)*(y-1)``."""
    return _Parser(text).parse()


def to_json(p: MultiPoly) -> str:
    return json.dumps(p.to_dict(), separators=(", ", ": "))


def from_json(data: str | Mapping) -> MultiPoly:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        variables = list(data["variables"])
        terms = [(int(t["coeff"]), t["exp"]) for t in data["terms"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise PolyParseError(f"malformed polynomial JSON: {exc}") from exc
    for v in variables:
        if not isinstance(v, str) or not _VAR_RE.match(v):
            raise PolyParseError(f"invalid variable name {v!r}")
    return MultiPoly.from_terms(variables, terms)
