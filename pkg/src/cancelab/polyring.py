"""Multivariate polynomials over the exact fields in :mod:`cancelab.scalar`.

Polynomials are immutable and store a dict ``exponent tuple -> raw coefficient``
without zero entries.  Term order only matters for printing, leading terms and
division, so it is passed explicitly or taken from the ring's default.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .scalar import Field, FieldElement, SimpleExtension, parse_field

__all__ = [
    "MonomialOrder",
    "LEX",
    "GREVLEX",
    "block_order",
    "PolynomialRing",
    "Polynomial",
    "parse_polynomial",
    "parse_ring",
    "poly_arith",
    "leading_term",
    "multivariate_division",
    "monomial_divides",
    "monomial_lcm",
]


def monomial_divides(a: tuple, b: tuple) -> bool:
    """True when monomial ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _grevlex_key(e: tuple) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


@dataclass(frozen=True)
class MonomialOrder:
    """``lex``, ``grevlex`` or ``block`` (grevlex on each side of ``split``)."""

    kind: str
    split: int | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown order {self.kind!r}")
        if self.kind == "block" and (self.split is None or self.split < 0):
            raise ValueError("block order needs a non-negative split index")

    def key(self, e: tuple) -> tuple:
        """Sort key: larger key means larger monomial."""
        return _order_key(self, e)

    def compare(self, a: tuple, b: tuple) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __str__(self):
        return self.kind if self.kind != "block" else f"block({self.split})"


@lru_cache(maxsize=1 << 18)
def _order_key(order: MonomialOrder, e: tuple) -> tuple:
    if order.kind == "lex":
        return e
    if order.kind == "grevlex":
        return _grevlex_key(e)
    k = order.split
    return (_grevlex_key(e[:k]), _grevlex_key(e[k:]))


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block_order(split: int) -> MonomialOrder:
    return MonomialOrder("block", split)


def parse_order(text: str) -> MonomialOrder:
    text = text.strip()
    if text in ("lex", "grevlex"):
        return MonomialOrder(text)
    m = re.fullmatch(r"block\((\d+)\)", text)
    if m:
        return block_order(int(m.group(1)))
    raise ValueError(f"unknown order {text!r}")


class PolynomialRing:
    """k[x_1, ..., x_n] with a default monomial order."""

    def __init__(self, field: Field, variables: Sequence[str], order: MonomialOrder = GREVLEX):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_]\w*", v):
                raise ValueError(f"bad variable name {v!r}")
        if isinstance(field, SimpleExtension) and field.generator in variables:
            raise ValueError("variable name clashes with the extension generator")
        self.field = field
        self.variables = variables
        self.nvars = len(variables)
        self.order = order
        self._index = {v: i for i, v in enumerate(variables)}

    def __eq__(self, other):
        return (
            isinstance(other, PolynomialRing)
            and self.field == other.field
            and self.variables == other.variables
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.field, self.variables, self.order))

    def __repr__(self):
        return f"{self.field!r}[{','.join(self.variables)}]"

    def compatible(self, other: PolynomialRing) -> bool:
        return self.field == other.field and self.variables == other.variables

    def with_order(self, order: MonomialOrder) -> PolynomialRing:
        return PolynomialRing(self.field, self.variables, order)

    def extend(self, *names: str, order: MonomialOrder | None = None) -> PolynomialRing:
        """Ring with extra variables appended (default order kept unless given)."""
        return PolynomialRing(self.field, self.variables + tuple(names), order or self.order)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    @property
    def zero_exp(self) -> tuple:
        return (0,) * self.nvars

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, c) -> Polynomial:
        c = self.field.convert(c)
        return Polynomial(self, {} if self.field.is_zero(c) else {self.zero_exp: c})

    def gen(self, name: str) -> Polynomial:
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self) -> tuple[Polynomial, ...]:
        return tuple(self.gen(v) for v in self.variables)

    def monomial(self, exp: Sequence[int], coeff=1) -> Polynomial:
        c = self.field.convert(coeff)
        return Polynomial(self, {} if self.field.is_zero(c) else {tuple(exp): c})

    def __call__(self, value) -> Polynomial:
        if isinstance(value, Polynomial):
            if value.ring is self:
                return value
            if value.ring.compatible(self):
                return Polynomial(self, value._terms)
            raise ValueError("descriptor mismatch")
        if isinstance(value, str):
            return parse_polynomial(value, self)
        return self.constant(value)

    def embed(self, f: Polynomial) -> Polynomial:
        """Map ``f`` into this ring by variable name (target must contain its variables)."""
        if f.ring.field != self.field:
            raise ValueError("descriptor mismatch")
        idx = [self.index(v) for v in f.ring.variables]
        terms = {}
        for e, c in f._terms.items():
            new = [0] * self.nvars
            for i, k in zip(idx, e):
                new[i] = k
            terms[tuple(new)] = c
        return Polynomial(self, terms)


class Polynomial:
    """Immutable sparse polynomial."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Mapping[tuple, object]):
        self.ring = ring
        self._terms = dict(terms)
        self._hash = None

    # -- construction helpers
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if not other.ring.compatible(self.ring):
                raise ValueError("descriptor mismatch")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.ring.constant(other)
        return NotImplemented

    # -- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        terms = dict(self._terms)
        for e, c in other._terms.items():
            if e in terms:
                s = F.add(terms[e], c)
                if F.is_zero(s):
                    del terms[e]
                else:
                    terms[e] = s
            else:
                terms[e] = c
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Polynomial(self.ring, {e: F.neg(c) for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        terms: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = F.mul(c1, c2)
                if e in terms:
                    s = F.add(terms[e], c)
                    if F.is_zero(s):
                        del terms[e]
                    else:
                        terms[e] = s
                else:
                    terms[e] = c
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("negative or non-integer power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> Polynomial:
        F = self.ring.field
        c = F.convert(c)
        if F.is_zero(c):
            return self.ring.zero()
        return Polynomial(self.ring, {e: F.mul(c, v) for e, v in self._terms.items()})

    def mul_term(self, exp: tuple, c) -> Polynomial:
        """Multiply by the single term ``c * x^exp`` (``c`` a raw coefficient)."""
        F = self.ring.field
        if F.is_zero(c):
            return self.ring.zero()
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(e, exp)): F.mul(c, v) for e, v in self._terms.items()},
        )

    # -- queries
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self.ring.zero_exp in self._terms)

    def constant_coeff(self) -> FieldElement:
        F = self.ring.field
        return FieldElement(F, self._terms.get(self.ring.zero_exp, F.zero))

    def items(self):
        """Raw ``(exponent, coefficient)`` pairs, unordered."""
        return self._terms.items()

    def coeff(self, exp: Sequence[int]) -> FieldElement:
        F = self.ring.field
        return FieldElement(F, self._terms.get(tuple(exp), F.zero))

    def terms(self, order: MonomialOrder | None = None) -> list[tuple[tuple, FieldElement]]:
        """Terms sorted descending under ``order`` (default: the ring's)."""
        order = order or self.ring.order
        F = self.ring.field
        return [
            (e, FieldElement(F, self._terms[e]))
            for e in sorted(self._terms, key=order.key, reverse=True)
        ]

    def leading_term(self, order: MonomialOrder | None = None) -> tuple[tuple, FieldElement]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        order = order or self.ring.order
        e = max(self._terms, key=order.key)
        return e, FieldElement(self.ring.field, self._terms[e])

    def lm(self, order: MonomialOrder | None = None) -> tuple:
        return self.leading_term(order)[0]

    def lc(self, order: MonomialOrder | None = None) -> FieldElement:
        return self.leading_term(order)[1]

    def monic(self, order: MonomialOrder | None = None) -> Polynomial:
        if not self._terms:
            return self
        return self.scale(self.lc(order).inverse())

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self._terms), default=-1)

    def variables_used(self) -> set[str]:
        return {self.ring.variables[i] for e in self._terms for i, k in enumerate(e) if k}

    def substitute(self, images: Mapping[str, Polynomial], target: PolynomialRing | None = None) -> Polynomial:
        """Ring homomorphism sending each variable to ``images[name]`` (others to themselves)."""
        target = target or self.ring
        gens = []
        for v in self.ring.variables:
            if v in images:
                img = images[v]
                gens.append(img if isinstance(img, Polynomial) else target.constant(img))
            else:
                gens.append(target.gen(v))
        result = target.zero()
        F = self.ring.field
        cache: dict = {}
        for e, c in self._terms.items():
            term = target.constant(FieldElement(F, c))
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = gens[i] ** k
                    term = term * cache[key]
            result = result + term
        return result

    # -- comparison and hashing
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring.compatible(other.ring) and self._terms == other._terms
        if isinstance(other, (int, Fraction, FieldElement)):
            return self._terms == self.ring.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self})"


def _format_coeff(F: Field, c) -> str:
    s = F.to_str(c)
    if isinstance(F, SimpleExtension) and not F.is_constant(c) and ("+" in s or "-" in s[1:]):
        return f"({s})"
    return s


def format_polynomial(f: Polynomial, order: MonomialOrder | None = None) -> str:
    """Canonical text: terms descending, ``-`` folded into coefficients."""
    ring = f.ring
    F = ring.field
    if f.is_zero():
        return "0"
    parts = []
    for e, c in f.terms(order):
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in zip(ring.variables, e) if k
        )
        cs = _format_coeff(F, c.value)
        if not mono:
            term = cs
        elif cs == "1":
            term = mono
        elif cs == "-1":
            term = "-" + mono
        else:
            term = f"{cs}*{mono}"
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


# --- parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif ident is not None:
            tokens.append(("id", ident))
        elif op is not None and not op.isspace():
            if op not in "+-*/^()":
                raise ValueError(f"unexpected character {op!r}")
            tokens.append(("op", op))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolynomialRing):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value):
        kind, v = self.take()
        if v != value:
            raise ValueError(f"expected {value!r}, got {v!r}")

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ValueError("empty input")
        f = self.expr()
        if self.pos != len(self.tokens):
            raise ValueError(f"unexpected token {self.peek()[1]!r}")
        return f

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> Polynomial:
        f = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            f = f * self.factor()
        return f

    def exponent(self) -> int:
        kind, v = self.take()
        if kind != "num":
            raise ValueError(f"malformed exponent {v!r}")
        return int(v)

    def factor(self) -> Polynomial:
        kind, v = self.take()
        ring = self.ring
        if kind == "num":
            c = Fraction(int(v))
            if self.peek() == ("op", "/"):
                self.take()
                k2, d = self.take()
                if k2 != "num" or int(d) == 0:
                    raise ValueError(f"malformed denominator {d!r}")
                c = c / int(d)
            base = ring.constant(c)
        elif kind == "id":
            F = ring.field
            if v in ring._index:
                base = ring.gen(v)
            elif isinstance(F, SimpleExtension) and v == F.generator:
                base = Polynomial(ring, {ring.zero_exp: F.gen})
            else:
                raise ValueError(f"unknown identifier {v!r}")
        elif (kind, v) == ("op", "("):
            base = self.expr()
            self.expect(")")
        elif (kind, v) == ("op", "-"):
            return -self.factor()
        else:
            raise ValueError(f"unexpected token {v!r}")
        if self.peek() == ("op", "^"):
            self.take()
            base = base ** self.exponent()
        return base


def parse_polynomial(text: str, ring: PolynomialRing) -> Polynomial:
    """Parse polynomial text such as ``"z*t-1"`` or ``"(1+x)*y^2"``."""
    return _Parser(text, ring).parse()


def parse_ring(text: str, order: MonomialOrder | str = GREVLEX) -> PolynomialRing:
    """Parse ``"QQ[x,y,z,t]"``, ``"GF(5)[x,y]"`` or ``"QQ(w)/(w^3-2)[x,y]"``."""
    s = text.replace(" ", "")
    m = re.fullmatch(r"(.+)\[([A-Za-z_][\w,]*)\]", s)
    if m is None:
        raise ValueError(f"unrecognized ring descriptor {text!r}")
    if isinstance(order, str):
        order = parse_order(order)
    return PolynomialRing(parse_field(m.group(1)), m.group(2).split(","), order)


def poly_arith(op: str, f: Polynomial, g=None) -> Polynomial:
    """Dispatch ``add|sub|mul|scale|pow``."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    if op == "pow":
        return f ** g
    raise ValueError(f"unknown operation {op!r}")


def leading_term(f: Polynomial, order: MonomialOrder | None = None):
    return f.leading_term(order)


def multivariate_division(
    f: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder | None = None
) -> tuple[list[Polynomial], Polynomial]:
    """Divide ``f`` by ``divisors``; the first divisor whose leading monomial divides wins."""
    ring = f.ring
    order = order or ring.order
    F = ring.field
    if any(g.is_zero() for g in divisors):
        raise ValueError("zero divisor")
    leads = [g.leading_term(order) for g in divisors]
    leads = [(e, c.value) for e, c in leads]
    quotients: list[dict] = [{} for _ in divisors]
    remainder: dict = {}
    p = dict(f._terms)
    key = order.key
    while p:
        e = max(p, key=key)
        c = p[e]
        for i, (le, lc) in enumerate(leads):
            if monomial_divides(le, e):
                shift = tuple(a - b for a, b in zip(e, le))
                q = F.div(c, lc)
                quotients[i][shift] = F.add(quotients[i].get(shift, F.zero), q)
                for ge, gc in divisors[i]._terms.items():
                    te = tuple(a + b for a, b in zip(ge, shift))
                    s = F.sub(p.get(te, F.zero), F.mul(q, gc))
                    if F.is_zero(s):
                        p.pop(te, None)
                    else:
                        p[te] = s
                break
        else:
            remainder[e] = c
            del p[e]
    qs = [Polynomial(ring, {e: c for e, c in q.items() if not F.is_zero(c)}) for q in quotients]
    return qs, Polynomial(ring, remainder)
