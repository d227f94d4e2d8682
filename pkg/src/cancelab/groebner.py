"""Buchberger's algorithm and ideal-level queries.

The engine works on *vectors*: dicts ``(position, exponent) -> coefficient``.
Polynomials are vectors supported at position 0, so ideals and submodules of
free modules share one implementation.  Module terms are compared
position-over-term (POT, smaller position index is larger) or term-over-position
(TOP).
"""

from __future__ import annotations

import contextlib
import contextvars
import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .polyring import MonomialOrder, Polynomial, PolynomialRing, monomial_divides

__all__ = [
    "ResourceLimitError",
    "Limits",
    "resource_limits",
    "Ideal",
    "GroebnerBasis",
    "buchberger",
    "normal_form",
    "ideal_member",
    "ideal_equal",
    "krull_dim",
    "power_in_ideal",
    "vector_gb",
    "vector_reduce",
]


class ResourceLimitError(RuntimeError):
    """A configured step or degree cap was exceeded; no answer is given."""


@dataclass(frozen=True)
class Limits:
    max_steps: int = 1_000_000
    max_degree: int = 40


def _default_limits() -> Limits:
    steps = os.environ.get("CANCELAB_MAX_STEPS")
    return Limits(max_steps=int(steps)) if steps else Limits()


_LIMITS: contextvars.ContextVar[Limits | None] = contextvars.ContextVar("cancelab_limits", default=None)


def current_limits() -> Limits:
    return _LIMITS.get() or _default_limits()


@contextlib.contextmanager
def resource_limits(max_steps: int | None = None, max_degree: int | None = None):
    """Temporarily tighten or relax the Buchberger caps."""
    base = current_limits()
    new = Limits(
        max_steps=base.max_steps if max_steps is None else max_steps,
        max_degree=base.max_degree if max_degree is None else max_degree,
    )
    if new.max_steps <= 0 or new.max_degree <= 0:
        raise ValueError("resource caps must be positive")
    token = _LIMITS.set(new)
    try:
        yield new
    finally:
        _LIMITS.reset(token)


# --------------------------------------------------------------------------
# vector engine


def _term_key(order: MonomialOrder, module_order: str):
    okey = order.key
    if module_order == "POT":
        return lambda t: (-t[0], okey(t[1]))
    if module_order == "TOP":
        return lambda t: (okey(t[1]), -t[0])
    raise ValueError(f"unknown module order {module_order!r}")


@lru_cache(maxsize=64)
def _cached_term_key(order: MonomialOrder, module_order: str):
    key = _term_key(order, module_order)
    return lru_cache(maxsize=1 << 16)(key)


class _Counter:
    __slots__ = ("steps", "limit")

    def __init__(self, limit: int):
        self.steps = 0
        self.limit = limit

    def tick(self):
        self.steps += 1
        if self.steps > self.limit:
            raise ResourceLimitError(f"reduction step cap {self.limit} exceeded")


def _sub_multiple(f: dict, g: dict, q, shift: tuple, F):
    """f -= q * x^shift * g, in place."""
    for (pos, e), c in g.items():
        t = (pos, tuple(a + b for a, b in zip(e, shift)))
        if t in f:
            s = F.sub(f[t], F.mul(q, c))
            if F.is_zero(s):
                del f[t]
            else:
                f[t] = s
        else:
            f[t] = F.neg(F.mul(q, c))


def _find_reducer(t, leads_by_pos):
    pos, e = t
    for le, idx in leads_by_pos.get(pos, ()):
        if monomial_divides(le, e):
            return le, idx
    return None


def _reduce(f: dict, basis: list, leads_by_pos: dict, F, key, counter: _Counter | None, full=True) -> dict:
    """Reduce vector ``f`` by monic ``basis`` (full reduction unless ``full`` is False)."""
    f = dict(f)
    rem: dict = {}
    while f:
        t = max(f, key=key)
        hit = _find_reducer(t, leads_by_pos)
        if hit is None:
            if not full:
                rem.update(f)
                return rem
            rem[t] = f.pop(t)
            continue
        le, idx = hit
        if counter is not None:
            counter.tick()
        shift = tuple(a - b for a, b in zip(t[1], le))
        _sub_multiple(f, basis[idx], f[t], shift, F)
    return rem


def _monic(f: dict, F, key) -> dict:
    lt = max(f, key=key)
    inv = F.inv(f[lt])
    if F.is_one(f[lt]):
        return f
    return {t: F.mul(inv, c) for t, c in f.items()}


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def vector_gb(vectors: Iterable[dict], field, order: MonomialOrder, module_order: str = "POT",
              limits: Limits | None = None, ideal: bool = False) -> list[dict]:
    """Reduced Gröbner basis of the submodule spanned by ``vectors``.

    ``ideal=True`` (everything at position 0) enables the coprime-lead criterion,
    which is not valid for proper modules.
    """
    F = field
    limits = limits or current_limits()
    key = _cached_term_key(order, module_order)
    counter = _Counter(limits.max_steps)

    basis: list[dict] = []
    lead: list[tuple] = []  # (pos, exp)
    active: list[int] = []
    pairs: set[tuple[int, int]] = set()

    def leads_index():
        idx: dict = {}
        for i in active:
            idx.setdefault(lead[i][0], []).append((lead[i][1], i))
        return idx

    def check_degree(h):
        deg = max(sum(e) for _, e in h)
        if deg > limits.max_degree:
            raise ResourceLimitError(f"intermediate degree {deg} exceeds cap {limits.max_degree}")

    def coprime(i, j):
        return ideal and all(a == 0 or b == 0 for a, b in zip(lead[i][1], lead[j][1]))

    def add(h):
        k = len(basis)
        basis.append(h)
        pos, e = max(h, key=key)
        lead.append((pos, e))
        same = [i for i in active if lead[i][0] == pos]
        lcms = {i: _lcm(lead[i][1], e) for i in same}
        # Gebauer-Moeller update
        C = list(same)
        D: list[int] = []
        while C:
            i = C.pop(0)
            if coprime(i, k) or not any(monomial_divides(lcms[j], lcms[i]) for j in C + D):
                D.append(i)
        new = {(i, k) for i in D if not coprime(i, k)}
        kept = set()
        for (i, j) in pairs:
            if lead[i][0] == pos:
                lij = _lcm(lead[i][1], lead[j][1])
                if (monomial_divides(e, lij) and _lcm(lead[i][1], e) != lij
                        and _lcm(lead[j][1], e) != lij):
                    continue
            kept.add((i, j))
        pairs.clear()
        pairs.update(kept | new)
        active[:] = [i for i in active if not (lead[i][0] == pos and monomial_divides(e, lead[i][1]))]
        active.append(k)

    for v in vectors:
        if not v:
            continue
        h = _reduce(v, basis, leads_index(), F, key, counter)
        if h:
            check_degree(h)
            add(_monic(h, F, key))

    while pairs:
        def pair_key(p):
            i, j = p
            return (sum(_lcm(lead[i][1], lead[j][1])), j, i)

        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        L = _lcm(lead[i][1], lead[j][1])
        s = {}
        _sub_multiple(s, basis[i], F.neg(F.one), tuple(a - b for a, b in zip(L, lead[i][1])), F)
        _sub_multiple(s, basis[j], F.one, tuple(a - b for a, b in zip(L, lead[j][1])), F)
        if not s:
            continue
        h = _reduce(s, basis, leads_index(), F, key, counter)
        if h:
            check_degree(h)
            add(_monic(h, F, key))

    # interreduce the (already minimal) active set
    G = [basis[i] for i in active]
    out = []
    for n, g in enumerate(G):
        others = G[:n] + G[n + 1:]
        idx: dict = {}
        for m, o in enumerate(others):
            p, e = max(o, key=key)
            idx.setdefault(p, []).append((e, m))
        lt = max(g, key=key)
        tail = dict(g)
        del tail[lt]
        r = _reduce(tail, others, idx, F, key, counter)
        r[lt] = g[lt]
        out.append(r)
    out.sort(key=lambda g: key(max(g, key=key)), reverse=True)
    return out


def vector_reduce(v: dict, gb: Sequence[dict], field, order: MonomialOrder, module_order: str = "POT") -> dict:
    """Normal form of ``v`` with respect to a (monic) Gröbner basis."""
    key = _cached_term_key(order, module_order)
    idx: dict = {}
    for n, g in enumerate(gb):
        p, e = max(g, key=key)
        idx.setdefault(p, []).append((e, n))
    return _reduce(v, list(gb), idx, field, key, _Counter(current_limits().max_steps))


# --------------------------------------------------------------------------
# ideals


def _poly_vec(f: Polynomial, pos: int = 0) -> dict:
    return {(pos, e): c for e, c in f.items()}


def _vec_poly(v: dict, ring: PolynomialRing, pos: int = 0) -> Polynomial:
    return Polynomial(ring, {e: c for (p, e), c in v.items() if p == pos})


class Ideal:
    """An ideal given by generators (zero generators are dropped)."""

    def __init__(self, ring: PolynomialRing, generators: Iterable[Polynomial | str | int]):
        gens = []
        for g in generators:
            g = ring(g)
            if not g.ring.compatible(ring):
                raise ValueError("generator from a different ring")
            if not g.is_zero():
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.generators))})"

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __add__(self, other: Ideal) -> Ideal:
        return Ideal(self.ring, self.generators + other.generators)

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.generators == other.generators

    def __hash__(self):
        return hash((self.ring, self.generators))

    def groebner(self, order: MonomialOrder | None = None) -> GroebnerBasis:
        return buchberger(self, order)

    def contains(self, f) -> bool:
        return normal_form(self.ring(f), self.groebner()).is_zero()

    def is_unit(self) -> bool:
        return self.contains(1)


@dataclass(frozen=True)
class GroebnerBasis:
    ring: PolynomialRing
    order: MonomialOrder
    basis: tuple[Polynomial, ...]
    source: Ideal

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def leading_monomials(self) -> list[tuple]:
        return [g.lm(self.order) for g in self.basis]

    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.basis)


def buchberger(I: Ideal, order: MonomialOrder | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of ``I``; raises :class:`ResourceLimitError` past the caps."""
    order = order or I.ring.order
    return _buchberger_cached(I, order, current_limits())


@lru_cache(maxsize=512)
def _buchberger_cached(I: Ideal, order: MonomialOrder, limits: Limits) -> GroebnerBasis:
    ring = I.ring
    vecs = vector_gb((_poly_vec(g) for g in I.generators), ring.field, order, "POT", limits, ideal=True)
    return GroebnerBasis(ring, order, tuple(_vec_poly(v, ring) for v in vecs), I)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Unique remainder of ``f`` modulo the ideal of ``G``."""
    if not f.ring.compatible(G.ring):
        raise ValueError("descriptor mismatch")
    vecs = [_poly_vec(g) for g in G.basis]
    return _vec_poly(vector_reduce(_poly_vec(f), vecs, G.ring.field, G.order), f.ring)


@lru_cache(maxsize=256)
def _lift_gb(I: Ideal, order: MonomialOrder, limits: Limits):
    """GB of the columns (g_i; e_i) in R^(1+s), POT: yields cofactor certificates."""
    F = I.ring.field
    one = I.ring.zero_exp
    vecs = []
    for i, g in enumerate(I.generators):
        v = _poly_vec(g, 0)
        v[(i + 1, one)] = F.one
        vecs.append(v)
    return vector_gb(vecs, F, order, "POT", limits)


def ideal_member(f, I: Ideal) -> tuple[bool, list[Polynomial] | None]:
    """Membership test with a cofactor certificate ``f = sum h_i g_i``."""
    ring = I.ring
    f = ring(f)
    if not I.generators:
        return (f.is_zero(), [] if f.is_zero() else None)
    gb = _lift_gb(I, ring.order, current_limits())
    r = vector_reduce(_poly_vec(f), gb, ring.field, ring.order)
    if any(p == 0 for p, _ in r):
        return False, None
    cof = [(-_vec_poly(r, ring, i + 1)) for i in range(len(I.generators))]
    return True, cof


def ideal_equal(I1: Ideal, I2: Ideal, order: MonomialOrder | None = None) -> bool:
    if not I1.ring.compatible(I2.ring):
        raise ValueError("descriptor mismatch")
    order = order or I1.ring.order
    return buchberger(I1, order).basis == buchberger(I2, order).basis


def krull_dim(I: Ideal) -> int:
    """dim R/I via maximal independent sets modulo the leading-term ideal; -1 for (1)."""
    ring = I.ring
    if not I.generators:
        return ring.nvars
    G = buchberger(I)
    if G.is_unit_ideal():
        return -1
    leads = G.leading_monomials()
    n = ring.nvars
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if not any(all(k == 0 or i in s for i, k in enumerate(m)) for m in leads):
                return size
    return 0


def power_in_ideal(f, I: Ideal, bound: int) -> int | None:
    """Smallest ``m <= bound`` with ``f^m`` in ``I``, or ``None``."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    ring = I.ring
    f = ring(f)
    G = buchberger(I)
    h = normal_form(f, G)
    for m in range(1, bound + 1):
        if h.is_zero():
            return m
        h = normal_form(h * f, G)
    return None
