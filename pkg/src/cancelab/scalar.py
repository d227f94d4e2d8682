"""Exact coefficient fields: the rationals, prime fields and simple extensions.

Field objects double as descriptors.  Polynomial code works on the raw
values (``Fraction`` for QQ, ``int`` for GF(p), tuples for extensions) through
the field's methods; :class:`FieldElement` is the user-facing wrapper.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import gmpy2

__all__ = [
    "Field",
    "Rationals",
    "PrimeField",
    "SimpleExtension",
    "FieldElement",
    "QQ",
    "GF",
    "parse_field",
    "field_arith",
    "rational_nth_power_test",
    "extension_norm",
    "resultant",
    "is_prime",
]


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


class Field:
    """Base class.  Subclasses implement arithmetic on raw values."""

    characteristic: int = 0

    @property
    def zero(self) -> Any:
        return self.from_int(0)

    @property
    def one(self) -> Any:
        return self.from_int(1)

    def __call__(self, value: Any) -> FieldElement:
        return FieldElement(self, self.convert(value))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def is_one(self, a) -> bool:
        return a == self.one

    def is_constant(self, a) -> bool:
        """True when ``a`` lies in the prime/base subfield (always, except extensions)."""
        return True


class Rationals(Field):
    characteristic = 0

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def convert(self, value) -> Fraction:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("descriptor mismatch")
            return value.value
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero")
        return a / b

    def is_zero(self, a) -> bool:
        return not a

    def to_str(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def from_int(self, n: int) -> int:
        return n % self.p

    def convert(self, value) -> int:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("descriptor mismatch")
            return value.value
        if isinstance(value, Fraction):
            return self.div(value.numerator % self.p, value.denominator % self.p)
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def to_str(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


# --- univariate helpers over a base field (coefficient lists, low degree first)


def _trim(f, F):
    f = list(f)
    while f and F.is_zero(f[-1]):
        f.pop()
    return f


def _umul(f, g, F):
    if not f or not g:
        return []
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return _trim(out, F)


def _udivmod(f, g, F):
    f = _trim(f, F)
    g = _trim(g, F)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [F.zero] * max(len(f) - len(g) + 1, 1)
    lc_inv = F.inv(g[-1])
    while len(f) >= len(g):
        c = F.mul(f[-1], lc_inv)
        shift = len(f) - len(g)
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = F.sub(f[shift + i], F.mul(c, b))
        f = _trim(f, F)
    return _trim(q, F), f


def resultant(f, g, F: Field):
    """Resultant of univariate polynomials given as coefficient lists (low→high).

    Uses ``Res(f, g) = lc(f)^deg(g) * prod g(alpha)`` over the roots of ``f``.
    """
    f = _trim(f, F)
    g = _trim(g, F)
    if not f or not g:
        return F.zero
    m, n = len(f) - 1, len(g) - 1
    if n == 0:
        return F.pow(g[0], m)
    if m < n:
        sign = F.one if (m * n) % 2 == 0 else F.neg(F.one)
        return F.mul(sign, resultant(g, f, F))
    _, r = _udivmod(f, g, F)
    if not r:
        return F.zero
    k = len(r) - 1
    sign = F.one if (m * n) % 2 == 0 else F.neg(F.one)
    return F.mul(sign, F.mul(F.pow(g[-1], m - k), resultant(g, r, F)))


def _has_root_qq(g: list[int]) -> bool:
    """Rational-root test for an integer polynomial (low→high)."""
    if g[0] == 0:
        return True
    lead, const = abs(g[-1]), abs(g[0])
    for p in _divisors(const):
        for q in _divisors(lead):
            for s in (1, -1):
                r = Fraction(s * p, q)
                if sum(c * r**i for i, c in enumerate(g)) == 0:
                    return True
    return False


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _monic_int_model(f: list[Fraction]) -> list[int]:
    """Integer monic g with g(x) = D^n f(x/D) for the common denominator D."""
    n = len(f) - 1
    D = math.lcm(*(c.denominator for c in f))
    return [int(c * D ** (n - i)) for i, c in enumerate(f)]


def _quartic_splits_qq(g: list[int]) -> bool:
    """Whether monic integer quartic g factors as a product of two integer quadratics."""
    d, c, b, a = g[0], g[1], g[2], g[3]
    for q0 in _divisors(d):
        for q in (q0, -q0):
            s = d // q
            if s != q:
                num = c - q * a
                if num % (s - q):
                    continue
                p = num // (s - q)
                r = a - p
                if q + s + p * r == b:
                    return True
            elif c == q * a:
                # p, r are the roots of X^2 - aX + (b - 2q)
                disc = a * a - 4 * (b - 2 * q)
                if disc >= 0 and gmpy2.is_square(disc):
                    return True
    return False


def _upowmod(base, e, mod, F):
    result = [F.one]
    base = _udivmod(base, mod, F)[1]
    while e:
        if e & 1:
            result = _udivmod(_umul(result, base, F), mod, F)[1]
        base = _udivmod(_umul(base, base, F), mod, F)[1]
        e >>= 1
    return result


def _ugcd(f, g, F):
    f, g = _trim(f, F), _trim(g, F)
    while g:
        f, g = g, _udivmod(f, g, F)[1]
    return f


def _irreducible_small(minpoly, base: Field) -> bool:
    n = len(minpoly) - 1
    if isinstance(base, Rationals):
        g = _monic_int_model(minpoly)
        if _has_root_qq(g):
            return False
        if n == 4 and _quartic_splits_qq(g):
            return False
        return True
    # GF(p): no factor of degree <= n // 2  <=>  gcd(f, x^(p^k) - x) = 1 for k <= n // 2
    p = base.p
    x = [base.zero, base.one]
    xp = x
    for _ in range(n // 2):
        xp = _upowmod(xp, p, minpoly, base)
        diff = _trim([base.sub(a, b) for a, b in _zip_pad(xp, x, base)], base)
        if len(_ugcd(minpoly, diff, base)) > 1:
            return False
    return True


def _zip_pad(f, g, F):
    n = max(len(f), len(g))
    return zip(list(f) + [F.zero] * (n - len(f)), list(g) + [F.zero] * (n - len(g)))


class SimpleExtension(Field):
    """k[w]/(minpoly) for k = QQ or GF(p).

    Values are tuples of base-field coefficients of length ``degree``.
    """

    def __init__(self, base: Field, generator: str, minpoly):
        if isinstance(base, SimpleExtension):
            raise ValueError("towers of extensions are not supported")
        coeffs = _trim([base.convert(c) for c in minpoly], base)
        if len(coeffs) < 3:
            raise ValueError("minimal polynomial must have degree >= 2")
        if not base.is_one(coeffs[-1]):
            raise ValueError("minimal polynomial must be monic")
        self.base = base
        self.generator = generator
        self.minpoly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.characteristic = base.characteristic
        if self.degree <= 4:
            if not _irreducible_small(list(coeffs), base):
                raise ValueError(f"minimal polynomial {self._minpoly_str()} is reducible")
            self.minpoly_verified = True
        else:
            warnings.warn("minpoly-unverified: irreducibility not checked above degree 4")
            self.minpoly_verified = False

    def _minpoly_str(self) -> str:
        return _upoly_str(self.minpoly, self.base, self.generator)

    def _reduce(self, f):
        F = self.base
        f = _udivmod(f, list(self.minpoly), F)[1] if len(f) > self.degree else _trim(f, F)
        return tuple(f) + (F.zero,) * (self.degree - len(f))

    def from_int(self, n: int):
        return (self.base.from_int(n),) + (self.base.zero,) * (self.degree - 1)

    def from_base(self, b):
        return (b,) + (self.base.zero,) * (self.degree - 1)

    @property
    def gen(self):
        return self._reduce([self.base.zero, self.base.one])

    def convert(self, value):
        if isinstance(value, FieldElement):
            if value.field == self:
                return value.value
            if value.field == self.base:
                return self.from_base(value.value)
            raise ValueError("descriptor mismatch")
        if isinstance(value, (tuple, list)):
            return self._reduce([self.base.convert(c) for c in value])
        return self.from_base(self.base.convert(value))

    def add(self, a, b):
        F = self.base
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        F = self.base
        return tuple(F.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        return self._reduce(_umul(list(a), list(b), self.base))

    def inv(self, a):
        F = self.base
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid on (a, minpoly)
        r0, r1 = list(self.minpoly), _trim(a, F)
        s0, s1 = [], [F.one]
        while len(r1) > 1:
            q, r = _udivmod(r0, r1, F)
            r0, r1 = r1, r
            s0, s1 = s1, _trim([F.sub(x, y) for x, y in _zip_pad(s0, _umul(q, s1, F), F)], F)
        c = F.inv(r1[0])
        return self._reduce([F.mul(c, x) for x in s1])

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a)

    def is_constant(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a[1:])

    def to_str(self, a) -> str:
        return _upoly_str(a, self.base, self.generator)

    def __eq__(self, other):
        return (
            isinstance(other, SimpleExtension)
            and other.base == self.base
            and other.generator == self.generator
            and other.minpoly == self.minpoly
        )

    def __hash__(self):
        return hash(("ext", self.base, self.generator, self.minpoly))

    def __repr__(self):
        return f"{self.base!r}({self.generator})/({self._minpoly_str()})"


def _upoly_str(coeffs, F: Field, var: str) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if F.is_zero(c):
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        cs = F.to_str(c)
        if mono:
            if cs == "1":
                term = mono
            elif cs == "-1":
                term = "-" + mono
            else:
                term = f"{cs}*{mono}"
        else:
            term = cs
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


_EXT_RE = re.compile(r"^(QQ|GF\((\d+)\))\((\w+)\)/\((.+)\)$")


def parse_field(text: str) -> Field:
    """Parse ``"QQ"``, ``"GF(p)"`` or ``"QQ(w)/(w^3-2)"``."""
    s = text.replace(" ", "")
    if s == "QQ":
        return QQ
    m = re.fullmatch(r"GF\((\d+)\)", s)
    if m:
        return PrimeField(int(m.group(1)))
    m = _EXT_RE.match(s)
    if m:
        base = QQ if m.group(1) == "QQ" else PrimeField(int(m.group(2)))
        gen = m.group(3)
        return SimpleExtension(base, gen, _parse_univariate(m.group(4), gen, base))
    raise ValueError(f"unrecognized field descriptor {text!r}")


def _parse_univariate(text: str, var: str, F: Field) -> list:
    """Parse a sum of terms ``c*var^k`` into a coefficient list."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    terms = re.findall(r"[+-]?[^+-]+", s)
    coeffs: dict[int, Any] = {}
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("+-")
        coeff = Fraction(sign)
        deg = 0
        for factor in term.split("*"):
            if factor == var:
                deg += 1
            elif factor.startswith(var + "^"):
                deg += int(factor[len(var) + 1:])
            else:
                coeff *= Fraction(factor)
        coeffs[deg] = F.add(coeffs.get(deg, F.zero), F.convert(coeff))
    top = max(coeffs)
    return [coeffs.get(i, F.zero) for i in range(top + 1)]


@dataclass(frozen=True)
class FieldElement:
    """An immutable field element with its descriptor."""

    field: Field
    value: Any

    def _coerce(self, other) -> Any:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("descriptor mismatch")
            return other.value
        return self.field.convert(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._coerce(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.value, n))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.convert(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.to_str(self.value)

    def __repr__(self):
        return f"FieldElement({self.field!r}, {self})"


def field_arith(op: str, a: FieldElement, b: FieldElement | None = None):
    """Dispatch ``add|sub|mul|inv|neg|eq`` on field elements."""
    if b is not None and a.field != b.field:
        raise ValueError("descriptor mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    if op == "eq":
        return a == b
    raise ValueError(f"unknown operation {op!r}")


def _int_nth_root(m: int, n: int) -> int | None:
    if m < 0:
        if n % 2 == 0:
            return None
        r = _int_nth_root(-m, n)
        return None if r is None else -r
    root, exact = gmpy2.iroot(m, n)
    return int(root) if exact else None


def rational_nth_power_test(q, n: int) -> tuple[bool, Fraction | None]:
    """Decide whether the nonzero rational ``q`` is an ``n``-th power in QQ.

    Returns ``(True, r)`` with ``r**n == q`` or ``(False, None)``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    q = Fraction(q.value if isinstance(q, FieldElement) else q)
    if q == 0:
        raise ValueError("q must be nonzero")
    num = _int_nth_root(q.numerator, n)
    den = _int_nth_root(q.denominator, n)
    if num is None or den is None:
        return False, None
    return True, Fraction(num, den)


def extension_norm(e: FieldElement) -> FieldElement:
    """Norm from a simple extension to its base field, as Res(minpoly, representative)."""
    L = e.field
    if not isinstance(L, SimpleExtension):
        raise ValueError("element does not lie in a simple extension")
    F = L.base
    value = resultant(list(L.minpoly), list(e.value), F)
    return FieldElement(F, value)
