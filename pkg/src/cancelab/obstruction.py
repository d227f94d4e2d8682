"""Quotient rings R/J of the three supported shapes and unit equations in them.

An equation ``target ∈ k*·(units)^n`` in R/J is decided here.  Three shapes
of J are recognized, each with an explicit ring model:

* laurent:    J = (other variables, u*v - 1)  gives  k[z, 1/z]
* truncated:  J = (other variables, x^m)      gives  k[x]/x^m
* extension:  J = (other variables, p(x))     gives  k[x]/p(x), p irreducible

Anything else is rejected rather than guessed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from .fpmod import fitting_ideal, is_free_of_rank, present_cokernel, tensor_with_quotient
from .groebner import Ideal, buchberger, normal_form
from .linalg import Matrix, syzygies
from .polyring import Polynomial, PolynomialRing, multivariate_division
from .scalar import (
    FieldElement,
    PrimeField,
    Rationals,
    SimpleExtension,
    extension_norm,
    rational_nth_power_test,
)

__all__ = [
    "RecognitionError",
    "QuotientRecognition",
    "UnitEquation",
    "UnitSolution",
    "recognize_quotient",
    "conormal_module",
    "diagonal_comparison",
    "derive_unit_equation",
    "solve_unit_equation",
    "LaurentRing",
    "TruncatedRing",
    "ExtensionRing",
]


class RecognitionError(ValueError):
    """J does not have one of the supported shapes, or the unit equation is ill-formed."""


# --------------------------------------------------------------------------
# ring models


class LaurentRing:
    """k[z, 1/z]; elements are dicts ``{exponent: raw coefficient}``."""

    kind = "laurent"

    def __init__(self, field, var: str):
        self.field = field
        self.var = var

    def _clean(self, d):
        F = self.field
        return {e: c for e, c in d.items() if not F.is_zero(c)}

    def zero(self):
        return {}

    def one(self):
        return {0: self.field.one}

    def const(self, c):
        return self._clean({0: c})

    def z_power(self, e: int):
        return {e: self.field.one}

    def add(self, a, b):
        F = self.field
        out = dict(a)
        for e, c in b.items():
            out[e] = F.add(out[e], c) if e in out else c
        return self._clean(out)

    def neg(self, a):
        return {e: self.field.neg(c) for e, c in a.items()}

    def mul(self, a, b):
        F = self.field
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                c = F.mul(c1, c2)
                out[e] = F.add(out[e], c) if e in out else c
        return self._clean(out)

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inverse(a), -n
        out = self.one()
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def eq(self, a, b) -> bool:
        return self._clean(a) == self._clean(b)

    def is_unit(self, a) -> bool:
        return len(a) == 1

    def inverse(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError("only monomials are units in a Laurent ring")
        (e, c), = a.items()
        return {-e: self.field.inv(c)}

    def to_str(self, a) -> str:
        if not a:
            return "0"
        F = self.field
        parts = []
        for e in sorted(a, reverse=True):
            c = F.to_str(a[e])
            mono = "" if e == 0 else (self.var if e == 1 else f"{self.var}^{e}")
            if not mono:
                parts.append(c)
            elif c == "1":
                parts.append(mono)
            elif c == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class TruncatedRing:
    """k[x]/x^m; elements are coefficient tuples of length m."""

    kind = "truncated"

    def __init__(self, field, var: str, m: int):
        self.field = field
        self.var = var
        self.m = m

    def zero(self):
        return (self.field.zero,) * self.m

    def one(self):
        return self.const(self.field.one)

    def const(self, c):
        return (c,) + (self.field.zero,) * (self.m - 1)

    def x_power(self, e: int):
        return tuple(self.field.one if i == e else self.field.zero for i in range(self.m))

    def add(self, a, b):
        return tuple(self.field.add(s, t) for s, t in zip(a, b))

    def neg(self, a):
        return tuple(self.field.neg(s) for s in a)

    def mul(self, a, b):
        F = self.field
        out = [F.zero] * self.m
        for i, s in enumerate(a):
            if F.is_zero(s):
                continue
            for j in range(self.m - i):
                out[i + j] = F.add(out[i + j], F.mul(s, b[j]))
        return tuple(out)

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inverse(a), -n
        out = self.one()
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def eq(self, a, b) -> bool:
        return tuple(a) == tuple(b)

    def is_unit(self, a) -> bool:
        return not self.field.is_zero(a[0])

    def inverse(self, a):
        F = self.field
        if not self.is_unit(a):
            raise ZeroDivisionError("non-unit in truncated ring")
        inv0 = F.inv(a[0])
        out = [inv0] + [F.zero] * (self.m - 1)
        for k in range(1, self.m):
            s = F.zero
            for i in range(1, k + 1):
                s = F.add(s, F.mul(a[i], out[k - i]))
            out[k] = F.neg(F.mul(inv0, s))
        return tuple(out)

    def is_constant(self, a) -> bool:
        return all(self.field.is_zero(c) for c in a[1:])

    def to_str(self, a) -> str:
        F = self.field
        parts = []
        for i, c in enumerate(a):
            if F.is_zero(c):
                continue
            cs = F.to_str(c)
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts) if parts else "0"


class ExtensionRing:
    """k[x]/p(x) for irreducible p, backed by :class:`SimpleExtension`."""

    kind = "extension"

    def __init__(self, field, var: str, minpoly):
        self.base = field
        self.var = var
        self.L = SimpleExtension(field, var, minpoly)
        self.minpoly = self.L.minpoly

    def zero(self):
        return self.L.zero

    def one(self):
        return self.L.one

    def const(self, c):
        return self.L.from_base(c)

    def x_power(self, e: int):
        return self.L.pow(self.L.gen, e)

    def add(self, a, b):
        return self.L.add(a, b)

    def neg(self, a):
        return self.L.neg(a)

    def mul(self, a, b):
        return self.L.mul(a, b)

    def pow(self, a, n: int):
        return self.L.pow(a, n)

    def eq(self, a, b) -> bool:
        return tuple(a) == tuple(b)

    def is_unit(self, a) -> bool:
        return not self.L.is_zero(a)

    def inverse(self, a):
        return self.L.inv(a)

    def is_constant(self, a) -> bool:
        return self.L.is_constant(a)

    def norm(self, a) -> FieldElement:
        return extension_norm(FieldElement(self.L, a))

    def to_str(self, a) -> str:
        return self.L.to_str(a)


# --------------------------------------------------------------------------
# recognition


@dataclass
class QuotientRecognition:
    kind: str                      # "laurent" | "truncated" | "extension"
    ideal: Ideal
    model: Any                     # LaurentRing | TruncatedRing | ExtensionRing
    images: dict[str, str]         # variable -> image, as text
    params: dict[str, Any] = field(default_factory=dict)
    checks: dict[str, Any] = field(default_factory=dict)

    def image(self, f: Polynomial):
        """Image of ``f`` under R -> R/J -> model."""
        mod = self.model
        out = mod.zero()
        for e, c in f.items():
            term = mod.const(c)
            for v, k in zip(f.ring.variables, e):
                if k:
                    term = mod.mul(term, mod.pow(self._var_images[v], k))
            out = mod.add(out, term)
        return out

    def describe(self) -> str:
        mod = self.model
        if self.kind == "laurent":
            return f"k[{mod.var},{mod.var}^-1]"
        if self.kind == "truncated":
            return f"k[{mod.var}]/{mod.var}^{mod.m}"
        return f"k[{mod.var}]/({mod.L._minpoly_str()})"


def _single_variable(p: Polynomial) -> str | None:
    """Name of the variable if ``p`` is a scalar multiple of it."""
    terms = list(p.items())
    if len(terms) != 1:
        return None
    e, _ = terms[0]
    if sum(e) != 1:
        return None
    return p.ring.variables[e.index(1)]


def _laurent_pair(p: Polynomial) -> tuple[str, str] | None:
    """``(u, v)`` if ``p`` is ``c*(u*v - 1)`` for distinct variables u, v."""
    terms = dict(p.items())
    if len(terms) != 2:
        return None
    F = p.ring.field
    n = p.ring.nvars
    zero = (0,) * n
    if zero not in terms:
        return None
    c0 = terms.pop(zero)
    (e, c), = terms.items()
    if sorted(e) != [0] * (n - 2) + [1, 1]:
        return None
    if not F.is_zero(F.add(c0, c)):
        return None
    idx = [i for i, k in enumerate(e) if k]
    return p.ring.variables[idx[0]], p.ring.variables[idx[1]]


def _univariate(p: Polynomial) -> tuple[str, list] | None:
    used = p.variables_used()
    if len(used) != 1:
        return None
    v = used.pop()
    i = p.ring.index(v)
    F = p.ring.field
    deg = p.degree_in(v)
    coeffs = [F.zero] * (deg + 1)
    for e, c in p.items():
        coeffs[e[i]] = c
    return v, coeffs


def recognize_quotient(J: Ideal, samples: int = 20, seed: int = 0) -> QuotientRecognition:
    """Identify R/J with a Laurent, truncated, or finite extension ring.

    The reduced Gröbner basis of J must consist of single variables together
    with one further generator of a supported shape.  The variable images are
    then verified: J maps to zero, and the image is multiplicative on
    ``samples`` random normal forms.
    """
    ring = J.ring
    F = ring.field
    G = buchberger(J)
    singles: list[str] = []
    rest: list[Polynomial] = []
    for g in G.basis:
        v = _single_variable(g)
        if v is not None:
            singles.append(v)
        else:
            rest.append(g)
    if len(rest) != 1:
        raise RecognitionError(f"unsupported ideal shape: {J}")
    g = rest[0]
    free = [v for v in ring.variables if v not in singles]
    images: dict[str, str] = {v: "0" for v in singles}
    pair = _laurent_pair(g)
    if pair is not None and len(free) == 2 and set(pair) == set(free):
        u, w = free  # ring order picks the Laurent variable
        model = LaurentRing(F, u)
        var_images = {u: model.z_power(1), w: model.z_power(-1)}
        images.update({u: u, w: f"{u}^-1"})
        kind, params = "laurent", {"variable": u}
    else:
        uni = _univariate(g)
        if uni is None or len(free) != 1 or uni[0] != free[0]:
            raise RecognitionError(f"unsupported ideal shape: {J}")
        v, coeffs = uni
        lead = coeffs[-1]
        monic = [F.div(c, lead) for c in coeffs]
        if all(F.is_zero(c) for c in monic[:-1]):
            m = len(monic) - 1
            model = TruncatedRing(F, v, m)
            var_images = {v: model.x_power(1)}
            kind, params = "truncated", {"variable": v, "m": m}
        else:
            if len(monic) == 2:
                raise RecognitionError("linear generator: quotient is k itself, not an extension")
            try:
                model = ExtensionRing(F, v, monic)
            except ValueError as exc:
                raise RecognitionError(str(exc)) from exc
            var_images = {v: model.x_power(1)}
            kind, params = "extension", {"variable": v, "minpoly": model.L._minpoly_str()}
        images[v] = v
    for s in singles:
        var_images[s] = model.zero()
    rec = QuotientRecognition(kind, J, model, images, params)
    rec._var_images = var_images
    _verify_recognition(rec, G, samples, seed)
    return rec


def _random_poly(ring: PolynomialRing, rnd: random.Random, terms: int = 4, deg: int = 3) -> Polynomial:
    F = ring.field
    out = ring.zero()
    for _ in range(terms):
        e = tuple(rnd.randint(0, deg) for _ in range(ring.nvars))
        c = rnd.randint(-3, 3)
        if isinstance(F, PrimeField):
            c %= F.p
        out = out + ring.monomial(e, c)
    return out


def _verify_recognition(rec: QuotientRecognition, G, samples: int, seed: int) -> None:
    mod = rec.model
    zero = mod.zero()
    for g in rec.ideal.generators:
        if not mod.eq(rec.image(g), zero):
            raise RecognitionError(f"generator {g} does not vanish under the recognized map")
    rnd = random.Random(seed)
    ring = rec.ideal.ring
    for _ in range(samples):
        f = _random_poly(ring, rnd)
        h = _random_poly(ring, rnd)
        nf_prod = normal_form(f * h, G)
        lhs = rec.image(nf_prod)
        rhs = mod.mul(rec.image(normal_form(f, G)), rec.image(normal_form(h, G)))
        if not mod.eq(lhs, rhs):
            raise RecognitionError("recognized map is not multiplicative on normal forms")
    rec.checks = {"generators_vanish": True, "random_normal_forms": samples, "seed": seed}


# --------------------------------------------------------------------------
# deriving the equation


def diagonal_comparison(v1, v2) -> list[Polynomial]:
    """Entries ``d_j`` with ``d_j * v1_j == v2_j``; raises when some quotient is not exact."""
    v1, v2 = list(v1), list(v2)
    if len(v1) != len(v2):
        raise RecognitionError("generator rows differ in length")
    out = []
    for a, b in zip(v1, v2):
        if a.is_zero():
            raise RecognitionError("zero entry in v1")
        (q,), r = multivariate_division(b, [a])
        if not r.is_zero() or q * a != b:
            raise RecognitionError(f"{b} is not a multiple of {a}")
        out.append(q)
    return out


@dataclass
class ConormalReport:
    module: Any
    rank: int
    free: bool
    fitting: dict[str, str]


def conormal_module(v1, J: Ideal) -> ConormalReport:
    """I/JI for ``I = (v1)``, presented as ``R^r / (Syz(v1) + J R^r)``; freeness via Fitting ideals."""
    ring = J.ring
    row = Matrix.row(ring, list(v1))
    r = row.ncols
    S = syzygies(row)
    Mod = tensor_with_quotient(present_cokernel(S, name="I"), J, name="I/JI")
    free = is_free_of_rank(Mod, r)
    fit_lo = fitting_ideal(Mod, r - 1)
    fit_hi = fitting_ideal(Mod, r)
    G_lo = buchberger(fit_lo + J)
    return ConormalReport(Mod, r, free, {
        f"Fitt_{r - 1}+J": "; ".join(str(g) for g in G_lo.basis),
        f"Fitt_{r}": "(1)" if fit_hi.is_unit() else str(fit_hi),
    })


@dataclass
class UnitEquation:
    recognition: QuotientRecognition
    target: Any                    # element of recognition.model
    exponent: int
    scalar_freedom: bool = True
    det: Polynomial | None = None
    transcript: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.exponent < 1:
            raise RecognitionError("exponent must be positive")
        if not self.recognition.model.is_unit(self.target):
            raise RecognitionError("target is not a unit of the recognized ring")

    def describe(self) -> str:
        rec = self.recognition
        scal = "k*·" if self.scalar_freedom else ""
        return (f"{rec.model.to_str(self.target)} ∈ {scal}(units)^{self.exponent} "
                f"in {rec.describe()}")


def derive_unit_equation(pair, recognition: QuotientRecognition | None = None) -> UnitEquation:
    """Turn a pair with diagonal comparison into ``det D ∈ k*·(units)^(r-1)`` in R/J.

    ``pair`` needs ``v1``, ``v2`` (sequences of polynomials) and ``J``.  If an
    isomorphism M1 -> M2 existed, its dual would be congruent to ``a·D``
    modulo J for a unit a, with determinant ``c·a`` for a scalar c.  Since
    ``det(a·D) = a^r det D`` this gives ``det D = c·(1/a)^(r-1)`` in R/J.
    """
    J = pair.J
    rec = recognition or recognize_quotient(J)
    D = diagonal_comparison(pair.v1, pair.v2)
    r = len(D)
    con = conormal_module(pair.v1, J)
    if not con.free:
        raise RecognitionError("conormal module I/JI is not free of full rank")
    det = pair.v1[0].ring.one()
    for d in D:
        det = det * d
    target = rec.image(det)
    n = r - 1
    transcript = [
        f"D = diag[{', '.join(str(d) for d in D)}] with d_j * v1_j = v2_j",
        f"I/JI free of rank {r} over R/J (Fitting ideals {con.fitting})",
        "isomorphism M1 -> M2 would give phi* ≡ a·D mod J, a a unit of R/J",
        f"det(phi*) = a^{r}·det D and det(phi*) = c·a with c ∈ k*",
        f"hence det D = {det} ≡ c·(a^-1)^{n} in {rec.describe()}",
        f"instance: {rec.kind} quotient, r = {r}, exponent r-1 = {n}",
    ]
    return UnitEquation(rec, target, n, True, det, transcript)


# --------------------------------------------------------------------------
# solving


@dataclass
class UnitSolution:
    status: str                    # "solvable" | "unsolvable" | "inconclusive"
    reason: str
    witness: dict[str, str] | None = None
    checks: dict[str, Any] = field(default_factory=dict)

    @property
    def solvable(self) -> bool:
        return self.status == "solvable"

    @property
    def unsolvable(self) -> bool:
        return self.status == "unsolvable"


def _check_witness(eq: UnitEquation, u, c) -> bool:
    mod = eq.recognition.model
    return mod.eq(mod.mul(mod.const(c), mod.pow(u, eq.exponent)), eq.target)


def _scalar_root(F, c, n: int):
    """An n-th root of the scalar c in F, or None."""
    if isinstance(F, Rationals):
        ok, r = rational_nth_power_test(c, n)
        return r if ok else None
    if isinstance(F, PrimeField):
        for a in range(1, F.p):
            if pow(a, n, F.p) == c % F.p:
                return a
        return None
    return None  # pragma: no cover


def _solved(eq: UnitEquation, u, c, reason: str) -> UnitSolution:
    mod = eq.recognition.model
    F = mod.field if hasattr(mod, "field") else mod.base
    if not eq.scalar_freedom:
        root = _scalar_root(F, c, eq.exponent)
        if root is None:
            return UnitSolution("unsolvable",
                                f"scalar {F.to_str(c)} is not a perfect power of order {eq.exponent} in k")
        u = mod.mul(u, mod.const(root))
        c = F.one
    if not _check_witness(eq, u, c):  # pragma: no cover
        raise ArithmeticError("witness failed re-check")
    return UnitSolution("solvable", reason,
                        {"u": mod.to_str(u), "c": F.to_str(c)}, {"witness_rechecked": True})


def _solve_laurent(eq: UnitEquation) -> UnitSolution:
    mod: LaurentRing = eq.recognition.model
    (e, c), = eq.target.items()
    n = eq.exponent
    if e % n:
        return UnitSolution(
            "unsolvable",
            f"units of {eq.recognition.describe()} are c·{mod.var}^m; "
            f"(c·{mod.var}^m)^{n} has exponent {n}m, but the target has exponent {e} "
            f"and {n} does not divide {e}",
            checks={"target_exponent": e, "n": n, "divides": False})
    return _solved(eq, mod.z_power(e // n), c, f"{n} divides the exponent {e}")


def _nth_root_one_plus(mod: TruncatedRing, a, n: int):
    """Root ``w`` with ``w^n == a`` and ``w_0 = 1``, for ``a_0 == 1`` and n invertible."""
    F = mod.field
    w = list(mod.one())
    ninv = F.inv(F.from_int(n))
    for k in range(1, mod.m):
        cur = mod.pow(tuple(w), n)
        # coefficient k of w^n is n*w_k + (terms in lower w_i); fix w_k
        diff = F.sub(a[k], cur[k])
        w[k] = F.mul(diff, ninv)
    return tuple(w)


def _solve_truncated(eq: UnitEquation) -> UnitSolution:
    mod: TruncatedRing = eq.recognition.model
    F = mod.field
    n = eq.exponent
    t = eq.target
    c = t[0]
    a = mod.mul(mod.const(F.inv(c)), t)        # 1 + nilpotent
    p = F.characteristic
    s, n_prime = 0, n
    if p:
        while n_prime % p == 0:
            n_prime //= p
            s += 1
    if s == 0:
        w = _nth_root_one_plus(mod, a, n)
        return _solved(eq, w, c, f"{n} is invertible in k; root built term by term")
    q = p ** s
    # over F_p, u^q = sum u_i x^(i q): only exponents divisible by q survive
    bad = [i for i in range(1, mod.m) if i % q and not F.is_zero(a[i])]
    span = [mod.to_str(mod.pow(mod.add(mod.one(), mod.x_power(i)), q)) for i in range(1, mod.m)]
    if bad:
        return UnitSolution(
            "unsolvable",
            f"in characteristic {p}, (sum u_i {mod.var}^i)^{q} = sum u_i {mod.var}^(i*{q}); "
            f"so k*·(units)^{n} has no {mod.var}^{bad[0]} term, but the "
            f"target {mod.to_str(t)} does",
            checks={"q": q, "offending_degrees": bad,
                    "qth_powers_of_spanning_units": span})
    v = tuple(a[i * q] if i * q < mod.m else F.zero for i in range(mod.m))
    if not mod.eq(mod.pow(v, q), a):  # pragma: no cover
        raise ArithmeticError("Frobenius root failed")
    w = _nth_root_one_plus(mod, v, n_prime) if n_prime > 1 else v
    return _solved(eq, w, c, f"target lies in k*·(units)^{q} and {n_prime} is invertible")


def _solve_extension(eq: UnitEquation) -> UnitSolution:
    mod: ExtensionRing = eq.recognition.model
    F = mod.base
    n = eq.exponent
    t = eq.target
    if mod.is_constant(t):
        return _solved(eq, mod.one(), t[0], "target is a scalar")
    N = mod.norm(t)
    d = mod.L.degree
    checks: dict[str, Any] = {"norm": F.to_str(N.value), "degree": d}
    if not isinstance(F, Rationals) or d % n:
        return UnitSolution("inconclusive",
                            "norm criterion needs k = QQ and n dividing [L:k]", checks=checks)
    # N(c·u^n) = c^d·N(u)^n is an n-th power when n | d
    tests = {}
    for sign in (1, -1):
        ok, _ = rational_nth_power_test(sign * N.value, n)
        tests[F.to_str(sign * N.value)] = ok
    checks["nth_power_tests"] = tests
    if any(tests.values()):
        return UnitSolution("inconclusive",
                            "norm is ± an n-th power; the norm criterion does not decide",
                            checks=checks)
    return UnitSolution(
        "unsolvable",
        f"N(c·u^{n}) = c^{d}·N(u)^{n} is a perfect power of order {n} in QQ since {n} | {d}, "
        f"but N(target) = {F.to_str(N.value)} and neither ±{F.to_str(abs(N.value))} "
        f"is a perfect power of order {n}",
        checks=checks)


def solve_unit_equation(eq: UnitEquation) -> UnitSolution:
    """Decide ``target ∈ k*·(units)^n``; answers are witnessed or carry a checkable reason."""
    kind = eq.recognition.kind
    if kind == "laurent":
        return _solve_laurent(eq)
    if kind == "truncated":
        return _solve_truncated(eq)
    return _solve_extension(eq)
