"""Transvections and explicit isomorphisms for ``A ⊕ M / (x, v)A`` with M free.

Notation: for ``x ∈ A`` and ``v ∈ M = A^n`` write ``Q(x, v)`` for the
cokernel of ``A -> A ⊕ M``, ``1 -> (x, v)``.  All isomorphisms produced here
are matrices on ``A^(1+n)`` (or between explicit presentations) and are
re-checked by :func:`cancelab.fpmod.is_isomorphism` before being returned.

Only free M with an explicit A-basis ``m = m_1, ..., m_n`` is supported; the
general case needs a local-global patching step with no constructive
counterpart here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .fpmod import (
    IsoResult,
    ModuleMap,
    PresentedModule,
    free_module,
    generic_rank,
    is_free_of_rank,
    is_isomorphism,
    present_cokernel,
    tensor_with_quotient,
)
from .groebner import Ideal, ideal_member
from .linalg import FreeModuleElement, Matrix, determinant, lift
from .polyring import Polynomial, PolynomialRing

__all__ = [
    "UnsupportedInstance",
    "UnimodularPair",
    "BidiagonalMatrix",
    "IsoCertificate",
    "make_pair",
    "quotient_module",
    "transvect",
    "lemma2_iso",
    "build_phi_matrix",
    "lemma3_iso",
]


class UnsupportedInstance(ValueError):
    """Input outside the free-module setting handled constructively."""


def _col(ring, x, v) -> Matrix:
    return Matrix.column(ring, [x] + list(v))


def quotient_module(ring: PolynomialRing, x: Polynomial, v: Sequence[Polynomial],
                    name: str | None = None) -> PresentedModule:
    """``Q(x, v) = A^(1+n) / (x, v)A``."""
    return present_cokernel(_col(ring, x, v), name=name or "Q")


@dataclass
class IsoCertificate:
    source: PresentedModule
    target: PresentedModule
    map: ModuleMap
    inverse: ModuleMap
    steps: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(ok for _, ok in self.steps)

    def revalidate(self) -> bool:
        """Both composites are the identity modulo relations."""
        return (self.inverse.compose(self.map).equals(self.source.identity())
                and self.map.compose(self.inverse).equals(self.target.identity()))


def _certify(phi: ModuleMap, label: str, steps: list | None = None) -> IsoCertificate:
    check: IsoResult = is_isomorphism(phi)
    if not check:
        raise ArithmeticError(f"{label}: not an isomorphism ({check.reason})")
    cert = IsoCertificate(phi.source, phi.target, phi, check.inverse, list(steps or []))
    cert.steps.append((f"{label}: is_isomorphism", True))
    return cert


# --------------------------------------------------------------------------
# unimodular pairs


@dataclass
class UnimodularPair:
    """``(a, m)`` with ``A -> A ⊕ M`` split, witnessed by ``a*b + phi(m) = 1``."""

    ring: PolynomialRing
    a: Polynomial
    m: FreeModuleElement
    b: Polynomial
    phi: tuple            # linear form M -> A, as a row of polynomials
    basis: tuple | None = None   # m_1 = m, ..., m_n with images a basis of M/aM

    @property
    def n(self) -> int:
        return self.m.rank

    def witness_holds(self) -> bool:
        if len(self.phi) != self.n:
            return False
        total = self.a * self.b
        for f, c in zip(self.phi, self.m):
            total = total + f * c
        return total == self.ring.one()

    def basis_matrix(self) -> Matrix:
        if self.basis is None:
            raise UnsupportedInstance("no basis data")
        return Matrix.from_columns(self.ring, self.n, [tuple(v) for v in self.basis])

    def basis_ok_mod_a(self) -> bool:
        if self.basis is None:
            return False
        if tuple(self.basis[0]) != tuple(self.m):
            return False
        return (Ideal(self.ring, [determinant(self.basis_matrix()), self.a])).is_unit()

    def basis_inverse(self) -> Matrix:
        """Inverse of the basis matrix over A; only free M with an honest basis is supported."""
        B = self.basis_matrix()
        inv = lift(B, Matrix.identity(self.ring, self.n))
        if inv is None or B * inv != Matrix.identity(self.ring, self.n):
            raise UnsupportedInstance("basis data is not an A-basis of M")
        return inv

    def module(self, d: int = 1) -> PresentedModule:
        return quotient_module(self.ring, self.a ** d, self.m.coords, name=f"Q(a^{d},m)")


def make_pair(ring: PolynomialRing, a, m: Sequence, basis: Sequence[Sequence] | None = None) -> UnimodularPair:
    """Build and certify a pair; the split witness comes from an ideal-membership certificate."""
    a = ring(a)
    m = FreeModuleElement(ring, [ring(c) for c in m])
    entries = [a] + list(m.coords)
    # Ideal drops zero generators, so keep track of positions
    nonzero = [i for i, e in enumerate(entries) if not e.is_zero()]
    ok, found = ideal_member(ring.one(), Ideal(ring, [entries[i] for i in nonzero]))
    if not ok:
        raise ValueError("(a, m) is not unimodular: no b, phi with ab + phi(m) = 1")
    cof = [ring.zero()] * len(entries)
    for i, c in zip(nonzero, found):
        cof[i] = c
    if basis is None:
        basis = [m] + [FreeModuleElement.unit(ring, m.rank, i) for i in range(1, m.rank)]
    basis = tuple(FreeModuleElement(ring, [ring(c) for c in v]) for v in basis)
    pair = UnimodularPair(ring, a, m, cof[0], tuple(cof[1:]), basis)
    _check_pair(pair)
    if not pair.basis_ok_mod_a():
        pair.basis = None
    return pair


def _check_pair(pair: UnimodularPair) -> None:
    if not pair.witness_holds():
        raise ArithmeticError("split witness fails: a*b + phi(m) != 1")
    aI = Ideal(pair.ring, [pair.a])
    if aI.is_unit():
        return  # M/aM = 0
    quot = tensor_with_quotient(free_module(pair.ring, pair.n), aI)
    if not is_free_of_rank(quot, pair.n):
        raise ArithmeticError("M/aM is not free of rank n")


def transvect(pair: UnimodularPair, move: str, data) -> tuple[UnimodularPair, IsoCertificate]:
    """Apply ``a -> a + phi'(m)`` (``move="a"``, data a linear form) or
    ``m -> m + a m'`` (``move="m"``, data an element of M).

    Returns the new pair and the certified isomorphism ``Q(a, m) -> Q(new)``
    induced by the elementary matrix.
    """
    R = pair.ring
    n = pair.n
    one, zero = R.one(), R.zero()
    if move == "a":
        f = tuple(R(c) for c in data)
        if len(f) != n:
            raise ValueError("linear form has wrong length")
        fm = sum((fi * mi for fi, mi in zip(f, pair.m)), R.zero())
        new_a = pair.a + fm
        E = Matrix(R, [[one] + list(f)] + [[zero] + [one if i == j else zero for j in range(n)]
                                           for i in range(n)], n + 1, n + 1)
        new_phi = tuple(p - pair.b * fi for p, fi in zip(pair.phi, f))
        new = UnimodularPair(R, new_a, pair.m, pair.b, new_phi, pair.basis)
    elif move == "m":
        mp = FreeModuleElement(R, [R(c) for c in data])
        if mp.rank != n:
            raise ValueError("element has wrong rank")
        new_m = pair.m + mp * pair.a
        E = Matrix(R, [[one] + [zero] * n] + [[mp[i]] + [one if i == j else zero for j in range(n)]
                                              for i in range(n)], n + 1, n + 1)
        phim = sum((p * c for p, c in zip(pair.phi, mp)), R.zero())
        basis = None if pair.basis is None else (new_m,) + tuple(pair.basis[1:])
        new = UnimodularPair(R, pair.a, new_m, pair.b - phim, pair.phi, basis)
    else:
        raise ValueError(f"unknown move {move!r}")
    _check_pair(new)
    if new.basis is not None and not new.basis_ok_mod_a():
        new.basis = None
    phi = ModuleMap(pair.module(), new.module(), E, name=f"transvection({move})")
    cert = _certify(phi, "transvection", [("split witness re-certified", True)])
    return new, cert


# --------------------------------------------------------------------------
# isomorphism A ⊕ M/(a^d, m) -> A ⊕ M/(a^d, m + a m')


def _elementary(R, size: int, entries: dict) -> Matrix:
    one, zero = R.one(), R.zero()
    rows = [[one if i == j else zero for j in range(size)] for i in range(size)]
    for (i, j), v in entries.items():
        rows[i][j] = rows[i][j] + v
    return Matrix(R, rows, size, size)


def _reduce_to_e2(R, x: Sequence[Polynomial], beta, gamma) -> tuple[Matrix, Matrix]:
    """Elementary ``E`` (and its inverse) with ``E x = e_2``, given ``beta*x0 + gamma*x1 = 1``."""
    size = len(x)
    s = R.one() - x[2]
    Ea = _elementary(R, size, {(2, 0): s * beta, (2, 1): s * gamma})
    Ea_inv = _elementary(R, size, {(2, 0): -(s * beta), (2, 1): -(s * gamma)})
    y = Ea * Matrix.column(R, list(x))
    Eb = _elementary(R, size, {(k, 2): -y[k, 0] for k in range(size) if k != 2})
    Eb_inv = _elementary(R, size, {(k, 2): y[k, 0] for k in range(size) if k != 2})
    E, E_inv = Eb * Ea, Ea_inv * Eb_inv
    target = [R.one() if k == 2 else R.zero() for k in range(size)]
    if E * Matrix.column(R, list(x)) != Matrix.column(R, target):  # pragma: no cover
        raise ArithmeticError("elementary reduction failed")
    return E, E_inv


def lemma2_iso(pair: UnimodularPair, m_prime: Sequence, d: int) -> IsoCertificate:
    """Certified isomorphism ``Q(a^d, m) -> Q(a^d, m + a m')``.

    For n >= 2, in the basis ``m_1 = m, ..., m_n`` the two relation columns are
    ``(a^d, 1, 0, ...)`` and ``(a^d, 1 + a c_1, a c_2, ...)`` with
    ``m' = sum c_i m_i``.  Since ``beta a^d + gamma (1 + a c_1) = 1`` for
    ``gamma = sum_{k<d} (-a c_1)^k`` and ``beta = (-c_1)^d``, the third entry
    can be made 1 and everything else cleared by elementary operations.
    For n = 1 both modules map isomorphically to A by the determinant form.
    """
    if d < 1:
        raise ValueError("d must be positive")
    R = pair.ring
    n = pair.n
    mp = FreeModuleElement(R, [R(c) for c in m_prime])
    ad = pair.a ** d
    new_m = pair.m + mp * pair.a
    src = quotient_module(R, ad, pair.m.coords, name=f"Q(a^{d},m)")
    tgt = quotient_module(R, ad, new_m.coords, name=f"Q(a^{d},m+am')")
    steps: list[tuple[str, bool]] = []
    if mp.is_zero():
        return _certify(ModuleMap(src, tgt, Matrix.identity(R, n + 1), name="identity"),
                        "transvection iso (m'=0)")
    if n == 1:
        # (x, w) -> x*v1 - w*v0 kills (v0, v1); unimodularity makes it an iso onto A
        A1 = free_module(R, 1, name="A")
        det_src = ModuleMap(src, A1, Matrix.row(R, [pair.m[0], -ad]), name="det")
        det_tgt = ModuleMap(tgt, A1, Matrix.row(R, [new_m[0], -ad]), name="det")
        c1 = _certify(det_src, "transvection iso n=1 determinant (source)")
        c2 = _certify(det_tgt, "transvection iso n=1 determinant (target)")
        phi = c2.inverse.compose(det_src)
        phi.name = "transvection iso"
        return _certify(phi, "transvection iso", c1.steps + c2.steps)
    if pair.basis is None:
        raise UnsupportedInstance("transvection iso needs basis data m_1 = m, ..., m_n")
    Binv = pair.basis_inverse()
    c = Binv * mp
    steps.append(("coordinates of m' in the basis", pair.basis_matrix() * c == mp))
    c1 = c[0]
    x1 = [ad, R.one()] + [R.zero()] * (n - 1)
    x2 = [ad, R.one() + pair.a * c1] + [pair.a * c[i] for i in range(1, n)]
    gamma = R.zero()
    term = R.one()
    for _ in range(d):
        gamma = gamma + term
        term = term * (-(pair.a * c1))
    beta = (-c1) ** d
    steps.append(("beta*a^d + gamma*(1 + a c_1) = 1", beta * ad + gamma * x2[1] == R.one()))
    E1, _ = _reduce_to_e2(R, x1, R.zero(), R.one())
    E2, E2_inv = _reduce_to_e2(R, x2, beta, gamma)
    C = Matrix.block_diag(R, Matrix.identity(R, 1), pair.basis_matrix())
    C_inv = Matrix.block_diag(R, Matrix.identity(R, 1), Binv)
    F = C * E2_inv * E1 * C_inv
    steps.append(("F (a^d, m) = (a^d, m + a m')",
                  F * _col(R, ad, pair.m.coords) == _col(R, ad, new_m.coords)))
    phi = ModuleMap(src, tgt, F, name="transvection iso")
    return _certify(phi, "transvection iso", steps)


# --------------------------------------------------------------------------
# isomorphism A ⊕ M/(a^n, m) -> M through the phi-matrix module


@dataclass
class BidiagonalMatrix:
    """``phi(t)``: ``e_1 -> a e_1``, ``e_i -> t e_(i-1) + a e_i``.

    ``matrix`` has the images as columns (so t sits above the diagonal);
    :meth:`rows_as_images` gives the transposed listing, images as rows.
    """

    n: int
    a: Polynomial
    t: Polynomial
    matrix: Matrix

    def rows_as_images(self) -> Matrix:
        return self.matrix.T

    def at(self, value, ring: PolynomialRing) -> Matrix:
        """Specialize t to a constant, landing in ``ring``."""
        name = self.t.ring.variables[-1]
        return self.matrix.substitute({name: ring.constant(value)}, ring)

    def image(self, v: Sequence) -> FreeModuleElement:
        return self.matrix * FreeModuleElement(self.matrix.ring, v)


def build_phi_matrix(n: int, a: Polynomial, t_name: str = "t") -> BidiagonalMatrix:
    """The bidiagonal ``phi(t)`` over ``A[t]`` (t appended as a fresh variable)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    A = a.ring
    if t_name in A.variables:
        B = A
    else:
        B = A.extend(t_name)
    a_B = B.embed(a)
    t = B.gen(t_name)
    z = B.zero()
    rows = [[z] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = a_B
        if i + 1 < n:
            rows[i][i + 1] = t
    return BidiagonalMatrix(n, a_B, t, Matrix(B, rows, n, n))


@dataclass
class PhiIsoResult:
    certificate: IsoCertificate        # Q(a^n, m) -> M
    stages: list[IsoCertificate]
    checks: list[tuple[str, bool]]
    sign: int

    @property
    def valid(self) -> bool:
        return self.certificate.valid and all(ok for _, ok in self.checks)


def lemma3_iso(pair: UnimodularPair) -> PhiIsoResult:
    """Certified ``A ⊕ M/(a^n, m) ≅ M`` for free M of rank n with basis data.

    Route: ``N = coker((phi(t), psi): B^n -> B^n ⊕ M[t])`` over ``B = A[t]``;
    ``N ≅ B^n`` is checked over B (so N is extended);  ``N_0 -> M`` is
    multiplication by a;  ``N_1 ≅ Q(±a^n, m_1 - a m_2 + a^2 m_3 - ...)`` by
    eliminating ``e_1, ..., e_(n-1)``;  and lemma2_iso removes the
    ``a m'`` correction.
    """
    R = pair.ring
    n = pair.n
    if pair.basis is None or not pair.basis_ok_mod_a():
        raise ValueError("basis condition fails: images of m_1..m_n must be a basis of M/aM")
    Bm = pair.basis_matrix()
    Binv = pair.basis_inverse()
    checks: list[tuple[str, bool]] = []
    stages: list[IsoCertificate] = []

    phi_t = build_phi_matrix(n, pair.a)
    B = phi_t.matrix.ring
    emb = lambda M: M.map_entries(B.embed, B)
    Psi_B = emb(Bm)
    N = present_cokernel(phi_t.matrix.vstack(Psi_B), name="N")
    checks.append(("det phi(t) = a^n", determinant(phi_t.matrix) == phi_t.a ** n))
    # N is extended: N ≅ B^n via (f, w) -> f - phi(t) psi^-1 w
    Bn = free_module(B, n, name="B^n")
    eps = ModuleMap(N, Bn, Matrix.identity(B, n).hstack(-(phi_t.matrix * emb(Binv))), name="N->B^n")
    stages.append(_certify(eps, "N ≅ B^n over A[t]"))

    def special(value):
        Phi = phi_t.at(value, R)
        Nv = present_cokernel(Phi.vstack(Bm), name=f"N_{value}")
        An = free_module(R, n, name="A^n")
        e = ModuleMap(Nv, An, Matrix.identity(R, n).hstack(-(Phi * Binv)), name=f"N_{value}->A^n")
        return Phi, Nv, _certify(e, f"N_{value} ≅ A^n")

    Phi0, N0, ext0 = special(0)
    Phi1, N1, ext1_ = special(1)
    stages += [ext0, ext1_]
    checks.append(("generic rank N_0 = N_1", generic_rank(N0) == generic_rank(N1) == n))
    checks.append(("phi(0) = a·Id", Phi0 == Matrix.identity(R, n) * pair.a))

    # N_0 -> M: (f, w) -> a w - psi f; M = a N_0
    M = free_module(R, n, name="M")
    mu = ModuleMap(N0, M, (-Bm).hstack(Matrix.identity(R, n) * pair.a), name="multiply by a")
    stages.append(_certify(mu, "N_0 ≅ M (M = a N_0)"))

    # telescoped vector e_1' and phi(1)(e_1') = (-1)^(n-1) a^n e_n
    tele = [(-pair.a) ** i for i in range(n)]
    sign = (-1) ** (n - 1)
    img = Phi1 * FreeModuleElement(R, tele)
    expect = [R.zero()] * (n - 1) + [pair.a ** n * sign]
    checks.append(("phi(1)(e_1') = (-1)^(n-1) a^n e_n", tuple(img) == tuple(expect)))

    # N_1 -> Q(sign a^n, m~): f_n -> 1, f_k -> (-a)^(n-k) + w_k, identity on M
    w = [FreeModuleElement.zero(R, n) for _ in range(n)]
    for k in range(n - 1, 0, -1):
        w[k - 1] = w[k] * (-pair.a) - FreeModuleElement(R, Bm.col(k))
    alpha = [(-pair.a) ** (n - 1 - k) for k in range(n)]
    m_tilde = w[0] * pair.a + FreeModuleElement(R, Bm.col(0))
    tel_m = FreeModuleElement.zero(R, n)
    for i in range(n):
        tel_m = tel_m + FreeModuleElement(R, Bm.col(i)) * tele[i]
    checks.append(("psi(e_1') = m_1 - a m_2 + a^2 m_3 - ...", m_tilde == tel_m))
    top = [alpha + [R.zero()] * n]
    rest = [[w[k][i] for k in range(n)] + [R.one() if i == j else R.zero() for j in range(n)]
            for i in range(n)]
    T = Matrix(R, top + rest, n + 1, 2 * n)
    Q1 = quotient_module(R, pair.a ** n * sign, m_tilde.coords, name="Q(±a^n,m~)")
    stages.append(_certify(ModuleMap(N1, Q1, T, name="eliminate e_1..e_(n-1)"), "N_1 ≅ Q(±a^n, m~)"))
    S = Matrix.block_diag(R, Matrix.identity(R, 1) * sign, Matrix.identity(R, n))
    Qn = quotient_module(R, pair.a ** n, m_tilde.coords, name="Q(a^n,m~)")
    stages.append(_certify(ModuleMap(Q1, Qn, S, name="sign"), "sign change"))
    # m~ - m = a m' with m' = sum_{i>=2} (-a)^(i-2) (-1) m_i
    mp = FreeModuleElement.zero(R, n)
    for i in range(1, n):
        mp = mp + FreeModuleElement(R, Bm.col(i)) * (-((-pair.a) ** (i - 1)))
    checks.append(("m~ = m + a m'", m_tilde == pair.m + mp * pair.a))
    l2 = lemma2_iso(pair, mp.coords, n)
    stages.append(l2)

    # compose Q(a^n, m) -> Q(a^n, m~) -> Q1 -> N_1 -> A^n -> N_0 -> M
    chain = l2.map
    chain = stages[-2].inverse.compose(chain)   # sign^-1
    chain = stages[-3].inverse.compose(chain)   # T^-1
    chain = ext1_.map.compose(chain)
    chain = ext0.inverse.compose(chain)
    chain = stages[3].map.compose(chain)       # mu
    chain.name = "phi iso"
    cert = _certify(chain, "phi iso composite", [s for st in stages for s in st.steps])
    cert.steps.append(("composites re-validated", cert.revalidate()))
    return PhiIsoResult(cert, stages, checks, sign)
