"""Finitely presented modules over a polynomial ring R.

A :class:`PresentedModule` is ``R^g / (column span of its relation matrix)``.
Modules over a quotient R/J are kept as R-modules whose relations are
augmented by ``J * e_i``; the ideal J is remembered as ``modulus`` so Fitting
ideals can be read over R/J.  Every construction here is a kernel or a
cokernel of a polynomial matrix, computed with :mod:`cancelab.linalg`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .groebner import Ideal, ideal_equal, normal_form, buchberger
from .linalg import (
    FreeModuleElement,
    Matrix,
    columns_in_span,
    lift,
    minors,
    rank_over_fraction_field,
    submodule_contains,
    submodule_gb_columns,
    syzygies,
)
from .polyring import MonomialOrder, PolynomialRing

__all__ = [
    "PresentedModule",
    "ModuleMap",
    "IsoResult",
    "module_gb",
    "present_cokernel",
    "free_module",
    "direct_sum",
    "kernel_of_map",
    "cokernel_of_map",
    "hom_module",
    "dual_module",
    "dual_map",
    "ext1",
    "homology",
    "is_isomorphism",
    "generic_rank",
    "fitting_ideal",
    "tensor_with_quotient",
    "evaluation_map",
    "double_dual_check",
    "prune",
    "is_free_of_rank",
    "syzygies",
    "factor_through",
]


class PresentedModule:
    """Cokernel of ``relations: R^r -> R^g``, optionally over R/``modulus``."""

    def __init__(self, ring: PolynomialRing, ngens: int, relations: Matrix | None = None,
                 modulus: Ideal | None = None, name: str | None = None):
        if relations is None:
            relations = Matrix.zero(ring, ngens, 0)
        if relations.nrows != ngens:
            raise ValueError("relation columns must lie in the ambient free module")
        self.ring = ring
        self.ngens = ngens
        self.relations = relations
        self.modulus = modulus if modulus is not None and modulus.generators else None
        self.name = name
        self._cache: dict = {}

    @property
    def full_relations(self) -> Matrix:
        """Relations including ``modulus * e_i`` columns."""
        if "full" not in self._cache:
            A = self.relations
            if self.modulus is not None:
                blocks = []
                for j in self.modulus.generators:
                    blocks.append(Matrix.identity(self.ring, self.ngens) * j)
                A = A.hstack(*blocks)
            self._cache["full"] = A
        return self._cache["full"]

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        over = f" over R/{self.modulus}" if self.modulus else ""
        return f"<{label}R^{self.ngens}/({self.relations.ncols} relations){over}>"

    def element(self, coords) -> FreeModuleElement:
        v = FreeModuleElement(self.ring, coords)
        if v.rank != self.ngens:
            raise ValueError("ambient rank mismatch")
        return v

    def element_is_zero(self, v) -> bool:
        coords = v.coords if isinstance(v, FreeModuleElement) else tuple(v)
        return submodule_contains(self.full_relations, coords)

    def elements_equal(self, u, v) -> bool:
        return self.element_is_zero(FreeModuleElement(self.ring, u) - FreeModuleElement(self.ring, v))

    def is_zero(self) -> bool:
        return all(self.element_is_zero(FreeModuleElement.unit(self.ring, self.ngens, i).coords)
                   for i in range(self.ngens))

    def identity(self) -> ModuleMap:
        return ModuleMap(self, self, Matrix.identity(self.ring, self.ngens),
                         lift_matrix=Matrix.identity(self.ring, self.full_relations.ncols))


def free_module(ring: PolynomialRing, rank: int, name: str | None = None) -> PresentedModule:
    return PresentedModule(ring, rank, name=name or f"R^{rank}")


def present_cokernel(M: Matrix, name: str | None = None) -> PresentedModule:
    """The module ``R^rows / (columns of M)``."""
    return PresentedModule(M.ring, M.nrows, M, name=name)


class ModuleMap:
    """Homomorphism between presented modules, given on generators.

    ``matrix`` has ``target.ngens`` rows and ``source.ngens`` columns.  At
    construction a lift ``L`` with ``matrix * A_source = A_target * L`` is
    computed; a map without such a lift is rejected.
    """

    def __init__(self, source: PresentedModule, target: PresentedModule, matrix: Matrix,
                 lift_matrix: Matrix | None = None, name: str | None = None):
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(f"matrix shape {matrix.shape} does not fit "
                             f"{source.ngens} -> {target.ngens} generators")
        self.source = source
        self.target = target
        self.matrix = matrix
        self.name = name
        image = matrix * source.full_relations
        if lift_matrix is not None:
            if target.full_relations * lift_matrix != image:
                raise ValueError("supplied relation lift does not re-expand")
        elif not columns_in_span(target.full_relations, image):
            raise ValueError("matrix does not map relations into relations")
        self._image = image
        self._lift = lift_matrix

    @property
    def lift_matrix(self) -> Matrix:
        """Witness ``L`` with ``matrix * A_source = A_target * L``."""
        if self._lift is None:
            self._lift = lift(self.target.full_relations, self._image)
        return self._lift

    def __repr__(self):
        return f"<ModuleMap {self.name or ''} {self.source!r} -> {self.target!r}>"

    def __call__(self, v) -> FreeModuleElement:
        coords = v.coords if isinstance(v, FreeModuleElement) else tuple(v)
        return self.matrix * FreeModuleElement(self.source.ring, coords)

    def compose(self, first: ModuleMap) -> ModuleMap:
        """``self ∘ first``."""
        if first.target.ngens != self.source.ngens:
            raise ValueError("maps are not composable")
        return ModuleMap(first.source, self.target, self.matrix * first.matrix)

    def is_zero(self) -> bool:
        return columns_in_span(self.target.full_relations, self.matrix)

    def equals(self, other: ModuleMap) -> bool:
        if self.matrix.shape != other.matrix.shape:
            return False
        return columns_in_span(self.target.full_relations, self.matrix - other.matrix)

    def is_surjective(self) -> bool:
        return self.target.is_zero() or cokernel_of_map(self)[0].is_zero()

    def is_injective(self) -> bool:
        return kernel_of_map(self)[0].is_zero()


# --------------------------------------------------------------------------
# module Gröbner bases


@dataclass
class ModuleGroebnerBasis:
    ring: PolynomialRing
    rank: int
    order: MonomialOrder
    module_order: str
    basis: list[FreeModuleElement]

    def matrix(self) -> Matrix:
        return Matrix.from_columns(self.ring, self.rank, [b.coords for b in self.basis])

    def contains(self, v) -> bool:
        coords = v.coords if isinstance(v, FreeModuleElement) else tuple(v)
        return submodule_contains(self.matrix(), coords)


def module_gb(generators: Sequence[FreeModuleElement], module_order: str = "POT",
              order: MonomialOrder | None = None) -> ModuleGroebnerBasis:
    """Reduced Gröbner basis of the submodule spanned by ``generators``."""
    if not generators:
        raise ValueError("need at least one generator")
    ring = generators[0].ring
    n = generators[0].rank
    if any(g.rank != n for g in generators):
        raise ValueError("common ambient rank required")
    A = Matrix.from_columns(ring, n, [g.coords for g in generators])
    order = order or ring.order
    return ModuleGroebnerBasis(ring, n, order, module_order,
                               submodule_gb_columns(A, order, module_order))


# --------------------------------------------------------------------------
# sums, kernels, cokernels


@dataclass
class DirectSum:
    module: PresentedModule
    injections: list[ModuleMap]
    projections: list[ModuleMap]


def direct_sum(*modules: PresentedModule, name: str | None = None) -> DirectSum:
    ring = modules[0].ring
    A = Matrix.block_diag(ring, *(m.full_relations for m in modules))
    S = PresentedModule(ring, A.nrows, A, name=name)
    inj, proj = [], []
    offset = 0
    total = A.nrows
    for m in modules:
        E = Matrix(ring, [[1 if i == offset + j else 0 for j in range(m.ngens)] for i in range(total)],
                   total, m.ngens)
        inj.append(ModuleMap(m, S, E))
        proj.append(ModuleMap(S, m, E.T))
        offset += m.ngens
    return DirectSum(S, inj, proj)


def _subquotient(K: Matrix, A: Matrix, name: str | None = None) -> PresentedModule:
    """Presentation of (span K + span A) / span A  ~  span K / (span K ∩ span A)."""
    ring = K.ring
    k = K.ncols
    if k == 0:
        return PresentedModule(ring, 0, Matrix.zero(ring, 0, 0), name=name)
    S = syzygies(K.hstack(A))
    rel = S.select_rows(range(k)).drop_zero_columns()
    return PresentedModule(ring, k, rel, name=name)


def kernel_of_map(phi: ModuleMap, name: str | None = None) -> tuple[PresentedModule, ModuleMap]:
    """Kernel of ``phi`` with its inclusion into the source."""
    src, tgt = phi.source, phi.target
    g = src.ngens
    S = syzygies(phi.matrix.hstack(tgt.full_relations))
    K = S.select_rows(range(g)).drop_zero_columns()
    # drop generators already zero in the source
    keep = [j for j in range(K.ncols) if not src.element_is_zero(K.col(j))]
    K = K.select_columns(keep)
    ker = _subquotient(K, src.full_relations, name=name)
    inc = ModuleMap(ker, src, K, name="inclusion")
    return ker, inc


def cokernel_of_map(phi: ModuleMap, name: str | None = None) -> tuple[PresentedModule, ModuleMap]:
    """Cokernel of ``phi`` with the projection from the target."""
    tgt = phi.target
    A = phi.matrix.hstack(tgt.relations)
    C = PresentedModule(tgt.ring, tgt.ngens, A, modulus=tgt.modulus, name=name)
    proj = ModuleMap(tgt, C, Matrix.identity(tgt.ring, tgt.ngens), name="projection")
    return C, proj


def homology(phi: ModuleMap, psi: ModuleMap, name: str | None = None) -> PresentedModule:
    """``ker(psi) / im(phi)`` for composable ``phi: A -> B``, ``psi: B -> C``."""
    if phi.target.ngens != psi.source.ngens:
        raise ValueError("maps are not composable")
    if not psi.compose(phi).is_zero():
        raise ValueError("composite is not the zero map")
    B = psi.source
    _, inc = kernel_of_map(psi)
    return _subquotient(inc.matrix, phi.matrix.hstack(B.full_relations), name=name)


# --------------------------------------------------------------------------
# Hom and duals


@dataclass
class HomModule:
    module: PresentedModule
    generators: Matrix  # columns are flattened (h x g) matrices, column-major
    source: PresentedModule
    target: PresentedModule

    def decode(self, coeffs) -> ModuleMap:
        """ModuleMap for the element with coordinates ``coeffs`` on the Hom generators."""
        ring = self.source.ring
        v = self.generators * FreeModuleElement(ring, coeffs)
        h, g = self.target.ngens, self.source.ngens
        mat = Matrix(ring, [[v[j * h + i] for j in range(g)] for i in range(h)], h, g)
        return ModuleMap(self.source, self.target, mat)


def hom_module(M: PresentedModule, N: PresentedModule) -> HomModule:
    """Hom(M, N) as the kernel of ``N^g -> N^r``, ``X -> X A_M``."""
    ring = M.ring
    A = M.full_relations
    B = N.full_relations
    g, r, h = M.ngens, A.ncols, N.ngens
    Ng = PresentedModule(ring, h * g, Matrix.block_diag(ring, *([B] * g)) if g else Matrix.zero(ring, 0, 0))
    Nr = PresentedModule(ring, h * r, Matrix.block_diag(ring, *([B] * r)) if r else Matrix.zero(ring, 0, 0))
    z = ring.zero()
    rows = [[z] * (h * g) for _ in range(h * r)]
    for k in range(r):
        for j in range(g):
            a = A[j, k]
            if a.is_zero():
                continue
            for i in range(h):
                rows[k * h + i][j * h + i] = a
    T = Matrix(ring, rows, h * r, h * g)
    if h * r == 0:
        K = Matrix.identity(ring, h * g)
        keep = [j for j in range(K.ncols) if not Ng.element_is_zero(K.col(j))]
        K = K.select_columns(keep)
        H = _subquotient(K, Ng.full_relations, name=f"Hom({M.name},{N.name})")
        return HomModule(H, K, M, N)
    H, inc = kernel_of_map(ModuleMap(Ng, Nr, T), name=f"Hom({M.name},{N.name})")
    return HomModule(H, inc.matrix, M, N)


def dual_module(M: PresentedModule) -> HomModule:
    """``M* = Hom(M, R)``; generators are vectors ``w`` with ``w^T A_M = 0``."""
    if "dual" not in M._cache:
        R1 = free_module(M.ring, 1, name="R")
        hm = hom_module(M, R1)
        hm.module.name = f"{M.name}*" if M.name else None
        M._cache["dual"] = hm
    return M._cache["dual"]


def dual_map(phi: ModuleMap) -> ModuleMap:
    """``phi*: target* -> source*`` (contravariant)."""
    Ds = dual_module(phi.source)
    Dt = dual_module(phi.target)
    # a functional w on the target pulls back to phi^T w on the source
    pulled = phi.matrix.T * Dt.generators
    C = _lift_or_zero(Ds.generators, pulled)
    if C is None:
        raise ArithmeticError("pulled-back functional is not in the computed dual")
    return ModuleMap(Dt.module, Ds.module, C, name=f"{phi.name}*" if phi.name else None)


def ext1(M: PresentedModule, name: str | None = None) -> PresentedModule:
    """Ext^1(M, R): homology of ``F0* -> F1* -> F2*`` built from the presentation."""
    ring = M.ring
    A = M.full_relations
    S = syzygies(A)
    F0 = free_module(ring, A.nrows)
    F1 = free_module(ring, A.ncols)
    F2 = free_module(ring, S.ncols)
    d1 = ModuleMap(F0, F1, A.T)
    d2 = ModuleMap(F1, F2, S.T)
    return homology(d1, d2, name=name or f"Ext1({M.name},R)")


# --------------------------------------------------------------------------
# isomorphisms


def _lift_or_zero(A: Matrix, B: Matrix) -> Matrix | None:
    if A.ncols == 0:
        return Matrix.zero(A.ring, 0, B.ncols) if B.is_zero() else None
    return lift(A, B)


@dataclass
class IsoResult:
    is_iso: bool
    inverse: ModuleMap | None = None
    reason: str = ""

    def __bool__(self):
        return self.is_iso


def is_isomorphism(phi: ModuleMap) -> IsoResult:
    """Decide bijectivity; on success return a certified inverse.

    The inverse is found by lifting each target generator through
    ``[phi | A_target]``; it is accepted only when it is well defined and both
    composites are the identity modulo relations.
    """
    src, tgt = phi.source, phi.target
    ring = src.ring
    if tgt.ngens == 0:
        inv = ModuleMap(tgt, src, Matrix.zero(ring, src.ngens, 0), name="inverse")
        return IsoResult(True, inv) if src.is_zero() else IsoResult(False, reason="not injective")
    big = phi.matrix.hstack(tgt.full_relations)
    X = lift(big, Matrix.identity(ring, tgt.ngens))
    if X is None:
        return IsoResult(False, reason="not surjective")
    G = X.select_rows(range(src.ngens))
    try:
        inv = ModuleMap(tgt, src, G, name="inverse")
    except ValueError:
        return IsoResult(False, reason="not injective (lifted inverse is ill-defined)")
    if not inv.compose(phi).equals(src.identity()):
        return IsoResult(False, reason="not injective")
    if not phi.compose(inv).equals(tgt.identity()):  # pragma: no cover - holds by construction
        return IsoResult(False, reason="right inverse failed")
    return IsoResult(True, inv)


def evaluation_map(M: PresentedModule) -> ModuleMap:
    """Natural map ``M -> M**``."""
    D1 = dual_module(M)
    D2 = dual_module(D1.module)
    # ev(e_i) is the functional taking the j-th generator of M* to its i-th entry
    target_vectors = D1.generators.T
    E = _lift_or_zero(D2.generators, target_vectors)
    if E is None:
        raise ArithmeticError("evaluation functional not in the computed double dual")
    return ModuleMap(M, D2.module, E, name="evaluation")


def double_dual_check(M: PresentedModule) -> IsoResult:
    """Whether the natural map ``M -> M**`` is an isomorphism (reflexivity)."""
    return is_isomorphism(evaluation_map(M))


# --------------------------------------------------------------------------
# numerical invariants


def generic_rank(M: PresentedModule) -> int:
    """Rank over the fraction field: ``ngens - rank(relations)``."""
    r, _, _ = rank_over_fraction_field(M.full_relations)
    return M.ngens - r


def fitting_ideal(M: PresentedModule, i: int) -> Ideal:
    """``Fitt_i``: (g - i)-minors of the relations, plus the modulus when present."""
    if i < 0:
        raise ValueError("i must be >= 0")
    g = M.ngens
    extra = M.modulus.generators if M.modulus else ()
    if i >= g:
        return Ideal(M.ring, [1])
    return Ideal(M.ring, minors(M.relations, g - i) + list(extra))


def is_free_of_rank(M: PresentedModule, r: int) -> bool:
    """Fitting criterion over R/modulus: Fitt_{r-1} = 0 and Fitt_r = (1)."""
    J = M.modulus or Ideal(M.ring, [])
    lower = fitting_ideal(M, r - 1) if r >= 1 else Ideal(M.ring, [])
    upper = fitting_ideal(M, r)
    zero_lower = ideal_equal(lower + J, J) if J.generators else not lower.generators
    return zero_lower and upper.is_unit()


def tensor_with_quotient(M: PresentedModule, J: Ideal, name: str | None = None) -> PresentedModule:
    """``M / J M`` as a module over R/J."""
    modulus = J if M.modulus is None else M.modulus + J
    G = buchberger(modulus)
    rel = M.relations.map_entries(lambda p: normal_form(p, G)).drop_zero_columns()
    return PresentedModule(M.ring, M.ngens, rel, modulus=modulus, name=name)


def prune(M: PresentedModule) -> tuple[PresentedModule, ModuleMap]:
    """Drop generators killed by relations with a unit entry; returns ``(M', M -> M')``."""
    ring = M.ring
    A = M.full_relations
    g = M.ngens
    # P maps current generators to original; Q maps original to current
    Q = Matrix.identity(ring, g)
    while True:
        hit = None
        for j in range(A.ncols):
            for i in range(A.nrows):
                a = A[i, j]
                if a.is_constant() and not a.is_zero():
                    hit = (i, j, a)
                    break
            if hit:
                break
        if hit is None:
            break
        i, j, a = hit
        c_inv = a.constant_coeff().inverse()
        col = A.col(j)
        # e_i = -(1/a) * sum_{k != i} col[k] e_k
        keep = [k for k in range(A.nrows) if k != i]
        sub_rows = []
        for k in keep:
            row = []
            for m in range(A.nrows):
                if m == k:
                    row.append(ring.one())
                elif m == i:
                    row.append(-(col[k].scale(c_inv)))
                else:
                    row.append(ring.zero())
            sub_rows.append(row)
        step = Matrix(ring, sub_rows, len(keep), A.nrows)
        Q = step * Q
        newA = []
        for l in range(A.ncols):
            if l == j:
                continue
            f = A[i, l].scale(c_inv)
            newA.append([A[k, l] - f * col[k] for k in keep])
        A = Matrix.from_columns(ring, len(keep), newA) if newA else Matrix.zero(ring, len(keep), 0)
        A = A.drop_zero_columns()
    P = PresentedModule(ring, A.nrows, A, name=M.name)
    return P, ModuleMap(M, P, Q, name="prune")


def factor_through(inclusion: ModuleMap, vectors: Matrix) -> Matrix | None:
    """Coordinates ``C`` with ``inclusion(C) == vectors`` modulo target relations.

    ``vectors`` holds elements of the target (as columns); ``None`` when some
    column is not in the image.
    """
    tgt = inclusion.target
    big = inclusion.matrix.hstack(tgt.full_relations)
    X = lift(big, vectors) if big.ncols else None
    if X is None:
        if vectors.is_zero() or all(tgt.element_is_zero(c) for c in vectors.columns()):
            return Matrix.zero(tgt.ring, inclusion.source.ngens, vectors.ncols)
        return None
    return X.select_rows(range(inclusion.source.ngens))
