"""Short exact sequences of presented modules.

Everything here is checked by computation: exactness by computing the three
homology modules, splitness by producing a section.  Nothing is inferred from
ranks or projectivity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fpmod import (
    DirectSum,
    HomModule,
    IsoResult,
    ModuleMap,
    PresentedModule,
    direct_sum,
    dual_map,
    ext1,
    factor_through,
    hom_module,
    homology,
    is_isomorphism,
    kernel_of_map,
    cokernel_of_map,
    prune,
)
from .linalg import Matrix, lift

__all__ = [
    "ShortExactSequence",
    "ExactnessReport",
    "SplitReport",
    "SpliceResult",
    "DualizationResult",
    "verify_exact",
    "verify_split",
    "schanuel_splice",
    "dualize_sequence",
]


class ShortExactSequence:
    """Candidate ``0 -> left -> middle -> right -> 0``.

    ``exact`` and ``split`` start as ``None`` and are only set by
    :func:`verify_exact` and :func:`verify_split`.
    """

    def __init__(self, inject: ModuleMap, project: ModuleMap, name: str | None = None):
        if inject.target.ngens != project.source.ngens:
            raise ValueError("inject and project do not meet at the middle module")
        if not project.compose(inject).is_zero():
            raise ValueError("project ∘ inject is not zero")
        self.inject = inject
        self.project = project
        self.name = name
        self.exact: bool | None = None
        self.split: bool | None = None
        self.exactness: ExactnessReport | None = None
        self.splitting: SplitReport | None = None

    @property
    def left(self) -> PresentedModule:
        return self.inject.source

    @property
    def middle(self) -> PresentedModule:
        return self.project.source

    @property
    def right(self) -> PresentedModule:
        return self.project.target

    def __repr__(self):
        return (f"<ShortExactSequence 0 -> {self.left.name} -> {self.middle.name} -> "
                f"{self.right.name} -> 0 exact={self.exact} split={self.split}>")


@dataclass
class ExactnessReport:
    exact: bool
    kernel: PresentedModule        # ker(inject)
    middle_homology: PresentedModule
    cokernel: PresentedModule      # coker(project)
    failures: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.exact


def verify_exact(seq: ShortExactSequence) -> ExactnessReport:
    """Compute the homology at all three spots; exact iff all vanish."""
    ker, _ = kernel_of_map(seq.inject, name="ker(inject)")
    mid = homology(seq.inject, seq.project, name="H(middle)")
    coker, _ = cokernel_of_map(seq.project, name="coker(project)")
    failures = []
    if not ker.is_zero():
        failures.append("inject is not injective")
    if not mid.is_zero():
        failures.append("middle homology is nonzero")
    if not coker.is_zero():
        failures.append("project is not surjective")
    report = ExactnessReport(not failures, prune(ker)[0], prune(mid)[0], prune(coker)[0], failures)
    seq.exact = report.exact
    seq.exactness = report
    return report


@dataclass
class SplitReport:
    split: bool
    section: ModuleMap | None = None
    iso: ModuleMap | None = None      # left ⊕ right -> middle
    iso_check: IsoResult | None = None
    reason: str = ""

    def __bool__(self):
        return self.split


def _find_section(seq: ShortExactSequence) -> ModuleMap | None:
    P = seq.project
    mid, rt = seq.middle, seq.right
    ring = mid.ring
    g = rt.ngens
    if g == 0:
        return ModuleMap(rt, mid, Matrix.zero(ring, mid.ngens, 0))
    if rt.full_relations.ncols == 0:
        # free target: any lift of the generators is a well defined section
        X = lift(P.matrix, Matrix.identity(ring, g)) if mid.ngens else None
        if X is None:
            return None
        return ModuleMap(rt, mid, X.select_rows(range(mid.ngens)), name="section")
    # general case: find s in Hom(right, middle) with P s - id having columns
    # in the relations of right; one linear system over the Hom generators
    H: HomModule = hom_module(rt, mid)
    h = mid.ngens
    K = H.generators
    composed = []
    for c in range(K.ncols):
        col = K.col(c)
        X = Matrix(ring, [[col[j * h + i] for j in range(g)] for i in range(h)], h, g)
        Y = P.matrix * X
        composed.append([Y[i, j] for j in range(g) for i in range(g)])
    C = Matrix.from_columns(ring, g * g, composed) if composed else Matrix.zero(ring, g * g, 0)
    B = Matrix.block_diag(ring, *([rt.full_relations] * g))
    ident = [ring.one() if i == j else ring.zero() for j in range(g) for i in range(g)]
    big = C.hstack(B)
    X = lift(big, Matrix.column(ring, ident)) if big.ncols else None
    if X is None:
        return None
    coeffs = [X[i, 0] for i in range(K.ncols)]
    s = H.decode(coeffs)
    s.name = "section"
    return s


def verify_split(seq: ShortExactSequence) -> SplitReport:
    """Look for ``s`` with ``project ∘ s = id``; on success certify ``left ⊕ right ≅ middle``."""
    if seq.exact is None:
        verify_exact(seq)
    if not seq.exact:
        report = SplitReport(False, reason="sequence is not exact")
        seq.split = False
        seq.splitting = report
        return report
    s = _find_section(seq)
    if s is None:
        report = SplitReport(False, reason="project has no section")
        seq.split = False
        seq.splitting = report
        return report
    if not seq.project.compose(s).equals(seq.right.identity()):  # pragma: no cover
        raise ArithmeticError("section fails re-expansion")
    S = direct_sum(seq.left, seq.right, name=f"{seq.left.name}+{seq.right.name}")
    mat = seq.inject.matrix.hstack(s.matrix)
    iso = ModuleMap(S.module, seq.middle, mat, name="[inject | section]")
    check = is_isomorphism(iso)
    report = SplitReport(bool(check), s, iso, check,
                         reason="" if check else f"[inject | section] fails: {check.reason}")
    seq.split = report.split
    seq.splitting = report
    return report


@dataclass
class SpliceResult:
    sequence: ShortExactSequence     # 0 -> ker(surjB) -> P -> A -> 0
    pullback: PresentedModule
    to_A: ModuleMap
    to_B: ModuleMap
    kernel_inclusion: ModuleMap      # ker(surjB) -> B
    sum: DirectSum
    inclusion: ModuleMap             # P -> A ⊕ B


def schanuel_splice(surjA: ModuleMap, surjB: ModuleMap) -> SpliceResult:
    """Pullback of two surjections onto a common target and its exact sequence.

    ``P = ker((surjA, -surjB): A ⊕ B -> T)``; the output sequence is
    ``0 -> ker(surjB) -> P -> A -> 0`` and it is verified exact before return.
    """
    T = surjA.target
    if surjB.target.ngens != T.ngens:
        raise ValueError("the two maps must share their target")
    if not surjA.is_surjective():
        raise ValueError("first map is not surjective")
    if not surjB.is_surjective():
        raise ValueError("second map is not surjective")
    A, B = surjA.source, surjB.source
    ring = A.ring
    S = direct_sum(A, B, name=f"{A.name}+{B.name}")
    diff = ModuleMap(S.module, T, surjA.matrix.hstack(-surjB.matrix), name="difference")
    P, inc = kernel_of_map(diff, name="pullback")
    to_A = S.projections[0].compose(inc)
    to_B = S.projections[1].compose(inc)
    to_A.name, to_B.name = "pr_A", "pr_B"
    K, kinc = kernel_of_map(surjB, name=f"ker({surjB.name or 'surjB'})")
    vectors = Matrix.zero(ring, A.ngens, K.ngens).vstack(kinc.matrix)
    C = factor_through(inc, vectors)
    if C is None:  # pragma: no cover - ker(surjB) always lies in the pullback
        raise ArithmeticError("kernel does not factor through the pullback")
    j = ModuleMap(K, P, C, name="kernel->pullback")
    seq = ShortExactSequence(j, to_A, name="splice")
    report = verify_exact(seq)
    if not report.exact:  # pragma: no cover
        raise ArithmeticError("splice sequence failed exactness: " + "; ".join(report.failures))
    return SpliceResult(seq, P, to_A, to_B, kinc, S, inc)


@dataclass
class DualizationResult:
    sequence: ShortExactSequence     # 0 -> right* -> middle* -> left* -> 0
    exactness: ExactnessReport
    ext_modules: dict[str, PresentedModule]

    @property
    def exact(self) -> bool:
        return self.exactness.exact


def dualize_sequence(seq: ShortExactSequence, ext_report: bool = True) -> DualizationResult:
    """Apply ``Hom(-, R)`` and verify the candidate sequence directly.

    The report lists ``Ext^1(right, R)``, which receives the obstruction to
    right exactness, and the cokernel actually observed.
    """
    a_star = dual_map(seq.inject)    # middle* -> left*
    b_star = dual_map(seq.project)   # right* -> middle*
    dual = ShortExactSequence(b_star, a_star, name=f"dual({seq.name})" if seq.name else "dual")
    report = verify_exact(dual)
    exts: dict[str, PresentedModule] = {"coker": report.cokernel}
    if ext_report:
        exts[f"Ext1({seq.right.name},R)"] = prune(ext1(seq.right))[0]
    return DualizationResult(dual, report, exts)
