import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cancelab.fpmod import (
    ModuleMap,
    PresentedModule,
    direct_sum,
    double_dual_check,
    dual_map,
    dual_module,
    ext1,
    fitting_ideal,
    free_module,
    generic_rank,
    hom_module,
    homology,
    is_free_of_rank,
    is_isomorphism,
    kernel_of_map,
    module_gb,
    present_cokernel,
    prune,
    tensor_with_quotient,
)
from cancelab.groebner import Ideal, ideal_equal
from cancelab.linalg import FreeModuleElement, Matrix, columns_in_span, submodule_contains, syzygies
from cancelab.polyring import parse_ring

from oracles import brute_kernel
from strategies import polynomials

R = parse_ring("QQ[x,y,z,t]")
F5 = parse_ring("GF(5)[x,y]")
x, y, z, t = R.gens()
u = z * t - 1
ONE = R.one()
ZERO = R.zero()


def row(*entries):
    return Matrix.row(R, [R(e) for e in entries])


def col(*entries):
    return Matrix.column(R, [R(e) for e in entries])


KOSZUL = Matrix.from_columns(R, 3, [(y, -x, ZERO), (u, ZERO, -x), (ZERO, u, -y)])
M1 = present_cokernel(col(x, y, u), name="M1")
M2 = present_cokernel(col(x, y * z, u), name="M2")


def same_span(A, B):
    return columns_in_span(A, B) and columns_in_span(B, A)


def test_module_gb_examples():
    G = module_gb([FreeModuleElement(R, c) for c in KOSZUL.columns()])
    assert len(G.basis) == 3
    assert [b.coords for b in module_gb([FreeModuleElement(R, (ONE, ZERO))]).basis] == [(ONE, ZERO)]
    G = module_gb([FreeModuleElement(R, (x,)), FreeModuleElement(R, (x + 1,))])
    assert [b.coords for b in G.basis] == [(ONE,)]


def test_syzygy_examples():
    S = syzygies(row(x, y, u))
    assert (row(x, y, u) * S).is_zero()
    assert same_span(S, KOSZUL)
    assert syzygies(row(1)).ncols == 0 or syzygies(row(1)).is_zero()
    assert same_span(syzygies(row(x, x)), col(1, -1))


def test_cokernel_examples():
    assert generic_rank(M1) == 2
    assert generic_rank(present_cokernel(Matrix.zero(R, 3, 0))) == 3
    assert present_cokernel(col(1)).is_zero()


def test_kernel_examples():
    K, inc = kernel_of_map(ModuleMap(free_module(R, 3), free_module(R, 1), row(x, y, u)))
    assert same_span(inc.matrix, KOSZUL)
    K, _ = kernel_of_map(free_module(R, 2).identity())
    assert K.is_zero()
    K, _ = kernel_of_map(ModuleMap(free_module(R, 1), free_module(R, 1), row(0)))
    assert not K.is_zero() and generic_rank(K) == 1


def test_hom_examples():
    D = dual_module(M1)
    assert same_span(D.generators, KOSZUL)
    RI = present_cokernel(row(x, y, u))
    assert hom_module(RI, free_module(R, 1)).module.is_zero()
    N = present_cokernel(col(z))
    H = hom_module(free_module(R, 1), N)
    assert is_isomorphism(ModuleMap(H.module, N, H.generators)).is_iso


def test_dual_map_examples():
    F3 = free_module(R, 3)
    psi = ModuleMap(F3, F3, Matrix.diag(R, [ONE, z, ONE]))
    assert dual_map(psi).matrix == Matrix.diag(R, [ONE, z, ONE])
    assert dual_map(F3.identity()).matrix == Matrix.identity(R, 3)


def test_ext_examples():
    E = prune(ext1(dual_module(M1).module))[0]
    assert E.ngens == 1 and ideal_equal(Ideal(R, list(E.relations.rows[0])), Ideal(R, [x, y, u]))
    assert ext1(free_module(R, 2)).is_zero()
    # 0 -> R -> R^3 -> M1 -> 0 dualizes to R^3 -> R with image I, so Ext^1(M1, R) = R/I
    E = prune(ext1(M1))[0]
    assert E.ngens == 1 and ideal_equal(Ideal(R, list(E.relations.rows[0])), Ideal(R, [x, y, u]))
    Rz = present_cokernel(col(z))
    E = prune(ext1(Rz))[0]
    assert E.ngens == 1 and ideal_equal(Ideal(R, list(E.relations.rows[0])), Ideal(R, [z]))


def test_homology_examples():
    F1, F3 = free_module(R, 1), free_module(R, 3)
    koszul_in = ModuleMap(free_module(R, 3), F3, KOSZUL)
    koszul_out = ModuleMap(F3, F1, row(x, y, u))
    # exactness of the Koszul complex at R^3 (image of the Koszul columns = kernel)
    assert homology(koszul_in, koszul_out).is_zero()
    zero = ModuleMap(F1, F1, row(0))
    assert generic_rank(homology(zero, zero)) == 1
    H = homology(ModuleMap(F1, F1, row(z)), ModuleMap(F1, free_module(R, 0), Matrix.zero(R, 0, 1)))
    assert is_free_of_rank(tensor_with_quotient(H, Ideal(R, [z])), 1)


def test_is_isomorphism_examples():
    assert is_isomorphism(M1.identity()).is_iso
    Q = present_cokernel(col(u))
    assert is_isomorphism(ModuleMap(Q, Q, Matrix.diag(R, [z]))).is_iso
    assert not is_isomorphism(ModuleMap(free_module(R, 1), free_module(R, 1), row(z))).is_iso


def test_generic_rank_rank_family():
    from cancelab.lab import build_example
    pair = build_example("rank_family", n=2)
    M = present_cokernel(Matrix.column(R, list(pair.v1)))
    assert generic_rank(M) == 3


def test_fitting_examples():
    I = [x, y, u]
    RI = present_cokernel(Matrix.row(R, I))
    assert ideal_equal(fitting_ideal(RI, 0), Ideal(R, I))
    F = free_module(R, 3)
    assert not fitting_ideal(F, 2).generators and fitting_ideal(F, 3).is_unit()
    # I/I^2: presentation of I with the Koszul relations, tensored with R/I
    conormal = tensor_with_quotient(present_cokernel(KOSZUL), Ideal(R, I))
    assert is_free_of_rank(conormal, 3)
    assert not is_free_of_rank(conormal, 2)
    assert is_free_of_rank(tensor_with_quotient(M1, Ideal(R, I)), 3)
    assert is_free_of_rank(tensor_with_quotient(free_module(R, 2), Ideal(R, [z])), 2)


def test_reflexive_examples():
    assert double_dual_check(M1).is_iso
    assert double_dual_check(M2).is_iso
    assert double_dual_check(free_module(R, 2)).is_iso
    assert not double_dual_check(present_cokernel(col(z))).is_iso


def test_map_validation():
    with pytest.raises(ValueError):
        ModuleMap(free_module(R, 1), free_module(R, 2), row(1))
    with pytest.raises(ValueError):
        # R/z -> R is not well defined
        ModuleMap(present_cokernel(col(z)), free_module(R, 1), row(1))


def test_prune():
    P, q = prune(present_cokernel(Matrix.from_columns(R, 2, [(ONE, x), (ZERO, y)])))
    assert P.ngens == 1 and is_isomorphism(q).is_iso


# ---------------------------------------------------------------- properties

entries1 = polynomials(F5, 1, 3)


@st.composite
def matrices(draw, nrows, ncols, entries=entries1):
    rows = [[draw(entries) for _ in range(ncols)] for _ in range(nrows)]
    return Matrix(F5, rows, nrows, ncols)


@settings(max_examples=40, deadline=None)
@given(A=st.integers(1, 2).flatmap(lambda r: matrices(r, 3)))
def test_syzygies_complete(A):
    S = syzygies(A)
    assert (A * S).is_zero()
    rows = [[A[i, j] for j in range(A.ncols)] for i in range(A.nrows)]
    for v in brute_kernel(rows, 5, 3):
        assert submodule_contains(S, v)


@settings(max_examples=50, deadline=None)
@given(P=matrices(2, 2), Q=matrices(2, 2))
def test_dual_functorial(P, Q):
    F = free_module(F5, 2)
    phi = ModuleMap(F, F, P)
    psi = ModuleMap(F, F, Q)
    lhs = dual_map(psi.compose(phi))
    rhs = dual_map(phi).compose(dual_map(psi))
    assert lhs.equals(rhs)


@settings(max_examples=30, deadline=None)
@given(A=matrices(2, 2), k=st.integers(0, 2))
def test_generic_rank_additive(A, k):
    M = present_cokernel(A)
    S = direct_sum(M, free_module(F5, k)).module if k else M
    assert generic_rank(S) == generic_rank(M) + k


@settings(max_examples=30, deadline=None)
@given(A=matrices(2, 3))
def test_fitting_chain(A):
    M = present_cokernel(A)
    for i in range(3):
        lo, hi = fitting_ideal(M, i), fitting_ideal(M, i + 1)
        assert all(hi.contains(g) for g in lo.generators)


@settings(max_examples=30, deadline=None)
@given(A=matrices(2, 2), P=matrices(2, 2, polynomials(F5, 0, 1)))
def test_iso_certificates_recheck(A, P):
    M = present_cokernel(A)
    N = present_cokernel(P * A)
    try:
        phi = ModuleMap(M, N, P)
    except ValueError:
        return
    res = is_isomorphism(phi)
    if res.is_iso:
        assert res.inverse.compose(phi).equals(M.identity())
        assert phi.compose(res.inverse).equals(N.identity())
