import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cancelab.fpmod import direct_sum, free_module, is_isomorphism, ModuleMap
from cancelab.linalg import Matrix, determinant
from cancelab.polyring import parse_ring
from cancelab.suslin import (
    UnsupportedInstance,
    build_phi_matrix,
    lemma2_iso,
    lemma3_iso,
    make_pair,
    transvect,
)

QU = parse_ring("QQ[u]")
F5U = parse_ring("GF(5)[u]")


def pair_e1(ring, n, a="u"):
    return make_pair(ring, ring(a), [ring.one()] + [ring.zero()] * (n - 1))


def test_make_pair_witness():
    p = pair_e1(QU, 2)
    assert p.witness_holds()
    with pytest.raises(ValueError):
        make_pair(QU, QU("u"), [QU("u"), QU("u^2")])


def test_transvect_m():
    p = pair_e1(QU, 2)
    new, cert = transvect(p, "m", [QU.zero(), QU.one()])
    assert tuple(new.m) == (QU.one(), QU("u"))
    assert new.witness_holds() and cert.valid and cert.revalidate()


def test_transvect_zero_form_is_identity():
    p = pair_e1(QU, 2)
    new, cert = transvect(p, "a", [QU.zero(), QU.zero()])
    assert new.a == p.a and tuple(new.m) == tuple(p.m)
    assert cert.map.matrix == Matrix.identity(QU, 3)


def test_transvect_a_with_complement():
    p = make_pair(QU, QU("u"), [QU("1 - u"), QU.zero()])
    # phi'(m) = 1 - ab: pick phi' = (b', 0) with b'(1-u) = 1 - a*b
    f = [QU.one(), QU.zero()]
    new, cert = transvect(p, "a", f)
    assert new.a == QU.one() and new.witness_holds() and cert.revalidate()


def test_transvection_iso_examples():
    p = pair_e1(QU, 2)
    cert = lemma2_iso(p, [QU.zero(), QU.one()], 1)
    assert cert.valid and cert.revalidate()
    assert lemma2_iso(p, [QU.zero(), QU.zero()], 1).map.matrix == Matrix.identity(QU, 3)
    q = pair_e1(F5U, 2)
    for d in (1, 2):
        cert = lemma2_iso(q, [F5U.zero(), F5U.one()], d)
        assert cert.valid and cert.revalidate()


def test_transvection_iso_rank_one():
    p = make_pair(QU, QU("u"), [QU("u + 1")])
    cert = lemma2_iso(p, [QU("3")], 2)
    assert cert.valid and cert.revalidate()


def test_phi_matrix_shapes():
    a = QU("u")
    phi = build_phi_matrix(3, a)
    t = phi.t
    A = phi.a
    z = A.ring.zero()
    assert phi.rows_as_images() == Matrix(A.ring, [[A, z, z], [t, A, z], [z, t, A]], 3, 3)
    assert build_phi_matrix(1, a).matrix == Matrix(A.ring, [[A]], 1, 1)
    img = phi.at(1, QU) * Matrix.column(QU, [QU.one(), -a, a * a])
    assert img == Matrix.column(QU, [QU.zero(), QU.zero(), a ** 3])


@pytest.mark.parametrize("n", range(1, 7))
def test_phi_determinant(n):
    phi = build_phi_matrix(n, QU("u^2 + 1"))
    assert determinant(phi.matrix) == phi.a ** n


@pytest.mark.parametrize("ring,n", [(QU, 1), (QU, 2), (QU, 3), (F5U, 2), (F5U, 3)])
def test_phi_iso(ring, n):
    res = lemma3_iso(pair_e1(ring, n))
    assert res.valid
    assert res.certificate.revalidate()
    assert all(s.revalidate() for s in res.stages)
    assert res.sign == (-1) ** (n - 1)
    assert dict(res.checks)["generic rank N_0 = N_1"]


def test_phi_iso_nontrivial_m():
    # m = (1, u) with basis m, e_2
    p = make_pair(QU, QU("u"), [QU.one(), QU("u")])
    res = lemma3_iso(p)
    assert res.valid and res.certificate.revalidate()


def test_phi_iso_unit_a():
    p = pair_e1(QU, 2, a="1")
    res = lemma3_iso(p)
    assert res.valid


def test_phi_iso_agrees_with_direct_iso():
    # A ⊕ M/(u^2, e_1) ≅ M directly: (u^2, e_1) has a unit coordinate
    res = lemma3_iso(pair_e1(QU, 2))
    cert = res.certificate
    assert cert.source.ngens == 3 and cert.target.ngens == 2
    assert is_isomorphism(cert.map).is_iso


def test_transvection_iso_needs_basis():
    p = pair_e1(QU, 2)
    p.basis = None
    with pytest.raises(UnsupportedInstance):
        lemma2_iso(p, [QU.zero(), QU.one()], 1)


@settings(max_examples=25, deadline=None)
@given(c=st.lists(st.integers(-3, 3), min_size=4, max_size=4), d=st.integers(1, 3))
def test_transvection_iso_random_mprime(c, d):
    p = pair_e1(QU, 2)
    mp = [QU.constant(c[0]) + QU("u") * c[1], QU.constant(c[2]) + QU("u^2") * c[3]]
    cert = lemma2_iso(p, mp, d)
    assert cert.valid and cert.revalidate()


@settings(max_examples=25, deadline=None)
@given(c=st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_transvections_preserve_class(c):
    p = pair_e1(F5U, 2)
    new, cert = transvect(p, "m", [F5U.constant(c[0]), F5U("u") * c[1]])
    assert cert.revalidate()
    new2, cert2 = transvect(new, "a", [F5U.zero(), F5U.constant(c[1])])
    assert cert2.revalidate() and new2.witness_holds()
