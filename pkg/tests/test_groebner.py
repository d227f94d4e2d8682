import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cancelab.groebner import (
    Ideal,
    ResourceLimitError,
    buchberger,
    ideal_equal,
    ideal_member,
    krull_dim,
    normal_form,
    power_in_ideal,
    resource_limits,
)
from cancelab.lab import build_example
from cancelab.polyring import LEX, monomial_divides, monomial_lcm, multivariate_division, parse_ring

from oracles import brute_member
from strategies import polynomials

R = parse_ring("QQ[x,y,z,t]")
R_LEX = parse_ring("QQ[x,y,z,t]", "lex")
F5 = parse_ring("GF(5)[x,y]")


def ideal(ring, *gens):
    return Ideal(ring, [ring(g) for g in gens])


def s_poly(f, g, order):
    (ef, cf), (eg, cg) = f.leading_term(order), g.leading_term(order)
    L = monomial_lcm(ef, eg)
    R_ = f.ring
    mf = R_.monomial(tuple(a - b for a, b in zip(L, ef)))
    mg = R_.monomial(tuple(a - b for a, b in zip(L, eg)))
    return mf * f * cg - mg * g * cf


def assert_reduced_gb(G):
    """Buchberger criterion checked with plain division, independent of the engine."""
    basis = list(G.basis)
    order = G.order
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            _, r = multivariate_division(s_poly(basis[i], basis[j], order), basis, order)
            assert r.is_zero()
    for g in basis:
        assert g.lc(order) == 1
        others = [h.lm(order) for h in basis if h is not g]
        for e, _ in g.items():
            assert not any(monomial_divides(le, e) for le in others)


def test_examples_gb():
    G = buchberger(ideal(R_LEX, "x", "y", "z*t-1"), LEX)
    assert set(map(str, G.basis)) == {"x", "y", "z*t-1"}
    G = buchberger(ideal(R, "x", "y*z", "z*t-1"))
    assert set(map(str, G.basis)) == {"x", "y", "z*t-1"}
    assert_reduced_gb(G)
    assert buchberger(ideal(R, "3*x^2 + y")).basis == (R("x^2 + 1/3*y"),)


def test_normal_forms():
    G = buchberger(ideal(R, "x", "y*z", "z*t-1"))
    assert normal_form(R("y"), G).is_zero()
    assert normal_form(R("z"), buchberger(ideal(R, "x", "y", "z*t-1"))) == R("z")
    g = R("x^2*y - z + 7")
    assert normal_form(g, buchberger(Ideal(R, [g]))).is_zero()


def test_membership_examples():
    ok, cof = ideal_member(R("y"), ideal(R, "x", "y*z", "z*t-1"))
    assert ok and cof == [R.zero(), R("t"), R("-y")]
    assert ideal_member(1, ideal(R, "x", "y", "z*t-1")) == (False, None)
    ok, cof = ideal_member(R("x^2+y"), ideal(R, "x^2+y", "z"))
    assert ok and cof == [R.one(), R.zero()]


def test_ideal_equality_examples():
    assert ideal_equal(ideal(R, "x", "y", "z*t-1"), ideal(R, "x", "y*z", "z*t-1"))
    assert not ideal_equal(ideal(R, "x"), ideal(R, "x^2"))
    for n in (2, 3):
        pair = build_example("rank_family", n=n)
        assert ideal_equal(Ideal(R, pair.v1), Ideal(R, pair.v2))


def test_krull_dim_examples():
    assert krull_dim(ideal(R, "x", "y", "z*t-1")) == 1
    S = parse_ring("GF(3)[x,y,z]")
    assert krull_dim(ideal(S, "x^3", "y", "z")) == 0
    assert krull_dim(Ideal(R, [])) == 4
    assert krull_dim(ideal(R, "1")) == -1


def test_power_in_ideal_examples():
    pair = build_example("rank_family", n=2)
    assert power_in_ideal(R("x"), pair.I, 5) == 2
    f = R("x*y - z")
    assert power_in_ideal(f, Ideal(R, [f]), 3) == 1
    assert power_in_ideal(R("z"), ideal(R, "x", "y", "z*t-1"), 20) is None


BIG = ideal(parse_ring("QQ[x,y,z]"), "x^3*y - z^2 + 1", "y^3*z - x^2 + 2", "z^3*x - y^2 + 3")


def test_resource_caps():
    with resource_limits(max_steps=5):
        with pytest.raises(ResourceLimitError):
            buchberger(BIG)
    with resource_limits(max_degree=2):
        with pytest.raises(ResourceLimitError):
            buchberger(BIG)
    with pytest.raises(ValueError):
        with resource_limits(max_steps=0):
            pass


def test_env_cap(monkeypatch):
    monkeypatch.setenv("CANCELAB_MAX_STEPS", "3")
    with pytest.raises(ResourceLimitError):
        buchberger(BIG)


gens_f5 = st.lists(polynomials(F5, 2, 4, nonzero=True), min_size=1, max_size=3)


@settings(max_examples=60, deadline=None)
@given(gens=gens_f5)
def test_gb_is_reduced_gb(gens):
    assert_reduced_gb(buchberger(Ideal(F5, gens)))


@settings(max_examples=60, deadline=None)
@given(gens=gens_f5, h=st.lists(polynomials(F5, 2, 3), min_size=3, max_size=3))
def test_reduced_gb_unique(gens, h):
    # add a combination of the generators and shuffle: same ideal, same reduced basis
    extra = sum((a * g for a, g in zip(h, gens)), F5.zero())
    other = list(reversed(gens)) + [extra]
    assert buchberger(Ideal(F5, gens)).basis == buchberger(Ideal(F5, other)).basis


@settings(max_examples=100, deadline=None)
@given(gens=gens_f5, f=polynomials(F5, 4, 6), g=polynomials(F5, 4, 6))
def test_normal_form_laws(gens, f, g):
    G = buchberger(Ideal(F5, gens))
    nf = normal_form(f, G)
    assert normal_form(nf, G) == nf
    assert normal_form(f + g, G) == normal_form(nf + normal_form(g, G), G)
    ok, cof = ideal_member(f - nf, Ideal(F5, gens))
    assert ok and sum((c * q for c, q in zip(cof, gens)), F5.zero()) == f - nf


@settings(max_examples=80, deadline=None)
@given(gens=gens_f5, f=polynomials(F5, 2, 5), h=st.lists(polynomials(F5, 2, 3), min_size=3, max_size=3),
       member=st.booleans())
def test_membership_matches_linear_algebra(gens, f, h, member):
    if member:
        f = sum((a * g for a, g in zip(h, gens)), F5.zero())
    ok, cof = ideal_member(f, Ideal(F5, gens))
    if ok:
        assert sum((c * g for c, g in zip(cof, gens)), F5.zero()) == f
    oracle = brute_member(f, gens, 5, 4)
    if oracle is not None:
        assert ok
    if member:
        assert ok and oracle is not None


@settings(max_examples=40, deadline=None)
@given(gens=gens_f5)
def test_krull_dim_bounds(gens):
    d = krull_dim(Ideal(F5, gens))
    assert d in (-1, 0, 1)
    if d == -1:
        assert ideal_member(1, Ideal(F5, gens))[0]
