from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cancelab.scalar import (
    GF,
    QQ,
    FieldElement,
    SimpleExtension,
    extension_norm,
    field_arith,
    parse_field,
    rational_nth_power_test,
    resultant,
)

from strategies import nonzero_rationals, rationals


def frac_det(rows):
    """Determinant over QQ by elimination; oracle for norms."""
    A = [[Fraction(x) for x in r] for r in rows]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return det


def mult_matrix_norm(e: FieldElement) -> Fraction:
    L = e.field
    basis = [L.pow(L.gen, k) for k in range(L.degree)]
    cols = [L.mul(e.value, b) for b in basis]
    return frac_det([[cols[j][i] for j in range(L.degree)] for i in range(L.degree)])


CUBE = SimpleExtension(QQ, "w", [-2, 0, 0, 1])
QUAD = SimpleExtension(QQ, "w", [-2, 0, 1])


def ext_elements(L):
    return st.lists(rationals, min_size=L.degree, max_size=L.degree).map(
        lambda cs: FieldElement(L, tuple(Fraction(c) for c in cs)))


def test_add_halves():
    assert QQ(Fraction(1, 2)) + QQ(Fraction(1, 2)) == 1


def test_rational_canonical():
    a = QQ(Fraction(6, -4))
    assert a.value.numerator == -3 and a.value.denominator == 2


@pytest.mark.parametrize("q,n,expected", [(8, 3, (True, Fraction(2))), (2, 3, (False, None)),
                                          (-2, 2, (False, None)), (Fraction(-27, 8), 3, (True, Fraction(-3, 2)))])
def test_nth_power_examples(q, n, expected):
    assert rational_nth_power_test(q, n) == expected


def test_nth_power_rejects_zero():
    with pytest.raises(ValueError):
        rational_nth_power_test(0, 2)


def test_norm_examples():
    theta = FieldElement(CUBE, CUBE.gen)
    assert extension_norm(theta) == 2
    assert extension_norm(theta * theta) == 4
    assert extension_norm(FieldElement(QUAD, QUAD.gen)) == -2
    assert extension_norm(FieldElement(CUBE, CUBE.from_base(Fraction(3, 2)))) == Fraction(27, 8)


def test_resultant_matches_conjugates():
    # product of (r + 1) over the roots r = ±sqrt2
    assert resultant([-2, 0, 1], [1, 1], QQ) == -1


def test_reducible_minpoly_rejected():
    with pytest.raises(ValueError):
        SimpleExtension(QQ, "w", [-4, 0, 1])
    with pytest.raises(ValueError):
        SimpleExtension(QQ, "w", [4, 0, 0, 0, 1])  # x^4+4 = (x^2+2x+2)(x^2-2x+2)


def test_tower_rejected():
    with pytest.raises(ValueError):
        SimpleExtension(CUBE, "v", [-2, 0, 1])


def test_gf_requires_prime():
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        parse_field("GF(9)")


def test_parse_field():
    assert parse_field("QQ") is QQ
    assert parse_field("GF(7)").characteristic == 7
    L = parse_field("QQ(w)/(w^3-2)")
    assert L.degree == 3 and extension_norm(FieldElement(L, L.gen)) == 2


def test_descriptor_mismatch():
    with pytest.raises(ValueError):
        field_arith("add", GF(3)(1), GF(5)(1))


@settings(max_examples=1000, deadline=None)
@given(a=nonzero_rationals, b=rationals, c=rationals)
def test_qq_field_axioms(a, b, c):
    A, B, C = QQ(a), QQ(b), QQ(c)
    assert (A * B) / A == B
    assert A + B == B + A and A * B == B * A
    assert (A + B) + C == A + (B + C) and (A * B) * C == A * (B * C)


@settings(max_examples=1000, deadline=None)
@given(p=st.sampled_from([2, 3, 5, 7, 101]), a=st.integers(1, 10**6), b=st.integers(), c=st.integers())
def test_gf_field_axioms(p, a, b, c):
    F = GF(p)
    if a % p == 0:
        a += 1
    A, B, C = F(a), F(b), F(c)
    assert (A * B) * A.inverse() == B
    assert A + B == B + A and A * B == B * A
    assert (A + B) + C == A + (B + C) and (A * B) * C == A * (B * C)


@settings(max_examples=200, deadline=None)
@given(x=ext_elements(CUBE), y=ext_elements(CUBE))
def test_norm_multiplicative(x, y):
    assert extension_norm(x * y) == extension_norm(x) * extension_norm(y)


@settings(max_examples=100, deadline=None)
@given(x=ext_elements(CUBE))
def test_norm_is_det_of_multiplication(x):
    assert extension_norm(x).value == mult_matrix_norm(x)


@settings(max_examples=100, deadline=None)
@given(x=ext_elements(QUAD).filter(lambda e: not e.is_zero()), y=ext_elements(QUAD))
def test_extension_division(x, y):
    assert (x * y) / x == y


@settings(max_examples=100, deadline=None)
@given(q=nonzero_rationals, n=st.integers(1, 7))
def test_nth_power_of_random_rational(q, n):
    ok, r = rational_nth_power_test(q ** n, n)
    assert ok and r ** n == q ** n


@given(b=rationals, n=st.sampled_from([2, 3]))
def test_norm_of_base_element(b, n):
    L = QUAD if n == 2 else CUBE
    assert extension_norm(FieldElement(L, L.from_base(b))) == Fraction(b) ** n
