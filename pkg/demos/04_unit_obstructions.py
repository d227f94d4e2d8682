"""Unit equations in the three quotient models and how each is decided.

Run: python demos/04_unit_obstructions.py
"""
from fractions import Fraction

from cancelab.groebner import Ideal
from cancelab.lab import build_example
from cancelab.obstruction import UnitEquation, derive_unit_equation, recognize_quotient, solve_unit_equation
from cancelab.scalar import FieldElement, Rationals, SimpleExtension, extension_norm, rational_nth_power_test
from cancelab.polyring import parse_ring

for family, params in [("four_variable", {}), ("rank_family", {"n": 3}),
                       ("char_p", {"p": 3}), ("extension", {"n": 2})]:
    eq = derive_unit_equation(build_example(family, **params))
    sol = solve_unit_equation(eq)
    print(f"{family:14} {eq.describe():40} -> {sol.status}: {sol.reason}")

# a solvable control: z^2 is a square of a unit in k[z, z^-1]
R = parse_ring("QQ[x,y,z,t]")
rec = recognize_quotient(Ideal(R, [R("x"), R("y"), R("z*t-1")]))
sol = solve_unit_equation(UnitEquation(rec, {2: Fraction(1)}, 2, False))
print("z^2 as a square:", sol.status, sol.witness)

# the norm behind the extension case
L = SimpleExtension(Rationals(), "theta", [-2, 0, 0, 1])  # theta^3 = 2
print("N(theta) =", extension_norm(FieldElement(L, L.gen)),
      "| 2 a rational cube:", rational_nth_power_test(Fraction(2), 3)[0])
