"""Exact polynomial arithmetic, Groebner bases and membership certificates.

Run: python demos/01_polynomials_and_groebner.py
"""
from cancelab.groebner import Ideal, buchberger, ideal_equal, ideal_member, krull_dim, normal_form
from cancelab.polyring import parse_ring

R = parse_ring("QQ[x,y,z,t]")

# Two different generating sets of the same ideal: y*z and y differ by the unit z mod z*t-1.
I1 = Ideal(R, [R("x"), R("y"), R("z*t - 1")])
I2 = Ideal(R, [R("x"), R("y*z"), R("z*t - 1")])
print("reduced basis of I2:", [str(g) for g in buchberger(I2).basis])
print("I1 == I2:", ideal_equal(I1, I2))
print("dim R/I:", krull_dim(I1))

# membership comes with cofactors, which we re-expand by hand
ok, cof = ideal_member(R("y"), I2)
print("y in I2:", ok, "cofactors:", [str(c) for c in cof])
assert sum((c * g for c, g in zip(cof, I2.generators)), R.zero()) == R("y")

# normal forms are canonical representatives mod the ideal
G = buchberger(I1)
print("NF(z^3*t^2 + x*y + 7):", normal_form(R("z^3*t^2 + x*y + 7"), G))

# the same machinery works over prime fields
F = parse_ring("GF(5)[x,y]")
print("GF(5):", [str(g) for g in buchberger(Ideal(F, [F("x^2 + 4*y"), F("x*y - 1")])).basis])
