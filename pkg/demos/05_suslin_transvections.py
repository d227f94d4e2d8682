"""Unimodular pairs, transvections and the phi-matrix isomorphism.

Works over A = QQ[u] with M = A^n and m = e_1.
Run: python demos/05_suslin_transvections.py
"""
from cancelab.linalg import determinant
from cancelab.polyring import parse_ring
from cancelab.suslin import build_phi_matrix, lemma2_iso, lemma3_iso, make_pair, transvect

A = parse_ring("QQ[u]")
u = A("u")

pair = make_pair(A, u, [A.one(), A.zero()])
print("a*b + phi(m) = 1 with b =", pair.b, "phi =", [str(f) for f in pair.phi])

new, cert = transvect(pair, "m", [A.zero(), A.one()])
print("after m -> m + a*m':", [str(c) for c in new.m], "| certificate rechecks:", cert.revalidate())

cert = lemma2_iso(pair, [A.zero(), A.one()], 2)
print("Q(a^2, m) ~ Q(a^2, m + a*m') certified:", cert.valid)

phi = build_phi_matrix(3, u)
print("det phi =", determinant(phi.matrix), "(expected a^3 =", phi.a ** 3, ")")

for n in (2, 3):
    res = lemma3_iso(make_pair(A, u, [A.one()] + [A.zero()] * (n - 1)))
    print(f"n = {n}: A + M/(a, m) ~ M certified: {res.valid}, sign {res.sign}")
