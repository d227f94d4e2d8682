"""Finitely presented modules: duals, Ext, Fitting ideals and isomorphism checks.

M = coker(v^T) for v = (x, y, zt-1) is a rank 2 reflexive module.
Run: python demos/02_presented_modules.py
"""
from cancelab.fpmod import (double_dual_check, dual_module, ext1, fitting_ideal, generic_rank,
                            present_cokernel, prune, tensor_with_quotient, is_free_of_rank)
from cancelab.groebner import Ideal
from cancelab.linalg import Matrix, syzygies
from cancelab.polyring import parse_ring

R = parse_ring("QQ[x,y,z,t]")
x, y, z, t = R.gens()
v = [x, y, z * t - 1]

M = present_cokernel(Matrix.column(R, v), name="M")
print("generic rank of M:", generic_rank(M))
print("M reflexive:", double_dual_check(M).is_iso)

S = syzygies(Matrix.row(R, v))
print("syzygies of v (Koszul relations):")
for j in range(S.ncols):
    print("  ", [str(S[i, j]) for i in range(S.nrows)])

D = dual_module(M)
E, _ = prune(ext1(D.module))
print("Ext^1(M*, R) has", E.ngens, "generator(s) with annihilator",
      [str(f) for f in E.relations.rows[0]])

I = Ideal(R, v)
print("Fitting_0 of R/I:", [str(g) for g in fitting_ideal(present_cokernel(Matrix.row(R, v)), 0).generators])
print("M/IM free of rank 3 over R/I:", is_free_of_rank(tensor_with_quotient(M, I), 3))
