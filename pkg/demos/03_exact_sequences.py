"""Short exact sequences, split certificates and a Schanuel pullback.

Run: python demos/03_exact_sequences.py
"""
from cancelab.fpmod import ModuleMap, free_module, is_free_of_rank, present_cokernel
from cancelab.linalg import Matrix
from cancelab.polyring import parse_ring
from cancelab.seqcalc import ShortExactSequence, dualize_sequence, schanuel_splice, verify_exact, verify_split

R = parse_ring("QQ[x,y,z,t]")
x, y, z, t = R.gens()
one = R.one()
F1, F2 = free_module(R, 1), free_module(R, 2)

# 0 -> R -z-> R -> R/z -> 0 is exact and does not split
Rz = present_cokernel(Matrix.row(R, [z]), name="R/z")
seq = ShortExactSequence(ModuleMap(F1, F1, Matrix.row(R, [z])), ModuleMap(F1, Rz, Matrix.row(R, [one])))
print("exact:", verify_exact(seq).exact, "| split:", verify_split(seq).split)

# 0 -> R -(x,1)-> R^2 -(1,-x)-> R -> 0 splits; the section is explicit
seq = ShortExactSequence(ModuleMap(F1, F2, Matrix.column(R, [x, one])),
                         ModuleMap(F2, F1, Matrix.row(R, [one, -x])))
rep = verify_split(seq)
sec = rep.section.matrix
print("split:", rep.split, "| section R -> R^2:", [str(sec[i, 0]) for i in range(sec.nrows)])

# dualizing the non-split sequence exposes Ext^1(R/z, R)
d = dualize_sequence(ShortExactSequence(ModuleMap(F1, F1, Matrix.row(R, [z])),
                                        ModuleMap(F1, Rz, Matrix.row(R, [one]))))
print("dual exact:", d.exact, "| modules reported:", sorted(d.ext_modules))

# two surjections onto R/z: the pullback is free of rank 2
q = ModuleMap(F1, Rz, Matrix.row(R, [one]))
res = schanuel_splice(q, q)
print("pullback free of rank 2:", is_free_of_rank(res.pullback, 2))
