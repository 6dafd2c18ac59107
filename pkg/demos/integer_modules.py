"""
Finitely generated abelian groups underneath
============================================

Over Z the spaces Psi_i and Phi are finitely generated abelian groups,
kept in invariant-factor form.  Smith normal form does the work.
"""

from pervcalc.linalg import ZZ, FGModule, Matrix, ModuleMap, smith_form
from pervcalc.perv import hom_space
from pervcalc.gallery import gallery

A = Matrix(ZZ, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
S = smith_form(A)
print("invariant factors:", S.diag)
print("U A V == D:", S.U @ A @ S.V == S.D)

# the cokernel of A as an abelian group
f = ModuleMap(FGModule(ZZ, 3), FGModule(ZZ, 3), A)
print("coker A =", f.cokernel())
print("ker A =", f.kernel())

# homomorphisms between perverse sheaves over Z form a lattice too
rx, ic = gallery("rx_shift").value, gallery("ic_x").value
print("rank of Hom(R_X[1], I_X):", len(hom_space(rx, ic)))
