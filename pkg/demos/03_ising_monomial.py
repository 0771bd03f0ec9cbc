"""
Ising: a sum of invertible objects
==================================

X = 1 + psi is not simple, but both summands are invertible, so each
fusion tree is sent to a single other tree times an R-symbol.  The
resulting R-matrix is a signed permutation.
"""

from gybe.finder import eigenvalue_bound_l, is_gybe_object
from gybe.fusion import ObjectExpr, builtin_category
from gybe.rep import assemble, braid_rep
from gybe.verifier import certify_eigenvalues, check_gybe, group_closure

cat = builtin_category("ising")
cert = is_gybe_object(cat.ring, ObjectExpr(("1", "psi")), ["1", "psi"])
asm = assemble(cat, cert)
print("construction path:", asm.path)
print(asm.R)

print("gYBE holds:", check_gybe(asm.R, 2, 3))

# eigenvalues are +-1; the bound counts summands of X (x) X with multiplicity
eig = certify_eigenvalues(asm.R, [1, -1])
print("eigenvalues:", [str(e) for e in eig.certified], "bound l =", eigenvalue_bound_l(cat.ring, cert.x))

# signed permutations form a finite group, so the B_3 image is finite
rep = braid_rep(asm.R, 2, 3)
print("image of B_3 has order", group_closure(rep.generators).order)
