"""
Braid group representations and their images
============================================

A 3-site solution R gives B_n acting on V^(n+1) with sigma_k acting on
sites k, k+1, k+2.  We check the braid relations exactly and enumerate
the image of B_3 by breadth-first search.
"""

import time

from gybe.fusion import ObjectExpr, builtin_category
from gybe.finder import is_gybe_object
from gybe.rep import assemble_R, braid_rep
from gybe.verifier import check_braid_relations, group_closure, verify_closure

cat = builtin_category("jk6")
R = assemble_R(cat, is_gybe_object(cat.ring, ObjectExpr(("2",)), ["1", "3"]))

for n in (2, 3, 4):
    rep = braid_rep(R, 2, n)
    print(f"B_{n} on {rep.dimension} dimensions: relations hold = {check_braid_relations(rep)}")

# modulo scalars the image of B_3 is finite
rep = braid_rep(R, 2, 3)
t0 = time.perf_counter()
for projective in (True, False):
    report = group_closure(rep.generators, projective=projective)
    mode = "projective" if projective else "linear"
    print(f"{mode} image order: {report.order}, closed: {verify_closure(report, rep.generators)}")
print(f"closure took {time.perf_counter() - t0:.2f} s")
