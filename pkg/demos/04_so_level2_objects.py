"""
gYBE objects in SO(2r+1) at level 2
===================================

The rank r+4 fusion rings of SO(2r+1)_2 have r objects X_i of dimension
2 that act on {Xeps, Xeps'} by the regular representation.  A search over
all simple objects finds exactly these.
"""

from gybe.finder import check_dim_integrality, find_gybe_objects, fp_dimensions
from gybe.fusion import JK_RELABEL, builtin_category, gen_so_odd_level2

for r in range(1, 6):
    ring = gen_so_odd_level2(r)
    dims = fp_dimensions(ring)
    certs = find_gybe_objects(ring, 1)
    found = ", ".join(f"({c.x}, {{{', '.join(c.s)}}})" for c in certs)
    print(f"r = {r}: {len(ring.labels)} labels, Xeps has dimension {dims['Xeps']:.6f}")
    print("   gYBE objects:", found)
    print("   dimension equals |S|:", all(check_dim_integrality(c, dims) for c in certs))

# r = 1 is the JK6 ring after renaming labels
jk = gen_so_odd_level2(1).relabel(JK_RELABEL, order=["0", "1", "2", "3", "4"])
print("SO(3)_2 relabeled equals JK6:", jk == builtin_category("jk6").ring)
