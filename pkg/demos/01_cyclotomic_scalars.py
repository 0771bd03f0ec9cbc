"""
Exact arithmetic in cyclotomic fields
=====================================

Every number in this package lives in Q(zeta_N), stored as rational
coordinates in the power basis.  Equality is exact; floats only appear
when we ask for a complex embedding.
"""

from fractions import Fraction

from gybe.scalar import CycloScalar, root_of_unity

# zeta_24 and a few of its powers
z = root_of_unity(1, 24)
print("z          =", z)
print("z^12       =", z**12)

# 1/sqrt(2) is z^3 + z^21 over 2; its square is exactly 1/2
s = (z**3 + z**21) / 2
print("(1/sqrt2)^2 =", s * s, "==", Fraction(1, 2), ":", s * s == Fraction(1, 2))

# the nontrivial cube roots of unity sum to -1
w = root_of_unity(1, 3)
print("w + w^2 + 1 is zero:", (w + w * w + 1).is_zero())

# inverses are exact, computed from Galois conjugates and the norm
a = 3 + z - z**5 / 7
print("a * a^-1 =", a * a.inverse())

# complex conjugation is the Galois automorphism z -> z^-1
print("conj(z) == z^23:", a.conjugate().conjugate() == a and z.conjugate() == z**23)

# elements from different fields promote to a common one
b = root_of_unity(1, 5)
print("order of w + b:", (w + b).order)

# the embedding into C is for display only
print("embed(a) =", a.embed_complex())
print("terms    =", CycloScalar.from_terms(a.to_terms(), 24) == a)
