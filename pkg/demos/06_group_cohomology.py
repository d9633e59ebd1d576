"""
Integer cohomology of small group actions
=========================================

H^1 and H^2 from the inhomogeneous cochain complex, reduced by exact Smith
normal form.  Sanity anchors: the sign action of C2 on Z has H^1 = Z/2; the
trivial C2-module Z has H^2 = Z/2; regular representations are acyclic in
degree one; and everything is annihilated by the group order.
"""

from cmrecip.glattice import (
    GLattice,
    cohomology,
    cyclic_group,
    invariant_gram,
    minimal_vectors,
    symmetric_group,
)
from cmrecip.intlin import IntMatrix

print("H^1(C2, Z with negation) =", cohomology(GLattice.sign_flip(1), 1))
print("H^2(C2, Z trivial)       =", cohomology(GLattice.trivial(cyclic_group(2), 1), 2))

for name, grp in (("C2", cyclic_group(2)), ("C3", cyclic_group(3)), ("S3", symmetric_group(3))):
    h = cohomology(GLattice.regular(grp), 1)
    print(f"H^1({name}, Z[{name}])        = {h}")

# A rank-2 action of C4 by a rotation matrix: H^1 detects the fixed-point
# free rotation, H^2 the norm relations.
rot = IntMatrix.from_rows([[0, -1], [1, 0]])
c4 = cyclic_group(4)
mats = [IntMatrix.identity(2)]
for _ in range(3):
    mats.append(mats[-1] @ rot)
lat = GLattice(c4, 2, tuple(mats))
print("H^1(C4, Z^2 rotation)    =", cohomology(lat, 1))
print("H^2(C4, Z^2 rotation)    =", cohomology(lat, 2))

# The averaged invariant form and its minimal vectors.
q = invariant_gram(lat)
print("invariant gram numerator =", q.numerator.to_rows(), "/", q.denominator)
print("minimal vectors          =", sorted(minimal_vectors(lat, q)))
