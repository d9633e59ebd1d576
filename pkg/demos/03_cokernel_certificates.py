"""
Reciprocity cokernels and their certificates
============================================

Each group element contributes a 0/1 vector (bit i set iff the element
arrives at i with sign -1); the span of these vectors is the image lattice U
and the classification concerns B = Z^g / U.  For every primitive
configuration the verifier issues a certificate:

* FullImage / TorsionFree at g <= 3 (always FullImage there),
* possibly IndexTwoSumEven at g = 4 (U equals the sum-even sublattice),
* possibly CyclicThreeQuadraticAction at g = 5 (B = Z/3, the action kernel
  has index two, H acts trivially),
* SmallStabilizer at g = 6.
"""

from collections import Counter

from cmrecip.cmtypes import enumerate_admissible, make_config
from cmrecip.reciprocity import (
    NoCertificate,
    classify,
    image_lattice,
    w_vector,
)
from cmrecip.sgnperm import SignedPerm, closure, delta

# w-vectors by hand: delta contributes the all-ones vector; the mixed
# 3-cycle (1+2+3-) contributes e_1, and its square e_1 + e_2.
sigma = SignedPerm.parse("(1+2+3-)")
print("w(delta)   =", w_vector(delta(3)))
print("w(sigma)   =", w_vector(sigma))
print("w(sigma^2) =", w_vector(sigma * sigma))

# The cyclic order-4 configuration at g=2 has full image.
cfg = make_config(closure([SignedPerm.parse("(1+2-)")]))
data = image_lattice(cfg)
print()
print("g=2 cyclic: w-vectors", sorted(data.w_set), "->", str(data.structure) or "trivial")
print("certificate:", classify(data).kind)

# Census of certificates per degree.
print()
for g in range(1, 5):
    kinds = Counter()
    for c in enumerate_admissible(g, require_primitive=True):
        try:
            kinds[classify(image_lattice(c)).kind] += 1
        except NoCertificate:
            kinds["NoCertificate"] += 1
    print(f"g={g}: {dict(kinds)}")

# At g=4 the nontrivial case is the sum-even sublattice, with B = Z/2.
for c in enumerate_admissible(4, require_primitive=True):
    d = image_lattice(c)
    cert = classify(d)
    if cert.kind == "IndexTwoSumEven":
        print()
        print("a g=4 index-two configuration:", [str(x) for x in c.group.generators])
        print("  image basis rows:", d.u.basis.to_rows())
        print("  cokernel:", str(d.structure), " pi-orders:", d.pi_orders)
        break
