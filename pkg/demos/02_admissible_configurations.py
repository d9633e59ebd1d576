"""
Admissible configurations (G, S, H)
===================================

A configuration is a subgroup of W_g containing the all-minus element with a
transitive unsigned image.  The derived data: S (elements sending 1 somewhere
with sign +), its stabilizer H, and the primitivity flag (the right
stabilizer of S is exactly H).  Enumeration is complete per degree.
"""

from collections import Counter

from cmrecip.cmtypes import enumerate_admissible, make_config
from cmrecip.sgnperm import SignedPerm, closure, delta

# The two degree-2 primitive configurations: the cyclic order-4 group and
# the full W_2; the Klein-type group is admissible but imprimitive.
for gens in (["(1+2-)"], ["(1+2+)", "(1-)(2-)"], ["(1+2+)", "(1-)(2+)"]):
    group = closure([SignedPerm.parse(s, degree=2) for s in gens])
    cfg = make_config(group)
    print(
        f"<{', '.join(gens)}>: order {cfg.order}, "
        f"S = {[str(x) for x in cfg.cm_type]}, |H| = {cfg.stabilizer.order}, "
        f"{'primitive' if cfg.primitive else 'imprimitive'}"
    )

print()
print("complete enumeration by degree (admissible / primitive):")
for g in range(1, 5):
    cfgs = enumerate_admissible(g)
    prim = [c for c in cfgs if c.primitive]
    orders = Counter(c.order for c in prim)
    print(f"  g={g}: {len(cfgs)} / {len(prim)}; primitive orders {dict(sorted(orders.items()))}")

# A subtlety worth knowing: conjugate subgroups of W_g need not carry the
# same configuration data, because the derivation is pinned to the signed
# basepoint (1,+).  These two order-6 subgroups of W_3 are conjugate (by a
# pure sign element) yet disagree on primitivity:
g1 = make_config(closure([SignedPerm.parse("(1-2+3+)"), delta(3)]))
g2 = make_config(closure([SignedPerm.parse("(1+2+3+)"), delta(3)]))
print()
print("conjugate subgroups, different CM types:")
print("  <(1-2+3+), delta> primitive:", g1.primitive)
print("  <(1+2+3+), delta> primitive:", g2.primitive)
