"""
Signed permutations: the algebra of W_g
=======================================

A tour of the hyperoctahedral group: cycle notation with signs, composition,
the central all-minus element, subgroup closure, and conjugacy.
"""

from cmrecip.sgnperm import SignedPerm, closure, conjugate_in_wg, delta, full_group

# An element is written in cycle notation with one sign per point: (1+3-)(2-)
# takes 1 to 3 with sign +, 3 to 1 with sign -, and fixes 2 with sign -.
sigma = SignedPerm.parse("(1+3-)(2-)")
print("sigma        =", sigma)
print("sigma^2      =", sigma * sigma)  # signs multiply along the way
print("sigma^-1     =", sigma.inverse())

# The all-minus element plays the role of complex conjugation: an involution
# that commutes with everything.
d = delta(3)
print("delta        =", d)
print("delta^2      =", d * d)
print("central?     =", all(d * x == x * d for x in full_group(3).elements))

# Subgroups are materialized by multiplicative closure.
c4 = closure([SignedPerm.parse("(1+2-)")])
print("|<(1+2-)>|   =", c4.order, "elements:", [str(x) for x in c4.elements])
print("contains delta:", delta(2) in c4)

# |W_g| = 2^g g!
for g in range(1, 5):
    print(f"|W_{g}| =", full_group(g).order)

# Conjugacy of subgroups is decided by exact search with invariant pruning.
other = closure([SignedPerm.parse("(1-2+)")])
print("<(1+2-)> ~ <(1-2+)> in W_2:", conjugate_in_wg(c4, other))
