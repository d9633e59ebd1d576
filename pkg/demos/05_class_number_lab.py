"""
The quadratic laboratory: class numbers and the growth trend
============================================================

Class numbers of imaginary quadratic fields via reduced binary quadratic
forms; split primes represent pairwise distinct classes when small enough;
and the median of log h / log sqrt|D| creeps upward between discriminant
bands, the degree-one shadow of class-number growth.
"""

from math import isqrt

from cmrecip.quadforms import (
    QuadForm,
    is_split,
    median_growth_ratio,
    prime_class,
    reduce_form,
    reduced_forms,
    split_prime_distinctness,
)

# Reduction: every positive definite form has a unique reduced representative.
f = QuadForm(3, 4, 2)
print(f"{f} (disc {f.discriminant}) reduces to {reduce_form(f)}")

# Class numbers by direct enumeration of reduced primitive forms.
for d in (-3, -4, -23, -47, -163):
    forms = reduced_forms(d)
    print(f"h({d}) = {len(forms)}   forms: {[str(x) for x in forms]}")

# Split primes land in distinct classes while p < sqrt|D|/2: the reduced
# representative keeps the prime as its leading coefficient.
d = -9967
print()
print(f"split primes up to sqrt({-d})/2 = {isqrt(-d)//2}:")
for p in range(2, isqrt(-d) // 2 + 1):
    if all(p % q for q in range(2, p)) and is_split(p, d):
        print(f"  p={p}: class {prime_class(p, d)}")
report = split_prime_distinctness(d, isqrt(-d) // 2)
print("pairwise distinct:", report.all_distinct)

# The growth trend between two discriminant bands.
print()
low = median_growth_ratio(10**3, 10**4)
high = median_growth_ratio(10**5, 10**6)
print(f"median log h / log sqrt|D|: band [1e3,1e4] = {low:.4f}, band [1e5,1e6] = {high:.4f}")
print("monotone increase:", high > low)
