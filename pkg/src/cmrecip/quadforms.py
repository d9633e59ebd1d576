"""Binary quadratic forms of negative discriminant: reduction, class
numbers, split-prime representatives, and class-number growth tables.

A form (a, b, c) is positive definite when b^2 - 4ac < 0 and a > 0; it is
reduced when |b| <= a <= c with b >= 0 if |b| = a or a = c, and every class
contains exactly one reduced form.  Class numbers here count reduced
primitive forms of the given discriminant.

Two counting paths exist on purpose: ``class_number`` enumerates reduced
forms directly, while ``class_number_via_reduction`` reduces a redundant
sweep of forms with small leading coefficient; they must agree.  For bulk
tables, ``class_number_band`` counts all reduced forms for every
discriminant up to a bound with strided array updates; for fundamental
discriminants every form is automatically primitive (an imprimitive form
would force a square factor g^2 with Delta / g^2 still a discriminant),
so the bulk counts agree with the primitive counts exactly where the
growth table uses them.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt, log
from typing import Iterator

import numpy as np


class NotPositiveDefinite(ValueError):
    """Form is not positive definite (needs negative discriminant, a > 0)."""


class BadDiscriminant(ValueError):
    """Discriminants must be negative and congruent to 0 or 1 mod 4."""


class NotSplit(ValueError):
    """The prime does not split for this discriminant."""


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_positive_definite(self) -> bool:
        return self.discriminant < 0 and self.a > 0

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not self.is_positive_definite:
            return False
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    @property
    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def reduce_form(f: QuadForm) -> QuadForm:
    """The unique reduced form equivalent to ``f`` (discriminant preserved)."""
    if not f.is_positive_definite:
        raise NotPositiveDefinite(f"{f} is not positive definite")
    disc = f.discriminant
    a, b, c = f.a, f.b, f.c
    while True:
        # translate b into (-a, a]; the floor lands in [-a, a) and the
        # b = -a edge is the same class as b = +a with c unchanged
        if not (-a < b <= a):
            k = (b + a) // (2 * a)
            b = b - 2 * a * k
            if b == -a:
                b = a
            c = (b * b - disc) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        break
    out = QuadForm(a, b, c)
    assert out.is_reduced and out.discriminant == disc
    return out


def _check_discriminant(disc: int) -> None:
    if disc >= 0 or disc % 4 not in (0, 1):
        raise BadDiscriminant(f"{disc} is not a negative discriminant")


def reduced_forms(disc: int, primitive_only: bool = True) -> list[QuadForm]:
    """All reduced (primitive) forms of the discriminant, by direct sweep."""
    _check_discriminant(disc)
    out = []
    for a in range(1, isqrt(-disc // 3) + 1):
        for b in range(-a, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            f = QuadForm(a, b, num // (4 * a))
            if f.is_reduced and (f.is_primitive or not primitive_only):
                out.append(f)
    return out


def class_number(disc: int) -> int:
    """Count of reduced primitive forms of the discriminant."""
    return len(reduced_forms(disc))


def class_number_via_reduction(disc: int) -> int:
    """Independent second counting path: reduce a redundant sweep of forms.

    Every class contains a form with a <= sqrt(|disc|) (its reduced one),
    so sweeping all forms in that range and reducing them hits every class.
    """
    _check_discriminant(disc)
    seen = set()
    for a in range(1, isqrt(-disc) + 1):
        for b in range(-a, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            f = QuadForm(a, b, num // (4 * a))
            if f.is_primitive:
                seen.add(reduce_form(f))
    return len(seen)


def is_squarefree(n: int) -> bool:
    if n <= 0:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental(disc: int) -> bool:
    """Is this the discriminant of an imaginary quadratic field?"""
    if disc >= 0 or disc % 4 not in (0, 1):
        return False
    if disc % 4 == 1:
        return is_squarefree(-disc)
    m = (-disc) // 4
    return m % 4 in (1, 2) and is_squarefree(m)


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for n > 0."""
    if n <= 0:
        raise ValueError("only positive n here")
    if n % 2 == 0 and a % 2 == 0:
        return 0
    result = 1
    # pull out factors of 2 from n
    while n % 2 == 0:
        n //= 2
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_split(p: int, disc: int) -> bool:
    """Does the prime split: (disc|p) = +1, with the mod-8 rule at p = 2."""
    _check_discriminant(disc)
    if p == 2:
        return disc % 8 == 1
    return disc % p != 0 and kronecker_symbol(disc, p) == 1


def prime_class(p: int, disc: int) -> QuadForm:
    """Reduced form of (p, b, (b^2-disc)/(4p)) for the least b >= 0 with
    b^2 = disc mod 4p; requires the prime to split."""
    if not is_split(p, disc):
        raise NotSplit(f"{p} does not split for discriminant {disc}")
    for b in range(0, 2 * p + 1):
        if (b * b - disc) % (4 * p) == 0:
            return reduce_form(QuadForm(p, b, (b * b - disc) // (4 * p)))
    raise AssertionError("a split prime always has a square root mod 4p")


def _primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for d in range(2, isqrt(n) + 1):
        if sieve[d]:
            sieve[d * d :: d] = b"\x00" * len(sieve[d * d :: d])
    return [i for i in range(2, n + 1) if sieve[i]]


@dataclass(frozen=True)
class SplitPrimeReport:
    discriminant: int
    bound: int
    assignments: tuple[tuple[int, QuadForm], ...]
    all_distinct: bool

    def to_dict(self) -> dict:
        return {
            "discriminant": self.discriminant,
            "bound": self.bound,
            "splitPrimes": [
                {"p": p, "form": [f.a, f.b, f.c]} for p, f in self.assignments
            ],
            "allDistinct": self.all_distinct,
        }


def split_prime_distinctness(disc: int, bound: int) -> SplitPrimeReport:
    """Split primes up to the bound with their classes; asserts pairwise
    distinctness is recorded (it holds whenever 4 * bound^2 <= |disc|)."""
    _check_discriminant(disc)
    if not is_fundamental(disc):
        raise BadDiscriminant(f"{disc} is not fundamental")
    if 4 * bound * bound > -disc:
        raise ValueError("bound must satisfy bound <= sqrt(|disc|)/2")
    assignments = []
    for p in _primes_up_to(bound):
        if is_split(p, disc):
            assignments.append((p, prime_class(p, disc)))
    forms = [f for _, f in assignments]
    return SplitPrimeReport(
        disc, bound, tuple(assignments), len(set(forms)) == len(forms)
    )


# ---------------------------------------------------------------------------
# Bulk class-number tables and the growth trend.
# ---------------------------------------------------------------------------


def class_number_band(limit: int) -> np.ndarray:
    """h[n] = number of reduced forms of discriminant -n, for all n <= limit.

    Counts every reduced form, primitive or not; restrict to fundamental
    discriminants (where all forms are primitive) for field class numbers.
    Strided array updates keep this near O(sum of the class numbers).
    """
    h = np.zeros(limit + 1, dtype=np.int64)
    amax = isqrt(limit) + 1
    for b in range(0, amax + 1):
        for a in range(max(b, 1), amax + 1):
            n0 = 4 * a * a - b * b  # c = a
            if n0 > limit:
                break
            h[n0] += 1
            # c > a: weight 2 for 0 < b < a, else 1
            w = 2 if 0 < b < a else 1
            start = n0 + 4 * a
            if start <= limit:
                h[start :: 4 * a] += w
    return h


def fundamental_mask(limit: int) -> np.ndarray:
    """mask[n] is True iff -n is a fundamental discriminant."""
    sf = np.ones(limit + 1, dtype=bool)
    sf[0] = False
    for d in range(2, isqrt(limit) + 1):
        sf[d * d :: d * d] = False
    n = np.arange(limit + 1)
    mask = (n % 4 == 3) & sf
    m4 = n // 4
    mask |= (n % 4 == 0) & (n >= 4) & sf[m4] & ((m4 % 4 == 1) | (m4 % 4 == 2))
    return mask


@dataclass(frozen=True)
class TrendRow:
    discriminant: int
    h: int
    ratio: float


def growth_ratio(h: int, disc: int) -> float:
    """log h / log sqrt|disc|."""
    return 2.0 * log(h) / log(-disc)


def brauer_siegel_rows(abs_min: int, abs_max: int) -> list[TrendRow]:
    """One row per fundamental discriminant with |disc| in [abs_min, abs_max]."""
    if not 3 <= abs_min < abs_max:
        raise ValueError("need 3 <= abs_min < abs_max")
    h = class_number_band(abs_max)
    mask = fundamental_mask(abs_max)
    rows = []
    for n in range(abs_min, abs_max + 1):
        if mask[n]:
            rows.append(TrendRow(-n, int(h[n]), growth_ratio(int(h[n]), -n)))
    return rows


def brauer_siegel_csv(abs_min: int, abs_max: int) -> Iterator[str]:
    """CSV lines ``discriminant,h,ratio`` (header excluded), sorted by |disc|."""
    for row in brauer_siegel_rows(abs_min, abs_max):
        yield f"{row.discriminant},{row.h},{row.ratio}"

def median_growth_ratio(abs_min: int, abs_max: int) -> float:
    """Median of log h / log sqrt|disc| over fundamental discriminants."""
    rows = brauer_siegel_rows(abs_min, abs_max)
    return float(np.median([r.ratio for r in rows]))
