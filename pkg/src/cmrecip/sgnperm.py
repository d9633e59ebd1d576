"""Signed permutations and the hyperoctahedral groups W_g.

An element of W_g is a permutation of {1..g} with a sign attached to each
index: it takes ``i`` to ``image[i]`` with sign ``signs[i]``.  Composition
multiplies signs along the way:

    (a * b)(i) = a(b(i)),   sign_{a*b}(i) = sign_a(b(i)) * sign_b(i)

so for sigma = (1+3-)(2-) one has sigma^2 = (1-)(3-)(2+).  The text form
of an element is its cycle decomposition with a sign suffix per point, e.g.
``(1+3-)(2-)``: the sign printed after ``j`` is the sign with which ``j``
is sent to the next point of its cycle.

The central element with all points fixed negatively (``delta``) plays the
role of complex conjugation.  |W_g| = 2^g * g!.

Hot loops elsewhere use a packed form ``(perm, mask)`` where ``perm`` is a
0-based image tuple and bit ``i`` of ``mask`` is set iff the sign at index
``i+1`` is -1; the helpers at the bottom implement that algebra.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import factorial
from typing import Iterable, Iterator, Sequence

MAX_DEGREE = 8


class DegreeMismatch(ValueError):
    """Operands live in hyperoctahedral groups of different degrees."""


class DegreeTooLarge(ValueError):
    """Degrees above MAX_DEGREE are not materialized."""


@dataclass(frozen=True, slots=True)
class SignedPerm:
    """A signed permutation; ``image`` is 1-based, ``signs`` entries are +-1."""

    image: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        g = len(self.image)
        if sorted(self.image) != list(range(1, g + 1)):
            raise ValueError("image is not a permutation of 1..g")
        if len(self.signs) != g or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be a +-1 sequence of the same length")

    @property
    def degree(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, g: int) -> "SignedPerm":
        return cls(tuple(range(1, g + 1)), (1,) * g)

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        return compose(self, other)

    def inverse(self) -> "SignedPerm":
        g = self.degree
        img = [0] * g
        sgn = [1] * g
        for i in range(g):
            j = self.image[i] - 1
            img[j] = i + 1
            sgn[j] = self.signs[i]
        return SignedPerm(tuple(img), tuple(sgn))

    def is_identity(self) -> bool:
        return self.image == tuple(range(1, self.degree + 1)) and all(s == 1 for s in self.signs)

    def unsigned(self) -> tuple[int, ...]:
        """Underlying permutation, forgetting signs (1-based image tuple)."""
        return self.image

    def apply(self, i: int) -> tuple[int, int]:
        """Where index ``i`` goes and with what sign."""
        return self.image[i - 1], self.signs[i - 1]

    def cycles(self) -> list[list[int]]:
        seen = [False] * self.degree
        out = []
        for start in range(1, self.degree + 1):
            if seen[start - 1]:
                continue
            cyc = []
            i = start
            while not seen[i - 1]:
                seen[i - 1] = True
                cyc.append(i)
                i = self.image[i - 1]
            out.append(cyc)
        return out

    def signed_cycle_type(self) -> tuple[tuple[int, int], ...]:
        """Sorted multiset of (cycle length, product of signs along the cycle).

        This is a complete conjugacy invariant of the element in W_g.
        """
        out = []
        for cyc in self.cycles():
            prod = 1
            for i in cyc:
                prod *= self.signs[i - 1]
            out.append((len(cyc), prod))
        return tuple(sorted(out))

    def __str__(self) -> str:
        parts = []
        for cyc in self.cycles():
            bits = []
            for i in cyc:
                bits.append(f"{i}{'+' if self.signs[i - 1] == 1 else '-'}")
            parts.append("(" + "".join(bits) + ")")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"SignedPerm.parse({str(self)!r})"

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "SignedPerm":
        """Inverse of ``str``: parse cycle notation like ``(1+3-)(2-)``."""
        if not re.fullmatch(r"\s*(\([^()]*\)\s*)*", text):
            raise ValueError(f"malformed signed permutation {text!r}")
        cycles = re.findall(r"\(([^()]*)\)", text)
        pts: list[tuple[int, int]] = []
        cycle_lists = []
        for body in cycles:
            items = re.findall(r"(\d+)\s*([+-])", body)
            if not items or "".join(a + b for a, b in items) != body.replace(" ", ""):
                raise ValueError(f"malformed cycle ({body})")
            cyc = [(int(n), 1 if s == "+" else -1) for n, s in items]
            cycle_lists.append(cyc)
            pts.extend(cyc)
        indices = [i for i, _ in pts]
        if len(set(indices)) != len(indices):
            raise ValueError("repeated index in cycles")
        g = degree if degree is not None else max(indices, default=0)
        if any(i < 1 or i > g for i in indices):
            raise ValueError("index out of range for the given degree")
        img = list(range(1, g + 1))
        sgn = [1] * g
        for cyc in cycle_lists:
            for k, (i, s) in enumerate(cyc):
                j = cyc[(k + 1) % len(cyc)][0]
                img[i - 1] = j
                sgn[i - 1] = s
        return cls(tuple(img), tuple(sgn))


def compose(a: SignedPerm, b: SignedPerm) -> SignedPerm:
    """a after b, with signs multiplied along the trip."""
    if a.degree != b.degree:
        raise DegreeMismatch(f"degrees {a.degree} and {b.degree}")
    ai, asn = a.image, a.signs
    bi, bsn = b.image, b.signs
    img = tuple(ai[j - 1] for j in bi)
    sgn = tuple(asn[bi[k] - 1] * bsn[k] for k in range(len(bi)))
    return SignedPerm(img, sgn)


def delta(g: int) -> SignedPerm:
    """All indices fixed with sign -1; central in W_g and an involution."""
    if g < 1:
        raise ValueError("degree must be >= 1")
    return SignedPerm(tuple(range(1, g + 1)), (-1,) * g)


def hyperoctahedral_order(g: int) -> int:
    return 2**g * factorial(g)


@dataclass(frozen=True)
class SignedGroup:
    """A subgroup of W_g, materialized as a canonically sorted element tuple."""

    degree: int
    generators: tuple[SignedPerm, ...]
    elements: tuple[SignedPerm, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_elemset", frozenset(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: SignedPerm) -> bool:
        return x in self._element_set()

    def _element_set(self) -> frozenset[SignedPerm]:
        return self._elemset  # type: ignore[attr-defined]

    def __iter__(self) -> Iterator[SignedPerm]:
        return iter(self.elements)

    def canonical_key(self) -> tuple:
        return (self.order, tuple(str(e) for e in self.elements))


def _sort_key(x: SignedPerm) -> tuple:
    return (x.image, x.signs)


def _from_elements(degree: int, gens: Sequence[SignedPerm], elements: Iterable[SignedPerm]) -> SignedGroup:
    elems = tuple(sorted(set(elements), key=_sort_key))
    return SignedGroup(degree, tuple(gens), elems)


def closure(gens: Sequence[SignedPerm], degree: int | None = None) -> SignedGroup:
    """Subgroup generated by ``gens`` (breadth-first multiplicative closure)."""
    if not gens:
        if degree is None:
            raise ValueError("degree required for an empty generating set")
        g = degree
    else:
        g = gens[0].degree
        if any(x.degree != g for x in gens):
            raise DegreeMismatch("generators of mixed degree")
        if degree is not None and degree != g:
            raise DegreeMismatch("explicit degree does not match generators")
    if g > MAX_DEGREE:
        raise DegreeTooLarge(f"degree {g} > {MAX_DEGREE}")
    ident = SignedPerm.identity(g)
    elements = {ident}
    frontier = [x for x in set(gens) if x not in elements]
    elements.update(frontier)
    while frontier:
        new = []
        for b in frontier:
            for a in gens:
                c = a * b
                if c not in elements:
                    elements.add(c)
                    new.append(c)
        frontier = new
    grp = _from_elements(g, gens, elements)
    assert hyperoctahedral_order(g) % grp.order == 0
    return grp


def full_group(g: int) -> SignedGroup:
    """W_g itself, materialized directly (all image/sign combinations)."""
    if g > MAX_DEGREE:
        raise DegreeTooLarge(f"degree {g} > {MAX_DEGREE}")
    from itertools import permutations, product

    elems = [
        SignedPerm(img, sgn)
        for img in permutations(range(1, g + 1))
        for sgn in product((1, -1), repeat=g)
    ]
    gens: list[SignedPerm] = [delta(g)]
    if g >= 2:
        swap = list(range(1, g + 1))
        swap[0], swap[1] = swap[1], swap[0]
        gens.append(SignedPerm(tuple(swap), (1,) * g))
        cyc = tuple(list(range(2, g + 1)) + [1])
        gens.append(SignedPerm(cyc, (1,) * g))
    flip1 = SignedPerm(tuple(range(1, g + 1)), tuple(-1 if i == 0 else 1 for i in range(g)))
    gens.append(flip1)
    return _from_elements(g, gens, elems)


def is_transitive(group: SignedGroup) -> bool:
    """Does the underlying unsigned action move 1 to every index?"""
    g = group.degree
    reached = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for i in frontier:
            for x in group.generators or group.elements:
                j = x.image[i - 1]
                if j not in reached:
                    reached.add(j)
                    nxt.append(j)
        frontier = nxt
    return len(reached) == g


def stabilizer_of_one_positive(group: SignedGroup) -> SignedGroup:
    """The subgroup of elements sending 1 to itself with sign +1."""
    elems = [x for x in group.elements if x.image[0] == 1 and x.signs[0] == 1]
    return _from_elements(group.degree, minimal_generators_of(elems), elems)


def minimal_generators_of(elements: Sequence[SignedPerm]) -> tuple[SignedPerm, ...]:
    """A short, deterministic generating sequence for a closed element set.

    Greedy over the canonical element order; empty for the trivial group.
    """
    elems = sorted(set(elements), key=_sort_key)
    if not elems:
        raise ValueError("empty element set")
    g = elems[0].degree
    target = frozenset(elems)
    gens: list[SignedPerm] = []
    have: frozenset[SignedPerm] = frozenset({SignedPerm.identity(g)})
    for x in elems:
        if x in have:
            continue
        gens.append(x)
        have = closure(gens, degree=g)._element_set()
        if len(have) == len(target):
            break
    return tuple(gens)


def group_invariant_key(group: SignedGroup) -> tuple:
    """A cheap W_g-conjugation invariant used to bucket before exact search."""
    from collections import Counter

    counts = Counter(x.signed_cycle_type() for x in group.elements)
    return (group.order, tuple(sorted(counts.items())))


def conjugate_in_wg(group1: SignedGroup, group2: SignedGroup) -> bool:
    """Is there w in W_g with w * group1 * w^-1 = group2?

    Exact search over W_g: for each candidate w the generators of group1 are
    conjugated and tested for membership in group2 (equal orders make the
    containment an equality).  Candidates failing the cheap invariants are
    never scanned.
    """
    if group1.degree != group2.degree:
        return False
    if group1.order != group2.order:
        return False
    if group_invariant_key(group1) != group_invariant_key(group2):
        return False
    g = group1.degree
    gens = group1.generators or tuple(group1.elements)
    other = group2._element_set()
    packed_gens = [pack(x) for x in gens]
    other_packed = frozenset(pack(x) for x in other)
    from itertools import permutations, product

    for img in permutations(range(g)):
        for mask in range(1 << g):
            w = (img, mask)
            winv = pack_inverse(w)
            ok = True
            for a in packed_gens:
                c = pack_mul(pack_mul(w, a), winv)
                if c not in other_packed:
                    ok = False
                    break
            if ok:
                return True
    return False


# ---------------------------------------------------------------------------
# Packed form: (perm, mask) with 0-based image tuple and minus-sign bitmask.
# ---------------------------------------------------------------------------

Packed = tuple[tuple[int, ...], int]


def pack(x: SignedPerm) -> Packed:
    mask = 0
    for i, s in enumerate(x.signs):
        if s == -1:
            mask |= 1 << i
    return (tuple(j - 1 for j in x.image), mask)


def unpack(p: Packed) -> SignedPerm:
    perm, mask = p
    g = len(perm)
    return SignedPerm(
        tuple(j + 1 for j in perm),
        tuple(-1 if (mask >> i) & 1 else 1 for i in range(g)),
    )


def pack_identity(g: int) -> Packed:
    return (tuple(range(g)), 0)


def pack_mul(a: Packed, b: Packed) -> Packed:
    """(a * b)(i) = a(b(i)); minus-bit i = bit_a(b(i)) xor bit_b(i)."""
    pa, ma = a
    pb, mb = b
    mask = mb
    for i, j in enumerate(pb):
        if (ma >> j) & 1:
            mask ^= 1 << i
    return (tuple(pa[j] for j in pb), mask)


def pack_inverse(a: Packed) -> Packed:
    pa, ma = a
    g = len(pa)
    inv = [0] * g
    for i, j in enumerate(pa):
        inv[j] = i
    mask = 0
    for j in range(g):
        if (ma >> inv[j]) & 1:
            mask |= 1 << j
    return (tuple(inv), mask)
