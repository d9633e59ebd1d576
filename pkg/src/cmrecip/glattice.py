"""Lattices with a finite group action.

A ``GLattice`` is Z^d together with a homomorphism from a finite group into
GL_d(Z), the matrices acting on column vectors.  This module provides:

* ``invariant_gram``: the averaged G-invariant positive definite form,
  kept exact as an integer matrix over the common denominator |G|;
* ``minimal_vectors``: all nonzero lattice vectors of least norm for a
  positive definite form, by exact ellipsoid enumeration;
* ``is_faithful``: triviality of the action kernel;
* ``cohomology``: H^1 and H^2 with integer coefficients from the inhomogeneous
  cochain complex, reduced via Smith normal form;
* ``canonicalize_representation``: a bounded rescaling loop that grows the
  span of the minimal vectors, used as a deduplication fingerprint.

Cochain spaces are flattened to integer matrices; the size guards reject
groups whose cochain spaces would not be desk-size, rather than switching
to sparse methods.  Near the guard limits degree-2 runs are exact but slow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, isqrt
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .intlin import (
    AbelianGroupStructure,
    IntMatrix,
    Lattice,
    determinant,
    hnf,
    quotient_with_images,
)


class GroupTooLarge(ValueError):
    """The cochain space for the requested degree is not desk-size."""


class RankTooLarge(ValueError):
    """Minimal-vector enumeration is limited to rank <= 8."""


MAX_COHOMOLOGY_ORDER = {1: 48, 2: 24}
MAX_MINVEC_RANK = 8


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group materialized as an element list with a product table."""

    elements: tuple[Hashable, ...]
    table: tuple[tuple[int, ...], ...]  # table[i][j] = index of elements[i] * elements[j]
    identity: int
    inverse: tuple[int, ...]

    @classmethod
    def from_mul(cls, elements: Sequence[Hashable], mul: Callable) -> "FiniteGroup":
        elems = tuple(elements)
        index = {e: i for i, e in enumerate(elems)}
        if len(index) != len(elems):
            raise ValueError("duplicate elements")
        table = tuple(
            tuple(index[mul(a, b)] for b in elems) for a in elems
        )
        ident = None
        for i in range(len(elems)):
            if all(table[i][j] == j and table[j][i] == j for j in range(len(elems))):
                ident = i
                break
        if ident is None:
            raise ValueError("no identity element")
        inverse = []
        for i in range(len(elems)):
            inv = next(j for j in range(len(elems)) if table[i][j] == ident)
            inverse.append(inv)
        return cls(elems, table, ident, tuple(inverse))

    @classmethod
    def from_signed_group(cls, group) -> "FiniteGroup":
        from .sgnperm import compose

        return cls.from_mul(group.elements, compose)

    @property
    def order(self) -> int:
        return len(self.elements)

    def generator_indices(self) -> tuple[int, ...]:
        """A short generating sequence (greedy over the element order)."""
        n = self.order
        gens: list[int] = []
        reached = {self.identity}
        for i in range(n):
            if i in reached:
                continue
            gens.append(i)
            frontier = list(reached | {i})
            reached.add(i)
            while frontier:
                new = []
                for a in frontier:
                    for s in gens:
                        for c in (self.table[a][s], self.table[s][a]):
                            if c not in reached:
                                reached.add(c)
                                new.append(c)
                frontier = new
            if len(reached) == n:
                break
        return tuple(gens)


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup.from_mul(tuple(range(n)), lambda a, b: (a + b) % n)


def symmetric_group(n: int) -> FiniteGroup:
    from itertools import permutations

    elems = tuple(sorted(permutations(range(n))))
    return FiniteGroup.from_mul(elems, lambda a, b: tuple(a[b[i]] for i in range(n)))


@dataclass(frozen=True)
class GLattice:
    """Z^rank with a G-action by integer matrices (column convention)."""

    group: FiniteGroup
    rank: int
    matrices: tuple[IntMatrix, ...]

    def __post_init__(self) -> None:
        n = self.group.order
        if len(self.matrices) != n:
            raise ValueError("need one matrix per group element")
        for m in self.matrices:
            if m.rows != self.rank or m.cols != self.rank:
                raise ValueError("action matrices must be rank x rank")
        ident = self.matrices[self.group.identity]
        if ident != IntMatrix.identity(self.rank):
            raise ValueError("identity must act as the identity matrix")
        gens = self.group.generator_indices()
        for m in (self.matrices[i] for i in gens):
            if abs(determinant(m)) != 1:
                raise ValueError("action matrices must be invertible over Z")
        # A map agreeing with the product against every generator is a
        # homomorphism on the whole group (induction on word length).
        for i in range(n):
            for s in gens:
                k = self.group.table[i][s]
                if self.matrices[k] != self.matrices[i] @ self.matrices[s]:
                    raise ValueError("action is not a homomorphism")

    @classmethod
    def from_matrices(
        cls, group: FiniteGroup, matrices: dict | Sequence[IntMatrix]
    ) -> "GLattice":
        if isinstance(matrices, dict):
            mats = tuple(matrices[e] for e in group.elements)
        else:
            mats = tuple(matrices)
        return cls(group, mats[0].rows if mats else 0, mats)

    @classmethod
    def trivial(cls, group: FiniteGroup, rank: int) -> "GLattice":
        ident = IntMatrix.identity(rank)
        return cls(group, rank, tuple(ident for _ in group.elements))

    @classmethod
    def regular(cls, group: FiniteGroup) -> "GLattice":
        """Z[G] with the left regular permutation action."""
        n = group.order
        mats = []
        for i in range(n):
            rows = [[0] * n for _ in range(n)]
            for h in range(n):
                rows[group.table[i][h]][h] = 1
            mats.append(IntMatrix.from_rows(rows))
        return cls(group, n, tuple(mats))

    @classmethod
    def sign_flip(cls, rank: int = 1) -> "GLattice":
        """C2 acting on Z^rank by global negation."""
        c2 = cyclic_group(2)
        neg = IntMatrix.from_rows([[-1 if i == j else 0 for j in range(rank)] for i in range(rank)])
        return cls(c2, rank, (IntMatrix.identity(rank), neg))


@dataclass(frozen=True)
class RationalGram:
    """Symmetric positive form numerator/denominator; value = numerator/den."""

    numerator: IntMatrix
    denominator: int

    def value(self, i: int, j: int) -> Fraction:
        return Fraction(self.numerator.row(i)[j], self.denominator)


def invariant_gram(lattice: GLattice) -> RationalGram:
    """Average of g^T g over the group: symmetric, positive definite,
    and exactly G-invariant (g^T Q g = Q for every element)."""
    d = lattice.rank
    acc = [[0] * d for _ in range(d)]
    for m in lattice.matrices:
        rows = m.to_rows()
        for i in range(d):
            for j in range(d):
                acc[i][j] += sum(rows[k][i] * rows[k][j] for k in range(d))
    return RationalGram(IntMatrix.from_rows(acc), lattice.group.order)


def gram_is_invariant(lattice: GLattice, gram: RationalGram) -> bool:
    q = gram.numerator
    for m in lattice.matrices:
        if (m.transpose() @ q @ m) != q:
            return False
    return True


def _ldl(q: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Q = L D L^T with unit lower L; raises if Q is not positive definite."""
    n = len(q)
    l = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for j in range(n):
        s = q[j][j] - sum(d[k] * l[j][k] * l[j][k] for k in range(j))
        if s <= 0:
            raise ValueError("form is not positive definite")
        d[j] = s
        l[j][j] = Fraction(1)
        for i in range(j + 1, n):
            l[i][j] = (q[i][j] - sum(d[k] * l[i][k] * l[j][k] for k in range(j))) / d[j]
    return l, d


def _enumerate_by_norm(qnum: IntMatrix, bound: Fraction) -> Iterator[tuple[tuple[int, ...], int]]:
    """All nonzero integer vectors v with v^T qnum v <= bound (exact)."""
    n = qnum.rows
    q = [[Fraction(x) for x in qnum.row(i)] for i in range(n)]
    l, d = _ldl(q)
    v = [0] * n

    def norm(vec: Sequence[int]) -> int:
        rows = qnum.to_rows()
        return sum(vec[i] * rows[i][j] * vec[j] for i in range(n) for j in range(n))

    def rec(i: int, rem: Fraction) -> Iterator[tuple[tuple[int, ...], int]]:
        # choosing v[i] given v[i+1..]; w_i = v_i + sum_{j>i} L[j][i] v_j
        if i < 0:
            if any(v):
                yield tuple(v), norm(v)
            return
        c = sum(l[j][i] * v[j] for j in range(i + 1, n))
        if rem < 0:
            return
        # |v_i + c| <= sqrt(rem / d_i); conservative window, exact filter below
        s = isqrt(int(rem / d[i])) + 1
        start = floor(-c) - s - 1
        stop = ceil(-c) + s + 1
        for x in range(start, stop + 1):
            w = Fraction(x) + c
            used = d[i] * w * w
            if used <= rem:
                v[i] = x
                yield from rec(i - 1, rem - used)
        v[i] = 0

    yield from rec(n - 1, bound)


def minimal_vectors(lattice: GLattice, gram: RationalGram | IntMatrix) -> frozenset[tuple[int, ...]]:
    """All nonzero vectors of least norm under the given positive form.

    Scaling the form does not change the answer, so only the integer
    numerator matters; the result is closed under negation.
    """
    qnum = gram.numerator if isinstance(gram, RationalGram) else gram
    n = qnum.rows
    if n != lattice.rank:
        raise ValueError("form size does not match lattice rank")
    if n > MAX_MINVEC_RANK:
        raise RankTooLarge(f"rank {n} > {MAX_MINVEC_RANK}")
    if n == 0:
        return frozenset()
    bound = min(qnum.row(i)[i] for i in range(n))
    best: int | None = None
    found: set[tuple[int, ...]] = set()
    for vec, nrm in _enumerate_by_norm(qnum, Fraction(bound)):
        if best is None or nrm < best:
            best = nrm
            found = {vec}
        elif nrm == best:
            found.add(vec)
    return frozenset(found)


def is_faithful(lattice: GLattice) -> bool:
    """Does only the identity act as the identity matrix?"""
    ident = IntMatrix.identity(lattice.rank)
    for i, m in enumerate(lattice.matrices):
        if i != lattice.group.identity and m == ident:
            return False
    return True


# ---------------------------------------------------------------------------
# Cohomology from the inhomogeneous cochain complex.
# ---------------------------------------------------------------------------


def _kernel_from_equations(nvars: int, equations: Iterable[dict[int, int]]) -> IntMatrix:
    """Basis of {x in Z^nvars : x . e = 0 for all equations e}.

    The running kernel basis starts as the identity and is restricted one
    linear form at a time by integer row elimination.
    """
    basis: list[list[int]] = [[1 if j == i else 0 for j in range(nvars)] for i in range(nvars)]
    for eq in equations:
        if not basis:
            break
        coeffs = [sum(row[t] * c for t, c in eq.items()) for row in basis]
        if not any(coeffs):
            continue
        # Euclidean sweep: shrink to a single nonzero coefficient, drop that row.
        live = [i for i, c in enumerate(coeffs) if c]
        while len(live) > 1:
            live.sort(key=lambda i: abs(coeffs[i]))
            p = live[0]
            keep = [p]
            for i in live[1:]:
                q = coeffs[i] // coeffs[p]
                if q:
                    coeffs[i] -= q * coeffs[p]
                    basis[i] = [a - q * b for a, b in zip(basis[i], basis[p])]
                if coeffs[i]:
                    keep.append(i)
            live = keep
        basis = [row for i, row in enumerate(basis) if i != live[0]]
    return IntMatrix.from_rows(_sorted_hnf(basis, nvars), cols=nvars)


def _sorted_hnf(rows: list[list[int]], cols: int) -> list[list[int]]:
    from .intlin import _hnf_rows

    return _hnf_rows(rows, cols)


def _coboundary_matrix_0(lattice: GLattice) -> IntMatrix:
    """d^0 : L -> C^1, x -> (g.x - x); rows L-coords, cols C^1-coords."""
    n = lattice.group.order
    d = lattice.rank
    rows = [[0] * (n * d) for _ in range(d)]
    for gi, m in enumerate(lattice.matrices):
        mr = m.to_rows()
        for j in range(d):
            for jp in range(d):
                rows[jp][gi * d + j] += mr[j][jp]
            rows[j][gi * d + j] -= 1
    return IntMatrix.from_rows(rows, cols=n * d)


def _coboundary_matrix_1(lattice: GLattice) -> IntMatrix:
    """d^1 : C^1 -> C^2, (d f)(g,h) = g.f(h) - f(gh) + f(g)."""
    n = lattice.group.order
    d = lattice.rank
    ncols = n * n * d
    rows = [[0] * ncols for _ in range(n * d)]
    table = lattice.group.table
    for gi in range(n):
        mr = lattice.matrices[gi].to_rows()
        for hi in range(n):
            base = (gi * n + hi) * d
            ghi = table[gi][hi]
            for j in range(d):
                col = base + j
                for jp in range(d):
                    if mr[j][jp]:
                        rows[hi * d + jp][col] += mr[j][jp]
                rows[ghi * d + j][col] -= 1
                rows[gi * d + j][col] += 1
    return IntMatrix.from_rows(rows, cols=ncols)


def _cocycle_equations_2(lattice: GLattice) -> Iterator[dict[int, int]]:
    """Sparse rows of d^2 : C^2 -> C^3 as one equation per (g,h,k,coord).

    (d f)(g,h,k) = g.f(h,k) - f(gh,k) + f(g,hk) - f(g,h).
    """
    n = lattice.group.order
    d = lattice.rank
    table = lattice.group.table

    def var(a: int, b: int, j: int) -> int:
        return (a * n + b) * d + j

    for gi in range(n):
        mr = lattice.matrices[gi].to_rows()
        for hi in range(n):
            ghi = table[gi][hi]
            for ki in range(n):
                hki = table[hi][ki]
                for j in range(d):
                    eq: dict[int, int] = {}
                    for jp in range(d):
                        if mr[j][jp]:
                            eq[var(hi, ki, jp)] = eq.get(var(hi, ki, jp), 0) + mr[j][jp]
                    for v, c in (
                        (var(ghi, ki, j), -1),
                        (var(gi, hki, j), 1),
                        (var(gi, hi, j), -1),
                    ):
                        eq[v] = eq.get(v, 0) + c
                    eq = {v: c for v, c in eq.items() if c}
                    if eq:
                        yield eq


def _cocycle_equations_1(lattice: GLattice) -> Iterator[dict[int, int]]:
    """Sparse rows of d^1 as one equation per (g,h,coord)."""
    n = lattice.group.order
    d = lattice.rank
    table = lattice.group.table
    for gi in range(n):
        mr = lattice.matrices[gi].to_rows()
        for hi in range(n):
            ghi = table[gi][hi]
            for j in range(d):
                eq: dict[int, int] = {}
                for jp in range(d):
                    if mr[j][jp]:
                        k = hi * d + jp
                        eq[k] = eq.get(k, 0) + mr[j][jp]
                for v, c in ((ghi * d + j, -1), (gi * d + j, 1)):
                    eq[v] = eq.get(v, 0) + c
                eq = {v: c for v, c in eq.items() if c}
                if eq:
                    yield eq


def cohomology(lattice: GLattice, degree: int) -> AbelianGroupStructure:
    """H^degree(G, L) for degree 1 or 2, from the cochain complex.

    Size guards: |G| <= 48 for degree 1, |G| <= 24 for degree 2.
    """
    if degree not in (1, 2):
        raise ValueError("only degrees 1 and 2 are supported")
    n = lattice.group.order
    if n > MAX_COHOMOLOGY_ORDER[degree]:
        raise GroupTooLarge(
            f"group order {n} exceeds the degree-{degree} guard "
            f"{MAX_COHOMOLOGY_ORDER[degree]}"
        )
    d = lattice.rank
    if degree == 1:
        nvars = n * d
        kernel = _kernel_from_equations(nvars, _cocycle_equations_1(lattice))
        image = _coboundary_matrix_0(lattice)
    else:
        nvars = n * n * d
        kernel = _kernel_from_equations(nvars, _cocycle_equations_2(lattice))
        image = _coboundary_matrix_1(lattice)
    ambient = Lattice(nvars, kernel)
    sub = Lattice.from_rows(nvars, image.to_rows())
    return quotient_with_images(ambient, sub).structure


# ---------------------------------------------------------------------------
# Canonicalization fingerprint (bounded rescaling loop).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepresentationFingerprint:
    """Deduplication fingerprint: final minimal vectors and their span.

    The rescaling loop is bounded; the fingerprint is deterministic but not
    claimed to be a complete conjugacy invariant.
    """

    iterations: int
    span_rank: int
    minimal: tuple[tuple[int, ...], ...]
    span_hnf: tuple[tuple[int, ...], ...]


def canonicalize_representation(lattice: GLattice, max_iterations: int = 16) -> RepresentationFingerprint:
    """Rescale the invariant form until its minimal vectors span fully.

    Each round adds a multiple of the form restricted to the current minimal
    span, chosen exactly so that a vector outside the span ties with the
    minimal ones; this strictly grows the span.  Stops after
    ``max_iterations`` rounds or when the span has full rank.
    """
    d = lattice.rank
    base = invariant_gram(lattice)
    q = [[base.value(i, j) for j in range(d)] for i in range(d)]
    iterations = 0
    while True:
        qnum, _ = _common_numerator(q)
        mins = minimal_vectors(lattice, qnum)
        span = Lattice.from_rows(d, sorted(mins))
        if span.rank == d or iterations >= max_iterations:
            return RepresentationFingerprint(
                iterations,
                span.rank,
                tuple(sorted(mins)),
                tuple(span.basis.row(i) for i in range(span.basis.rows)),
            )
        x = _tie_scale(q, span, mins)
        if x is None:
            return RepresentationFingerprint(
                iterations,
                span.rank,
                tuple(sorted(mins)),
                tuple(span.basis.row(i) for i in range(span.basis.rows)),
            )
        proj_form = _restricted_form(q, span)
        q = [[q[i][j] + x * proj_form[i][j] for j in range(d)] for i in range(d)]
        iterations += 1


def _common_numerator(q: list[list[Fraction]]) -> tuple[IntMatrix, int]:
    from math import lcm

    den = 1
    for row in q:
        for x in row:
            den = lcm(den, x.denominator)
    num = IntMatrix.from_rows([[int(x * den) for x in row] for row in q])
    return num, den


def _restricted_form(q: list[list[Fraction]], span: Lattice) -> list[list[Fraction]]:
    """pi^T Q pi where pi projects onto span (x) Q along its Q-complement."""
    d = len(q)
    b = span.basis.to_rows()  # k x d
    k = len(b)
    # gram of the span basis: (B Q B^T), k x k, invertible (Q is PD)
    bqb = [[sum(Fraction(b[i][s]) * q[s][t] * b[j][t] for s in range(d) for t in range(d)) for j in range(k)] for i in range(k)]
    inv = _fraction_inverse(bqb)
    # pi = B^T inv (B Q): d x d
    bq = [[sum(Fraction(b[i][s]) * q[s][j] for s in range(d)) for j in range(d)] for i in range(k)]
    ib = [[sum(inv[i][t] * bq[t][j] for t in range(k)) for j in range(d)] for i in range(k)]
    pi = [[sum(Fraction(b[t][i]) * ib[t][j] for t in range(k)) for j in range(d)] for i in range(d)]
    # pi^T Q pi
    qpi = [[sum(q[i][t] * pi[t][j] for t in range(d)) for j in range(d)] for i in range(d)]
    return [[sum(pi[t][i] * qpi[t][j] for t in range(d)) for j in range(d)] for i in range(d)]


def _fraction_inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[m[i][j] for j in range(n)] + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def _tie_scale(q: list[list[Fraction]], span: Lattice, mins: frozenset) -> Fraction | None:
    """Smallest x > 0 making some vector outside the span tie with the minimum
    of Q + x * (Q restricted to the span)."""
    d = len(q)
    qnum, den = _common_numerator(q)
    rows = qnum.to_rows()

    def norm(v: Sequence[int]) -> Fraction:
        return Fraction(sum(v[i] * rows[i][j] * v[j] for i in range(d) for j in range(d)), den)

    y = norm(next(iter(mins)))
    proj = _restricted_form(q, span)

    def proj_norm(v: Sequence[int]) -> Fraction:
        return sum(Fraction(v[i]) * proj[i][j] * Fraction(v[j]) for i in range(d) for j in range(d))

    from .intlin import member

    best: Fraction | None = None
    # Candidates within a fixed norm window; the fingerprint gives up rather
    # than searching unboundedly.
    for vec, nrm_int in _enumerate_by_norm(qnum, y * 8 * den):
        if member(span, vec):
            continue
        qv = Fraction(nrm_int, den)
        pv = proj_norm(vec)
        if pv < y:
            x = (qv - y) / (y - pv)
            if x > 0 and (best is None or x < best):
                best = x
    return best
