"""Exact integer linear algebra: Hermite and Smith normal forms, lattices,
membership, saturation, and the structure of finitely generated quotients.

Everything here works over plain Python integers (arbitrary precision); no
floating point is used anywhere.  Matrices are immutable and row-major.
Lattices are stored by a canonical basis, the row-style Hermite normal form
of their span, so two lattices are equal iff their stored bases are equal.

Conventions:

* Hermite normal form (HNF) is row-style with nonnegative pivots; entries
  above each pivot are reduced into ``[0, pivot)``; zero rows are dropped.
  This makes the HNF of a row span unique.
* Smith normal form (SNF) returns unimodular ``P``, ``Q`` with
  ``P * A * Q = D`` diagonal and ``d1 | d2 | ...``.  Pivots are chosen by
  smallest nonzero absolute value with (row, col) tie-breaks, so the
  transforms are reproducible.
* The cokernel of an ``r x c`` matrix means ``Z^c / rowspan``, described by
  its invariant factors (the diagonal entries > 1) and free rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm
from typing import Iterable, Sequence


class NotASublattice(ValueError):
    """A claimed sublattice has a basis row outside the ambient lattice."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
        else:
            width = 0 if cols is None else cols
        if cols is not None and rows and width != cols:
            raise ValueError("explicit cols does not match row width")
        flat = tuple(x for r in rows for x in r)
        return cls(len(rows), width if rows else (cols or 0), flat)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = []
        orows = other.to_rows()
        for i in range(self.rows):
            srow = self.row(i)
            acc = [0] * other.cols
            for k, s in enumerate(srow):
                if s:
                    orow = orows[k]
                    for j in range(other.cols):
                        acc[j] += s * orow[j]
            out.append(acc)
        return IntMatrix.from_rows(out, cols=other.cols)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


def determinant(m: IntMatrix) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _hnf_rows(rows: list[list[int]], cols: int) -> list[list[int]]:
    """Row-style HNF of the span of ``rows``; zero rows removed."""
    work = [list(r) for r in rows if any(r)]
    done: list[list[int]] = []
    pivots: list[int] = []
    for col in range(cols):
        live = [r for r in work if r[col] != 0]
        if not live:
            continue
        rest = [r for r in work if r[col] == 0]
        # Euclidean reduction within the column until one nonzero entry remains.
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            base = live[0]
            new_live = [base]
            for r in live[1:]:
                q = r[col] // base[col]
                reduced = [a - q * b for a, b in zip(r, base)]
                if reduced[col] != 0:
                    new_live.append(reduced)
                elif any(reduced):
                    rest.append(reduced)
            live = new_live
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        done.append(piv)
        pivots.append(col)
        work = rest
    # Reduce entries above each pivot into [0, pivot).  For a fixed row the
    # pivots below are visited left to right; later reductions cannot disturb
    # earlier pivot columns because echelon rows vanish left of their pivot.
    for j in range(len(done)):
        for i in range(j + 1, len(done)):
            pcol = pivots[i]
            q = done[j][pcol] // done[i][pcol]
            if q:
                done[j] = [a - q * b for a, b in zip(done[j], done[i])]
    return done


def hnf(m: IntMatrix) -> IntMatrix:
    """Unique row-style Hermite normal form of the row span of ``m``."""
    return IntMatrix.from_rows(_hnf_rows(m.to_rows(), m.cols), cols=m.cols)


def _pivot_cols(h: IntMatrix) -> list[int]:
    cols = []
    for i in range(h.rows):
        row = h.row(i)
        j = next(k for k, x in enumerate(row) if x != 0)
        cols.append(j)
    return cols


def solve_in_hnf(h: IntMatrix, v: Sequence[int]) -> tuple[int, ...] | None:
    """Solve ``x @ h = v`` over Z by back-substitution, or return None.

    ``h`` must be in row-style HNF.
    """
    if len(v) != h.cols:
        raise ValueError("vector length does not match matrix width")
    v = list(v)
    piv = _pivot_cols(h)
    coeffs = []
    for i, pc in enumerate(piv):
        p = h.row(i)[pc]
        q, r = divmod(v[pc], p)
        if r:
            return None
        coeffs.append(q)
        if q:
            row = h.row(i)
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        return None
    return tuple(coeffs)


@dataclass(frozen=True)
class AbelianGroupStructure:
    """A finitely generated abelian group: invariant factors plus free rank.

    ``invariant_factors`` is the chain ``d1 | d2 | ...`` with each ``di >= 2``;
    the trivial group is ``AbelianGroupStructure((), 0)``.
    """

    invariant_factors: tuple[int, ...]
    free_rank: int

    def __post_init__(self) -> None:
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisibility chain")
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    @property
    def is_torsion_free(self) -> bool:
        return not self.invariant_factors

    def torsion_order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class SmithDecomposition:
    """``P @ matrix @ Q = diag(diagonal)`` with P, Q unimodular."""

    matrix: IntMatrix
    diagonal: tuple[int, ...]
    p: IntMatrix
    q: IntMatrix
    q_inverse: IntMatrix
    cokernel: AbelianGroupStructure

    def diagonal_matrix(self) -> IntMatrix:
        d = IntMatrix.zero(self.matrix.rows, self.matrix.cols).to_rows()
        for i, x in enumerate(self.diagonal):
            d[i][i] = x
        return IntMatrix.from_rows(d, cols=self.matrix.cols)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def snf(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms and the cokernel of the row span.

    The pivot at each step is the smallest nonzero absolute value in the
    remaining block, ties broken by (row, col), so output is deterministic.
    """
    a = m.to_rows()
    nr, nc = m.rows, m.cols
    p = IntMatrix.identity(nr).to_rows()
    q = IntMatrix.identity(nc).to_rows()
    qinv = IntMatrix.identity(nc).to_rows()

    def row_addmul(i: int, j: int, c: int) -> None:
        # row i += c * row j
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        p[i] = [x + c * y for x, y in zip(p[i], p[j])]

    def row_swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        p[i], p[j] = p[j], p[i]

    def row_neg(i: int) -> None:
        a[i] = [-x for x in a[i]]
        p[i] = [-x for x in p[i]]

    def col_addmul(j: int, i: int, c: int) -> None:
        # col j += c * col i ; inverse op on qinv is row j -= c * row i... on the
        # inverse accumulator the elementary matrix acts from the left, inverted.
        for r in a:
            r[j] += c * r[i]
        for r in q:
            r[j] += c * r[i]
        qinv[i] = [x - c * y for x, y in zip(qinv[i], qinv[j])]

    def col_swap(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in q:
            r[i], r[j] = r[j], r[i]
        qinv[i], qinv[j] = qinv[j], qinv[i]

    def col_neg(j: int) -> None:
        for r in a:
            r[j] = -r[j]
        for r in q:
            r[j] = -r[j]
        qinv[j] = [-x for x in qinv[j]]

    def find_pivot(k: int) -> tuple[int, int] | None:
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        return best

    def eliminate_at(k: int) -> bool:
        """Clear row k and column k around a pivot at (k, k); False if block is zero."""
        loc = find_pivot(k)
        if loc is None:
            return False
        while True:
            i, j = loc
            if i != k:
                row_swap(k, i)
            if j != k:
                col_swap(k, j)
            for i in range(k + 1, nr):
                if a[i][k]:
                    row_addmul(i, k, -(a[i][k] // a[k][k]))
            for j in range(k + 1, nc):
                if a[k][j]:
                    col_addmul(j, k, -(a[k][j] // a[k][k]))
            # Floor-division remainders are smaller than the pivot, so the
            # pivot strictly shrinks on every retry and the loop terminates.
            if all(a[i][k] == 0 for i in range(k + 1, nr)) and all(
                a[k][j] == 0 for j in range(k + 1, nc)
            ):
                if a[k][k] < 0:
                    row_neg(k)
                return True
            loc = find_pivot(k)

    def diagonalize_from(k0: int) -> int:
        k = k0
        while k < min(nr, nc) and eliminate_at(k):
            k += 1
        return k

    rank = diagonalize_from(0)
    # Enforce the divisibility chain d1 | d2 | ...: fold the offending pair
    # into one column and re-diagonalize the trailing block.
    changed = True
    while changed:
        changed = False
        for t in range(rank - 1):
            if a[t + 1][t + 1] % a[t][t]:
                col_addmul(t, t + 1, 1)
                diagonalize_from(t)
                changed = True
                break

    diagonal = tuple(a[i][i] for i in range(min(nr, nc)))
    factors = tuple(d for d in diagonal if d > 1)
    coker = AbelianGroupStructure(factors, nc - rank)
    return SmithDecomposition(
        m,
        diagonal,
        IntMatrix.from_rows(p, cols=nr),
        IntMatrix.from_rows(q, cols=nc),
        IntMatrix.from_rows(qinv, cols=nc),
        coker,
    )


@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^ambient_rank, stored by its canonical HNF basis."""

    ambient_rank: int
    basis: IntMatrix

    def __post_init__(self) -> None:
        if self.basis.cols != self.ambient_rank:
            raise ValueError("basis width must equal ambient rank")

    @classmethod
    def from_rows(cls, ambient_rank: int, rows: Iterable[Sequence[int]]) -> "Lattice":
        mat = IntMatrix.from_rows(list(rows), cols=ambient_rank)
        return cls(ambient_rank, hnf(mat))

    @classmethod
    def full(cls, ambient_rank: int) -> "Lattice":
        return cls(ambient_rank, IntMatrix.identity(ambient_rank))

    @classmethod
    def zero(cls, ambient_rank: int) -> "Lattice":
        return cls(ambient_rank, IntMatrix.from_rows([], cols=ambient_rank))

    @property
    def rank(self) -> int:
        return self.basis.rows

    def basis_rows(self) -> list[tuple[int, ...]]:
        return [self.basis.row(i) for i in range(self.basis.rows)]


def member(lattice: Lattice, v: Sequence[int]) -> bool:
    """Is ``v`` in the Z-span of the lattice basis?"""
    if len(v) != lattice.ambient_rank:
        raise ValueError("vector length does not match ambient rank")
    return solve_in_hnf(lattice.basis, v) is not None


def is_sublattice(sub: Lattice, ambient: Lattice) -> bool:
    if sub.ambient_rank != ambient.ambient_rank:
        return False
    return all(member(ambient, r) for r in sub.basis_rows())


def is_primitive(lattice: Lattice) -> bool:
    """True iff Z^ambient / lattice is torsion-free."""
    if lattice.rank == 0:
        return True
    return snf(lattice.basis).cokernel.is_torsion_free


def saturation(lattice: Lattice) -> Lattice:
    """Smallest primitive sublattice containing ``lattice`` (same Q-span)."""
    if lattice.rank == 0:
        return lattice
    dec = snf(lattice.basis)
    rows = [dec.q_inverse.row(i) for i in range(dec.rank)]
    return Lattice.from_rows(lattice.ambient_rank, rows)


@dataclass(frozen=True)
class QuotientWithImages:
    """Structure of ambient/sub with coordinates for any ambient vector.

    Coordinates split into the torsion part (one residue per invariant
    factor, in chain order) and the free part.  The order of an element is
    derived from its coordinates; ``None`` stands for infinite order.
    """

    ambient: Lattice
    sub: Lattice
    structure: AbelianGroupStructure
    _ambient_basis: IntMatrix
    _q: IntMatrix
    _torsion_positions: tuple[int, ...]
    _free_positions: tuple[int, ...]

    def image(self, v: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Coordinates of ``v`` mod sub: (torsion residues, free coordinates)."""
        coords = solve_in_hnf(self._ambient_basis, v)
        if coords is None:
            raise ValueError("vector is not in the ambient lattice")
        z = [0] * self._q.cols
        qrows = self._q.to_rows()
        for c, x in enumerate(coords):
            if x:
                row = qrows[c]
                for j in range(self._q.cols):
                    z[j] += x * row[j]
        torsion = tuple(
            z[pos] % d for pos, d in zip(self._torsion_positions, self.structure.invariant_factors)
        )
        free = tuple(z[pos] for pos in self._free_positions)
        return torsion, free

    def order_of(self, v: Sequence[int]) -> int | None:
        """Order of ``v`` mod sub; ``None`` means infinite."""
        torsion, free = self.image(v)
        if any(free):
            return None
        n = 1
        for x, d in zip(torsion, self.structure.invariant_factors):
            n = lcm(n, d // gcd(x, d))
        return n

    def is_zero(self, v: Sequence[int]) -> bool:
        torsion, free = self.image(v)
        return not any(torsion) and not any(free)


def quotient_with_images(ambient: Lattice, sub: Lattice) -> QuotientWithImages:
    """Structure of ambient/sub plus the coordinate map for ambient vectors.

    Raises NotASublattice if some basis row of ``sub`` is not in ``ambient``.
    """
    if sub.ambient_rank != ambient.ambient_rank:
        raise NotASublattice("ambient ranks differ")
    rel_rows = []
    for r in sub.basis_rows():
        coords = solve_in_hnf(ambient.basis, r)
        if coords is None:
            raise NotASublattice(f"row {list(r)} is not in the ambient lattice")
        rel_rows.append(coords)
    rel = IntMatrix.from_rows(rel_rows, cols=ambient.rank)
    dec = snf(rel)
    torsion_positions = tuple(i for i, d in enumerate(dec.diagonal) if d > 1)
    free_positions = tuple(range(dec.rank, ambient.rank))
    return QuotientWithImages(
        ambient,
        sub,
        dec.cokernel,
        ambient.basis,
        dec.q,
        torsion_positions,
        free_positions,
    )


def left_kernel(m: IntMatrix) -> IntMatrix:
    """Basis (in HNF) of ``{x : x @ m = 0}``.

    Computed from the HNF of ``[m | I]``: rows whose ``m``-block vanished
    carry the kernel combinations in the identity block.
    """
    aug_rows = []
    for i in range(m.rows):
        aug_rows.append(list(m.row(i)) + [1 if j == i else 0 for j in range(m.rows)])
    aug = _hnf_rows(aug_rows, m.cols + m.rows)
    kernel = [r[m.cols :] for r in aug if not any(r[: m.cols])]
    return IntMatrix.from_rows(_hnf_rows(kernel, m.rows), cols=m.rows)
