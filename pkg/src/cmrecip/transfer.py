"""Finite group modules over prime fields and class-group transfer chains.

The calculus: two finite Galois modules exert the same pull on class-group
cokernels (up to discriminant-negligible factors) whenever one is reached
from the other by steps that either

* pass to an action-closed submodule whose quotient carries the trivial
  action (``SubmoduleWithTrivialQuotient``),
* quotient out a trivially-acted submodule (``TrivialSubmoduleQuotient``), or
* apply an explicit equivariant isomorphism (``Isomorphism``).

An ``EquivalenceChain`` packages such steps with complete witnesses, and
``verify_chain`` re-checks every witness from scratch.  Two chains ship
built in:

* the cubic chain: over F_3 with the natural S_3 permutation module M on
  a_1,a_2,a_3, the submodule N = <a_1-a_2, a_2-a_3> has trivial quotient,
  matching the classical transfer between a cubic field and its quadratic
  resolvent;
* the quartic chain: over F_2 with the S_4 permutation module M, kill the
  invariant vector to get M_1, pass to M_2 = <a_1+a_2, a_1+a_3> inside M_1,
  and identify M_2 with N/N_0 where N is the 3-dimensional module on the
  cosets of an order-8 subgroup of S_4 and N_0 its invariant line; this
  matches the transfer between a quartic field and its cubic resolvent.

Everything is over F_p with p in {2, 3} here, but the machinery is generic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

Perm = tuple[int, ...]


class NotASubmodule(ValueError):
    """The claimed subspace is not closed under the group action."""


def _pmul(a: Perm, b: Perm) -> Perm:
    return tuple(a[i] for i in b)


def _mulclose(gens: Sequence[Perm]) -> list[Perm]:
    ident = tuple(range(len(gens[0])))
    elems = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for b in frontier:
            for a in gens:
                c = _pmul(a, b)
                if c not in elems:
                    elems.add(c)
                    new.append(c)
        frontier = new
    return sorted(elems)


@dataclass(frozen=True)
class PermGroup:
    """A permutation group from transposition-style generators."""

    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]

    @classmethod
    def from_generators(cls, degree: int, gens: Sequence[Perm]) -> "PermGroup":
        return cls(degree, tuple(gens), tuple(_mulclose(list(gens))))

    @property
    def order(self) -> int:
        return len(self.elements)


def symmetric_perm_group(n: int) -> PermGroup:
    gens = []
    for i in range(n - 1):
        t = list(range(n))
        t[i], t[i + 1] = t[i + 1], t[i]
        gens.append(tuple(t))
    return PermGroup.from_generators(n, gens)


# ---------------------------------------------------------------------------
# Matrices over F_p (lists of row tuples, entries reduced mod p).
# ---------------------------------------------------------------------------

Matrix = tuple[tuple[int, ...], ...]


def mat_from_rows(rows: Sequence[Sequence[int]], p: int) -> Matrix:
    return tuple(tuple(x % p for x in row) for row in rows)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    if not a or not b:
        return tuple(tuple() for _ in a)
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) % p for j in range(m))
        for i in range(n)
    )


def mat_vec(a: Matrix, v: Sequence[int], p: int) -> tuple[int, ...]:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) % p for row in a)


def row_echelon(rows: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Reduced row echelon form over F_p; zero rows dropped."""
    work = [list(r) for r in rows]
    out: list[list[int]] = []
    cols = len(work[0]) if work else 0
    pivot_cols: list[int] = []
    for col in range(cols):
        pivot_row = None
        for r in work:
            if r[col] % p != 0 and all(r[c] % p == 0 for c in range(col)):
                pivot_row = r
                break
        if pivot_row is None:
            continue
        work.remove(pivot_row)
        inv = pow(pivot_row[col], p - 2, p) if p > 2 else pivot_row[col]
        pivot_row = [(x * inv) % p for x in pivot_row]
        for rows_list in (work, out):
            for r in rows_list:
                f = r[col] % p
                if f:
                    for c in range(cols):
                        r[c] = (r[c] - f * pivot_row[c]) % p
        out.append(pivot_row)
        pivot_cols.append(col)
    order = sorted(range(len(out)), key=lambda i: pivot_cols[i])
    return [out[i] for i in order]


def mat_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(row_echelon(rows, p))


def mat_inverse(a: Matrix, p: int) -> Matrix | None:
    n = len(a)
    aug = [list(a[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    ech = row_echelon(aug, p)
    if len(ech) < n or any(ech[i][:n] != [1 if j == i else 0 for j in range(n)] for i in range(n)):
        return None
    return tuple(tuple(ech[i][n:]) for i in range(n))


def in_row_span(rows: Sequence[Sequence[int]], v: Sequence[int], p: int) -> bool:
    base = row_echelon(rows, p)
    return mat_rank(base + [list(v)], p) == len(base)


def solve_coords(basis: Sequence[Sequence[int]], v: Sequence[int], p: int) -> tuple[int, ...] | None:
    """Coordinates of v in the given independent row basis, if any."""
    k = len(basis)
    cols = len(v)
    aug = [[basis[i][j] for i in range(k)] + [v[j]] for j in range(cols)]
    ech = row_echelon(aug, p)
    coords = [0] * k
    for row in ech:
        lead = next((i for i, x in enumerate(row[:k]) if x), None)
        if lead is None:
            if row[k] % p:
                return None
            continue
        coords[lead] = row[k]
    # verify (handles non-reduced cases uniformly)
    for j in range(cols):
        if sum(coords[i] * basis[i][j] for i in range(k)) % p != v[j] % p:
            return None
    return tuple(coords)


# ---------------------------------------------------------------------------
# Modules and the chain calculus.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FpGModule:
    """F_p^dim with a group acting by invertible matrices (column vectors)."""

    p: int
    dim: int
    group: PermGroup
    action: tuple[Matrix, ...]  # one matrix per group element, aligned
    label: str = ""

    def __post_init__(self) -> None:
        assert len(self.action) == self.group.order
        index = {e: i for i, e in enumerate(self.group.elements)}
        for e, m in zip(self.group.elements, self.action):
            assert len(m) == self.dim and all(len(r) == self.dim for r in m)
        # homomorphism against generators (suffices by induction on words)
        for gi, e in enumerate(self.group.elements):
            for s in self.group.generators:
                k = index[_pmul(e, s)]
                lhs = self.action[k]
                rhs = mat_mul(self.action[gi], self.action[index[s]], self.p)
                assert lhs == rhs, "action is not a homomorphism"
        for m in self.action:
            assert mat_inverse(m, self.p) is not None, "action not invertible"

    def matrix(self, e: Perm) -> Matrix:
        return self.action[self.group.elements.index(e)]

    def generator_matrices(self) -> list[Matrix]:
        return [self.matrix(s) for s in self.group.generators]


def permutation_module(group: PermGroup, p: int, label: str = "") -> FpGModule:
    """Basis a_1..a_n permuted by the group: s . a_i = a_{s(i)}."""
    n = group.degree
    mats = []
    for e in group.elements:
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[e[i]][i] = 1
        mats.append(mat_from_rows(rows, p))
    return FpGModule(p, n, group, tuple(mats), label)


def trivial_module(group: PermGroup, p: int, dim: int, label: str = "") -> FpGModule:
    ident = mat_identity(dim)
    return FpGModule(p, dim, group, tuple(ident for _ in group.elements), label)


def coset_module(group: PermGroup, subgroup_elements: frozenset[Perm], p: int, label: str = "") -> FpGModule:
    """Permutation module on the left cosets of a subgroup."""
    cosets: list[frozenset[Perm]] = []
    for e in group.elements:
        c = frozenset(_pmul(e, h) for h in subgroup_elements)
        if c not in cosets:
            cosets.append(c)
    cosets.sort(key=lambda c: sorted(c))
    index = {c: i for i, c in enumerate(cosets)}
    n = len(cosets)
    mats = []
    for e in group.elements:
        rows = [[0] * n for _ in range(n)]
        for i, c in enumerate(cosets):
            target = frozenset(_pmul(e, x) for x in c)
            rows[index[target]][i] = 1
        mats.append(mat_from_rows(rows, p))
    return FpGModule(p, n, group, tuple(mats), label)


@dataclass(frozen=True)
class SubmoduleEmbedding:
    """An action-closed subspace with its restricted module.

    ``embedding`` has the submodule basis as columns (dim x sub_dim).
    """

    module: FpGModule
    sub: FpGModule
    embedding: Matrix


def submodule(module: FpGModule, generators: Sequence[Sequence[int]], label: str = "") -> SubmoduleEmbedding:
    """Smallest action-closed subspace containing the generators."""
    p = module.p
    rows = [list(v) for v in generators if any(x % p for x in v)]
    basis = row_echelon(rows, p)
    changed = True
    while changed:
        changed = False
        for m in module.generator_matrices():
            for b in list(basis):
                img = mat_vec(m, b, p)
                if not in_row_span(basis, img, p):
                    basis = row_echelon(basis + [list(img)], p)
                    changed = True
    k = len(basis)
    emb = tuple(tuple(basis[j][i] for j in range(k)) for i in range(module.dim))
    sub_mats = []
    for mat in module.action:
        rows_r = []
        for b in basis:
            img = mat_vec(mat, b, p)
            coords = solve_coords(basis, img, p)
            assert coords is not None
            rows_r.append(coords)
        # column convention for the restricted action
        sub_mats.append(tuple(tuple(rows_r[j][i] for j in range(k)) for i in range(k)))
    sub = FpGModule(p, k, module.group, tuple(sub_mats), label)
    return SubmoduleEmbedding(module, sub, emb)


@dataclass(frozen=True)
class QuotientProjection:
    """A quotient module with the projection matrix (quot_dim x dim)."""

    module: FpGModule
    quotient: FpGModule
    projection: Matrix


def quotient(module: FpGModule, sub_basis: Sequence[Sequence[int]], label: str = "") -> QuotientProjection:
    """Quotient by an action-closed subspace, with the induced action.

    Raises NotASubmodule if the subspace is not action-closed.
    """
    p = module.p
    basis = row_echelon([list(v) for v in sub_basis], p)
    for m in module.generator_matrices():
        for b in basis:
            if not in_row_span(basis, mat_vec(m, b, p), p):
                raise NotASubmodule("subspace is not action-closed")
    pivots = []
    for b in basis:
        pivots.append(next(i for i, x in enumerate(b) if x))
    free = [i for i in range(module.dim) if i not in pivots]
    q = len(free)

    def project(v: Sequence[int]) -> list[int]:
        v = [x % p for x in v]
        for b, piv in zip(basis, pivots):
            f = v[piv]
            if f:
                for i in range(module.dim):
                    v[i] = (v[i] - f * b[i]) % p
        return [v[i] for i in free]

    proj = tuple(tuple(project([1 if t == j else 0 for t in range(module.dim)])[i] for j in range(module.dim)) for i in range(q))
    quot_mats = []
    for mat in module.action:
        cols = []
        for i in free:
            e = [1 if t == i else 0 for t in range(module.dim)]
            cols.append(project(mat_vec(mat, e, p)))
        quot_mats.append(tuple(tuple(cols[j][i] for j in range(q)) for i in range(q)))
    quot = FpGModule(p, q, module.group, tuple(quot_mats), label)
    return QuotientProjection(module, quot, proj)


def is_trivial(module: FpGModule) -> bool:
    """Does every group generator act as the identity?"""
    ident = mat_identity(module.dim)
    return all(m == ident for m in module.generator_matrices())


def find_isomorphism(a: FpGModule, b: FpGModule, max_search: int = 1 << 16) -> Matrix | None:
    """An invertible T with T A_s = B_s T for all generators s, or None.

    The equivariance system is solved exactly; the solution space is searched
    exhaustively when p^dim(space) <= max_search, otherwise by a seeded
    random sweep (a returned T is always verified, absence is then only
    heuristic).
    """
    if a.group is not b.group and a.group.elements != b.group.elements:
        raise ValueError("modules must share the group")
    if a.p != b.p:
        raise ValueError("modules must share the prime")
    if a.dim != b.dim:
        return None
    p, n = a.p, a.dim
    if n == 0:
        return mat_identity(0)
    eqs = []
    for s in a.group.generators:
        am, bm = a.matrix(s), b.matrix(s)
        # (T @ am - bm @ T)[i][j] = 0: T[i][l] am[l][j] - bm[i][l] T[l][j]
        for i in range(n):
            for j in range(n):
                row = [0] * (n * n)
                for l in range(n):
                    row[i * n + l] = (row[i * n + l] + am[l][j]) % p
                    row[l * n + j] = (row[l * n + j] - bm[i][l]) % p
                eqs.append(row)
    ech = row_echelon(eqs, p)
    pivots = {next(i for i, x in enumerate(r) if x) for r in ech}
    free_vars = [i for i in range(n * n) if i not in pivots]
    nullity = len(free_vars)

    def vec_to_matrix(x: Sequence[int]) -> Matrix:
        return tuple(tuple(x[i * n + j] for j in range(n)) for i in range(n))

    def solution_from_free(assign: Sequence[int]) -> Matrix:
        x = [0] * (n * n)
        for v, val in zip(free_vars, assign):
            x[v] = val
        for r in reversed(ech):
            lead = next(i for i, c in enumerate(r) if c)
            s = sum(r[i] * x[i] for i in range(lead + 1, n * n)) % p
            x[lead] = (-s) % p
        return vec_to_matrix(x)

    if p**nullity <= max_search:
        for assign in product(range(p), repeat=nullity):
            t = solution_from_free(assign)
            if mat_inverse(t, p) is not None:
                return t
        return None
    import random

    rng = random.Random(0xC0FFEE)
    for _ in range(10000):
        assign = [rng.randrange(p) for _ in range(nullity)]
        t = solution_from_free(assign)
        if mat_inverse(t, p) is not None:
            return t
    return None


# ---------------------------------------------------------------------------
# Equivalence chains with complete witnesses.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    """One verified link; matrices are the complete witness.

    kinds: "submodule_trivial_quotient" (witness: embedding of the target in
    the source, source/target modules, trivial quotient); "trivial_submodule
    _quotient" (witness: embedding of the killed trivial submodule plus the
    projection onto the target); "isomorphism" (witness: equivariant T).
    """

    kind: str
    source: FpGModule
    target: FpGModule
    witness: dict


@dataclass(frozen=True)
class EquivalenceChain:
    name: str
    steps: tuple[ChainStep, ...]

    def modules(self) -> list[FpGModule]:
        """All modules referenced by the chain (a path may double back)."""
        out: list[FpGModule] = []
        for s in self.steps:
            for m in (s.source, s.target):
                if all(m is not o for o in out):
                    out.append(m)
        return out


@dataclass(frozen=True)
class ChainVerification:
    ok: bool
    failed_step: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _verify_submodule_trivial_quotient(step: ChainStep) -> bool:
    src, sub = step.source, step.target
    p = src.p
    emb: Matrix = step.witness["embedding"]
    if len(emb) != src.dim or (emb and len(emb[0]) != sub.dim):
        return False
    cols = [[emb[i][j] for i in range(src.dim)] for j in range(sub.dim)]
    if mat_rank(cols, p) != sub.dim:
        return False
    for s in src.group.generators:
        # equivariance: A_src . emb == emb . A_sub
        if mat_mul(src.matrix(s), emb, p) != mat_mul(emb, sub.matrix(s), p):
            return False
        # trivial quotient: (A_src - I) maps everything into the subspace
        am = src.matrix(s)
        for j in range(src.dim):
            v = [(am[i][j] - (1 if i == j else 0)) % p for i in range(src.dim)]
            if not in_row_span(cols, v, p):
                return False
    return True


def _verify_trivial_submodule_quotient(step: ChainStep) -> bool:
    src, quot = step.source, step.target
    p = src.p
    emb: Matrix = step.witness["embedding"]
    proj: Matrix = step.witness["projection"]
    k = len(emb[0]) if emb else 0
    if quot.dim != src.dim - k:
        return False
    cols = [[emb[i][j] for i in range(src.dim)] for j in range(k)]
    if mat_rank(cols, p) != k:
        return False
    # the killed submodule carries the trivial action
    for s in src.group.generators:
        if mat_mul(src.matrix(s), emb, p) != emb:
            return False
    # projection kills exactly the submodule and is equivariant
    if any(any(x for x in row) for row in mat_mul(proj, emb, p)):
        return False
    if mat_rank([list(r) for r in proj], p) != quot.dim:
        return False
    for s in src.group.generators:
        if mat_mul(proj, src.matrix(s), p) != mat_mul(quot.matrix(s), proj, p):
            return False
    return True


def _verify_isomorphism(step: ChainStep) -> bool:
    a, b = step.source, step.target
    p = a.p
    t: Matrix = step.witness["matrix"]
    if a.dim != b.dim or len(t) != a.dim:
        return False
    if mat_inverse(t, p) is None:
        return False
    for s in a.group.generators:
        if mat_mul(t, a.matrix(s), p) != mat_mul(b.matrix(s), t, p):
            return False
    return True


_VERIFIERS = {
    "submodule_trivial_quotient": _verify_submodule_trivial_quotient,
    "trivial_submodule_quotient": _verify_trivial_submodule_quotient,
    "isomorphism": _verify_isomorphism,
}


def verify_chain(chain: EquivalenceChain) -> ChainVerification:
    """Re-check every witness; reports the first failing step."""
    for i, step in enumerate(chain.steps):
        verifier = _VERIFIERS.get(step.kind)
        if verifier is None or not verifier(step):
            return ChainVerification(False, i)
    return ChainVerification(True, None)


# ---------------------------------------------------------------------------
# The two built-in chains.
# ---------------------------------------------------------------------------


def cubic_resolvent_chain() -> EquivalenceChain:
    """F_3, S_3: the permutation module against its difference submodule."""
    s3 = symmetric_perm_group(3)
    m = permutation_module(s3, 3, "M = F_3[a1,a2,a3]")
    n_emb = submodule(m, [[1, 2, 0], [0, 1, 2]], "N = <a1-a2, a2-a3>")
    step = ChainStep(
        "submodule_trivial_quotient",
        m,
        n_emb.sub,
        {"embedding": n_emb.embedding},
    )
    return EquivalenceChain("cubic", (step,))


def _order8_subgroup_of_s4() -> frozenset[Perm]:
    """The canonical order-8 subgroup (lexicographically least element set)."""
    s4 = symmetric_perm_group(4)
    candidates = []
    for a in s4.elements:
        for b in s4.elements:
            elems = frozenset(_mulclose([a, b]))
            if len(elems) == 8:
                candidates.append(elems)
    candidates = sorted(set(candidates), key=lambda c: sorted(c))
    return candidates[0]


def quartic_resolvent_chain() -> EquivalenceChain:
    """F_2, S_4: permutation module versus the module on order-8 cosets."""
    s4 = symmetric_perm_group(4)
    m = permutation_module(s4, 2, "M = F_2[a1..a4]")
    m0_quot = quotient(m, [[1, 1, 1, 1]], "M1 = M/<a1+a2+a3+a4>")
    m1 = m0_quot.quotient
    step1 = ChainStep(
        "trivial_submodule_quotient",
        m,
        m1,
        {
            "embedding": tuple((x,) for x in (1, 1, 1, 1)),
            "projection": m0_quot.projection,
        },
    )
    # images of a1+a2 and a1+a3 inside M1
    gen1 = mat_vec(m0_quot.projection, (1, 1, 0, 0), 2)
    gen2 = mat_vec(m0_quot.projection, (1, 0, 1, 0), 2)
    m2_emb = submodule(m1, [gen1, gen2], "M2 = <a1+a2, a1+a3>")
    step2 = ChainStep(
        "submodule_trivial_quotient",
        m1,
        m2_emb.sub,
        {"embedding": m2_emb.embedding},
    )
    n = coset_module(s4, _order8_subgroup_of_s4(), 2, "N = F_2[S4/D4-cosets]")
    n0_quot = quotient(n, [[1, 1, 1]], "N/N0")
    step4_sub = n0_quot.quotient
    t = find_isomorphism(m2_emb.sub, step4_sub)
    assert t is not None, "the quartic identification must exist"
    step3 = ChainStep("isomorphism", m2_emb.sub, step4_sub, {"matrix": t})
    # close the chain back up to N (same step kind, reversed bookkeeping):
    step4 = ChainStep(
        "trivial_submodule_quotient",
        n,
        step4_sub,
        {
            "embedding": tuple((x,) for x in (1, 1, 1)),
            "projection": n0_quot.projection,
        },
    )
    return EquivalenceChain("quartic", (step1, step2, step3, step4))


BUILTIN_CHAINS = {
    "gerth": cubic_resolvent_chain,
    "cubic": cubic_resolvent_chain,
    "quartic": quartic_resolvent_chain,
}


def chain_report(chain: EquivalenceChain) -> dict:
    """JSON-ready dump with all witnesses, for audit."""
    return {
        "chain": chain.name,
        "steps": [
            {
                "kind": s.kind,
                "source": {"label": s.source.label, "dim": s.source.dim, "p": s.source.p},
                "target": {"label": s.target.label, "dim": s.target.dim, "p": s.target.p},
                "witness": {
                    k: [list(r) for r in v] if isinstance(v, tuple) else v
                    for k, v in s.witness.items()
                },
            }
            for s in chain.steps
        ],
    }
