"""Admissible CM configurations inside the signed permutation group W_g.

A configuration is a subgroup G <= W_g that contains the all-minus element
(complex conjugation) and whose unsigned image acts transitively on {1..g}.
From G the rest is derived:

* S, the elements sending 1 somewhere with sign +1 (half of G);
* H, the stabilizer of 1 with sign +1;
* primitivity: the right stabilizer of S in G equals H;
* a core condition: no nontrivial normal subgroup of G lies in H.

``enumerate_admissible`` lists these configurations for g <= 6.  The output
is complete for the data-preserving equivalence (conjugation by sign-free
permutations fixing 1); that is strictly finer than W_g-conjugacy, which
does NOT preserve the derived data: sign conjugations re-pin coordinate
pairs and can, for instance, flip primitivity.  Duplicates beyond the
merged equivalence may survive; downstream verification never depends on
perfect deduplication.

Enumeration strategy: admissible G are classified by the transitive image
G0 <= S_g, the sign-kernel N = G intersect {+-1}^g (a G0-invariant subspace
of F_2^g containing the all-ones vector), and the induced coset map
G0 -> F_2^g / N.  For each transitive class G0 and each invariant N, all
coset maps are enumerated by lifting a generating set of G0 in every
possible way and closing at the coset level; inconsistent lifts die fast.
Every admissible subgroup arises this way, so no class is missed.

The transitive classes themselves come from an exhaustive subgroup-lattice
construction of S_g (joins of class representatives with cyclic subgroups),
not from a table.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .sgnperm import (
    DegreeTooLarge,
    Packed,
    SignedGroup,
    SignedPerm,
    pack,
    pack_identity,
    pack_inverse,
    pack_mul,
    unpack,
)

MAX_ENUM_DEGREE = 6


class NotAdmissible(ValueError):
    """The subgroup misses conjugation or is not transitive."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# ---------------------------------------------------------------------------
# Plain permutations (0-based tuples) and subgroup classes of S_g.
# ---------------------------------------------------------------------------

Perm = tuple[int, ...]


def pmul(a: Perm, b: Perm) -> Perm:
    return tuple(a[i] for i in b)


def pinv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def perm_conj(t: Perm, p: Perm) -> Perm:
    """t p t^-1."""
    out = [0] * len(p)
    for i in range(len(p)):
        out[t[i]] = t[p[i]]
    return tuple(out)


def cycle_type(p: Perm) -> tuple[int, ...]:
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        n = 0
        i = s
        while not seen[i]:
            seen[i] = True
            n += 1
            i = p[i]
        out.append(n)
    return tuple(sorted(out))


def mulclose_perms(gens: Sequence[Perm], intern: dict[Perm, Perm]) -> frozenset[Perm]:
    if not gens:
        raise ValueError("empty generating set")
    ident = tuple(range(len(gens[0])))
    ident = intern.setdefault(ident, ident)
    elems = {ident}
    frontier = []
    for x in gens:
        x = intern.setdefault(x, x)
        if x not in elems:
            elems.add(x)
            frontier.append(x)
    while frontier:
        new = []
        for b in frontier:
            for a in gens:
                c = pmul(a, b)
                c = intern.setdefault(c, c)
                if c not in elems:
                    elems.add(c)
                    new.append(c)
        frontier = new
    return frozenset(elems)


@dataclass(frozen=True)
class PermGroupClass:
    """A conjugacy-class representative of a subgroup of S_degree."""

    degree: int
    elements: frozenset[Perm]
    generators: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_transitive(self) -> bool:
        reached = {0}
        frontier = [0]
        gens = self.generators or tuple(self.elements)
        while frontier:
            new = []
            for i in frontier:
                for p in gens:
                    if p[i] not in reached:
                        reached.add(p[i])
                        new.append(p[i])
            frontier = new
        return len(reached) == self.degree

    def sorted_elements(self) -> tuple[Perm, ...]:
        return tuple(sorted(self.elements))


def _perm_class_bucket(rec: PermGroupClass) -> tuple:
    from collections import Counter

    counts = Counter(cycle_type(p) for p in rec.elements)
    return (rec.order, tuple(sorted(counts.items())))


def _conjugate_perm_subgroups(a: PermGroupClass, b: PermGroupClass, sg: Sequence[Perm]) -> bool:
    if a.order != b.order:
        return False
    gens = a.generators or tuple(a.elements)
    belems = b.elements
    for t in sg:
        if all(perm_conj(t, p) in belems for p in gens):
            return True
    return False


@lru_cache(maxsize=None)
def subgroup_classes(degree: int) -> tuple[PermGroupClass, ...]:
    """All subgroups of S_degree up to conjugacy.

    Exhaustive subgroup-lattice construction: starting from the trivial
    group, repeatedly join each known class representative with every cyclic
    subgroup.  Any subgroup is a chain of such joins (add the generators of
    its cyclic subgroups one at a time), so induction on chain length shows
    every conjugacy class is reached.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    intern: dict[Perm, Perm] = {}
    ident = tuple(range(degree))
    sg = sorted(intern.setdefault(p, p) for p in permutations(range(degree)))
    # All cyclic subgroups, keyed by element set, with their smallest generator.
    cyclics: dict[frozenset[Perm], Perm] = {}
    for x in sg:
        if x == ident:
            continue
        cyc = [ident]
        cur = x
        while cur != ident:
            cyc.append(cur)
            cur = intern.setdefault(pmul(cur, x), pmul(cur, x))
        fs = frozenset(cyc)
        cyclics.setdefault(fs, x)
    cyclic_list = sorted(cyclics.items(), key=lambda kv: (len(kv[0]), kv[1]))

    trivial = PermGroupClass(degree, frozenset({ident}), ())
    classes: list[PermGroupClass] = [trivial]
    buckets: dict[tuple, list[PermGroupClass]] = {_perm_class_bucket(trivial): [trivial]}
    seen_exact: set[frozenset[Perm]] = {trivial.elements}
    queue = [trivial]
    while queue:
        h = queue.pop(0)
        for cfs, cgen in cyclic_list:
            if cgen in h.elements:
                continue
            gens = h.generators + (cgen,)
            k = mulclose_perms(gens, intern)
            if k in seen_exact:
                continue
            seen_exact.add(k)
            rec = PermGroupClass(degree, k, gens)
            bk = _perm_class_bucket(rec)
            known = buckets.setdefault(bk, [])
            if any(_conjugate_perm_subgroups(rec, other, sg) for other in known):
                continue
            known.append(rec)
            classes.append(rec)
            queue.append(rec)
    classes.sort(key=lambda c: (c.order, c.sorted_elements()))
    return tuple(classes)


def transitive_image_catalog(g: int) -> tuple[PermGroupClass, ...]:
    """Transitive subgroups of S_g up to conjugacy (the image layer)."""
    if g > MAX_ENUM_DEGREE:
        raise DegreeTooLarge(f"degree {g} > {MAX_ENUM_DEGREE}")
    return tuple(c for c in subgroup_classes(g) if c.is_transitive())


# ---------------------------------------------------------------------------
# Invariant sign subspaces of F_2^g (bitmask arithmetic).
# ---------------------------------------------------------------------------


def permute_mask(p: Perm, x: int) -> int:
    """Push mask bits forward: bit p[i] of the result is bit i of x."""
    y = 0
    for i in range(len(p)):
        if (x >> i) & 1:
            y |= 1 << p[i]
    return y


def pullback_mask(p: Perm, x: int) -> int:
    """Bit i of the result is bit p[i] of x."""
    y = 0
    for i in range(len(p)):
        if (x >> p[i]) & 1:
            y |= 1 << i
    return y


def _f2_span(vectors: Iterable[int]) -> frozenset[int]:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        # reduce towards a minimal representative
        w = v
        changed = True
        while changed and w:
            changed = False
            for b in basis:
                if w ^ b < w:
                    w = w ^ b
                    changed = True
        if w:
            basis.append(w)
            basis.sort(reverse=True)
    span = {0}
    for b in basis:
        span |= {x ^ b for x in span}
    return frozenset(span)


def invariant_sign_subspaces(g: int, gens: Sequence[Perm]) -> list[frozenset[int]]:
    """All subspaces of F_2^g invariant under the permutation action that
    contain the all-ones vector; each returned as its full element set."""
    full = (1 << g) - 1
    gen_list = list(gens) or [tuple(range(g))]
    cyclic_spans: set[frozenset[int]] = set()
    for v in range(1 << g):
        orbit = {v}
        frontier = [v]
        while frontier:
            new = []
            for x in frontier:
                for p in gen_list:
                    y = permute_mask(p, x)
                    if y not in orbit:
                        orbit.add(y)
                        new.append(y)
            frontier = new
        cyclic_spans.add(_f2_span(orbit))
    spans = set(cyclic_spans)
    frontier = list(cyclic_spans)
    while frontier:
        new = []
        for a in frontier:
            for b in cyclic_spans:
                s = _f2_span(set(a) | set(b))
                if s not in spans:
                    spans.add(s)
                    new.append(s)
        frontier = new
    return sorted((s for s in spans if full in s), key=lambda s: (len(s), sorted(s)))


# ---------------------------------------------------------------------------
# Lifting a transitive image through the sign kernel.
# ---------------------------------------------------------------------------


def _coset_closure(
    g: int,
    g0: PermGroupClass,
    cosrep: Sequence[int],
    lifted: Sequence[tuple[Perm, int]],
) -> dict[Perm, int] | None:
    """Close lifted generators inside G0 x (F_2^g / N).

    Returns the coset map perm -> coset representative if the lifts are
    consistent (the generated subgroup meets the sign kernel exactly in N),
    else None.
    """
    ident = tuple(range(g))
    if not lifted:
        return {ident: cosrep[0]}
    table: dict[Perm, int] = {}
    for s, a in lifted:
        if table.get(s, a) != a:
            return None
        table[s] = a
    frontier = list(table.items())
    while frontier:
        new = []
        for t, b in frontier:
            for s, a in lifted:
                # (t, b) * (s, a) in the quotient group
                p = pmul(t, s)
                c = cosrep[pullback_mask(s, b) ^ a]
                prev = table.get(p)
                if prev is None:
                    table[p] = c
                    new.append((p, c))
                elif prev != c:
                    return None
        frontier = new
    if len(table) != g0.order or table[ident] != cosrep[0]:
        return None
    return table


# ---------------------------------------------------------------------------
# Configurations.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CMConfig:
    """An admissible configuration (G, S, H) with its derived flags."""

    g: int
    group: SignedGroup
    cm_type: tuple[SignedPerm, ...]
    stabilizer: SignedGroup
    primitive: bool
    faithful_on_core: bool

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def key(self) -> str:
        digest = hashlib.sha256(
            "|".join(str(e) for e in self.group.elements).encode()
        ).hexdigest()[:16]
        return f"g{self.g}-o{self.order:05d}-{digest}"

    def packed_elements(self) -> tuple[Packed, ...]:
        return tuple(pack(e) for e in self.group.elements)

    def packed_cm_type(self) -> tuple[Packed, ...]:
        return tuple(pack(e) for e in self.cm_type)

    def generator_strings(self) -> list[str]:
        return [str(x) for x in self.group.generators]


def _derive_packed(g: int, elements: Sequence[Packed]) -> tuple[list[Packed], list[Packed], bool, bool]:
    """(S, H, primitive, faithful_on_core) from a packed element list."""
    s_part = [e for e in elements if not (e[1] & 1)]
    h_part = [e for e in s_part if e[0][0] == 0]
    h_set = set(h_part)
    # Right cosets of H are the fibers of e -> e^{-1} . (1, +); test one
    # representative per coset for membership in the right stabilizer of S.
    reps: dict[tuple[int, int], Packed] = {}
    for e in sorted(elements):
        inv = pack_inverse(e)
        key = (inv[0][0], inv[1] & 1)
        reps.setdefault(key, e)
    primitive = True
    for key, h in sorted(reps.items()):
        if key == (0, 0):
            continue  # the coset of H itself
        stabilizes = True
        for s in s_part:
            if pack_mul(s, h)[1] & 1:
                stabilizes = False
                break
        if stabilizes:
            primitive = False
            break
    # Core of H in G: intersect the conjugates of H over left-coset reps.
    left_reps: dict[tuple[int, int], Packed] = {}
    for e in sorted(elements):
        key = (e[0][0], e[1] & 1)
        left_reps.setdefault(key, e)
    core = set(h_part)
    ident = pack_identity(g)
    for c in left_reps.values():
        cinv = pack_inverse(c)
        core &= {pack_mul(pack_mul(c, h), cinv) for h in h_part}
        if core == {ident}:
            break
    faithful_on_core = core == {ident}
    return s_part, h_part, primitive, faithful_on_core


def make_config(group: SignedGroup) -> CMConfig:
    """Derive the configuration data for an admissible subgroup.

    Raises NotAdmissible("MissingDelta") or NotAdmissible("NotTransitive").
    """
    from .sgnperm import delta, is_transitive, minimal_generators_of

    g = group.degree
    if delta(g) not in group:
        raise NotAdmissible("MissingDelta")
    if not is_transitive(group):
        raise NotAdmissible("NotTransitive")
    packed = [pack(e) for e in group.elements]
    s_part, h_part, primitive, faithful = _derive_packed(g, packed)
    assert len(s_part) * 2 == group.order
    assert len(h_part) * 2 * g == group.order
    cm_type = tuple(sorted((unpack(e) for e in s_part), key=lambda x: (x.image, x.signs)))
    h_elems = sorted((unpack(e) for e in h_part), key=lambda x: (x.image, x.signs))
    h_gens = minimal_generators_of(h_elems) if len(h_elems) > 1 else ()
    stab = SignedGroup(g, h_gens, tuple(h_elems))
    return CMConfig(g, group, cm_type, stab, primitive, faithful)


def _config_from_parts(
    g: int,
    table: dict[Perm, int],
    coset_members: dict[int, list[int]],
    gen_pairs: Sequence[tuple[Perm, int]],
    n_basis: Sequence[int],
) -> CMConfig:
    elements = []
    for s, rep in table.items():
        for mask in coset_members[rep]:
            elements.append((s, mask))
    gens = [unpack(p) for p in gen_pairs]
    ident = tuple(range(g))
    gens.extend(unpack((ident, m)) for m in n_basis)
    sorted_elems = tuple(sorted((unpack(e) for e in elements), key=lambda x: (x.image, x.signs)))
    group = SignedGroup(g, tuple(gens), sorted_elems)
    return make_config(group)


def _mask_basis(n_set: frozenset[int]) -> list[int]:
    basis: list[int] = []
    span = {0}
    for v in sorted(n_set):
        if v and v not in span:
            basis.append(v)
            span |= {x ^ v for x in span}
    return basis


def _bucket_key(config: CMConfig, g0_index: int, n_weights: tuple[int, ...]) -> tuple:
    from collections import Counter

    counts = Counter(x.signed_cycle_type() for x in config.group.elements)
    return (
        g0_index,
        config.order,
        n_weights,
        config.primitive,
        tuple(sorted(counts.items())),
    )


def _relabeling_perms(g: int, g0: PermGroupClass) -> list[Perm]:
    """Sign-free permutations fixing 1 that normalize the image group.

    These are exactly the conjugations that provably preserve every derived
    configuration datum (the CM type, its stabilizer, primitivity, the image
    lattice up to coordinate relabeling): keeping index 1 keeps the basepoint
    of S and H, and keeping all signs positive keeps the pinning of each
    coordinate pair.  Sign conjugations re-pin coordinate pairs and genuinely
    change the derived CM type (conjugate subgroups can even disagree on
    primitivity), so they are not used for deduplication.
    """
    out = []
    gens = g0.generators or tuple(g0.elements)
    for t in permutations(range(g)):
        if t[0] != 0:
            continue
        if all(perm_conj(t, p) in g0.elements for p in gens):
            out.append(t)
    return out


def _conjugate_configs(
    c1: CMConfig, c2: CMConfig, relabelings: Sequence[Perm]
) -> bool:
    """Equality up to a data-preserving relabeling (see _relabeling_perms)."""
    if c1.order != c2.order:
        return False
    gens = [pack(x) for x in (c1.group.generators or c1.group.elements)]
    target = frozenset(c2.packed_elements())
    for t in relabelings:
        w = (t, 0)
        winv = pack_inverse(w)
        if all(pack_mul(pack_mul(w, a), winv) in target for a in gens):
            return True
    return False


def enumerate_admissible(
    g: int,
    require_primitive: bool = False,
    require_faithful_core: bool = False,
    cache_dir: str | Path | None = None,
) -> list[CMConfig]:
    """All admissible configurations for this degree, complete by class.

    Completeness: every admissible subgroup of W_g is carried by a
    1-fixing sign-free relabeling onto one with canonical transitive image
    (the image's normalizer is transitive, so the relabeling can be chosen
    to fix 1), and such relabelings preserve all derived data; the stream
    enumerates every subgroup with canonical image outright.  Hence each
    data-class (a fortiori each W_g-conjugacy class) of admissible
    subgroups passing the filters has a representative here.  Dedup only
    merges configs equal up to a data-preserving relabeling; duplicates
    beyond that are harmless downstream.  Output order is deterministic
    (canonical key).
    """
    if not 1 <= g <= MAX_ENUM_DEGREE:
        raise DegreeTooLarge(f"g must be in 1..{MAX_ENUM_DEGREE}")
    cached = _cache_load(g, require_primitive, require_faithful_core, cache_dir)
    if cached is not None:
        return cached

    configs: list[tuple[CMConfig, int, tuple[int, ...]]] = []
    catalog = transitive_image_catalog(g)
    for g0_index, g0 in enumerate(catalog):
        gens0 = list(g0.generators)
        for n_set in invariant_sign_subspaces(g, gens0):
            cosrep = [min(x ^ n for n in n_set) for x in range(1 << g)]
            coset_members: dict[int, list[int]] = {}
            for x in range(1 << g):
                coset_members.setdefault(cosrep[x], []).append(x)
            rep_choices = sorted(coset_members)
            n_weights = tuple(sorted(bin(n).count("1") for n in n_set))
            n_basis = _mask_basis(n_set)
            seen_tables: set[frozenset] = set()
            for combo in product(rep_choices, repeat=len(gens0)):
                lifted = list(zip(gens0, combo))
                table = _coset_closure(g, g0, cosrep, lifted)
                if table is None:
                    continue
                key = frozenset(table.items())
                if key in seen_tables:
                    continue
                seen_tables.add(key)
                config = _config_from_parts(g, table, coset_members, lifted, n_basis)
                configs.append((config, g0_index, n_weights))

    # dedup inside invariant buckets, by data-preserving relabelings only
    relabelings: dict[int, list[Perm]] = {}
    buckets: dict[tuple, list[CMConfig]] = {}
    kept: list[CMConfig] = []
    configs.sort(key=lambda t: t[0].group.canonical_key())
    for config, g0_index, n_weights in configs:
        bk = _bucket_key(config, g0_index, n_weights)
        known = buckets.setdefault(bk, [])
        if g0_index not in relabelings:
            relabelings[g0_index] = _relabeling_perms(g, catalog[g0_index])
        if any(_conjugate_configs(config, other, relabelings[g0_index]) for other in known):
            continue
        known.append(config)
        kept.append(config)

    if require_primitive:
        kept = [c for c in kept if c.primitive]
    if require_faithful_core:
        kept = [c for c in kept if c.faithful_on_core]
    kept.sort(key=lambda c: c.group.canonical_key())
    _cache_save(g, require_primitive, require_faithful_core, cache_dir, kept)
    return kept


# ---------------------------------------------------------------------------
# Enumeration cache (JSON, versioned).
# ---------------------------------------------------------------------------

CACHE_ENV_VAR = "CMRECIP_CACHE_DIR"


def _cache_path(g: int, p: bool, f: bool, cache_dir: str | Path) -> Path:
    name = f"admissible-g{g}-p{int(p)}-f{int(f)}-v{__version__}.json"
    return Path(cache_dir) / name


def _cache_load(g: int, p: bool, f: bool, cache_dir: str | Path | None) -> list[CMConfig] | None:
    if cache_dir is None:
        return None
    path = _cache_path(g, p, f, cache_dir)
    if not path.exists():
        return None
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if payload.get("version") != __version__ or payload.get("g") != g:
        return None
    if payload.get("flags") != {"primitive": p, "faithfulCore": f}:
        return None
    from .sgnperm import closure

    configs = []
    for rec in payload.get("configs", []):
        gens = [SignedPerm.parse(s, degree=g) for s in rec["generators"]]
        group = closure(gens, degree=g)
        config = make_config(group)
        if config.order != rec["order"] or config.primitive != rec["primitive"]:
            return None
        if config.faithful_on_core != rec["faithfulCore"]:
            return None
        configs.append(config)
    return configs


def _cache_save(g: int, p: bool, f: bool, cache_dir: str | Path | None, configs: list[CMConfig]) -> None:
    if cache_dir is None:
        return
    path = _cache_path(g, p, f, cache_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "version": __version__,
        "g": g,
        "flags": {"primitive": p, "faithfulCore": f},
        "configs": [
            {
                "generators": c.generator_strings(),
                "order": c.order,
                "primitive": c.primitive,
                "faithfulCore": c.faithful_on_core,
            }
            for c in configs
        ],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload, indent=1, sort_keys=True))
    tmp.replace(path)
