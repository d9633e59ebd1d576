"""Configuration enumeration tests.

The key oracle: at small degree every subgroup of W_g can be listed by a
naive breadth-first join (start from the trivial group, repeatedly adjoin
one element and close), fully independent of the production enumeration.
The admissible subset of that list must biject with the enumerated
configurations up to conjugacy.
"""

from __future__ import annotations

import json
import random
from itertools import permutations

import pytest

from cmrecip.cmtypes import (
    NotAdmissible,
    cycle_type,
    enumerate_admissible,
    invariant_sign_subspaces,
    make_config,
    mulclose_perms,
    permute_mask,
    pullback_mask,
    subgroup_classes,
    transitive_image_catalog,
)
from cmrecip.sgnperm import (
    SignedGroup,
    SignedPerm,
    closure,
    conjugate_in_wg,
    delta,
    full_group,
    is_transitive,
    stabilizer_of_one_positive,
)


def sp(text, degree=None):
    return SignedPerm.parse(text, degree)


def brute_force_signed_subgroups(g):
    """Every subgroup of W_g, by incremental closure (independent oracle)."""
    wg = full_group(g).elements
    ident = SignedPerm.identity(g)
    trivial = frozenset({ident})
    seen = {trivial: ()}
    queue = [(trivial, ())]
    while queue:
        helems, gens = queue.pop()
        for x in wg:
            if x in helems:
                continue
            new_gens = gens + (x,)
            k = closure(new_gens)._element_set()
            if k not in seen:
                seen[k] = new_gens
                queue.append((k, new_gens))
    return seen


def conjugacy_classes_of(groups):
    """Greedy classification using the public conjugacy test."""
    reps = []
    for grp in groups:
        if not any(conjugate_in_wg(grp, r) for r in reps):
            reps.append(grp)
    return reps


def relabel_conjugate(g1: SignedGroup, g2: SignedGroup) -> bool:
    """Independent data-preserving equivalence: conjugacy by a sign-free
    permutation fixing 1, scanned exhaustively."""
    if g1.order != g2.order:
        return False
    g = g1.degree
    target = g2._element_set()
    for p in permutations(range(2, g + 1)):
        image = (1,) + p
        w = SignedPerm(image, (1,) * g)
        winv = w.inverse()
        if all((w * x * winv) in target for x in g1.elements):
            return True
    return False


def relabel_classes_of(groups):
    reps = []
    for grp in groups:
        if not any(relabel_conjugate(grp, r) for r in reps):
            reps.append(grp)
    return reps


class TestPermMachinery:
    def test_cycle_type(self):
        assert cycle_type((1, 0, 2)) == (1, 2)
        assert cycle_type((1, 2, 0)) == (3,)

    def test_mulclose(self):
        intern = {}
        s3 = mulclose_perms([(1, 0, 2), (0, 2, 1)], intern)
        assert len(s3) == 6

    def test_subgroup_classes_s3(self):
        classes = subgroup_classes(3)
        assert sorted(c.order for c in classes) == [1, 2, 3, 6]

    def test_subgroup_classes_s4_vs_bruteforce(self):
        # independent brute force over all subgroups of S_4
        elems = sorted(permutations(range(4)))

        def close(gens):
            intern = {}
            return mulclose_perms(list(gens), intern)

        all_subs = {frozenset({tuple(range(4))}): ()}
        queue = list(all_subs.items())
        while queue:
            helems, gens = queue.pop()
            for x in elems:
                if x in helems:
                    continue
                k = close(gens + (x,))
                if k not in all_subs:
                    all_subs[k] = gens + (x,)
                    queue.append((k, gens + (x,)))
        assert len(all_subs) == 30  # the subgroup count of S_4
        # classify brute-force subgroups by their minimal conjugate image
        def conj(t, p):
            out = [0] * 4
            for i in range(4):
                out[t[i]] = t[p[i]]
            return tuple(out)

        canon = set()
        for sub in all_subs:
            images = []
            for t in elems:
                images.append(frozenset(conj(t, p) for p in sub))
            canon.add(min(sorted(tuple(sorted(i)) for i in images)))
        assert len(canon) == len(subgroup_classes(4)) == 11

    def test_transitive_catalog_counts(self):
        assert len(transitive_image_catalog(1)) == 1
        assert len(transitive_image_catalog(2)) == 1
        assert len(transitive_image_catalog(3)) == 2
        assert len(transitive_image_catalog(4)) == 5
        assert len(transitive_image_catalog(5)) == 5


class TestSignSubspaces:
    def test_masks(self):
        assert permute_mask((1, 0, 2), 0b001) == 0b010
        assert pullback_mask((1, 0, 2), 0b010) == 0b001

    def test_full_group_action_subspaces_g3(self):
        # S_3 acting on F_2^3: invariant subspaces containing 111 are
        # <111> and the full space (the even-weight subspace misses 111)
        s3gens = [(1, 0, 2), (1, 2, 0)]
        subs = invariant_sign_subspaces(3, s3gens)
        assert sorted(len(s) for s in subs) == [2, 8]

    def test_g4_even_weight_present(self):
        s4gens = [(1, 0, 2, 3), (1, 2, 3, 0)]
        subs = invariant_sign_subspaces(4, s4gens)
        sizes = sorted(len(s) for s in subs)
        assert sizes == [2, 8, 16]  # <1111>, even-weight, full

    def test_all_contain_all_ones(self):
        for g in (2, 3, 4):
            cyc = tuple(list(range(1, g)) + [0])
            for s in invariant_sign_subspaces(g, [cyc]):
                assert (1 << g) - 1 in s
                assert 0 in s


class TestMakeConfig:
    def test_g1_unique(self):
        cfg = make_config(closure([delta(1)]))
        assert cfg.order == 2
        assert [str(x) for x in cfg.cm_type] == ["(1+)"]
        assert cfg.stabilizer.order == 1
        assert cfg.primitive

    def test_g2_cyclic(self):
        cfg = make_config(closure([sp("(1+2-)")]))
        assert cfg.order == 4
        assert {str(x) for x in cfg.cm_type} == {"(1+)(2+)", "(1+2-)"}
        assert cfg.stabilizer.order == 1
        assert cfg.primitive and cfg.faithful_on_core

    def test_w2_config(self):
        cfg = make_config(full_group(2))
        assert cfg.primitive and cfg.faithful_on_core
        assert cfg.stabilizer.order == 2

    def test_klein_not_primitive(self):
        cfg = make_config(closure([sp("(1+2+)"), delta(2)]))
        assert not cfg.primitive

    def test_rejects_missing_delta(self):
        with pytest.raises(NotAdmissible) as ei:
            make_config(closure([sp("(1+2+)")]))
        assert ei.value.reason == "MissingDelta"

    def test_rejects_intransitive(self):
        with pytest.raises(NotAdmissible) as ei:
            make_config(closure([delta(2)]))
        assert ei.value.reason == "NotTransitive"

    def test_invariants_on_enumeration(self):
        for g in (1, 2, 3):
            for cfg in enumerate_admissible(g):
                grp = cfg.group
                assert delta(g) in grp
                assert is_transitive(grp)
                assert len(cfg.cm_type) * 2 == cfg.order
                s_set = set(cfg.cm_type)
                assert delta(g) not in s_set
                # S * H = S
                for s in cfg.cm_type:
                    for h in cfg.stabilizer.elements:
                        assert (s * h) in s_set
                # delta * S is the complement of S
                comp = {delta(g) * s for s in s_set}
                assert comp == set(grp.elements) - s_set
                # H equals the derived stabilizer
                assert (
                    stabilizer_of_one_positive(grp).elements
                    == cfg.stabilizer.elements
                )
                assert cfg.faithful_on_core  # provably true when admissible


class TestEnumeration:
    def test_g1_exactly_one(self):
        assert len(enumerate_admissible(1)) == 1

    def test_g2_primitive_contents(self):
        prim = enumerate_admissible(2, require_primitive=True)
        orders = sorted(c.order for c in prim)
        assert orders == [4, 8]
        cyclic = next(c for c in prim if c.order == 4)
        assert conjugate_in_wg(cyclic.group, closure([sp("(1+2-)")]))

    def test_g4_contains_w4_and_dihedral_image(self):
        cfgs = enumerate_admissible(4)
        assert any(c.order == 2**4 * 24 for c in cfgs)  # the full W_4
        image_orders = set()
        for c in cfgs:
            imgs = {x.image for x in c.group.elements}
            image_orders.add(len(imgs))
        assert 8 in image_orders  # some configuration with dihedral image

    def test_matches_brute_force_g2(self):
        self._cross_check(2)

    def test_matches_brute_force_g3(self):
        self._cross_check(3)

    @staticmethod
    def _cross_check(g):
        all_subs = brute_force_signed_subgroups(g)
        admissible = []
        for helems, gens in all_subs.items():
            grp = closure(gens, degree=g) if gens else closure([], degree=g)
            try:
                make_config(grp)
            except NotAdmissible:
                continue
            admissible.append(grp)
        # the enumeration is complete for data-preserving relabeling classes
        brute_classes = relabel_classes_of(admissible)
        enumerated = enumerate_admissible(g)
        for rep in brute_classes:
            assert any(relabel_conjugate(rep, c.group) for c in enumerated)
        for c in enumerated:
            assert any(relabel_conjugate(c.group, rep) for rep in brute_classes)
        assert len(brute_classes) == len(enumerated)
        # and a fortiori complete for the coarser full-conjugacy classes
        for rep in conjugacy_classes_of(admissible):
            assert any(conjugate_in_wg(rep, c.group) for c in enumerated)

    def test_relabel_conjugate_inputs_equal_invariants(self):
        # data-preserving relabelings: sign-free, fixing 1
        rng = random.Random(5)
        base = closure([sp("(1+2+3-)"), delta(3)])
        cfg1 = make_config(base)
        for image in [(1, 3, 2), (1, 2, 3)]:
            w = SignedPerm(image, (1, 1, 1))
            winv = w.inverse()
            conj = closure([w * x * winv for x in base.generators])
            cfg2 = make_config(conj)
            assert cfg1.order == cfg2.order
            assert cfg1.primitive == cfg2.primitive
            assert cfg1.stabilizer.order == cfg2.stabilizer.order

    def test_sign_conjugation_changes_the_data(self):
        # regression pin: conjugate subgroups of W_3 disagreeing on
        # primitivity, so full conjugacy must not be used for dedup
        g1 = closure([sp("(1-2+3+)"), delta(3)])
        g2 = closure([sp("(1+2+3+)"), delta(3)])
        assert conjugate_in_wg(g1, g2)
        cfg1, cfg2 = make_config(g1), make_config(g2)
        assert cfg1.primitive and not cfg2.primitive

    def test_filters(self):
        prim = enumerate_admissible(3, require_primitive=True)
        assert all(c.primitive for c in prim)
        every = enumerate_admissible(3)
        assert len(prim) < len(every)

    @pytest.mark.parametrize("g", [3, 4])
    def test_closed_under_conjugation(self, g):
        # completeness probe: conjugating any enumerated subgroup by any
        # element of W_g yields an admissible subgroup whose data-class must
        # itself be enumerated (this catches over-eager deduplication)
        rng = random.Random(123 + g)
        cfgs = enumerate_admissible(g)
        wg = full_group(g).elements
        for _ in range(25):
            base = rng.choice(cfgs)
            w = rng.choice(wg)
            winv = w.inverse()
            conj = closure([w * x * winv for x in base.group.generators], degree=g)
            cfg = make_config(conj)
            assert any(
                relabel_conjugate(cfg.group, other.group)
                for other in cfgs
                if other.order == cfg.order
            ), f"missing data-class for conjugate of {base.key}"

    def test_degree_guard(self):
        from cmrecip.sgnperm import DegreeTooLarge

        with pytest.raises(DegreeTooLarge):
            enumerate_admissible(7)

    def test_deterministic_order(self):
        a = [c.key for c in enumerate_admissible(3)]
        b = [c.key for c in enumerate_admissible(3)]
        assert a == b
        orders = [c.order for c in enumerate_admissible(3)]
        assert orders == sorted(orders)


class TestCache:
    def test_roundtrip(self, tmp_path):
        first = enumerate_admissible(2, cache_dir=tmp_path)
        files = list(tmp_path.glob("admissible-*.json"))
        assert len(files) == 1
        payload = json.loads(files[0].read_text())
        assert payload["g"] == 2 and "version" in payload
        second = enumerate_admissible(2, cache_dir=tmp_path)
        assert [c.key for c in first] == [c.key for c in second]

    def test_version_mismatch_recomputes(self, tmp_path):
        enumerate_admissible(2, cache_dir=tmp_path)
        path = next(tmp_path.glob("admissible-*.json"))
        payload = json.loads(path.read_text())
        payload["version"] = "0.0.0-stale"
        path.write_text(json.dumps(payload))
        # stale version inside the file is rejected and the file rebuilt
        configs = enumerate_admissible(2, cache_dir=tmp_path)
        assert len(configs) == 3
        assert json.loads(path.read_text())["version"] != "0.0.0-stale"

    def test_corrupt_cache_recomputes(self, tmp_path):
        enumerate_admissible(2, cache_dir=tmp_path)
        path = next(tmp_path.glob("admissible-*.json"))
        path.write_text("{not json")
        configs = enumerate_admissible(2, cache_dir=tmp_path)
        assert len(configs) == 3

    def test_flag_specific_files(self, tmp_path):
        enumerate_admissible(2, cache_dir=tmp_path)
        enumerate_admissible(2, require_primitive=True, cache_dir=tmp_path)
        assert len(list(tmp_path.glob("admissible-*.json"))) == 2
