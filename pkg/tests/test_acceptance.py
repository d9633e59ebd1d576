"""Acceptance gate: the ten exit criteria, one test each.

Every test prints one pass/fail line (visible with ``pytest -v -s`` or in
captured output).  Tolerances and runtime budgets are pinned here and
nowhere else.  Criterion 4 documents genuine counterexamples to its own
predicate: configurations at degree 6 whose cokernel is (Z/2)^2 (torsion
not cyclic); the test dumps them and fails rather than widening the
predicate.  See the repository notes for the analysis.
"""

from __future__ import annotations

import io
import json
import random
import time
from math import isqrt

import pytest

BUDGET_SECONDS = {
    1: 60.0,
    2: 120.0,
    3: 600.0,
    4: 7200.0,
    5: 60.0,
    6: 7200.0,
    7: 1.0,
    8: 600.0,
    9: 60.0,
    10: 120.0,
}

# frozen regression values (first computation, then pinned)
FROZEN_MEDIAN_LOW_BAND = 0.7680230127940662  # fundamental 10^3 <= |D| <= 10^4
FROZEN_MEDIAN_HIGH_BAND = 0.8490772097335755  # fundamental 10^5 <= |D| <= 10^6
FROZEN_BS_TABLE_ROWS_3_1000 = 305


def _report(num: int, label: str, ok: bool, t0: float, detail: str = "") -> float:
    elapsed = time.monotonic() - t0
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:02d} {label}: {status} [{elapsed:.1f}s]{detail}")
    return elapsed


def test_criterion_01_g2_g3_trivial_cokernel(classified):
    t0 = time.monotonic()
    bad = []
    for g in (2, 3):
        for row in classified(g):
            if not row["data"].structure.is_trivial:
                bad.append(row["config"].key)
    ok = not bad
    elapsed = _report(1, "lemma g2/g3 exhaustive triviality", ok, t0)
    assert ok, f"nontrivial cokernels at g<=3: {bad}"
    assert elapsed < BUDGET_SECONDS[1]


def test_criterion_02_g4_classification(classified):
    from cmrecip.reciprocity import sum_even_lattice

    t0 = time.monotonic()
    sum_even = sum_even_lattice(4)
    bad = []
    for row in classified(4):
        cert = row["cert"]
        if cert is None:
            bad.append((row["config"].key, "NoCertificate"))
            continue
        if cert.kind in ("FullImage", "TorsionFree"):
            continue
        if cert.kind == "IndexTwoSumEven":
            if row["data"].u != sum_even:
                bad.append((row["config"].key, "image is not the sum-even lattice"))
            continue
        bad.append((row["config"].key, cert.kind))
    ok = not bad
    elapsed = _report(2, "lemma g4 exhaustive classification", ok, t0)
    assert ok, f"bad g=4 certificates: {bad}"
    assert elapsed < BUDGET_SECONDS[2]


def test_criterion_03_g5_classification(classified):
    t0 = time.monotonic()
    bad = []
    nontrivial = 0
    for row in classified(5):
        data, cert = row["data"], row["cert"]
        if cert is None:
            bad.append((row["config"].key, "NoCertificate"))
            continue
        if data.structure.is_torsion_free:
            continue
        nontrivial += 1
        if data.structure.invariant_factors != (3,) or data.structure.free_rank:
            bad.append((row["config"].key, str(data.structure)))
        elif data.action_kernel_index != 2:
            bad.append((row["config"].key, f"kernel index {data.action_kernel_index}"))
        elif not data.stabilizer_in_action_kernel:
            bad.append((row["config"].key, "H acts nontrivially"))
    ok = not bad
    elapsed = _report(
        3, "lemma g5 exhaustive classification", ok, t0, f" ({nontrivial} with Z/3)"
    )
    assert ok, f"bad g=5 certificates: {bad}"
    assert elapsed < BUDGET_SECONDS[3]


def test_criterion_04_g6_classification(classified):
    from cmrecip.cmtypes import transitive_image_catalog

    t0 = time.monotonic()
    # the degree-6 image layer: sixteen transitive classes, built not tabled
    assert len(transitive_image_catalog(6)) == 16
    bad = []
    dumps = []
    for row in classified(6):
        cert = row["cert"]
        if cert is None:
            bad.append(row["config"].key)
            dumps.append(row["nocert"])
            continue
        if cert.kind in ("FullImage", "TorsionFree"):
            continue
        if cert.kind == "SmallStabilizer":
            data = row["data"]
            assert len(data.structure.invariant_factors) == 1
            assert data.stabilizer_in_pi1_stabilizer
            assert data.pi1_stabilizer_index <= 4
            continue
        bad.append(row["config"].key)
        dumps.append(row["config"].key)
    ok = not bad
    elapsed = _report(4, "lemma g6 exhaustive classification", ok, t0, f" ({len(bad)} NoCertificate)")
    assert elapsed < BUDGET_SECONDS[4]
    assert ok, (
        "NoCertificate configurations at g=6 (cokernel torsion is not cyclic; "
        "see notes for the analysis):\n"
        + "\n".join(json.dumps(d, sort_keys=True) for d in dumps)
    )


def test_criterion_05_weyl_surjectivity():
    from cmrecip.reciprocity import check_weyl_surjectivity, w_vector
    from cmrecip.sgnperm import SignedPerm

    t0 = time.monotonic()
    ok = True
    for g in range(1, 7):
        ok &= check_weyl_surjectivity(g)
        for i in range(g):
            flip = SignedPerm(
                tuple(range(1, g + 1)), tuple(-1 if j == i else 1 for j in range(g))
            )
            ok &= w_vector(flip) == tuple(1 if j == i else 0 for j in range(g))
    elapsed = _report(5, "weyl surjectivity with witnesses", ok, t0)
    assert ok
    assert elapsed < BUDGET_SECONDS[5]


def test_criterion_06_transport(classified):
    from cmrecip.reciprocity import check_transport

    t0 = time.monotonic()
    bad = []
    for g in range(1, 7):
        for row in classified(g):
            if not check_transport(row["config"]):
                bad.append(row["config"].key)
    ok = not bad
    elapsed = _report(6, "transport lemma over all primitive configs", ok, t0)
    assert ok, f"transport failures: {bad}"
    assert elapsed < BUDGET_SECONDS[6]


def test_criterion_07_transfer_chains():
    from cmrecip.transfer import (
        ChainStep,
        EquivalenceChain,
        cubic_resolvent_chain,
        quartic_resolvent_chain,
        verify_chain,
    )

    t0 = time.monotonic()
    ok = True
    for factory in (cubic_resolvent_chain, quartic_resolvent_chain):
        chain = factory()
        ok &= bool(verify_chain(chain))
        # every single-entry witness mutation must be detected at its step
        for si, step in enumerate(chain.steps):
            p = step.source.p
            for key, mat in step.witness.items():
                if not isinstance(mat, tuple):
                    continue
                for i in range(len(mat)):
                    for j in range(len(mat[0])):
                        rows = [list(r) for r in mat]
                        rows[i][j] = (rows[i][j] + 1) % p
                        w2 = dict(step.witness)
                        w2[key] = tuple(tuple(r) for r in rows)
                        mutated = EquivalenceChain(
                            chain.name,
                            tuple(
                                ChainStep(s.kind, s.source, s.target, w2)
                                if k == si
                                else s
                                for k, s in enumerate(chain.steps)
                            ),
                        )
                        res = verify_chain(mutated)
                        ok &= (not res.ok) and res.failed_step == si
    elapsed = _report(7, "transfer chains with mutation detection", ok, t0)
    assert ok
    assert elapsed < BUDGET_SECONDS[7]


def test_criterion_08_quadratic_laboratory():
    from cmrecip.quadforms import (
        brauer_siegel_rows,
        class_number,
        class_number_via_reduction,
        fundamental_mask,
        median_growth_ratio,
        split_prime_distinctness,
    )

    t0 = time.monotonic()
    # two counting methods agree on every discriminant |D| <= 2000
    for n in range(3, 2001):
        if (-n) % 4 in (0, 1):
            assert class_number(-n) == class_number_via_reduction(-n), -n
    assert class_number(-3) == 1
    assert class_number(-4) == 1
    assert class_number(-23) == 3
    # split-prime distinctness, exhaustively over fundamental |D| <= 10^4
    mask = fundamental_mask(10**4)
    for n in range(3, 10**4 + 1):
        if not mask[n]:
            continue
        bound = isqrt(n) // 2
        rep = split_prime_distinctness(-n, bound)
        assert rep.all_distinct, (-n, rep)
    # growth trend between the two bands, frozen regression values
    m_low = median_growth_ratio(10**3, 10**4)
    m_high = median_growth_ratio(10**5, 10**6)
    assert m_low == pytest.approx(FROZEN_MEDIAN_LOW_BAND, rel=1e-12)
    assert m_high == pytest.approx(FROZEN_MEDIAN_HIGH_BAND, rel=1e-12)
    assert m_high > m_low
    assert len(brauer_siegel_rows(3, 1000)) == FROZEN_BS_TABLE_ROWS_3_1000
    elapsed = _report(8, "quadratic laboratory", True, t0)
    assert elapsed < BUDGET_SECONDS[8]


def test_criterion_09_cohomology_self_tests():
    from cmrecip.glattice import (
        GLattice,
        cohomology,
        cyclic_group,
        symmetric_group,
    )
    from cmrecip.intlin import AbelianGroupStructure, IntMatrix

    t0 = time.monotonic()
    assert cohomology(GLattice.sign_flip(1), 1) == AbelianGroupStructure((2,), 0)
    assert cohomology(GLattice.trivial(cyclic_group(2), 1), 2) == AbelianGroupStructure((2,), 0)
    for grp in (cyclic_group(2), cyclic_group(3), symmetric_group(3)):
        assert cohomology(GLattice.regular(grp), 1).is_trivial

    rng = random.Random(20260810)
    cases = 0
    while cases < 200:
        order = rng.choice([2, 3, 4])
        d = rng.randint(1, 2)
        perm = list(range(d))
        rng.shuffle(perm)
        signs = [rng.choice([1, -1]) for _ in range(d)]
        rows = [[0] * d for _ in range(d)]
        for i in range(d):
            rows[perm[i]][i] = signs[i]
        m = IntMatrix.from_rows(rows)
        power = m
        true_order = 1
        ident = IntMatrix.identity(d)
        while power != ident:
            power = power @ m
            true_order += 1
        if true_order != order:
            continue
        cases += 1
        grp = cyclic_group(order)
        mats = [ident]
        for _ in range(order - 1):
            mats.append(mats[-1] @ m)
        lat = GLattice(grp, d, tuple(mats))
        degree = 1 if cases % 2 else 2
        h = cohomology(lat, degree)
        assert all(order % f == 0 for f in h.invariant_factors), (order, d, degree)
    elapsed = _report(9, "cohomology self-tests", True, t0, f" ({cases} random cases)")
    assert elapsed < BUDGET_SECONDS[9]


def test_audit_torsion_cokernels_contain_a_transposition_vector(classified):
    """Beyond the numbered criteria: whenever the cokernel has torsion, the
    image lattice contains a vector e_i +- e_j (i != j).  This holds for
    every primitive configuration at degrees 4..6, including the degree-6
    configurations that fail criterion 4's cyclicity requirement."""
    from cmrecip.reciprocity import transposition_edges

    t0 = time.monotonic()
    checked = 0
    for g in (4, 5, 6):
        for row in classified(g):
            if row["data"].structure.is_torsion_free:
                continue
            checked += 1
            assert transposition_edges(row["data"].u), row["config"].key
    print(f"AUDIT transpose property on {checked} torsion cokernels: PASS "
          f"[{time.monotonic() - t0:.1f}s]")


def test_criterion_10_report_determinism(acceptance_cache_dir):
    from cmrecip.cli import main

    t0 = time.monotonic()
    outputs = []
    for jobs in ("1", "2", "8"):
        out, err = io.StringIO(), io.StringIO()
        code = main(
            [
                "verify",
                "--g",
                "4",
                "--jobs",
                jobs,
                "--cache-dir",
                str(acceptance_cache_dir),
            ],
            out=out,
            err=err,
        )
        assert code == 0
        outputs.append(out.getvalue().encode())
    ok = outputs[0] == outputs[1] == outputs[2]
    elapsed = _report(10, "verify --g 4 byte determinism across workers", ok, t0)
    assert ok
    assert elapsed < BUDGET_SECONDS[10]
