"""Acceptance criteria 1-9; each test records one PASS/FAIL line for the terminal summary.

The m = 7 and m = 8 enumeration rows are long-running and only run with RDIFF_LONG=1.
"""

import itertools
import logging
import os
import random

import pytest

from rdiff.construct import (
    construct_circulant_witness,
    construct_nonmds_witness,
    construct_symmetric_odd_witness,
)
from rdiff.core import (
    Witness,
    search_bounded,
    search_full,
    transform_witness_diag,
    transform_witness_inverse,
    transform_witness_perm,
    verify_witness,
)
from rdiff.enumeration import closed_form_mds, enumerate3
from rdiff.errors import ConstructionDegenerate, ExcludedOrder
from rdiff.gf import get_field
from rdiff.linalg import (
    Mat,
    cauchy_type2,
    circulant,
    determinant,
    diag,
    inverse,
    is_mds,
    mat_mul,
    permutation_matrix,
    singular_minor,
)
from rdiff.rd3 import conditions15, decompose, rd_status_3x3

from strategies import mat, random_matrix, random_nonmds

RESULTS = {}

TABLE = {
    3: (390, 0),
    4: (24206, 4464),
    5: (658590, 361440),
    6: (13392062, 10298160),
    7: (240234750, 212254560),
    8: (4064764286, 3827268144),
}
TIME_LIMIT = {3: 1.0, 4: 5.0, 5: 60.0, 6: 600.0}


def record(k, ok, detail):
    RESULTS[k] = (bool(ok), detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_1_table_rows():
    rows = []
    ok = True
    for m in range(3, 7):
        r = enumerate3(get_field(m))
        good = (r.mds_quadruples, r.no_rd_quadruples) == TABLE[m] and r.elapsed < TIME_LIMIT[m]
        ok &= good
        rows.append(f"m={m} ({r.mds_quadruples}, {r.no_rd_quadruples}) {r.elapsed:.2f}s")
    record(1, ok, "; ".join(rows))


@pytest.mark.slow
@pytest.mark.skipif(os.environ.get("RDIFF_LONG") != "1", reason="set RDIFF_LONG=1 for the m=7,8 rows")
@pytest.mark.parametrize("m", [7, 8])
def test_long_table_rows(m):
    r = enumerate3(get_field(m), jobs=os.cpu_count() or 1)
    assert (r.mds_quadruples, r.no_rd_quadruples) == TABLE[m]


def test_criterion_2_closed_form():
    ok = all(enumerate3(get_field(m)).total_mds == closed_form_mds(m) for m in range(3, 7))
    q = lambda m: (2 ** m - 1) ** 5
    ok_table = all(closed_form_mds(m) == q(m) * TABLE[m][0] for m in range(3, 9))
    record(2, ok and ok_table, f"enumeration m=3..6 {'agrees' if ok else 'DISAGREES'}; table m=3..8 {'agrees' if ok_table else 'DISAGREES'}")


def test_criterion_3_worked_examples():
    f = get_field(4, 0x13)
    checks = {}
    J = mat(f, [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]])
    checks["4x4 all-ones-off-diagonal pair"] = verify_witness(J, Witness([1, 0, 0, 0], [0, 0, 1, 0], "transformed"))
    C = circulant(f, [0, 1, 1, 1])
    checks["circ(0,1,1,1) pair"] = verify_witness(C, Witness([1, 0, 0, 0], [0, 0, 1, 0], "transformed"))
    checks["circ(0,1,1,1) full search"] = search_full(C) is not None

    R = mat(f, [[1, 1, 1], [1, 2, 4], [1, 4, 6]])
    checks["b+c=0 witness"] = verify_witness(R, Witness([1, 0xD, 0], [1, 0, 0xD], "transformed"))
    st = rd_status_3x3(R)
    checks["status lists b+c=0"] = st.has_rd and 3 in st.conditions

    E = mat(f, [[1, 1, 1], [1, 2, 4], [1, 8, 0xC]])
    checks["example MDS"] = is_mds(E)
    checks["example none by conditions"] = conditions15(f, *decompose(E).abcd) == []
    checks["example none by bounded search"] = search_bounded(E) is None
    checks["example none by full search"] = search_full(E) is None
    failed = [k for k, v in checks.items() if not v]
    record(3, not failed, f"{len(checks) - len(failed)}/{len(checks)} goldens" + (f"; failed: {failed}" if failed else ""))


def test_criterion_4_nonmds_totality():
    f = get_field(2)
    exhaustive = 0
    bad = []
    for e in itertools.product(range(4), repeat=9):
        M = Mat(f, (e[0:3], e[3:6], e[6:9]))
        cert = singular_minor(M)
        if cert is None:
            continue
        exhaustive += 1
        try:
            w = construct_nonmds_witness(M, cert)
        except ConstructionDegenerate:
            bad.append(e)
            continue
        if not verify_witness(M, w):
            bad.append(e)
    rng = random.Random(2024)
    randomized = 0
    for k in range(600):
        n = 3 + k % 4
        g = get_field((4, 8)[k // 4 % 2])
        M = random_nonmds(rng, g, n)
        randomized += 1
        try:
            w = construct_nonmds_witness(M)
        except ConstructionDegenerate:
            bad.append(M)
            continue
        if not verify_witness(M, w):
            bad.append(M)
    record(4, not bad, f"{exhaustive} exhaustive GF(4) + {randomized} random instances, {len(bad)} failures")


def test_criterion_5_oracle_equivalence():
    rng = random.Random(5)
    disagreements = 0
    counts = []
    for m in (3, 4):
        f = get_field(m)
        n_mds = 0
        for _ in range(2000):
            M = random_matrix(rng, f, 3, nonzero=True)
            st = rd_status_3x3(M)
            full = search_full(M)
            if st.has_rd != (full is not None):
                disagreements += 1
            if st.has_rd and not verify_witness(M, st.witness):
                disagreements += 1
            if st.mds:
                n_mds += 1
                if st.has_rd != (search_bounded(M) is not None):
                    disagreements += 1
        counts.append(f"GF(2^{m}) 2000 ({n_mds} MDS)")
    record(5, disagreements == 0, f"{', '.join(counts)}; {disagreements} disagreements")


def test_criterion_6_circulants(caplog):
    f = get_field(8)
    rng = random.Random(6)
    orders = [3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 15, 16]
    bad = []
    fallbacks = 0
    with caplog.at_level(logging.INFO, logger="rdiff.construct"):
        for n in orders:
            for _ in range(20):
                M = circulant(f, [rng.randrange(1, 256) for _ in range(n)])
                w = construct_circulant_witness(M)
                if not verify_witness(M, w):
                    bad.append(n)
                if any("fallback" in t or "trivial" in t for t in w.trace):
                    fallbacks += 1
    logged = sum("fell back" in r.message or "trivial" in r.message for r in caplog.records)
    excluded = []
    for n in (14, 22):
        try:
            construct_circulant_witness(circulant(f, [rng.randrange(1, 256) for _ in range(n)]))
        except ExcludedOrder:
            excluded.append(n)
    ok = not bad and excluded == [14, 22] and logged >= fallbacks
    record(6, ok, f"{20 * len(orders)} circulants, {len(bad)} failures, {fallbacks} fallbacks; excluded {excluded}")


def test_criterion_7_invariance():
    f = get_field(4)
    rng = random.Random(7)
    witnesses = 0
    bad = 0
    while witnesses < 120:
        n = rng.choice([3, 4])
        M = random_matrix(rng, f, n)
        if determinant(M) == 0:
            continue
        w = search_full(M)
        if w is None or not verify_witness(M, w):
            continue
        witnesses += 1
        D1 = diag(f, [rng.randrange(1, 16) for _ in range(n)])
        D2 = diag(f, [rng.randrange(1, 16) for _ in range(n)])
        P = permutation_matrix(f, rng.sample(range(n), n))
        Q = permutation_matrix(f, rng.sample(range(n), n))
        bad += not verify_witness(mat_mul(mat_mul(D1, M), D2), transform_witness_diag(w, D1, D2))
        bad += not verify_witness(mat_mul(mat_mul(P, M), Q), transform_witness_perm(w, P, Q))
        bad += not verify_witness(inverse(M), transform_witness_inverse(M, w))
    g = get_field(3)
    two = 0
    found = 0
    for a, b, c, d in itertools.product(g.elements(), repeat=4):
        M = mat(g, [[a, b], [c, d]])
        if not is_mds(M):
            continue
        two += 1
        found += search_full(M) is not None
    record(7, bad == 0 and found == 0, f"{witnesses} witnesses x 3 transforms, {bad} failures; {two} 2x2 MDS over GF(8), {found} with a pair")


def test_criterion_8_symmetric_odd():
    f = get_field(8)
    rng = random.Random(8)
    bad = 0
    total = 0
    for n in (3, 5, 7):
        made = 0
        while made < 20:
            xs = rng.sample(range(256), n)
            l = rng.randrange(1, 256)
            if {x ^ l for x in xs} & set(xs):
                continue
            M = cauchy_type2(f, xs, l)
            made += 1
            total += 1
            try:
                w = construct_symmetric_odd_witness(M)
            except ConstructionDegenerate:
                bad += 1
                continue
            bad += not verify_witness(M, w)
    record(8, bad == 0, f"{total} type-2 Cauchy matrices of orders 3, 5, 7; {bad} failures")


def test_criterion_9_modulus_invariance():
    a = enumerate3(get_field(4, 0x13))
    b = enumerate3(get_field(4, 0x19))
    ok = (a.mds_quadruples, a.no_rd_quadruples) == (b.mds_quadruples, b.no_rd_quadruples)
    record(9, ok, f"0x13 ({a.mds_quadruples}, {a.no_rd_quadruples}) vs 0x19 ({b.mds_quadruples}, {b.no_rd_quadruples})")
