import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from rdiff.core import (
    Method,
    RelatedTriplet,
    Witness,
    bounded_inputs,
    colex_subsets,
    is_related_differences,
    is_related_differential_pair,
    search_bounded,
    search_full,
    transform_witness_diag,
    transform_witness_inverse,
    transform_witness_perm,
    verify_witness,
    witness_failure,
)
from rdiff.errors import DimensionMismatch, MalformedInput, NotMDS, NotPermutation, SingularDiagonal, TooLarge
from rdiff.gf import get_field
from rdiff.linalg import (
    Mat,
    determinant,
    diag,
    inverse,
    is_mds,
    mat_mul,
    mat_vec_mul,
    permutation_matrix,
    weight,
)

from strategies import gf16, mat, matrices, random_mds, random_matrix


def brute_pairs(M):
    """Every nontrivial related pair by direct enumeration."""
    f, n = M.field, M.n_rows
    vecs = list(itertools.product(range(f.order), repeat=n))
    img = {x: mat_vec_mul(M, x) for x in vecs}
    out = []
    for u in vecs[1:]:
        for v in vecs[1:]:
            if u != v and is_related_differences(u, v) and is_related_differences(img[u], img[v]):
                out.append((u, v))
    return out


def test_related_differences_predicate():
    assert is_related_differences([1, 0, 3], [1, 2, 0])
    assert not is_related_differences([1, 2], [3, 2])
    with pytest.raises(DimensionMismatch):
        is_related_differences([1], [1, 2])
    t = RelatedTriplet.from_pair([1, 0, 3], [1, 2, 0])
    assert t.t == (0, 2, 3)
    assert t.weights == (2, 2, 2)
    with pytest.raises(ValueError):
        RelatedTriplet.from_pair([1, 2], [3, 2])


@given(st.lists(st.integers(0, 15), min_size=1, max_size=6), st.data())
def test_triplet_is_symmetric(u, data):
    v = [data.draw(st.sampled_from([0, a])) if a else data.draw(st.integers(0, 15)) for a in u]
    assert is_related_differences(u, v)
    t = [a ^ b for a, b in zip(u, v)]
    # any two of (u, v, u+v) determine a related pair
    assert is_related_differences(u, t)
    assert is_related_differences(v, t)


def test_witness_failure_reasons():
    f = gf16()
    M = mat(f, [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]])
    ok = Witness([1, 0, 0, 0], [0, 0, 1, 0], Method.SEARCH_FULL)
    assert witness_failure(M, ok) is None and verify_witness(M, ok) and ok.verified
    assert witness_failure(M, Witness([1, 0, 0], [0, 1, 0], "search-full")) == "dimension"
    assert witness_failure(M, Witness([0] * 4, [1, 0, 0, 0], "search-full")) == "zero-vector"
    assert witness_failure(M, Witness([1, 0, 0, 0], [1, 0, 0, 0], "search-full")) == "trivial"
    assert witness_failure(M, Witness([1, 0, 0, 0], [2, 0, 0, 0], "search-full")) == "inputs-unrelated"
    assert witness_failure(M, Witness([1, 0, 0, 0], [0, 2, 0, 0], "search-full")) == "outputs-unrelated"


def test_witness_json_round_trip():
    f = gf16()
    w = Witness([1, 13, 0], [1, 0, 13], Method.CHAR_3X3)
    g, w2 = Witness.from_json(w.to_json(f))
    assert g == f and (w2.u, w2.v, w2.method) == (w.u, w.v, w.method)
    with pytest.raises(MalformedInput):
        Witness.from_json({"m": 4, "u": ["0x1"], "v": ["0x99"]})
    with pytest.raises(MalformedInput):
        Witness.from_json({"m": 4, "u": ["0x1"]})


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3).flatmap(lambda n: matrices(n, ms=[2] if n == 3 else [2, 3])))
def test_search_full_matches_enumeration(M):
    pairs = brute_pairs(M)
    w = search_full(M)
    assert (w is None) == (not pairs)
    if w is not None:
        assert verify_witness(M, w)
        assert (w.u, w.v) in pairs


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3).flatmap(lambda n: matrices(n, ms=[2] if n == 3 else [2, 3])))
def test_pairs_closed_under_swap_and_scaling(M):
    f = M.field
    pairs = set(brute_pairs(M))
    for u, v in list(pairs)[:20]:
        assert (v, u) in pairs
        for c in f.nonzero():
            assert (tuple(f.mul(c, a) for a in u), tuple(f.mul(c, a) for a in v)) in pairs


def test_search_full_budget():
    with pytest.raises(TooLarge):
        search_full(random_matrix(random.Random(0), get_field(8), 3))


def test_bounded_inputs_cover_low_weight():
    rng = random.Random(3)
    f = get_field(3)
    for _ in range(5):
        M = random_mds(rng, f, 3)
        bound = 4
        got = {tuple(x) for x, _ in bounded_inputs(M, bound)}
        for x in itertools.product(range(f.order), repeat=3):
            if any(x) and weight(x) + weight(mat_vec_mul(M, x)) <= bound and f.inv(next(a for a in x if a)) == 1:
                assert x in got


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: matrices(n, ms=[2, 3] if n == 4 else [2, 3, 4], nonzero=True)))
def test_bounded_agrees_with_full_on_mds(M):
    if not is_mds(M):
        with pytest.raises(NotMDS):
            search_bounded(M)
        return
    wb = search_bounded(M)
    wf = search_full(M)
    assert (wb is None) == (wf is None)
    if wb is not None:
        assert verify_witness(M, wb)


def test_bounded_budget():
    M = random_mds(random.Random(1), get_field(4), 3)
    with pytest.raises(TooLarge):
        search_bounded(M, max_m=3)


def test_two_by_two_mds_over_gf8_have_no_pairs():
    f = get_field(3)
    count = 0
    for a, b, c, d in itertools.product(f.nonzero(), repeat=4):
        M = mat(f, [[a, b], [c, d]])
        if determinant(M) == 0:
            continue
        count += 1
        assert search_full(M) is None
    assert count == 7 ** 4 - 7 ** 3


def _some_witness(rng, f, n):
    while True:
        M = random_matrix(rng, f, n)
        if determinant(M) == 0:
            continue
        w = search_full(M)
        if w is not None:
            return M, w


def test_transforms_preserve_witnesses():
    rng = random.Random(7)
    f = get_field(4)
    for _ in range(30):
        M, w = _some_witness(rng, f, 3)
        D1 = diag(f, [rng.randrange(1, 16) for _ in range(3)])
        D2 = diag(f, [rng.randrange(1, 16) for _ in range(3)])
        wd = transform_witness_diag(w, D1, D2)
        assert verify_witness(mat_mul(mat_mul(D1, M), D2), wd)
        assert wd.method == Method.TRANSFORMED
        p, q = rng.sample(range(3), 3), rng.sample(range(3), 3)
        P, Q = permutation_matrix(f, p), permutation_matrix(f, q)
        assert verify_witness(mat_mul(mat_mul(P, M), Q), transform_witness_perm(w, P, Q))
        assert verify_witness(inverse(M), transform_witness_inverse(M, w))


def test_transform_errors():
    f = gf16()
    w = Witness([1, 0], [0, 1], Method.SEARCH_FULL)
    with pytest.raises(SingularDiagonal):
        transform_witness_diag(w, diag(f, [1, 0]), diag(f, [1, 1]))
    with pytest.raises(NotPermutation):
        transform_witness_perm(w, mat(f, [[1, 1], [0, 1]]), diag(f, [1, 1]))


def test_colex_subsets():
    assert colex_subsets(4, 2) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]


def test_dimension_checks():
    f = gf16()
    with pytest.raises(DimensionMismatch):
        is_related_differential_pair(Mat(f, ((1, 2),)), [1, 0], [0, 1])
