import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosetgame import gf2
from cosetgame.gf2 import Subspace, vec

from oracles import all_subspaces, dual_set, gauss_binom_brute, log2_size, span_set


def S(*rows, n=None):
    n = n if n is not None else len(rows[0])
    return Subspace.span([vec(r) for r in rows], n)


def test_rref_examples():
    basis, rank = gf2.rref([vec("110"), vec("011"), vec("101")], 3)
    assert rank == 2
    assert basis == (vec("101"), vec("011"))
    assert gf2.rref([0], 3) == ((), 0)
    assert gf2.rref([4, 2, 1], 3) == ((4, 2, 1), 3)
    assert gf2.rref([], 4) == ((), 0)


def test_rref_rejects_wide_vectors():
    with pytest.raises(gf2.DimensionError):
        gf2.rref([8], 3)
    with pytest.raises(gf2.DimensionError):
        gf2.rref([1], 21)


def test_subspace_requires_rref():
    with pytest.raises(ValueError):
        Subspace(3, (vec("110"), vec("011")))


def test_coset_rep_and_member():
    W = S("11")
    assert gf2.coset_rep(W, vec("01")) == vec("01")
    assert gf2.member(W, vec("11"))
    assert not gf2.member(W, vec("10"))
    for n in range(1, 5):
        for W in gf2.enumerate_grassmannian(n, 2 if n >= 2 else 1):
            assert gf2.coset_rep(W, 0) == 0
        full = Subspace.full(n)
        assert all(gf2.coset_rep(full, x) == 0 for x in range(1 << n))
    with pytest.raises(gf2.DimensionError):
        gf2.coset_rep(W, 1 << 10)


def test_dual_examples():
    assert gf2.dual(S("11")) == S("11")
    for n in range(0, 5):
        assert gf2.dual(Subspace.zero(n)) == Subspace.full(n)


def test_intersections():
    V, W = S("1000", "0100"), S("0100", "0010")
    assert gf2.intersect_dim(V, W) == 1
    assert gf2.intersection_basis(V, W) == S("0100")
    assert gf2.intersect_dim(S("10"), S("01")) == 0
    assert gf2.intersect_dim(V, V) == 2
    with pytest.raises(gf2.DimensionError):
        gf2.sum_dim(S("10"), S("010"))


def test_enumeration_examples():
    assert [str(W) for W in gf2.enumerate_grassmannian(2, 1)] == ["span{01}", "span{10}", "span{11}"]
    assert len(gf2.enumerate_grassmannian(4, 2)) == 35
    assert gf2.enumerate_grassmannian(5, 0) == (Subspace.zero(5),)
    with pytest.raises(gf2.GrassmannianTooLarge) as info:
        gf2.enumerate_grassmannian(6, 3, cap=100)
    assert info.value.required == 1395


def test_gaussian_binomial_and_counts():
    assert gf2.gaussian_binomial(4, 2) == 35
    assert gf2.gaussian_binomial(2, 1) == 3
    assert gf2.gaussian_binomial(7, 0) == 1
    assert [gf2.intersection_count(4, 2, m) for m in range(3)] == [16, 18, 1]
    assert gf2.intersection_count(2, 1, 0) == 2
    assert all(gf2.intersection_count(n, k, k) == 1 for n in range(8) for k in range(n + 1))


@pytest.mark.parametrize("n,k", [(n, k) for n in range(5) for k in range(n + 1)])
def test_enumeration_matches_set_oracle(n, k):
    G = gf2.enumerate_grassmannian(n, k)
    assert {frozenset(W.elements()) for W in G} == all_subspaces(n, k)
    assert len(G) == gauss_binom_brute(n, k) == gf2.gaussian_binomial(n, k)
    assert list(G) == sorted(G)
    for W in G:
        assert W.k == k
        # pivot columns increase and each holds a single 1
        assert list(W.pivots) == sorted(W.pivots, reverse=True)
        for r, p in zip(W.basis, W.pivots):
            assert sum((b >> p) & 1 for b in W.basis) == 1


@pytest.mark.parametrize("n,k", [(3, 1), (4, 2), (4, 1), (5, 2)])
def test_set_oracle_for_dual_and_intersection(n, k):
    G = gf2.enumerate_grassmannian(n, k)
    for W in G:
        Ws = frozenset(W.elements())
        assert frozenset(gf2.dual(W).elements()) == dual_set(Ws, n)
    for V in G[:12]:
        for W in G:
            inter = frozenset(V.elements()) & frozenset(W.elements())
            assert gf2.intersect_dim(V, W) == log2_size(inter)
            assert frozenset(gf2.intersection_basis(V, W).elements()) == inter


@pytest.mark.parametrize("n", range(0, 7))
def test_intersection_histogram_exhaustive(n):
    for k in range(n + 1):
        G = gf2.enumerate_grassmannian(n, k)
        expected = {m: gf2.intersection_count(n, k, m) for m in range(k + 1)}
        expected = {m: c for m, c in expected.items() if c}
        for W in G[:: max(1, len(G) // 40)]:
            hist = {}
            for V in G:
                m = gf2.intersect_dim(V, W)
                hist[m] = hist.get(m, 0) + 1
            assert hist == expected


def test_dual_involution_up_to_six():
    for n in range(7):
        for k in range(n + 1):
            for W in gf2.enumerate_grassmannian(n, k):
                assert gf2.dual(gf2.dual(W)) == W
                assert gf2.dual(W).k == n - k


def test_reflexivity_to_thirty():
    for n in range(31):
        for k in range(n + 1):
            assert gf2.gaussian_binomial(n, k) == gf2.gaussian_binomial(n, n - k)
            assert sum(gf2.intersection_count(n, k, m) for m in range(k + 1)) == gf2.gaussian_binomial(n, k)


def test_serialization_round_trip():
    W = S("1010", "0111")
    d = W.to_dict()
    assert d == {"n": 4, "k": 2, "basis": ["1010", "0111"]}
    assert Subspace.from_dict(d) == W
    with pytest.raises(ValueError):
        Subspace.from_dict({"n": 3, "k": 2, "basis": ["110", "110"]})


@st.composite
def subspace_and_vectors(draw):
    n = draw(st.integers(1, 10))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=n))
    x = draw(st.integers(0, (1 << n) - 1))
    return n, rows, x


@settings(max_examples=200, deadline=None)
@given(subspace_and_vectors(), st.data())
def test_coset_rep_constant_on_cosets(case, data):
    n, rows, x = case
    W = Subspace.span(rows, n)
    w = data.draw(st.sampled_from(W.elements()))
    r = gf2.coset_rep(W, x)
    assert r == gf2.coset_rep(W, x ^ w)
    assert r & W.pivot_mask == 0
    assert (x ^ r) in W


@settings(max_examples=200, deadline=None)
@given(subspace_and_vectors())
def test_rref_preserves_span(case):
    n, rows, _ = case
    basis, rank = gf2.rref(rows, n)
    assert span_set(basis, n) == span_set(rows, n)
    assert len(span_set(basis, n)) == 1 << rank
    assert gf2.rref(basis, n)[0] == basis


def test_coset_reps_partition_space():
    for W in gf2.enumerate_grassmannian(4, 2):
        reps = gf2.coset_reps(W)
        assert len(reps) == 4
        assert {gf2.coset_rep(W, x) for x in range(16)} == set(reps)
