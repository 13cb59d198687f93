import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosetgame import gf2, perms, qstate
from cosetgame.gf2 import Subspace, vec

from oracles import hadamard_kron, state_from_set


def test_coset_state_examples():
    W = Subspace.span([vec("11")], 2)
    psi = qstate.coset_state(W, vec("01"), vec("10"))
    expected = np.zeros(4)
    expected[vec("01")] = 1 / math.sqrt(2)
    expected[vec("10")] = -1 / math.sqrt(2)
    assert np.allclose(psi, expected, atol=1e-15)
    assert np.allclose(qstate.subspace_state(Subspace.zero(3)), np.eye(8)[0])
    with pytest.raises(ValueError):
        qstate.subspace_state(Subspace.zero(11))
    with pytest.raises(gf2.DimensionError):
        qstate.coset_state(W, 4, 0)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(4) for k in range(n + 1)])
def test_coset_state_matches_set_oracle(n, k):
    for W in gf2.enumerate_grassmannian(n, k):
        S = W.elements()
        for x in range(1 << n):
            for z in range(1 << n):
                assert np.allclose(qstate.coset_state(W, x, z), state_from_set(S, x, z, n), atol=1e-14)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(5) for k in range(n + 1)])
def test_coset_basis_is_orthonormal(n, k):
    for W in gf2.enumerate_grassmannian(n, k)[:10]:
        B, labels = qstate.coset_basis(W)
        assert B.shape == (1 << n, 1 << n)
        assert np.allclose(B.conj().T @ B, np.eye(1 << n), atol=1e-12)
        assert labels == sorted(labels)


def test_inner_product_formula_against_numerics():
    for n, k in [(2, 1), (3, 1), (3, 2), (4, 2)]:
        G = gf2.enumerate_grassmannian(n, k)
        for V, W in itertools.product(G[:6], G):
            for x, z, x2, z2 in [(0, 0, 0, 0), (1, 2, 3, 0), (3, 1, 0, 2)]:
                num = abs(np.vdot(qstate.coset_state(V, x, z), qstate.coset_state(W, x2, z2)))
                assert abs(num - qstate.inner_product_formula(V, W, x, z, x2, z2)) <= 1e-10


def test_hadamard_duality():
    H = hadamard_kron(3)
    assert np.allclose(qstate.hadamard_matrix(3), H)
    for W in gf2.enumerate_grassmannian(3, 1):
        Wp = gf2.dual(W)
        for x in range(8):
            for z in range(8):
                a = qstate.hadamard_dual(qstate.coset_state(W, x, z))
                assert np.allclose(a, H @ qstate.coset_state(W, x, z), atol=1e-14)
                assert qstate.same_up_to_phase(a, qstate.coset_state(Wp, z, x))
    with pytest.raises(ValueError):
        qstate.hadamard_dual(np.ones(3))


def test_projector_sums():
    W = gf2.enumerate_grassmannian(3, 1)[2]
    for x in gf2.coset_reps(W):
        assert np.allclose(qstate.coset_projector_sum_B(W, x), qstate.coset_indicator(W, x), atol=1e-14)
    total = sum(qstate.coset_projector_sum_C(W, z) for z in gf2.coset_reps(gf2.dual(W)))
    assert np.allclose(total, np.eye(8), atol=1e-14)


def test_operator_norm_methods_agree():
    rng = np.random.default_rng(3)
    for d in (1, 2, 5, 16):
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = a @ a.conj().T
        e = qstate.operator_norm(h)
        p = qstate.operator_norm(h, method="power", max_iter=100000)
        assert abs(e - p) <= 1e-8 * e
        assert e == pytest.approx(np.linalg.norm(a, 2) ** 2, rel=1e-12)
        assert qstate.spectral_norm(a) == pytest.approx(np.linalg.norm(a, 2), rel=1e-12)
    assert qstate.operator_norm(np.zeros((3, 3)), method="power") == 0.0
    with pytest.raises(ValueError):
        qstate.operator_norm(np.eye(2), method="lanczos")


def test_power_iteration_reports_failure():
    # +1 and -1 eigenvalues tie in magnitude, so the iteration oscillates
    h = np.diag([1.0, -1.0])
    with pytest.raises(qstate.ConvergenceError) as info:
        qstate.operator_norm(h, method="power", max_iter=50, seed=1)
    assert info.value.residual > 0
    assert info.value.estimate == pytest.approx(0, abs=1.0)


def test_tolerances_are_settable():
    old = qstate.TOL.spectral
    try:
        qstate.set_tolerances(spectral=1e-6, amplitude=None)
        assert qstate.TOL.spectral == 1e-6
    finally:
        qstate.set_tolerances(spectral=old)
    assert qstate.TOL.to_dict()["spectral"] == old


def test_paired_overlap_on_intersection_permutations():
    n, k = 3, 1
    G = gf2.enumerate_grassmannian(n, k)
    fam = perms.full_family(n, k)
    rng = np.random.default_rng(0)
    for _ in range(5):
        ops = []
        for _W in G:
            a = rng.standard_normal((4, 4))
            ops.append(a @ a.T / 8)
        rep = qstate.verify_lemma1(ops, fam.perms)
        assert rep.passed and rep.slack >= -1e-9
    with pytest.raises(ValueError):
        qstate.verify_lemma1(ops, [(0,) * len(G)])


def test_paired_overlap_tight_for_identical_projectors():
    P = np.diag([1.0, 0.0])
    ops = [P] * 3
    cyc = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    rep = qstate.verify_lemma1(ops, cyc)
    assert rep.lhs == pytest.approx(3.0)
    assert rep.rhs == pytest.approx(3.0)


def test_projector_product_examples():
    G = gf2.enumerate_grassmannian(2, 1)
    lhs, bound = qstate.verify_lemma2(G[0], G[0], 0, 0)
    assert bound == 1.0 and lhs == pytest.approx(1.0)
    lhs, bound = qstate.verify_lemma2(G[0], G[1], 0, 0)
    assert bound == pytest.approx(1 / math.sqrt(2))
    assert lhs <= bound + 1e-9


def test_dump_round_trip():
    a = np.array([[1 + 2j, 0], [0.5, -1j]])
    assert np.array_equal(qstate.load_array(qstate.dump_array(a)), a)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.data())
def test_inner_product_property(n, data):
    k = data.draw(st.integers(0, n))
    G = gf2.enumerate_grassmannian(n, k)
    V = data.draw(st.sampled_from(G))
    W = data.draw(st.sampled_from(G))
    x, z, x2, z2 = (data.draw(st.integers(0, (1 << n) - 1)) for _ in range(4))
    num = abs(np.vdot(qstate.coset_state(V, x, z), qstate.coset_state(W, x2, z2)))
    assert abs(num - qstate.inner_product_formula(V, W, x, z, x2, z2)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_projector_product_property(n, data):
    k = data.draw(st.integers(0, n))
    G = gf2.enumerate_grassmannian(n, k)
    V = data.draw(st.sampled_from(G))
    W = data.draw(st.sampled_from(G))
    z = data.draw(st.integers(0, (1 << n) - 1))
    x2 = data.draw(st.integers(0, (1 << n) - 1))
    lhs, bound = qstate.verify_lemma2(V, W, z, x2)
    assert lhs <= bound + 1e-9
