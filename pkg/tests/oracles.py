"""Brute-force reference implementations used only by the tests.

Everything here works on explicit sets of vectors or dense matrices and
shares no code with the package beyond the integer vector convention.
"""

from __future__ import annotations

import itertools

import numpy as np


def span_set(rows, n):
    out = {0}
    for r in rows:
        out |= {u ^ r for u in out}
    return frozenset(out)


def all_subspaces(n, k):
    """Every k-dim subspace of F_2^n as a frozenset, by spanning all k-subsets."""
    found = set()
    for rows in itertools.combinations(range(1, 1 << n), k):
        S = span_set(rows, n)
        if len(S) == 1 << k:
            found.add(S)
    return found


def dot(x, y):
    return bin(x & y).count("1") % 2


def dual_set(S, n):
    return frozenset(y for y in range(1 << n) if all(dot(x, y) == 0 for x in S))


def log2_size(S):
    return len(S).bit_length() - 1


def gauss_binom_brute(n, k):
    return len(all_subspaces(n, k))


def state_from_set(S, x, z, n):
    psi = np.zeros(1 << n)
    for u in S:
        psi[x ^ u] = (-1) ** dot(z, u)
    return psi / np.sqrt(len(S))


def hadamard_kron(n):
    H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    out = np.eye(1)
    for _ in range(n):
        out = np.kron(out, H)
    return out


def p_win_density(strategy):
    """Protocol average computed with explicit density matrices and traces."""
    from cosetgame import gf2, qstate

    n, k = strategy.n, strategy.k
    total = 0.0
    G = gf2.enumerate_grassmannian(n, k)
    for i, W in enumerate(G):
        Wp = gf2.dual(W)
        for a, x in enumerate(gf2.coset_reps(W)):
            for b, z in enumerate(gf2.coset_reps(Wp)):
                psi = qstate.coset_state(W, x, z)
                rho = np.outer(psi, psi.conj())
                out = sum(K @ rho @ K.conj().T for K in strategy.channel.kraus)
                M = np.kron(strategy.bob[i][a], strategy.charlie[i][b])
                total += np.trace(M @ out).real
    return total / (len(G) * (1 << n))
