"""The (n,k) coset monogamy game: strategies, winning probabilities and bounds.

Outcome ordering conventions used throughout:

* Strategies index subspaces by the canonical Gr_2(n,k) order of
  :func:`cosetgame.gf2.enumerate_grassmannian`.
* Bob's POVM for W is a stack of ``2**(n-k)`` matrices ordered like
  ``coset_reps(W)``; Charlie's is a stack of ``2**k`` matrices ordered like
  ``coset_reps(dual(W))``.  Winning means both outcome indices equal the
  indices of the canonical representatives of x and z.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import gf2, perms, qstate
from .exact import SQRT2, QSqrt2
from .gf2 import Subspace, gaussian_binomial


class StrategyError(ValueError):
    """Invalid channel or measurement data."""


@dataclass(frozen=True)
class Channel:
    """A CPTP map from n qubits into H_B (x) H_C, given by Kraus operators."""

    n_in: int
    dim_b: int
    dim_c: int
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        d_in, d_out = 1 << self.n_in, self.dim_b * self.dim_c
        ks = tuple(np.asarray(K, dtype=complex) for K in self.kraus)
        object.__setattr__(self, "kraus", ks)
        if not ks:
            raise StrategyError("channel needs at least one Kraus operator")
        for i, K in enumerate(ks):
            if K.shape != (d_out, d_in):
                raise StrategyError(f"kraus[{i}] has shape {K.shape}, expected {(d_out, d_in)}")
        tp = sum(K.conj().T @ K for K in ks)
        if np.max(np.abs(tp - np.eye(d_in))) > qstate.TOL.amplitude:
            raise StrategyError("Kraus operators are not trace preserving")

    @property
    def dim_out(self) -> int:
        return self.dim_b * self.dim_c

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(K @ rho @ K.conj().T for K in self.kraus)


def check_povm(elems: np.ndarray, dim: int, outcomes: int, where: str) -> np.ndarray:
    elems = np.asarray(elems, dtype=complex)
    if elems.shape != (outcomes, dim, dim):
        raise StrategyError(f"{where}: shape {elems.shape}, expected {(outcomes, dim, dim)}")
    tol = qstate.TOL.amplitude
    for i, E in enumerate(elems):
        if np.max(np.abs(E - E.conj().T)) > tol:
            raise StrategyError(f"{where}[{i}] is not Hermitian")
        if np.linalg.eigvalsh((E + E.conj().T) / 2)[0] < -tol:
            raise StrategyError(f"{where}[{i}] is not positive semidefinite")
    if np.max(np.abs(elems.sum(axis=0) - np.eye(dim))) > tol:
        raise StrategyError(f"{where}: elements do not sum to the identity")
    return elems


@dataclass(frozen=True)
class Strategy:
    """Channel plus per-subspace POVMs for Bob and Charlie; validated on construction."""

    n: int
    k: int
    channel: Channel
    bob: tuple[np.ndarray, ...]
    charlie: tuple[np.ndarray, ...]

    def __post_init__(self):
        G = gf2.enumerate_grassmannian(self.n, self.k)
        if self.channel.n_in != self.n:
            raise StrategyError("channel input size differs from n")
        if len(self.bob) != len(G) or len(self.charlie) != len(G):
            raise StrategyError(f"need one POVM per subspace ({len(G)})")
        db, dc = self.channel.dim_b, self.channel.dim_c
        bob = tuple(
            check_povm(B, db, 1 << (self.n - self.k), f"bob[{i}]") for i, B in enumerate(self.bob)
        )
        charlie = tuple(
            check_povm(C, dc, 1 << self.k, f"charlie[{i}]") for i, C in enumerate(self.charlie)
        )
        object.__setattr__(self, "bob", bob)
        object.__setattr__(self, "charlie", charlie)

    @property
    def subspaces(self) -> tuple[Subspace, ...]:
        return gf2.enumerate_grassmannian(self.n, self.k)


@dataclass(frozen=True)
class DeterministicStrategy:
    """Guesses f(W), g(W) per subspace, indexed in canonical Gr_2(n,k) order."""

    n: int
    k: int
    f: tuple[int, ...]
    g: tuple[int, ...]


# -- winning probability -----------------------------------------------------


def _outcome_probs(s: Strategy, i: int) -> np.ndarray:
    """probs[j, a, b]: Pr[Bob says a, Charlie says b] for the j-th (x,z) of subspace i."""
    W = s.subspaces[i]
    psi, _ = qstate.coset_basis(W)
    db, dc = s.channel.dim_b, s.channel.dim_c
    B, C = s.bob[i], s.charlie[i]
    probs = 0.0
    for K in s.channel.kraus:
        out = (K @ psi).reshape(db, dc, -1)
        probs = probs + np.einsum(
            "bcj,abd,gce,dej->jag", out.conj(), B, C, out, optimize=True
        ).real
    return probs


def _win_per_subspace(s: Strategy, i: int) -> float:
    probs = _outcome_probs(s, i)
    nb, nc = probs.shape[1], probs.shape[2]
    j = np.arange(nb * nc)
    return math.fsum(probs[j, j // nc, j % nc]) / (nb * nc)


def _map(fn: Callable[[int], float], count: int, threads: int) -> list[float]:
    if threads <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def p_win(s: Strategy, threads: int = 1) -> float:
    """Uniform average over W, x in CS(W), z in CS(W-perp) of Tr[(B_x (x) C_z) Phi(|W_xz><W_xz|)]."""
    vals = _map(lambda i: _win_per_subspace(s, i), len(s.subspaces), threads)
    return math.fsum(vals) / len(vals)


def p_win_mc(s: Strategy, shots: int, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo estimate of p_win and its standard error.

    Each shot draws (W, x, z) uniformly and the pair of outcomes from the
    Born rule.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    tables = [_outcome_probs(s, i) for i in range(len(s.subspaces))]
    nj = tables[0].shape[0]
    w_idx = rng.integers(len(tables), size=shots)
    j_idx = rng.integers(nj, size=shots)
    u = rng.random(shots)
    nc = tables[0].shape[2]
    wins = 0
    for i, table in enumerate(tables):
        sel = w_idx == i
        if not sel.any():
            continue
        cdf = np.cumsum(np.clip(table.reshape(nj, -1), 0.0, None), axis=1)
        cdf /= cdf[:, -1:]
        jj = j_idx[sel]
        outcome = np.array([np.searchsorted(cdf[j], x, side="right") for j, x in zip(jj, u[sel])])
        outcome = np.minimum(outcome, cdf.shape[1] - 1)
        wins += int(np.sum((outcome // nc == jj // nc) & (outcome % nc == jj % nc)))
    est = wins / shots
    return est, math.sqrt(max(est * (1 - est), 0.0) / shots)


def choi_state(c: Channel) -> np.ndarray:
    """(Id (x) Phi)(|phi><phi|) for the unit-norm maximally entangled |phi>."""
    d = 1 << c.n_in
    rho = np.zeros((d * c.dim_out, d * c.dim_out), dtype=complex)
    for K in c.kraus:
        v = K.T.reshape(-1) / math.sqrt(d)
        rho += np.outer(v, v.conj())
    return rho


def p_win_extended(s: Strategy) -> float:
    """E_W sum_{x,z} Tr[(|W_xz><W_xz| (x) B_x (x) C_z) rho] with rho the Choi state.

    With a unit-norm maximally entangled state and real coset states the
    summed form equals ``p_win`` with no extra factor.
    """
    d = 1 << s.n
    db, dc = s.channel.dim_b, s.channel.dim_c
    R = choi_state(s.channel).reshape(d, db, dc, d, db, dc)
    nc = 1 << s.k
    vals = []
    for i, W in enumerate(s.subspaces):
        psi, _ = qstate.coset_basis(W)
        j = np.arange(psi.shape[1])
        P = np.einsum("aj,dj->jad", psi, psi.conj())
        Bs = s.bob[i][j // nc]
        Cs = s.charlie[i][j % nc]
        terms = np.einsum("jad,jbe,jcf,defabc->j", P, Bs, Cs, R, optimize=True)
        vals.append(math.fsum(terms.real))
    return math.fsum(vals) / len(vals)


# -- closed forms --------------------------------------------------------------


def _check_nk(n: int, k: int) -> None:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n} k={k}")


def theorem1_bound_exact(n: int, k: int) -> QSqrt2:
    """(1/N) sum_m 2^(m^2) [n-k, m]_2 [k, m]_2 2^(-m/2), exactly."""
    _check_nk(n, k)
    total = QSqrt2(0)
    for m in range(k + 1):
        c = (1 << m * m) * gaussian_binomial(n - k, m) * gaussian_binomial(k, m)
        if c:
            total = total + c * QSqrt2.pow_sqrt2(-m)
    return total / gaussian_binomial(n, k)


def theorem1_bound(n: int, k: int) -> float:
    return float(theorem1_bound_exact(n, k))


def unentangled_value_exact(n: int, k: int) -> Fraction:
    _check_nk(n, k)
    total = sum(
        Fraction((1 << m * m) * gaussian_binomial(n - k, m) * gaussian_binomial(k, m), 1 << m)
        for m in range(k + 1)
    )
    return total / gaussian_binomial(n, k)


def unentangled_value(n: int, k: int) -> float:
    return float(unentangled_value_exact(n, k))


def winning_rate_envelope(R: float) -> float:
    """2^(-min(R, 1-R)/2)."""
    if not 0.0 <= R <= 1.0:
        raise ValueError(f"rate must lie in [0, 1], got {R}")
    return 2.0 ** (-min(R, 1.0 - R) / 2)


CLOSING_CONSTANT = 9 / (2 * (9 / (2 * SQRT2) - 1)) + 1


@dataclass
class RatioReport:
    n: int
    k: int
    ratios: list[Fraction]
    g: QSqrt2
    closing_bound: QSqrt2
    ratios_ok: bool
    closing_ok: bool

    @property
    def passed(self) -> bool:
        return self.ratios_ok and self.closing_ok

    @property
    def max_ratio(self) -> Fraction | None:
        return max(self.ratios) if self.ratios else None


def ratio_check(n: int, k: int) -> RatioReport:
    """Exact check of f(n,k,k-m)/f(n,k,k-m-1) <= 2/9 and the closing constant bound."""
    _check_nk(n, k)
    if 2 * k > n:
        raise ValueError("ratio_check applies for k <= n/2")
    ratios = [gf2.intersection_ratio(n, k, m) for m in range(k - 1)]
    g = theorem1_bound_exact(n, k)
    bound = CLOSING_CONSTANT * QSqrt2.pow_sqrt2(-k)
    return RatioReport(
        n, k, ratios, g, bound,
        all(r <= Fraction(2, 9) for r in ratios),
        g <= bound,
    )


# -- unentangled strategies ----------------------------------------------------


def _averaged_projector(states: Sequence[np.ndarray]) -> np.ndarray:
    M = np.array(states)
    return (M.T @ M.conj()) / len(states)


def unentangled_value_oracle(n: int, k: int) -> float:
    """||E_W |W><W|||, by dense eigensolve."""
    if n > 5:
        raise ValueError("oracle is limited to n <= 5")
    G = gf2.enumerate_grassmannian(n, k)
    return qstate.operator_norm(_averaged_projector([qstate.subspace_state(W) for W in G]))


def deterministic_value(ds: DeterministicStrategy) -> float:
    G = gf2.enumerate_grassmannian(ds.n, ds.k)
    if len(ds.f) != len(G) or len(ds.g) != len(G):
        raise StrategyError("f and g must be defined on every subspace")
    states = [qstate.coset_state(W, x, z) for W, x, z in zip(G, ds.f, ds.g)]
    return qstate.operator_norm(_averaged_projector(states))


def random_deterministic(n: int, k: int, seed: int) -> DeterministicStrategy:
    rng = np.random.default_rng(seed)
    N = gaussian_binomial(n, k)
    f = tuple(int(v) for v in rng.integers(1 << n, size=N))
    g = tuple(int(v) for v in rng.integers(1 << n, size=N))
    return DeterministicStrategy(n, k, f, g)


# -- dual game -------------------------------------------------------------------


def swap_matrix(db: int, dc: int) -> np.ndarray:
    """Unitary H_B (x) H_C -> H_C (x) H_B."""
    S = np.zeros((db * dc, db * dc))
    for b in range(db):
        for c in range(dc):
            S[c * db + b, b * dc + c] = 1.0
    return S


def dualize(s: Strategy) -> Strategy:
    """Strategy for the (n, n-k) game with the players' roles exchanged."""
    db, dc = s.channel.dim_b, s.channel.dim_c
    H = qstate.hadamard_matrix(s.n)
    S = swap_matrix(db, dc)
    channel = Channel(s.n, dc, db, tuple(S @ K @ H for K in s.channel.kraus))
    index = gf2.grassmannian_index(s.n, s.k)
    bob, charlie = [], []
    for Wd in gf2.enumerate_grassmannian(s.n, s.n - s.k):
        i = index[gf2.dual(Wd)]
        bob.append(s.charlie[i])
        charlie.append(s.bob[i])
    return Strategy(s.n, s.n - s.k, channel, tuple(bob), tuple(charlie))


# -- strategy constructors ---------------------------------------------------------


def discard_and_guess(n: int, k: int) -> Strategy:
    """Replace the input by the maximally mixed state; both read off a basis label."""
    db, dc = 1 << (n - k), 1 << k
    d, do = 1 << n, db * dc
    kraus = []
    for o in range(do):
        for i in range(d):
            K = np.zeros((do, d))
            K[o, i] = 1 / math.sqrt(do)
            kraus.append(K)
    N = gaussian_binomial(n, k)
    B = np.array([np.diag(np.eye(db)[a]) for a in range(db)])
    C = np.array([np.diag(np.eye(dc)[a]) for a in range(dc)])
    return Strategy(n, k, Channel(n, db, dc, tuple(kraus)), (B,) * N, (C,) * N)


def bob_gets_everything(n: int, k: int) -> Strategy:
    """Bob receives all qubits and measures the coset; Charlie guesses z = 0."""
    G = gf2.enumerate_grassmannian(n, k)
    d = 1 << n
    channel = Channel(n, d, 1, (np.eye(d),))
    bob = tuple(np.array([qstate.coset_indicator(W, x) for x in gf2.coset_reps(W)]) for W in G)
    C = np.zeros((1 << k, 1, 1))
    C[0, 0, 0] = 1.0
    return Strategy(n, k, channel, bob, (C,) * len(G))


def charlie_gets_everything(n: int, k: int) -> Strategy:
    """Charlie receives all qubits and measures z in the Hadamard-rotated coset basis."""
    G = gf2.enumerate_grassmannian(n, k)
    d = 1 << n
    H = qstate.hadamard_matrix(n)
    channel = Channel(n, 1, d, (np.eye(d),))
    charlie = []
    for W in G:
        Wp = gf2.dual(W)
        charlie.append(np.array([H @ qstate.coset_indicator(Wp, z) @ H for z in gf2.coset_reps(Wp)]))
    B = np.zeros((1 << (n - k), 1, 1))
    B[0, 0, 0] = 1.0
    return Strategy(n, k, channel, (B,) * len(G), tuple(charlie))


def _haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_channel(
    n: int, dim_b: int, dim_c: int, rng: np.random.Generator, n_kraus: int | None = None
) -> Channel:
    """Kraus operators cut from a random isometry (QR of a complex Gaussian)."""
    d, do = 1 << n, dim_b * dim_c
    if n_kraus is None:
        n_kraus = max(2, -(-d // do))
    if n_kraus * do < d:
        raise ValueError("too few Kraus operators for an isometry")
    Z = rng.standard_normal((n_kraus * do, d)) + 1j * rng.standard_normal((n_kraus * do, d))
    Q, _ = np.linalg.qr(Z)
    return Channel(n, dim_b, dim_c, tuple(Q[r * do:(r + 1) * do] for r in range(n_kraus)))


def random_pvm(rng: np.random.Generator, dim: int, outcomes: int) -> np.ndarray:
    """Random orthonormal basis, vectors dealt to outcomes at random."""
    U = _haar_unitary(rng, dim)
    owner = rng.integers(outcomes, size=dim)
    out = np.zeros((outcomes, dim, dim), dtype=complex)
    for col, o in enumerate(owner):
        out[o] += np.outer(U[:, col], U[:, col].conj())
    return out


def random_povm(rng: np.random.Generator, dim: int, outcomes: int) -> np.ndarray:
    A = rng.standard_normal((outcomes, dim, dim)) + 1j * rng.standard_normal((outcomes, dim, dim))
    G = np.einsum("oab,ocb->oac", A, A.conj())
    S = qstate.sqrt_psd(G.sum(axis=0))
    Si = np.linalg.inv(S)
    out = np.einsum("ab,obc,cd->oad", Si, G, Si.conj().T)
    return (out + out.conj().transpose(0, 2, 1)) / 2


def random_strategy(
    n: int,
    k: int,
    seed: int,
    dim_b: int = 2,
    dim_c: int = 2,
    kind: str = "pvm",
    n_kraus: int | None = None,
) -> Strategy:
    rng = np.random.default_rng(seed)
    make = {"pvm": random_pvm, "povm": random_povm}[kind]
    channel = random_channel(n, dim_b, dim_c, rng, n_kraus)
    N = gaussian_binomial(n, k)
    bob = tuple(make(rng, dim_b, 1 << (n - k)) for _ in range(N))
    charlie = tuple(make(rng, dim_c, 1 << k) for _ in range(N))
    return Strategy(n, k, channel, bob, charlie)


# -- the operator-norm bound pipeline --------------------------------------------


@dataclass
class Stage:
    name: str
    value: float
    bound: float
    passed: bool

    @property
    def slack(self) -> float:
        return self.bound - self.value


@dataclass
class PipelineReport:
    n: int
    k: int
    seed: int | None
    stages: list[Stage] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(st.passed for st in self.stages)

    def stage(self, name: str) -> Stage:
        return next(st for st in self.stages if st.name == name)


def _tripartite(s: Strategy, i: int, bob: bool = True, charlie: bool = True) -> np.ndarray:
    """sum_{x,z} |W_xz><W_xz| (x) B_x (x) C_z, with identities where disabled."""
    W = s.subspaces[i]
    db, dc = s.channel.dim_b, s.channel.dim_c
    psi, _ = qstate.coset_basis(W)
    nc = 1 << s.k
    total = 0
    for j in range(psi.shape[1]):
        B = s.bob[i][j // nc] if bob else np.eye(db)
        C = s.charlie[i][j % nc] if charlie else np.eye(dc)
        total = total + np.kron(qstate.projector(psi[:, j]), np.kron(B, C))
    return total


def norm_sum_bound_check(
    n: int, k: int, seed: int | None = 0, strategy: Strategy | None = None, dims: int = 2
) -> PipelineReport:
    """Walk a strategy through the chain of operator inequalities behind the bound.

    Stages: (a) p_win <= ||sum_W Pi^W|| / N; (b) ||Pi^V Pi^W|| <= ||P^V Q^W||;
    (c) ||P^V Q^W|| <= sqrt(2^(dim(V∩W)-k)); (d) the permutation-paired
    overlap bound on ||sum_W Pi^W|| and its closed form N * g(n,k).
    """
    if n > 3 and strategy is None:
        raise ValueError("tripartite checks are limited to n <= 3")
    s = strategy if strategy is not None else random_strategy(n, k, seed, dims, dims, "pvm")
    tol = qstate.TOL.spectral
    G = s.subspaces
    N = len(G)
    Pi = [_tripartite(s, i) for i in range(N)]
    P = [_tripartite(s, i, bob=False) for i in range(N)]
    Q = [_tripartite(s, i, charlie=False) for i in range(N)]
    D = perms.intersection_dims(n, k)
    rep = PipelineReport(n, k, seed)

    total_norm = qstate.operator_norm(sum(Pi))
    pw = p_win(s)
    rep.stages.append(Stage("sum_norm", pw, total_norm / N, pw <= total_norm / N + tol))

    worst_b = worst_c = None
    for a in range(N):
        for b in range(N):
            pipi = qstate.spectral_norm(Pi[a] @ Pi[b])
            pq = qstate.spectral_norm(P[a] @ Q[b])
            cap = math.sqrt(2.0 ** (int(D[a, b]) - k))
            st_b = Stage("pi_vs_pq", pipi, pq, pipi <= pq + tol)
            st_c = Stage("pq_vs_overlap", pq, cap, pq <= cap + tol)
            if worst_b is None or st_b.slack < worst_b.slack:
                worst_b = st_b
            if worst_c is None or st_c.slack < worst_c.slack:
                worst_c = st_c
    rep.stages += [worst_b, worst_c]

    fam = perms.full_family(n, k)
    paired = 0.0
    per_perm_ok = True
    for m, p in fam.entries:
        worst = max(qstate.spectral_norm(Pi[w] @ Pi[p[w]]) for w in range(N))
        per_perm_ok &= worst <= math.sqrt(2.0 ** (m - k)) + tol
        paired += worst
    closed = N * theorem1_bound(n, k)
    rep.stages.append(Stage("permutation_pairing", total_norm, paired, total_norm <= paired + tol))
    rep.stages.append(
        Stage("pairing_closed_form", paired, closed, per_perm_ok and paired <= closed + tol)
    )
    return rep
