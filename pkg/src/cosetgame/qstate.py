"""Dense subspace/coset states, coset projectors and spectral norms."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import gf2
from .gf2 import Subspace

MAX_QUBITS = 10


@dataclass
class Tolerances:
    spectral: float = 1e-9
    amplitude: float = 1e-10
    construction: float = 1e-12

    def to_dict(self) -> dict:
        return asdict(self)


TOL = Tolerances()


def set_tolerances(**kwargs: float) -> None:
    for key, value in kwargs.items():
        if value is None:
            continue
        if not hasattr(TOL, key):
            raise KeyError(key)
        setattr(TOL, key, float(value))


class ConvergenceError(RuntimeError):
    def __init__(self, msg: str, residual: float, estimate: float):
        super().__init__(f"{msg} (best residual {residual:.3e}, estimate {estimate:.12g})")
        self.residual = residual
        self.estimate = estimate


def _check_dense(n: int) -> None:
    if n > MAX_QUBITS:
        raise ValueError(f"dense states are capped at {MAX_QUBITS} qubits, got {n}")


def subspace_state(W: Subspace) -> np.ndarray:
    _check_dense(W.n)
    psi = np.zeros(1 << W.n, dtype=complex)
    psi[W.elements()] = 2.0 ** (-W.k / 2)
    return psi


def coset_state(W: Subspace, x: int, z: int) -> np.ndarray:
    """X^x Z^z |W>: amplitude (-1)^(z.u) / sqrt(2^k) on label x + u, u in W."""
    _check_dense(W.n)
    for v in (x, z):
        if v < 0 or v >> W.n:
            raise gf2.DimensionError(f"vector {v} does not fit in F_2^{W.n}")
    psi = np.zeros(1 << W.n, dtype=complex)
    amp = 2.0 ** (-W.k / 2)
    for u in W.elements():
        psi[x ^ u] = -amp if gf2.dot(z, u) else amp
    return psi


def coset_basis(W: Subspace) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Columns |W_{x,z}> for x in CS(W), z in CS(W-perp), x-major order."""
    Wp = gf2.dual(W)
    labels = [(x, z) for x in gf2.coset_reps(W) for z in gf2.coset_reps(Wp)]
    return np.column_stack([coset_state(W, x, z) for x, z in labels]), labels


def same_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float | None = None) -> bool:
    tol = TOL.amplitude if tol is None else tol
    return abs(abs(np.vdot(a, b)) - 1.0) <= tol and abs(np.linalg.norm(a) - 1) <= tol


def inner_product_formula(V: Subspace, W: Subspace, x: int, z: int, x2: int, z2: int) -> float:
    """|<V_{x,z}|W_{x2,z2}>| from subspace data alone."""
    if V.n != W.n or V.k != W.k:
        raise gf2.DimensionError("inner product formula needs equal n and k")
    x_space, z_space, value = _pair_data(V, W)
    if (x ^ x2) not in x_space or (z ^ z2) not in z_space:
        return 0.0
    return value


@lru_cache(maxsize=4096)
def _pair_data(V: Subspace, W: Subspace) -> tuple[Subspace, Subspace, float]:
    return (
        gf2.sum_space(V, W),
        gf2.sum_space(gf2.dual(V), gf2.dual(W)),
        2.0 ** (gf2.intersect_dim(V, W) - V.k),
    )


def hadamard_dual(s: np.ndarray) -> np.ndarray:
    """Apply H^{(x)n} with an in-place fast Walsh-Hadamard transform."""
    d = len(s)
    n = d.bit_length() - 1
    if d != 1 << n:
        raise ValueError(f"length {d} is not a power of two")
    out = np.array(s, dtype=complex).reshape([2] * n) if n else np.array(s, dtype=complex)
    for ax in range(n):
        a = np.take(out, 0, axis=ax)
        b = np.take(out, 1, axis=ax)
        out = np.stack([a + b, a - b], axis=ax) / math.sqrt(2)
    return out.reshape(d)


def hadamard_matrix(n: int) -> np.ndarray:
    h = np.array([[1.0]])
    h1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
    for _ in range(n):
        h = np.kron(h, h1)
    return h


def projector(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def coset_projector_sum_B(W: Subspace, x: int) -> np.ndarray:
    """Sum over z' in CS(W-perp) of |W_{x,z'}><W_{x,z'}|."""
    return sum(projector(coset_state(W, x, z)) for z in gf2.coset_reps(gf2.dual(W)))


def coset_projector_sum_C(V: Subspace, z: int) -> np.ndarray:
    """Sum over x in CS(V) of |V_{x,z}><V_{x,z}|."""
    return sum(projector(coset_state(V, x, z)) for x in gf2.coset_reps(V))


def coset_indicator(W: Subspace, x: int) -> np.ndarray:
    """Diagonal projector onto computational labels in x + W."""
    diag = np.zeros(1 << W.n)
    diag[[x ^ u for u in W.elements()]] = 1.0
    return np.diag(diag).astype(complex)


def is_hermitian(h: np.ndarray, tol: float | None = None) -> bool:
    tol = TOL.construction if tol is None else tol
    return bool(np.max(np.abs(h - h.conj().T), initial=0.0) <= tol)


def operator_norm(
    h: np.ndarray,
    method: str = "eigh",
    max_iter: int = 20000,
    tol: float | None = None,
    seed: int = 0,
) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix.

    ``method="eigh"`` diagonalises fully.  ``method="power"`` runs power
    iteration and stops once ``||Hv - lam v|| <= tol * |lam|``; it raises
    :class:`ConvergenceError` if that certificate is not reached.
    """
    h = np.asarray(h)
    if h.shape[0] == 0:
        return 0.0
    if method == "eigh":
        w = np.linalg.eigvalsh((h + h.conj().T) / 2)
        return float(max(abs(w[0]), abs(w[-1])))
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    tol = TOL.spectral if tol is None else tol
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(h.shape[0]) + 1j * rng.standard_normal(h.shape[0])
    v /= np.linalg.norm(v)
    best = (math.inf, 0.0)
    for _ in range(max_iter):
        hv = h @ v
        lam = float(np.real(np.vdot(v, hv)))
        res = float(np.linalg.norm(hv - lam * v))
        if res < best[0]:
            best = (res, abs(lam))
        if res <= tol * abs(lam) or not np.any(hv):
            return abs(lam)
        v = hv / np.linalg.norm(hv)
    raise ConvergenceError("power iteration did not converge", *best)


def spectral_norm(a: np.ndarray, **kwargs) -> float:
    """||A|| for a general square matrix via the largest eigenvalue of A A^dag."""
    return math.sqrt(max(operator_norm(a @ a.conj().T, **kwargs), 0.0))


def sqrt_psd(p: np.ndarray) -> np.ndarray:
    w, u = np.linalg.eigh((p + p.conj().T) / 2)
    return (u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T


@dataclass
class Lemma1Report:
    lhs: float
    rhs: float
    slack: float
    passed: bool


def verify_lemma1(ops: Sequence[np.ndarray], perms: Sequence[Sequence[int]]) -> Lemma1Report:
    """Norm of a PSD sum against the permutation-paired overlap bound."""
    L = len(ops)
    for p in perms:
        if sorted(p) != list(range(L)):
            raise ValueError("index maps must be permutations of the operator indices")
    roots = [sqrt_psd(P) for P in ops]
    lhs = operator_norm(sum(ops))
    rhs = 0.0
    for p in perms:
        rhs += max(spectral_norm(roots[i] @ roots[p[i]]) for i in range(L))
    return Lemma1Report(lhs, rhs, rhs - lhs, lhs <= rhs + TOL.spectral)


def verify_lemma2(V: Subspace, W: Subspace, z: int, x2: int) -> tuple[float, float]:
    """Norm of the coset-sum product and its bound sqrt(2^(dim(V∩W)-k))."""
    A = coset_projector_sum_C(V, z) @ coset_projector_sum_B(W, x2)
    lhs = spectral_norm(A)
    bound = math.sqrt(2.0 ** (gf2.intersect_dim(V, W) - V.k))
    return lhs, bound


def dump_array(a: np.ndarray) -> str:
    """JSON dump of a state or operator: dim header plus row-major re/im parts."""
    a = np.asarray(a, dtype=complex)
    return json.dumps(
        {
            "dim": list(a.shape),
            "re": a.real.ravel().tolist(),
            "im": a.imag.ravel().tolist(),
        }
    )


def load_array(text: str) -> np.ndarray:
    data = json.loads(text)
    flat = np.array(data["re"]) + 1j * np.array(data["im"])
    return flat.reshape(data["dim"])
