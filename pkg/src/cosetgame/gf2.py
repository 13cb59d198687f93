"""Linear algebra over F_2 with vectors packed into Python ints.

A vector of F_2^n is an ``int`` in ``[0, 2**n)``.  Column 0 is the most
significant bit, so ``vec("110") == 6`` and strings read left to right.
The same integer doubles as the computational basis label of an n-qubit
state (qubit 0 is the leftmost character).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator

MAX_N = 20
DEFAULT_CAP = 10**6


class DimensionError(ValueError):
    """Vectors or subspaces with inconsistent ambient dimension."""


class GrassmannianTooLarge(ValueError):
    """Raised when Gr_2(n, k) has more members than the configured cap."""

    def __init__(self, n: int, k: int, required: int, cap: int):
        super().__init__(
            f"Gr_2({n},{k}) has {required} subspaces, exceeding cap {cap}"
        )
        self.n, self.k, self.required, self.cap = n, k, required, cap


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_N:
        raise DimensionError(f"ambient dimension must lie in [0, {MAX_N}], got {n}")


def vec(bits: str) -> int:
    """Parse a 0/1 string (most significant bit left) into a vector."""
    if bits and set(bits) - {"0", "1"}:
        raise ValueError(f"not a binary string: {bits!r}")
    return int(bits, 2) if bits else 0


def bits(x: int, n: int) -> str:
    return format(x, f"0{n}b") if n else ""


def dot(x: int, y: int) -> int:
    """Standard bilinear form x . y over F_2."""
    return (x & y).bit_count() & 1


def _check_vectors(rows: Iterable[int], n: int) -> list[int]:
    out = []
    for r in rows:
        r = int(r)
        if r < 0 or r >> n:
            raise DimensionError(f"vector {r} does not fit in F_2^{n}")
        out.append(r)
    return out


def _echelon(rows: Iterable[int], width: int) -> list[int]:
    work = [r for r in rows if r]
    basis: list[int] = []
    for b in range(width - 1, -1, -1):
        if not work:
            break
        mask = 1 << b
        idx = next((i for i, r in enumerate(work) if r & mask), None)
        if idx is None:
            continue
        piv = work.pop(idx)
        work = [r ^ piv if r & mask else r for r in work]
        work = [r for r in work if r]
        basis = [r ^ piv if r & mask else r for r in basis]
        basis.append(piv)
    return basis


def rref(rows: Iterable[int], n: int) -> tuple[tuple[int, ...], int]:
    """Reduced row echelon form of the span of ``rows``.

    Returns ``(basis, rank)``; pivot columns increase left to right and
    each pivot column holds a single 1.
    """
    _check_n(n)
    basis = _echelon(_check_vectors(rows, n), n)
    return tuple(basis), len(basis)


@dataclass(frozen=True, order=True)
class Subspace:
    """A subspace of F_2^n stored by its RREF basis.

    Equality, hashing and ordering all go through ``(n, basis)``, so two
    spans are equal exactly when their canonical forms coincide, and the
    ordering is lexicographic on the row-major bit matrix.
    """

    n: int
    basis: tuple[int, ...]

    def __post_init__(self):
        canon, _ = rref(self.basis, self.n)
        if canon != tuple(self.basis):
            raise ValueError("basis is not in reduced row echelon form; use Subspace.span")

    @classmethod
    def span(cls, rows: Iterable[int], n: int) -> Subspace:
        return cls(n, rref(rows, n)[0])

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> Subspace:
        return cls(n, tuple(1 << b for b in range(n - 1, -1, -1)))

    @property
    def k(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        """Pivot bit positions (``1 << p`` is the pivot mask)."""
        return tuple(r.bit_length() - 1 for r in self.basis)

    @cached_property
    def pivot_mask(self) -> int:
        return sum(1 << p for p in self.pivots)

    def elements(self) -> list[int]:
        """All 2^k members, ordered by the binary combination of basis rows."""
        out = [0]
        for r in reversed(self.basis):
            out = out + [u ^ r for u in out]
        return out

    @cached_property
    def element_mask(self) -> int:
        """Bitset over F_2^n with bit u set iff u is a member."""
        m = 0
        for u in self.elements():
            m |= 1 << u
        return m

    def reduce(self, x: int) -> int:
        for r, p in zip(self.basis, self.pivots):
            if (x >> p) & 1:
                x ^= r
        return x

    def __contains__(self, x: int) -> bool:
        return self.reduce(x) == 0

    def __str__(self) -> str:
        return "span{" + ", ".join(bits(r, self.n) for r in self.basis) + "}"

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "basis": [bits(r, self.n) for r in self.basis]}

    @classmethod
    def from_dict(cls, data: dict) -> Subspace:
        n = int(data["n"])
        rows = [vec(s) for s in data["basis"]]
        if any(len(s) != n for s in data["basis"]):
            raise DimensionError("basis row length differs from n")
        W = cls.span(rows, n)
        if W.k != int(data.get("k", W.k)) or W.k != len(rows):
            raise ValueError("basis rows are linearly dependent or k is wrong")
        return W


def subspace_from_vectors(rows: Iterable[int], n: int) -> Subspace:
    return Subspace.span(rows, n)


def _check_member(W: Subspace, x: int) -> None:
    if x < 0 or x >> W.n:
        raise DimensionError(f"vector {x} does not fit in F_2^{W.n}")


def member(W: Subspace, x: int) -> bool:
    _check_member(W, x)
    return x in W


def coset_rep(W: Subspace, x: int) -> int:
    """Canonical representative of x + W (zero in every pivot column)."""
    _check_member(W, x)
    return W.reduce(x)


def coset_reps(W: Subspace) -> tuple[int, ...]:
    """CS(W): the 2^(n-k) canonical coset representatives, ascending."""
    return _coset_reps(W.n, W.pivot_mask)


@lru_cache(maxsize=4096)
def _coset_reps(n: int, pivot_mask: int) -> tuple[int, ...]:
    free = [1 << b for b in range(n) if not (pivot_mask >> b) & 1]
    out = [0]
    for f in free:
        out = out + [u | f for u in out]
    return tuple(sorted(out))


def dual(W: Subspace) -> Subspace:
    """W-perp under the standard bilinear form; dimension n - k."""
    rows = []
    for b in range(W.n):
        if (W.pivot_mask >> b) & 1:
            continue
        v = 1 << b
        for r, p in zip(W.basis, W.pivots):
            if (r >> b) & 1:
                v |= 1 << p
        rows.append(v)
    return Subspace.span(rows, W.n)


def _same_n(V: Subspace, W: Subspace) -> None:
    if V.n != W.n:
        raise DimensionError(f"ambient dimensions differ: {V.n} != {W.n}")


def sum_dim(V: Subspace, W: Subspace) -> int:
    _same_n(V, W)
    return rref(V.basis + W.basis, V.n)[1]


def intersect_dim(V: Subspace, W: Subspace) -> int:
    return V.k + W.k - sum_dim(V, W)


def sum_space(V: Subspace, W: Subspace) -> Subspace:
    _same_n(V, W)
    return Subspace.span(V.basis + W.basis, V.n)


def intersection_basis(V: Subspace, W: Subspace) -> Subspace:
    """V ∩ W by the Zassenhaus construction on stacked [v|v], [w|0] rows."""
    _same_n(V, W)
    n = V.n
    rows = [(v << n) | v for v in V.basis] + [w << n for w in W.basis]
    echelon = _echelon(rows, 2 * n)
    low = (1 << n) - 1
    return Subspace.span([r & low for r in echelon if not r >> n], n)


@lru_cache(maxsize=None)
def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F_2^n (0 outside 0 <= k <= n)."""
    if k < 0 or n < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (k - i)) - 1
    return num // den


def intersection_count(n: int, k: int, m: int) -> int:
    """How many V in Gr_2(n,k) meet a fixed W in Gr_2(n,k) in dimension m."""
    if not 0 <= m <= k <= n:
        raise ValueError(f"need 0 <= m <= k <= n, got n={n} k={k} m={m}")
    return (1 << (k - m) ** 2) * gaussian_binomial(n - k, k - m) * gaussian_binomial(k, m)


def intersection_ratio(n: int, k: int, m: int) -> Fraction:
    """f(n,k,k-m) / f(n,k,k-m-1) as an exact fraction."""
    return Fraction(intersection_count(n, k, k - m), intersection_count(n, k, k - m - 1))


def _rref_matrices(n: int, k: int) -> Iterator[tuple[int, ...]]:
    for cols in combinations(range(n), k):
        pivot_bits = [n - 1 - c for c in cols]
        pivot_set = set(pivot_bits)
        # free positions of row i: non-pivot columns right of its pivot
        free = [
            [b for b in range(pb - 1, -1, -1) if b not in pivot_set]
            for pb in pivot_bits
        ]
        slots = [(i, b) for i, fb in enumerate(free) for b in fb]
        for choice in product((0, 1), repeat=len(slots)):
            rows = [1 << pb for pb in pivot_bits]
            for (i, b), c in zip(slots, choice):
                if c:
                    rows[i] |= 1 << b
            yield tuple(rows)


@lru_cache(maxsize=64)
def _grassmannian(n: int, k: int) -> tuple[Subspace, ...]:
    return tuple(Subspace(n, rows) for rows in sorted(_rref_matrices(n, k)))


def enumerate_grassmannian(n: int, k: int, cap: int = DEFAULT_CAP) -> tuple[Subspace, ...]:
    """Every k-dimensional subspace of F_2^n once, in canonical order."""
    _check_n(n)
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n} k={k}")
    required = gaussian_binomial(n, k)
    if required > cap:
        raise GrassmannianTooLarge(n, k, required, cap)
    return _grassmannian(n, k)


@lru_cache(maxsize=64)
def grassmannian_index(n: int, k: int) -> dict[Subspace, int]:
    return {W: i for i, W in enumerate(_grassmannian(n, k))}
