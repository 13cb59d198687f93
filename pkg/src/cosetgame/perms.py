"""Mutually orthogonal permutations of Gr_2(n, k) with constant intersection.

For ``m < k`` the m-intersection graph is regular of even degree.  We orient
it along Euler circuits, which turns it into a directed graph with equal in-
and out-degree ``r`` everywhere, then split the tail/head bipartite graph
into ``r`` perfect matchings.  Each matching is a permutation ``pi`` whose
arcs are all m-intersecting; ``pi`` and its inverse never agree because
every undirected edge carries a single direction.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import gf2


class InvariantViolation(RuntimeError):
    """A structural guarantee of the construction did not hold."""


@lru_cache(maxsize=32)
def intersection_dims(n: int, k: int, cap: int = gf2.DEFAULT_CAP) -> np.ndarray:
    """Matrix ``D[i, j] = dim(G[i] ∩ G[j])`` over the canonical Grassmannian."""
    G = gf2.enumerate_grassmannian(n, k, cap)
    N = len(G)
    if n <= 6:
        masks = np.array([W.element_mask for W in G], dtype=np.uint64)
        sizes = np.bitwise_count(masks[:, None] & masks[None, :])
        D = (np.log2(sizes.astype(np.float64)) + 0.5).astype(np.int8)
    else:
        masks = [W.element_mask for W in G]
        D = np.empty((N, N), dtype=np.int8)
        for i in range(N):
            for j in range(i, N):
                D[i, j] = D[j, i] = (masks[i] & masks[j]).bit_count().bit_length() - 1
    D.setflags(write=False)
    return D


@dataclass(frozen=True)
class IntersectionGraph:
    n: int
    k: int
    m: int
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def num_vertices(self) -> int:
        return len(self.adjacency)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def num_edges(self) -> int:
        return sum(self.degrees()) // 2


@dataclass(frozen=True)
class DirectedGraph:
    succ: tuple[tuple[int, ...], ...]

    @property
    def num_vertices(self) -> int:
        return len(self.succ)

    def out_degrees(self) -> list[int]:
        return [len(s) for s in self.succ]

    def in_degrees(self) -> list[int]:
        deg = [0] * len(self.succ)
        for s in self.succ:
            for v in s:
                deg[v] += 1
        return deg

    def arcs(self) -> set[tuple[int, int]]:
        return {(u, v) for u, s in enumerate(self.succ) for v in s}


def build_intersection_graph(n: int, k: int, m: int, cap: int = gf2.DEFAULT_CAP) -> IntersectionGraph:
    """Graph on Gr_2(n,k) joining V != W whenever dim(V ∩ W) = m."""
    if not 0 <= m < k <= n:
        raise ValueError(f"need 0 <= m < k <= n, got n={n} k={k} m={m}")
    D = intersection_dims(n, k, cap)
    adj = tuple(tuple(int(j) for j in np.flatnonzero(row == m)) for row in D)
    return IntersectionGraph(n, k, m, adj)


def orient_eulerian(g: IntersectionGraph) -> DirectedGraph:
    """Direct every edge the way a Hierholzer walk traverses it."""
    adj = g.adjacency
    for v, a in enumerate(adj):
        if len(a) % 2:
            raise InvariantViolation(f"vertex {v} has odd degree {len(a)}")
    # undirected edge ids, neighbours in ascending order
    eid: dict[tuple[int, int], int] = {}
    inc = []
    for u, a in enumerate(adj):
        row = []
        for v in a:
            key = (u, v) if u < v else (v, u)
            if key not in eid:
                eid[key] = len(eid)
            row.append((v, eid[key]))
        inc.append(row)
    used = bytearray(len(eid))
    ptr = [0] * len(adj)
    succ: list[list[int]] = [[] for _ in adj]
    for start in range(len(adj)):
        stack = [start]
        while stack:
            v = stack[-1]
            row, p = inc[v], ptr[v]
            while p < len(row) and used[row[p][1]]:
                p += 1
            ptr[v] = p
            if p == len(row):
                stack.pop()
                continue
            w, e = row[p]
            used[e] = 1
            succ[v].append(w)
            stack.append(w)
    return DirectedGraph(tuple(tuple(sorted(s)) for s in succ))


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum bipartite matching; returns the partner of each left vertex or -1."""
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    while True:
        dist = [-1] * n_left
        queue = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
        reachable = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    reachable = True
                elif dist[w] == -1:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not reachable:
            return match_l
        it = [0] * n_left
        for s in range(n_left):
            if match_l[s] != -1:
                continue
            stack, via = [s], []
            while stack:
                u = stack[-1]
                nbrs = adj[u]
                step = None
                while it[u] < len(nbrs):
                    v = nbrs[it[u]]
                    it[u] += 1
                    w = match_r[v]
                    if w == -1 or dist[w] == dist[u] + 1:
                        step = (v, w)
                        break
                if step is None:
                    dist[u] = -2  # dead end for this phase
                    stack.pop()
                    if via:
                        via.pop()
                    continue
                v, w = step
                via.append(v)
                if w == -1:
                    for uu, vv in zip(stack, via):
                        match_l[uu] = vv
                        match_r[vv] = uu
                    break
                stack.append(w)


def _perfect_matching(succ: list[list[int]]) -> list[int]:
    match = hopcroft_karp(succ, len(succ))
    if -1 in match:
        raise InvariantViolation("regular bipartite graph without a perfect matching")
    return match


def _euler_split(succ: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Halve an even-regular bipartite graph by alternating along Euler circuits."""
    N = len(succ)
    inc: list[list[tuple[int, int]]] = [[] for _ in range(2 * N)]
    ends = []
    for u, s in enumerate(succ):
        for v in s:
            e = len(ends)
            ends.append((u, v))
            inc[u].append((N + v, e))
            inc[N + v].append((u, e))
    for row in inc:
        row.sort()
    used = bytearray(len(ends))
    ptr = [0] * (2 * N)
    first: list[list[int]] = [[] for _ in range(N)]
    second: list[list[int]] = [[] for _ in range(N)]
    for start in range(N):
        stack = [start]
        while stack:
            x = stack[-1]
            row, p = inc[x], ptr[x]
            while p < len(row) and used[row[p][1]]:
                p += 1
            ptr[x] = p
            if p == len(row):
                stack.pop()
                continue
            y, e = row[p]
            used[e] = 1
            u, v = ends[e]
            (first if x < N else second)[u].append(v)
            stack.append(y)
    return first, second


def _decompose(succ: list[list[int]], r: int) -> list[list[int]]:
    if r == 0:
        return []
    if r == 1:
        return [[s[0] for s in succ]]
    if r % 2:
        match = _perfect_matching(succ)
        rest = [[v for v in s if v != match[u]] for u, s in enumerate(succ)]
        return [match] + _decompose(rest, r - 1)
    a, b = _euler_split(succ)
    for half in (a, b):
        if any(len(s) != r // 2 for s in half):
            raise InvariantViolation("Euler split produced an unbalanced half")
    return _decompose(a, r // 2) + _decompose(b, r // 2)


def matching_decomposition(d: DirectedGraph) -> list[tuple[int, ...]]:
    """Partition the arcs of an r-in/r-out regular digraph into r permutations."""
    outs, ins = d.out_degrees(), d.in_degrees()
    if not outs:
        return []
    r = outs[0]
    if any(o != r for o in outs) or any(i != r for i in ins):
        raise InvariantViolation("digraph is not in/out regular")
    succ = [sorted(s) for s in d.succ]
    return [tuple(p) for p in _decompose(succ, r)]


def inverse(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


@dataclass
class PermutationFamily:
    """Permutations of the canonical Gr_2(n,k) indices, each tagged with m."""

    n: int
    k: int
    entries: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def perms(self) -> list[tuple[int, ...]]:
        return [p for _, p in self.entries]

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for m, _ in self.entries:
            out[m] = out.get(m, 0) + 1
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "entries": [{"m": m, "perm": list(p)} for m, p in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> PermutationFamily:
        entries = [(int(e["m"]), tuple(int(i) for i in e["perm"])) for e in data["entries"]]
        return cls(int(data["n"]), int(data["k"]), entries)


def orthogonal_family(n: int, k: int, m: int, cap: int = gf2.DEFAULT_CAP) -> PermutationFamily:
    """f(n,k,m) mutually orthogonal permutations with the m-intersection property."""
    if not 0 <= m <= k <= n:
        raise ValueError(f"need 0 <= m <= k <= n, got n={n} k={k} m={m}")
    N = len(gf2.enumerate_grassmannian(n, k, cap))
    if m == k:
        return PermutationFamily(n, k, [(m, tuple(range(N)))])
    g = build_intersection_graph(n, k, m, cap)
    entries = []
    for p in matching_decomposition(orient_eulerian(g)):
        entries.append((m, p))
        entries.append((m, inverse(p)))
    return PermutationFamily(n, k, entries)


def full_family(n: int, k: int, cap: int = gf2.DEFAULT_CAP) -> PermutationFamily:
    fam = PermutationFamily(n, k)
    for m in range(k + 1):
        fam.entries.extend(orthogonal_family(n, k, m, cap).entries)
    return fam


@dataclass
class FamilyReport:
    passed: bool
    checked: int
    failure: str | None = None
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "failure": self.failure,
            "counterexample": self.counterexample,
        }


def verify_family(fam: PermutationFamily, cap: int = gf2.DEFAULT_CAP) -> FamilyReport:
    """Check bijectivity, m-intersection and pairwise orthogonality."""
    N = gf2.gaussian_binomial(fam.n, fam.k)
    P = len(fam.entries)
    for i, (m, p) in enumerate(fam.entries):
        if len(p) != N or sorted(p) != list(range(N)):
            return FamilyReport(False, P, "bijectivity", {"entry": i})
    if not P:
        return FamilyReport(True, 0)
    D = intersection_dims(fam.n, fam.k, cap)
    arr = np.array(fam.perms, dtype=np.int64)
    ms = np.array([m for m, _ in fam.entries])
    got = D[np.arange(N)[None, :], arr]
    bad = np.argwhere(got != ms[:, None])
    if len(bad):
        i, w = (int(t) for t in bad[0])
        return FamilyReport(
            False, P, "m-intersection",
            {"entry": i, "vertex": w, "expected_m": int(ms[i]), "actual_m": int(got[i, w])},
        )
    order = np.argsort(arr, axis=0, kind="stable")
    srt = np.take_along_axis(arr, order, axis=0)
    clash = np.argwhere(srt[1:] == srt[:-1])
    if len(clash):
        r, w = (int(t) for t in clash[0])
        i, j = sorted((int(order[r, w]), int(order[r + 1, w])))
        return FamilyReport(
            False, P, "orthogonality",
            {"entries": [i, j], "vertex": w, "image": int(arr[i, w])},
        )
    return FamilyReport(True, P)
