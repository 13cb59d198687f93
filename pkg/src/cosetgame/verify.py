"""Named verification checks, grouped into a fast and a full suite."""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import game, gf2, perms, qstate


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float | None = None
    bound: float | None = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)

    @property
    def slack(self) -> float | None:
        if self.value is None or self.bound is None:
            return None
        return self.bound - self.value

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": _round(self.value),
            "bound": _round(self.bound),
            "slack": _round(self.slack),
            "detail": self.detail,
        }


def _round(x: float | None) -> float | None:
    # 12 significant digits keeps reports byte-stable across BLAS thread counts
    return None if x is None else float(f"{x:.12g}")


def _pairs(n_max: int, n_min: int = 0):
    for n in range(n_min, n_max + 1):
        for k in range(n + 1):
            yield n, k


# -- combinatorics ---------------------------------------------------------------


def check_counting(n_max: int) -> CheckResult:
    """Enumeration size and the per-W intersection histogram, exactly."""
    for n, k in _pairs(n_max):
        G = gf2.enumerate_grassmannian(n, k)
        N = gf2.gaussian_binomial(n, k)
        if len(G) != N or len(set(G)) != N or any(W.k != k for W in G):
            return CheckResult("counting", False, detail={"n": n, "k": k, "size": len(G)})
        expected = [gf2.intersection_count(n, k, m) for m in range(k + 1)]
        if sum(expected) != N:
            return CheckResult("counting", False, detail={"n": n, "k": k, "sum": sum(expected)})
        D = perms.intersection_dims(n, k)
        for w, row in enumerate(D):
            hist = np.bincount(row, minlength=k + 1).tolist()
            if hist != expected:
                return CheckResult(
                    "counting", False, detail={"n": n, "k": k, "W": w, "hist": hist}
                )
    return CheckResult("counting", True, detail={"n_max": n_max})


def check_duals(n_max: int) -> CheckResult:
    for n, k in _pairs(n_max):
        for W in gf2.enumerate_grassmannian(n, k):
            Wp = gf2.dual(W)
            if Wp.k != n - k or gf2.dual(Wp) != W:
                return CheckResult("dual_involution", False, detail={"W": W.to_dict()})
            if any(gf2.dot(a, b) for a in W.basis for b in Wp.basis):
                return CheckResult("dual_involution", False, detail={"W": W.to_dict()})
    return CheckResult("dual_involution", True, detail={"n_max": n_max})


def check_families(n_max: int) -> CheckResult:
    sizes = {}
    for n, k in _pairs(n_max):
        fam = perms.full_family(n, k)
        rep = perms.verify_family(fam)
        N = gf2.gaussian_binomial(n, k)
        counts = fam.counts()
        ok = rep.passed and len(fam) == N and all(
            counts.get(m, 0) == gf2.intersection_count(n, k, m) for m in range(k + 1)
        )
        if not ok:
            return CheckResult(
                "permutation_families", False,
                detail={"n": n, "k": k, "report": rep.to_dict(), "size": len(fam)},
            )
        sizes[f"{n},{k}"] = len(fam)
    return CheckResult("permutation_families", True, detail={"sizes": sizes})


# -- states ----------------------------------------------------------------------


def _all_coset_states(n: int, k: int):
    rows = []
    for W in gf2.enumerate_grassmannian(n, k):
        Wp = gf2.dual(W)
        for x in gf2.coset_reps(W):
            for z in gf2.coset_reps(Wp):
                rows.append((W, x, z))
    return rows


def inner_product_errors(n: int, k: int) -> float:
    """Largest deviation between numeric |<a|b>| and the closed form over all pairs."""
    labels = _all_coset_states(n, k)
    S = np.column_stack([qstate.coset_state(W, x, z) for W, x, z in labels])
    gram = np.abs(S.conj().T @ S)
    G = gf2.enumerate_grassmannian(n, k)
    worst = 0.0
    start = {}
    for i, (W, _, _) in enumerate(labels):
        start.setdefault(W, i)
    block = 1 << n
    for V, W in itertools.product(G, G):
        a0, b0 = start[V], start[W]
        for a in range(block):
            _, x, z = labels[a0 + a]
            for b in range(block):
                _, x2, z2 = labels[b0 + b]
                f = qstate.inner_product_formula(V, W, x, z, x2, z2)
                worst = max(worst, abs(gram[a0 + a, b0 + b] - f))
    return worst


def check_inner_products(n_max: int) -> CheckResult:
    worst = 0.0
    for n, k in _pairs(n_max):
        worst = max(worst, inner_product_errors(n, k))
    tol = qstate.TOL.amplitude
    return CheckResult("inner_product", worst <= tol, worst, tol, {"n_max": n_max})


def check_hadamard_duality(n_max: int) -> CheckResult:
    worst = 0.0
    for n, k in _pairs(n_max):
        for W, x, z in _all_coset_states(n, k):
            a = qstate.hadamard_dual(qstate.coset_state(W, x, z))
            b = qstate.coset_state(gf2.dual(W), z, x)
            worst = max(worst, abs(abs(np.vdot(a, b)) - 1.0))
    tol = qstate.TOL.amplitude
    return CheckResult("hadamard_duality", worst <= tol, worst, tol, {"n_max": n_max})


def check_coset_basis(n_max: int) -> CheckResult:
    """Coset states of one W resolve the identity; z-sums are diagonal coset indicators."""
    worst = 0.0
    for n, k in _pairs(n_max):
        for W in gf2.enumerate_grassmannian(n, k):
            psi, _ = qstate.coset_basis(W)
            worst = max(worst, float(np.max(np.abs(psi @ psi.conj().T - np.eye(1 << n)))))
            for x in gf2.coset_reps(W):
                diff = qstate.coset_projector_sum_B(W, x) - qstate.coset_indicator(W, x)
                worst = max(worst, float(np.max(np.abs(diff))))
    tol = qstate.TOL.amplitude
    return CheckResult("coset_basis", worst <= tol, worst, tol, {"n_max": n_max})


def projector_product_sweep(n: int, k: int) -> tuple[float, float]:
    """(worst excess lhs - bound, smallest |lhs - bound|) over all (V, W, z, x')."""
    G = gf2.enumerate_grassmannian(n, k)
    Bsum = {
        (W, x): qstate.coset_projector_sum_B(W, x) for W in G for x in gf2.coset_reps(W)
    }
    Csum = {
        (V, z): qstate.coset_projector_sum_C(V, z) for V in G for z in gf2.coset_reps(gf2.dual(V))
    }
    excess, closest = -math.inf, math.inf
    for (V, z), C in Csum.items():
        for (W, x), B in Bsum.items():
            lhs = qstate.spectral_norm(C @ B)
            bound = math.sqrt(2.0 ** (gf2.intersect_dim(V, W) - k))
            excess = max(excess, lhs - bound)
            closest = min(closest, abs(lhs - bound))
    return excess, closest


def check_projector_products(n_max: int) -> CheckResult:
    tol = qstate.TOL.spectral
    worst, loosest_tight = -math.inf, 0.0
    for n, k in _pairs(n_max):
        excess, closest = projector_product_sweep(n, k)
        worst = max(worst, excess)
        loosest_tight = max(loosest_tight, closest)
    ok = worst <= tol and loosest_tight <= tol
    return CheckResult(
        "projector_products", ok, worst, tol,
        {"n_max": n_max, "max_tightness_gap": _round(loosest_tight)},
    )


def check_paired_overlap(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    cyc = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    worst = math.inf
    for _ in range(10):
        ops = []
        for _ in range(3):
            A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            ops.append(A @ A.conj().T / 8)
        rep = qstate.verify_lemma1(ops, cyc)
        worst = min(worst, rep.slack)
    tol = qstate.TOL.spectral
    return CheckResult("paired_overlap_random_psd", worst >= -tol, -worst, tol, {"seed": seed})


# -- closed forms and games -----------------------------------------------------------


def check_unentangled(n_max: int, trials: int = 200) -> CheckResult:
    tol = qstate.TOL.spectral
    exact = game.unentangled_value_exact
    if exact(2, 1) != Fraction(2, 3) or exact(4, 2) != Fraction(2, 5):
        return CheckResult("unentangled_optimum", False, detail={"exact": [str(exact(2, 1)), str(exact(4, 2))]})
    worst_gap = worst_excess = 0.0
    for n, k in _pairs(n_max):
        opt = game.unentangled_value(n, k)
        worst_gap = max(worst_gap, abs(opt - game.unentangled_value_oracle(n, k)))
        for t in range(trials):
            ds = game.random_deterministic(n, k, seed=1000 * n + 100 * k + t)
            worst_excess = max(worst_excess, game.deterministic_value(ds) - opt)
    ok = worst_gap <= tol and worst_excess <= tol
    return CheckResult(
        "unentangled_optimum", ok, max(worst_gap, worst_excess), tol,
        {"oracle_gap": _round(worst_gap), "max_excess": _round(worst_excess), "trials": trials},
    )


def check_ratios(n_max: int) -> CheckResult:
    for n in range(n_max + 1):
        for k in range(n // 2 + 1):
            rep = game.ratio_check(n, k)
            if not rep.passed:
                return CheckResult("ratio_bounds", False, detail={"n": n, "k": k})
    return CheckResult("ratio_bounds", True, detail={"n_max": n_max})


def check_bound_symmetry(n_max: int) -> CheckResult:
    for n, k in _pairs(n_max):
        if game.theorem1_bound_exact(n, k) != game.theorem1_bound_exact(n, n - k):
            return CheckResult("bound_symmetry", False, detail={"n": n, "k": k})
        if game.theorem1_bound_exact(n, k) < game.unentangled_value_exact(n, k):
            return CheckResult("bound_symmetry", False, detail={"n": n, "k": k, "order": True})
    return CheckResult("bound_symmetry", True, detail={"n_max": n_max})


def _test_strategies(n: int, k: int, seeds: range):
    yield "bob_gets_everything", game.bob_gets_everything(n, k)
    yield "charlie_gets_everything", game.charlie_gets_everything(n, k)
    for s in seeds:
        yield f"random_{s}", game.random_strategy(n, k, s, kind="pvm" if s % 2 else "povm")


def check_strategies(cases, seeds: range) -> list[CheckResult]:
    """CJ equivalence, duality and bound dominance on a shared strategy pool."""
    tol = qstate.TOL.spectral
    cj = dual = 0.0
    dom = -math.inf
    for n, k in cases:
        bound = game.theorem1_bound(n, k)
        for _, s in _test_strategies(n, k, seeds):
            pw = game.p_win(s)
            cj = max(cj, abs(pw - game.p_win_extended(s)))
            dual = max(dual, abs(pw - game.p_win(game.dualize(s))))
            dom = max(dom, pw - bound)
    info = {"cases": [list(c) for c in cases], "seeds": len(seeds)}
    return [
        CheckResult("cj_equivalence", cj <= tol, cj, tol, info),
        CheckResult("dual_strategy", dual <= tol, dual, tol, info),
        CheckResult("bound_dominance", dom <= tol, dom, tol, info),
    ]


def check_pipeline(cases, seeds: range) -> CheckResult:
    worst = math.inf
    for n, k in cases:
        for s in seeds:
            rep = game.norm_sum_bound_check(n, k, seed=s)
            if not rep.passed:
                failed = [st.name for st in rep.stages if not st.passed]
                return CheckResult("norm_sum_pipeline", False, detail={"n": n, "k": k, "seed": s, "stages": failed})
            worst = min(worst, min(st.slack for st in rep.stages))
    return CheckResult(
        "norm_sum_pipeline", True, -worst, qstate.TOL.spectral,
        {"cases": [list(c) for c in cases], "seeds": len(seeds)},
    )


def check_envelope() -> CheckResult:
    v = game.winning_rate_envelope(0.5)
    err = abs(v - 2 ** -0.25)
    ok = err <= 1e-12
    for n in range(8, 17):
        for R in (0.25, 0.5):
            root = game.theorem1_bound(n, math.floor(n * R)) ** (1 / n)
            ok &= root <= game.winning_rate_envelope(R) + 0.05
    return CheckResult("envelope", ok, err, 1e-12)


# -- suites ------------------------------------------------------------------------


def suite(level: str) -> list[Callable[[], CheckResult | list[CheckResult]]]:
    if level == "fast":
        comb, dense, seeds = 4, 4, range(5)
        tri = [(2, 1)]
        trials, ratio_n = 50, 12
    elif level == "full":
        comb, dense, seeds = 6, 5, range(20)
        tri = [(2, 1), (3, 1)]
        trials, ratio_n = 200, 20
    else:
        raise ValueError(f"unknown level {level!r}")
    state_n = min(dense, 4)
    return [
        lambda: check_counting(comb),
        lambda: check_duals(comb),
        lambda: check_families(comb),
        lambda: check_inner_products(state_n),
        lambda: check_hadamard_duality(state_n),
        lambda: check_coset_basis(state_n),
        lambda: check_projector_products(state_n),
        lambda: check_paired_overlap(),
        lambda: check_unentangled(dense, trials),
        lambda: check_ratios(ratio_n),
        lambda: check_bound_symmetry(30),
        lambda: check_strategies(tri, seeds),
        lambda: check_pipeline(tri, seeds),
        check_envelope,
    ]


def run(level: str = "fast", threads: int = 1) -> dict:
    jobs = suite(level)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(lambda f: f(), jobs))
    else:
        outs = [f() for f in jobs]
    results: list[CheckResult] = []
    for o in outs:
        results.extend(o if isinstance(o, list) else [o])
    return {
        "level": level,
        "passed": all(r.passed for r in results),
        "tolerances": qstate.TOL.to_dict(),
        "checks": [r.to_dict() for r in results],
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
