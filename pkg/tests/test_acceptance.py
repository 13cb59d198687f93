"""Acceptance criteria, each at its stated tolerance.

Every test records a ``PASS``/``FAIL`` line; the lines are printed in the
pytest terminal summary and also when this file is run as a script.
"""

import itertools
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from cosetgame import game, gf2, perms, qstate, verify
from cosetgame.exact import QSqrt2

import conftest


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}"
    if detail:
        line += f" ({detail})"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_01_counting_exactness():
    t0 = time.perf_counter()
    ok = True
    for n in range(7):
        for k in range(n + 1):
            G = gf2.enumerate_grassmannian(n, k)
            ok &= len(G) == gf2.gaussian_binomial(n, k)
            expected = [gf2.intersection_count(n, k, m) for m in range(k + 1)]
            D = perms.intersection_dims(n, k)
            for row in D:
                ok &= np.bincount(row, minlength=k + 1).tolist() == expected
    dt = time.perf_counter() - t0
    record(1, "Grassmannian sizes and intersection histograms, n <= 6", ok and dt <= 60, f"{dt:.1f}s")


def test_02_permutation_families():
    t0 = time.perf_counter()
    ok = True
    for n in range(7):
        for k in range(n + 1):
            fam = perms.full_family(n, k)
            ok &= perms.verify_family(fam).passed and len(fam) == gf2.gaussian_binomial(n, k)
    split = perms.full_family(4, 2).counts()
    ok &= split == {0: 16, 1: 18, 2: 1}
    dt = time.perf_counter() - t0
    record(2, "orthogonal permutation families, n <= 6", ok and dt <= 120, f"{dt:.1f}s, (4,2) split {split}")


def test_03_inner_products_and_hadamard():
    tol = 1e-10
    worst = max(verify.inner_product_errors(n, k) for n in range(5) for k in range(n + 1))
    phase_ok = True
    for n in range(5):
        for k in range(n + 1):
            for W in gf2.enumerate_grassmannian(n, k):
                Wp = gf2.dual(W)
                for x, z in itertools.product(range(1 << n), repeat=2):
                    a = qstate.hadamard_dual(qstate.coset_state(W, x, z))
                    phase_ok &= qstate.same_up_to_phase(a, qstate.coset_state(Wp, z, x), tol)
    record(3, "coset inner products and Hadamard duality, n <= 4", worst <= tol and phase_ok,
           f"max error {worst:.2e}")


def test_04_projector_product_sweep():
    worst, gap = -math.inf, 0.0
    for n in range(5):
        for k in range(n + 1):
            excess, closest = verify.projector_product_sweep(n, k)
            worst, gap = max(worst, excess), max(gap, closest)
    record(4, "coset projector product norms, n <= 4", worst <= 1e-9 and gap <= 1e-9,
           f"max excess {worst:.2e}, worst tightness gap {gap:.2e}")


def test_05_unentangled_values():
    ok = game.unentangled_value_exact(2, 1) == Fraction(2, 3)
    ok &= game.unentangled_value_exact(4, 2) == Fraction(2, 5)
    gap = excess = 0.0
    for n in range(6):
        for k in range(n + 1):
            opt = game.unentangled_value(n, k)
            gap = max(gap, abs(game.unentangled_value_oracle(n, k) - opt))
            for seed in range(200):
                v = game.deterministic_value(game.random_deterministic(n, k, seed))
                excess = max(excess, v - opt)
    ok &= gap <= 1e-9 and excess <= 1e-9
    record(5, "unentangled optimum: exact values, oracle, deterministic strategies", ok,
           f"oracle gap {gap:.2e}, max excess {excess:.2e}")


def test_06_bound_pipeline_and_ratios():
    ok = True
    for n, k in [(2, 1), (3, 1)]:
        for seed in range(20):
            ok &= game.norm_sum_bound_check(n, k, seed).passed
    pipeline_ok = ok
    for n in range(21):
        for k in range(n // 2 + 1):
            ok &= game.ratio_check(n, k).passed
    record(6, "operator-norm pipeline (20 seeds) and exact ratio bounds, n <= 20", ok,
           f"pipeline {'ok' if pipeline_ok else 'failed'}")


def test_07_choi_equivalence():
    worst = 0.0
    for n, k in [(2, 1), (3, 1)]:
        for seed in range(20):
            s = game.random_strategy(n, k, seed, kind="povm" if seed % 2 else "pvm")
            worst = max(worst, abs(game.p_win(s) - game.p_win_extended(s)))
    record(7, "channel and extended-game values agree", worst <= 1e-9, f"max diff {worst:.2e}")


def test_08_duality():
    worst = 0.0
    strategies = [game.random_strategy(n, k, seed) for n, k in [(2, 1), (3, 1), (3, 2)] for seed in range(20)]
    strategies += [game.bob_gets_everything(3, 1), game.charlie_gets_everything(3, 2), game.discard_and_guess(2, 1)]
    for s in strategies:
        worst = max(worst, abs(game.p_win(game.dualize(s)) - game.p_win(s)))
    sym = all(
        game.theorem1_bound_exact(n, k) == game.theorem1_bound_exact(n, n - k)
        for n in range(21) for k in range(n + 1)
    )
    record(8, "dual strategies and bound symmetry", worst <= 1e-9 and sym, f"max diff {worst:.2e}")


def test_09_envelope_and_consistency():
    env = abs(game.winning_rate_envelope(0.5) - 2 ** -0.25)
    ok = env <= 1e-12
    for n in range(13):
        for k in range(n + 1):
            u = game.unentangled_value_exact(n, k)
            ok &= game.theorem1_bound_exact(n, k) >= QSqrt2(u)
    record(9, "rate-1/2 envelope and bound >= unentangled value, n <= 12", ok, f"envelope error {env:.1e}")


@pytest.mark.slow
def test_10_reproducible_full_verify():
    t0 = time.perf_counter()
    cmd = [sys.executable, "-m", "cosetgame", "verify", "--level", "full"]
    runs = [
        subprocess.run(cmd, capture_output=True, check=False),
        subprocess.run(cmd, capture_output=True, check=False),
        subprocess.run(cmd + ["--threads", "2"], capture_output=True, check=False),
    ]
    dt = time.perf_counter() - t0
    codes = [r.returncode for r in runs]
    same = runs[0].stdout == runs[1].stdout == runs[2].stdout
    record(10, "full verification exits 0 with byte-identical reports", codes == [0, 0, 0] and same and dt <= 600,
           f"exit codes {codes}, {dt:.0f}s for three runs")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
