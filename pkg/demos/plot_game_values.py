"""
Winning probabilities and bounds
================================

Evaluate a few strategies for the (n, k) coset game and compare with the
entangled bound and the unentangled optimum.
"""

from cosetgame import game

n, k = 2, 1
print(f"entangled bound g({n},{k}) = {game.theorem1_bound(n, k):.6f}")
print(f"unentangled value           = {game.unentangled_value_exact(n, k)}")

for name, s in [
    ("discard and guess", game.discard_and_guess(n, k)),
    ("Bob gets everything", game.bob_gets_everything(n, k)),
    ("random PVM", game.random_strategy(n, k, seed=1)),
]:
    print(f"{name:20s} p_win = {game.p_win(s):.6f}  extended = {game.p_win_extended(s):.6f}")

# swapping the roles of Bob and Charlie gives a strategy for (n, n-k)
s = game.random_strategy(3, 1, seed=2)
print("dual strategy value matches:", abs(game.p_win(game.dualize(s)) - game.p_win(s)) < 1e-12)

# the chain of operator inequalities for one random strategy
rep = game.norm_sum_bound_check(2, 1, seed=0)
for st in rep.stages:
    print(f"{st.name:20s} {st.value:.6f} <= {st.bound:.6f}")

print("bound at rate 1/2, n = 20:", game.theorem1_bound(20, 10) ** (1 / 20),
      "envelope:", game.winning_rate_envelope(0.5))
