"""
Counting subspaces of F_2^n
===========================

Enumerate a small Grassmannian and compare the intersection histogram
with the closed-form counts.
"""

from collections import Counter

from cosetgame import gf2

# the three lines through the origin in F_2^2
for W in gf2.enumerate_grassmannian(2, 1):
    print(W, "dual:", gf2.dual(W))

# every 2-plane in F_2^4, tallied by how much it shares with a fixed one
n, k = 4, 2
G = gf2.enumerate_grassmannian(n, k)
W0 = G[0]
hist = Counter(gf2.intersect_dim(V, W0) for V in G)
print(f"|Gr(4,2)| = {len(G)} = {gf2.gaussian_binomial(n, k)}")
for m in range(k + 1):
    print(f"m={m}: enumerated {hist[m]:3d}, formula {gf2.intersection_count(n, k, m):3d}")

# the counts stay exact far beyond what can be enumerated
print("f(20,10,m):", [gf2.intersection_count(20, 10, m) for m in range(3)], "...")
