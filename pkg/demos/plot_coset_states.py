"""
Coset states and their overlaps
===============================

Build coset states, check the overlap formula and the Hadamard swap of
a subspace with its dual.
"""

import numpy as np

from cosetgame import gf2, qstate

G = gf2.enumerate_grassmannian(3, 1)
V, W = G[0], G[3]
print("V =", V, " W =", W, " dim(V ∩ W) =", gf2.intersect_dim(V, W))

a = qstate.coset_state(V, 0b010, 0b001)
b = qstate.coset_state(W, 0b011, 0b000)
print("numeric |<a|b>| =", abs(np.vdot(a, b)))
print("formula         =", qstate.inner_product_formula(V, W, 0b010, 0b001, 0b011, 0b000))

# H^n maps a coset state of W to one of its dual, with x and z swapped
h = qstate.hadamard_dual(a)
print("same up to phase:", qstate.same_up_to_phase(h, qstate.coset_state(gf2.dual(V), 0b001, 0b010)))

# the projector product norm never beats sqrt(2^(m - k))
lhs, bound = qstate.verify_lemma2(V, W, 0, 0)
print(f"||P Q|| = {lhs:.6f} <= {bound:.6f}")
