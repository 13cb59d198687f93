"""
Orthogonal permutation families
===============================

Split the m-intersection graph into permutations that never send a
subspace to the same place twice.
"""

from cosetgame import gf2, perms

n, k, m = 4, 2, 1
g = perms.build_intersection_graph(n, k, m)
print(f"{g.num_vertices} vertices, every degree {g.degrees()[0]}")

fam = perms.orthogonal_family(n, k, m)
print(f"{len(fam)} permutations, expected f = {gf2.intersection_count(n, k, m)}")

full = perms.full_family(n, k)
print("family sizes by m:", full.counts())
print("verified:", perms.verify_family(full).to_dict())

# breaking one entry is caught with a concrete counterexample
broken = perms.PermutationFamily(n, k, full.entries + [full.entries[0]])
print("tampered:", perms.verify_family(broken).to_dict())
