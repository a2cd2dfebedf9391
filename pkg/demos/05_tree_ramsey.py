"""
Monochromatic subtrees
======================

With c colors on the leaves of a tree that branches c(k-1)+1 ways
everywhere, some color always holds a k-branching subtree of full height.
One branch fewer and the adversary can win.
"""
import random
from itertools import product

from ramseyspace import BranchingTree, mono_subtree, refutation_path, required_branching, verify_mono_subtree

c, k, n = 2, 2, 2
b = required_branching(c, k)
t = BranchingTree.complete(b, n)
print(f"b = {b}, leaves = {len(t.leaves)}")

wins = 0
for combo in product(range(c), repeat=len(t.leaves)):
    chi = dict(zip(t.leaves, combo))
    cert = mono_subtree(t, chi, k)
    wins += cert is not None and verify_mono_subtree(t, chi, cert)
print(f"certificates for {wins} of {c ** len(t.leaves)} colorings")

chi = {v: random.Random(1).randrange(c) for v in t.leaves}
cert = mono_subtree(t, chi, k)
print("one certificate:", cert.color, cert.nodes)

# below the bound: the two blocks take one leaf of each color
small = BranchingTree.complete(b - 1, n)
chi = {v: int(v[-1]) for v in small.leaves}
print("below the bound:", mono_subtree(small, chi, k), "path without any color:", refutation_path(small, chi, k))
