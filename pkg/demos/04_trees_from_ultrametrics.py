"""
From an ultrametric space to a leveled tree
===========================================

Every finite ultrametric space lives on the leaves of a tree whose nodes
carry values h; the distance of two leaves is h at their meet.  The
regular form puts the j-th largest distance on level j.
"""
from ramseyspace import regularize, tree_to_space, ultrametric_to_tree
from ramseyspace.dot import to_dot
from ramseyspace.formats import dumps, witness_to_json
from ramseyspace.generators import generate_random_ultrametric

X = generate_random_ultrametric(4, 7, [1, "3/2", 2, 3])
print("distance set:", [str(q) for q in X.distance_set()])

trace = []
w = ultrametric_to_tree(X, trace)
print("repairs while building:", [(a, b, str(r)) for a, b, r in trace])

r = regularize(w)
print("levels:", [str(q) for q in r.level_values], "height:", r.tree.height)
print("round trip exact:", tree_to_space(r.tree, r.leaf_map) == X)

for v in r.tree.nodes:
    print("  " * r.tree.depth(v) + f"{v} h={r.tree.h[v]}")

print(dumps(witness_to_json(r))[:200], "...")
print(to_dot(r.tree).splitlines()[0])
